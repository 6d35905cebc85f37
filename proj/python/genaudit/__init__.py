"""Exact and Monte Carlo audits of information-theoretic generalization bounds."""

import json
from fractions import Fraction

from . import _core
from ._core import BudgetExceeded, ConfigError, DomainError, __version__
from ._core import c1_bound, p3_bound, p4_bound, t3_bound, t4_bound

__all__ = [
    "BudgetExceeded",
    "ConfigError",
    "DomainError",
    "__version__",
    "bound_constants",
    "c1_bound",
    "corpus_config",
    "corpus_names",
    "estimate_info",
    "list_builtin",
    "p3_bound",
    "p4_bound",
    "run",
    "run_corpus",
    "scenario_joint",
    "t3_bound",
    "t4_bound",
    "variational_info",
]


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def _overrides(mode, seed, n_runs, budget, numeric, tolerance):
    given = dict(mode=mode, seed=seed, n_runs=n_runs, budget=budget,
                 numeric=numeric, tolerance=tolerance)
    return json.dumps({k: v for k, v in given.items() if v is not None})


def run(config, *, out_dir=None, mutate=None, mode=None, seed=None, n_runs=None,
        budget=None, numeric=None, tolerance=None):
    """Run one scenario dict (or {"scenarios": [...]}) and return the report bundle."""
    bundle = _core.run_config(_text(config),
                              _overrides(mode, seed, n_runs, budget, numeric, tolerance),
                              dict(mutate or {}), str(out_dir or ""))
    return json.loads(bundle)


def run_corpus(names=None, *, out_dir=None, mutate=None, mode=None, seed=None,
               n_runs=None, budget=None, numeric=None, tolerance=None):
    bundle = _core.run_corpus(list(names or []),
                              _overrides(mode, seed, n_runs, budget, numeric, tolerance),
                              dict(mutate or {}), str(out_dir or ""))
    return json.loads(bundle)


def list_builtin():
    return json.loads(_core.list_builtin())


def corpus_names():
    return list(_core.corpus_names())


def corpus_config(name):
    return json.loads(_core.corpus_config(name))


def bound_constants():
    return list(_core.bound_constants())


def scenario_joint(config, exact=True):
    """The (Z_trn, H) joint of a scenario with its variational information."""
    return json.loads(_core.scenario_joint(_text(config), exact))


def estimate_info(config, n_runs, seed=0, resamples=500):
    """Plug-in Monte Carlo estimate of J(Z_trn; H) with a bootstrap interval."""
    return json.loads(_core.estimate_info(_text(config), n_runs, seed, resamples))


def variational_info(table, exact=False):
    """J(X; Y) of a 2-D probability table.

    With exact=True, entries may be ints, Fractions, decimal floats or "p/q"
    strings and the result is a Fraction.
    """
    rows = [[str(Fraction(str(x)) if not isinstance(x, Fraction) else x) for x in row]
            for row in table]
    value = _core.table_info(rows, exact)
    return Fraction(value) if exact else value
