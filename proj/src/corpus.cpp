#include "genaudit/errors.hpp"
#include "genaudit/harness.hpp"

namespace genaudit {

namespace {

const char* const kCorpus = R"json({"scenarios": [
  {"name": "t1-identity",
   "domain": {"symbols": ["0", "1"]},
   "learner": {"name": "release_sample"},
   "loss": {"name": "membership"},
   "m": 1, "seed": 1,
   "audits": ["T1", "T2", "T3", "T4", "P3", "C2-forward"],
   "audit_params": {"T2": {"companion": "duplicate"},
                    "T3": {"companion": "sign", "t": 0.25},
                    "C2-forward": {"epsilon": 0.1, "delta": 0}}},

  {"name": "t1-constant",
   "domain": {"size": 4},
   "learner": {"name": "constant"},
   "loss": {"name": "random_table", "params": {"seed": 7}},
   "m": 2, "seed": 2,
   "audits": ["T1", "T2", "T4"]},

  {"name": "t1-subsample",
   "domain": {"size": 32},
   "learner": {"name": "subsample_release", "params": {"k": 2, "delta": 0.5}},
   "loss": {"name": "membership"},
   "m": 4, "seed": 3,
   "audits": ["T1", "T4", "P3"]},

  {"name": "t3-subsample",
   "domain": {"size": 8},
   "learner": {"name": "subsample_release", "params": {"k": 1, "delta": 0.5}},
   "loss": {"name": "membership"},
   "m": 3, "seed": 4,
   "audits": ["T2", "T3"],
   "audit_params": {"T2": {"companion": "sign", "t": 0.2},
                    "T3": {"companion": "sign", "t": 0.2}}},

  {"name": "t5-tightness",
   "domain": {"size": 256},
   "learner": {"name": "subsample_release", "params": {"k": 1, "delta": 0.3}},
   "loss": {"name": "membership"},
   "m": 2, "seed": 5,
   "audits": ["T5", "T1", "T4", "P3"],
   "audit_params": {"T5": {"t": "1/2"}}},

  {"name": "dp-rr-eps0.1-m1",
   "data_dist": {"weights": [0.3, 0.7]},
   "learner": {"name": "randomized_response_dp", "params": {"epsilon": 0.1}},
   "loss": {"name": "membership"},
   "m": 1, "seed": 6,
   "audits": ["C1", "P4", "T1", "T4"]},

  {"name": "dp-rr-eps0.1-m3",
   "data_dist": {"weights": [0.3, 0.7]},
   "learner": {"name": "randomized_response_dp", "params": {"epsilon": 0.1}},
   "loss": {"name": "membership"},
   "m": 3, "seed": 7,
   "audits": ["C1", "P4", "T1", "T4"]},

  {"name": "dp-rr-epsln2-m1",
   "data_dist": {"weights": [0.3, 0.7]},
   "learner": {"name": "randomized_response_dp", "params": {"epsilon": 0.6931471805599453}},
   "loss": {"name": "membership"},
   "m": 1, "seed": 8,
   "audits": ["C1", "P4", "T1", "T4"]},

  {"name": "dp-rr-epsln2-m3",
   "data_dist": {"weights": [0.3, 0.7]},
   "learner": {"name": "randomized_response_dp", "params": {"epsilon": 0.6931471805599453}},
   "loss": {"name": "membership"},
   "m": 3, "seed": 9,
   "audits": ["C1", "P4", "T1", "T4"]},

  {"name": "dp-rr-eps1-m1",
   "data_dist": {"weights": [0.3, 0.7]},
   "learner": {"name": "randomized_response_dp", "params": {"epsilon": 1}},
   "loss": {"name": "membership"},
   "m": 1, "seed": 10,
   "audits": ["C1", "P4", "T1", "T4"]},

  {"name": "dp-rr-eps1-m3",
   "data_dist": {"weights": [0.3, 0.7]},
   "learner": {"name": "randomized_response_dp", "params": {"epsilon": 1}},
   "loss": {"name": "membership"},
   "m": 3, "seed": 11,
   "audits": ["C1", "P4", "T1", "T4"]},

  {"name": "erm-threshold",
   "domain": {"symbols": ["x0y0", "x0y1", "x1y0", "x1y1", "x2y0", "x2y1"]},
   "data_dist": {"weights": [0.25, 0.05, 0.15, 0.15, 0.05, 0.35]},
   "learner": {"name": "erm_finite",
               "params": {"hypotheses": ["th0", "th1", "th2", "th3"],
                          "table": [1, 0, 0, 0,
                                    0, 1, 1, 1,
                                    1, 1, 0, 0,
                                    0, 0, 1, 1,
                                    1, 1, 1, 0,
                                    0, 0, 0, 1]}},
   "loss": {"name": "erm_table"},
   "m": 3, "seed": 12,
   "t_grid": [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5],
   "audits": ["ERM", "T1", "T3", "T4", "P3"],
   "audit_params": {"T3": {"companion": "sign", "t": 0.1}}},

  {"name": "c2-subsample",
   "domain": {"size": 64},
   "learner": {"name": "subsample_release", "params": {"k": 1, "delta": 0.2}},
   "loss": {"name": "membership"},
   "m": 2, "seed": 13,
   "audits": ["C2-forward", "T1"],
   "audit_params": {"C2-forward": {"epsilon": 0.6, "delta": 0.25}}},

  {"name": "c2-tight",
   "domain": {"size": 64},
   "learner": {"name": "subsample_release", "params": {"k": 1, "delta": 0.2}},
   "loss": {"name": "membership"},
   "m": 1, "seed": 14,
   "audits": ["C2-forward", "T1"],
   "audit_params": {"C2-forward": {"epsilon": 0, "delta": 0.2}}},

  {"name": "prop1-small",
   "domain": {"size": 16},
   "learner": {"name": "prop1_counterexample"},
   "loss": {"name": "prop1_paired"},
   "m": 2, "seed": 15,
   "audits": ["P1", "T1", "T4"]},

  {"name": "prop1-counterexample",
   "domain": {"size": 1000000},
   "learner": {"name": "prop1_counterexample"},
   "loss": {"name": "prop1_paired"},
   "m": 50, "seed": 16, "mode": "mc", "n_runs": 10000,
   "audits": ["P1"]},

  {"name": "mc-identity",
   "domain": {"size": 8},
   "learner": {"name": "release_sample"},
   "loss": {"name": "membership"},
   "m": 2, "seed": 17, "mode": "mc", "n_runs": 100000,
   "audits": ["T4"]},

  {"name": "chain-fuzz",
   "kind": "chain_fuzz",
   "seed": 2024,
   "fuzz": {"trials": 1000, "max_dim": 4, "seed": 2024}}
]})json";

}  // namespace

const std::vector<ScenarioConfig>& builtin_corpus() {
  static const std::vector<ScenarioConfig> corpus = parse_configs(Json::parse(kCorpus));
  return corpus;
}

const ScenarioConfig& corpus_scenario(const std::string& name) {
  for (const auto& c : builtin_corpus()) {
    if (c.name == name) {
      return c;
    }
  }
  throw ConfigError("no corpus scenario named '" + name + "'");
}

}  // namespace genaudit
