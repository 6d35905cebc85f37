// Python bindings. Configs and reports cross the boundary as JSON text; the
// package wrapper converts them to and from dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "genaudit/audit.hpp"
#include "genaudit/errors.hpp"
#include "genaudit/harness.hpp"
#include "genaudit/info.hpp"
#include "genaudit/learners.hpp"
#include "genaudit/mc.hpp"

namespace py = pybind11;
using namespace genaudit;

namespace {

BoundConstants mutated(const std::map<std::string, double>& factors) {
  BoundConstants k;
  for (const auto& [name, f] : factors) {
    k.at(name) *= f;
  }
  return k;
}

Overrides overrides_from(const std::string& text) {
  const Json j = Json::parse(text);
  Overrides o;
  if (j.contains("mode")) o.mode = j["mode"].get<std::string>();
  if (j.contains("seed")) o.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("n_runs")) o.n_runs = j["n_runs"].get<std::uint64_t>();
  if (j.contains("budget")) o.budget = j["budget"].get<std::uint64_t>();
  if (j.contains("numeric")) o.numeric = j["numeric"].get<std::string>();
  if (j.contains("tolerance")) o.tolerance = j["tolerance"].get<double>();
  return o;
}

std::string run_all(std::vector<ScenarioConfig> configs, const std::string& overrides,
                    const std::map<std::string, double>& mutate, const std::string& out_dir) {
  const Overrides o = overrides_from(overrides);
  for (auto& c : configs) {
    o.apply(c);
  }
  std::vector<ScenarioResult> results;
  {
    py::gil_scoped_release release;
    const BoundConstants k = mutated(mutate);
    for (const auto& c : configs) {
      results.push_back(run_scenario(c, k));
    }
    if (!out_dir.empty()) {
      write_outputs(out_dir, configs, results);
    }
  }
  return report_bundle(configs, results).dump();
}

std::string run_config(const std::string& config, const std::string& overrides,
                       const std::map<std::string, double>& mutate, const std::string& out_dir) {
  Json j;
  try {
    j = Json::parse(config);
  } catch (const Json::parse_error& e) {
    throw ConfigError(e.what());
  }
  return run_all(parse_configs(j), overrides, mutate, out_dir);
}

std::string run_corpus(const std::vector<std::string>& names, const std::string& overrides,
                       const std::map<std::string, double>& mutate, const std::string& out_dir) {
  std::vector<ScenarioConfig> configs;
  if (names.empty()) {
    configs = builtin_corpus();
  } else {
    for (const auto& n : names) {
      configs.push_back(corpus_scenario(n));
    }
  }
  return run_all(std::move(configs), overrides, mutate, out_dir);
}

template <Scalar T>
Json joint_json(const ScenarioConfig& c) {
  const auto s = build_scenario<T>(c);
  const auto j = exact_trn_hyp_joint(s);
  Json out;
  Json z = Json::array(), h = Json::array(), w = Json::array();
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    z.push_back(s.data.alphabet().symbol(i));
  }
  const auto& hyp_axis = j.joint.axes().at(1);
  for (std::size_t i = 0; i < hyp_axis.size(); ++i) {
    h.push_back(hyp_axis.symbol(i));
  }
  for (const auto& x : j.joint.weights()) {
    if constexpr (ScalarOps<T>::exact) {
      w.push_back(x.get_str());
    } else {
      w.push_back(x);
    }
  }
  out["z"] = std::move(z);
  out["h"] = std::move(h);
  out["weights"] = std::move(w);
  const T info = variational_info(j.joint);
  out["info"] = to_double(info);
  if constexpr (ScalarOps<T>::exact) {
    out["info_exact"] = info.get_str();
  }
  out["kernel_evaluations"] = j.kernel_evaluations;
  return out;
}

std::string scenario_joint(const std::string& config, bool exact) {
  const auto c = ScenarioConfig::from_json(Json::parse(config));
  py::gil_scoped_release release;
  return (exact ? joint_json<Rational>(c) : joint_json<double>(c)).dump();
}

std::string estimate_info(const std::string& config, std::uint64_t n_runs, std::uint64_t seed,
                          int resamples) {
  const auto c = ScenarioConfig::from_json(Json::parse(config));
  py::gil_scoped_release release;
  const auto s = build_scenario<double>(c);
  const auto runs = draw_runs(s, n_runs, seed);
  return estimate_variational_info(runs, {.resamples = resamples, .seed = seed}).to_json().dump();
}

std::vector<Alphabet> table_axes(std::size_t rows, std::size_t cols) {
  return {Alphabet::range("X", rows, "x"), Alphabet::range("Y", cols, "y")};
}

template <Scalar T>
void require_valid_joint(const Joint<T>& j, const NumericMode& mode) {
  const auto v = validate(j, mode);
  if (!v.ok) {
    std::string msg = "not a probability table";
    for (const auto& d : v.diagnostics) msg += "; " + d;
    throw DomainError(msg);
  }
}

// Entries arrive as decimal or "p/q" strings.
py::object table_info(const std::vector<std::vector<std::string>>& table, bool exact) {
  if (table.empty() || table.front().empty()) {
    throw DomainError("empty table");
  }
  const std::size_t rows = table.size(), cols = table.front().size();
  std::vector<Rational> w;
  for (const auto& row : table) {
    if (row.size() != cols) {
      throw DomainError("ragged table");
    }
    for (const auto& x : row) {
      Rational q(x);
      q.canonicalize();
      w.push_back(q);
    }
  }
  if (exact) {
    Joint<Rational> j(table_axes(rows, cols), w);
    require_valid_joint(j, NumericMode::exact());
    return py::str(variational_info(j).get_str());
  }
  std::vector<double> wd;
  for (const auto& q : w) wd.push_back(q.get_d());
  Joint<double> j(table_axes(rows, cols), wd);
  require_valid_joint(j, NumericMode::float64(1e-9));
  return py::float_(variational_info(j));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact and Monte Carlo audits of information-theoretic generalization bounds";
  m.attr("__version__") = kToolkitVersion;
  m.attr("REPORT_SCHEMA_VERSION") = kReportSchemaVersion;

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
  static py::exception<BudgetExceeded> budget_error(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const DomainError& e) {
      py::set_error(domain_error, e.what());
    } catch (const BudgetExceeded& e) {
      std::ostringstream msg;
      msg << e.what() << " (required " << e.required() << ", budget " << e.budget() << ")";
      py::set_error(budget_error, msg.str().c_str());
    } catch (const Json::exception& e) {
      py::set_error(config_error, e.what());
    }
  });

  m.def("run_config", &run_config, py::arg("config"), py::arg("overrides") = "{}",
        py::arg("mutate") = std::map<std::string, double>{}, py::arg("out_dir") = "");
  m.def("run_corpus", &run_corpus, py::arg("names") = std::vector<std::string>{},
        py::arg("overrides") = "{}", py::arg("mutate") = std::map<std::string, double>{},
        py::arg("out_dir") = "");
  m.def("list_builtin", [] { return builtin_listing().dump(); });
  m.def("corpus_names", [] {
    std::vector<std::string> out;
    for (const auto& c : builtin_corpus()) out.push_back(c.name);
    return out;
  });
  m.def("corpus_config", [](const std::string& name) { return corpus_scenario(name).to_json().dump(); });
  m.def("scenario_joint", &scenario_joint, py::arg("config"), py::arg("exact") = true);
  m.def("estimate_info", &estimate_info, py::arg("config"), py::arg("n_runs"),
        py::arg("seed") = 0, py::arg("resamples") = 500);
  m.def("table_info", &table_info, py::arg("table"), py::arg("exact") = false);
  m.def("bound_constants", [] { return BoundConstants::names(); });

  m.def("t3_bound", [](double info, std::size_t k, int n) { return t3_bound(info, k, n, {}); },
        py::arg("info"), py::arg("companion_size"), py::arg("m"));
  m.def("t4_bound", [](double t, double info, int n) { return t4_bound(t, info, n, {}); },
        py::arg("t"), py::arg("info"), py::arg("m"));
  m.def("p3_bound", [](double t, double mi, int n) { return p3_bound(t, mi, n, {}); },
        py::arg("t"), py::arg("mutual_info"), py::arg("m"));
  m.def("c1_bound", [](double t, double eps, double delta, int n) { return c1_bound(t, eps, delta, n, {}); },
        py::arg("t"), py::arg("epsilon"), py::arg("delta"), py::arg("m"));
  m.def("p4_bound", [](double eps, double delta) { return p4_bound(eps, delta, {}); },
        py::arg("epsilon"), py::arg("delta"));
}
