#include "genaudit/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "genaudit/enumerate.hpp"
#include "genaudit/errors.hpp"
#include "genaudit/info.hpp"
#include "genaudit/learners.hpp"
#include "genaudit/losses.hpp"
#include "genaudit/mc.hpp"

namespace genaudit {

namespace fs = std::filesystem;

std::uint64_t default_budget() {
  if (const char* env = std::getenv("GENAUDIT_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      return v;
    }
  }
  return kDefaultBudget;
}

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) {
    throw ConfigError(where + " must be an object");
  }
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) {
      throw ConfigError("unknown key '" + k + "' in " + where);
    }
  }
}

template <class V>
V get_as(const Json& j, const std::string& what) {
  try {
    return j.get<V>();
  } catch (const Json::exception&) {
    throw ConfigError(what + " has the wrong type");
  }
}

std::uint64_t get_count(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ConfigError(what + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

Json params_of(const Json& node) {
  return node.contains("params") ? node.at("params") : Json::object();
}

// Numbers are read through their shortest decimal; strings as "p/q".
template <Scalar T>
T scalar_param(const Json& v, const std::string& what) {
  if (v.is_number()) {
    return ScalarOps<T>::from_decimal(v.get<double>());
  }
  if (v.is_string()) {
    Rational r;
    try {
      r = Rational(v.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw ConfigError(what + ": cannot parse '" + v.get<std::string>() + "' as p/q");
    }
    if (r.get_den() == 0) {
      throw ConfigError(what + ": zero denominator");
    }
    r.canonicalize();
    if constexpr (ScalarOps<T>::exact) {
      return r;
    } else {
      return r.get_d();
    }
  }
  throw ConfigError(what + " must be a number or a \"p/q\" string");
}

double double_param(const Json& p, const std::string& key, const std::string& where,
                    std::optional<double> fallback = {}) {
  if (!p.contains(key)) {
    if (fallback) {
      return *fallback;
    }
    throw ConfigError(where + " needs '" + key + "'");
  }
  return scalar_param<double>(p.at(key), where + "." + key);
}

const std::set<std::string> kLearners = {
    "constant", "release_sample", "first_example", "subsample_release",
    "randomized_response_dp", "erm_finite", "prop1_counterexample"};
const std::set<std::string> kLosses = {
    "membership", "constant", "random_table", "prop1_paired",
    "prop1_flipped", "erm_table", "index_table"};

std::set<std::string> audit_param_keys(const std::string& id) {
  if (id == "T2" || id == "T3") return {"companion", "t"};
  if (id == "C1" || id == "P4" || id == "C2-forward") return {"epsilon", "delta"};
  if (id == "T5") return {"t"};
  return {};
}

Alphabet build_domain(const ScenarioConfig& c) {
  const std::string learner = c.learner.at("name").get<std::string>();
  if (c.domain.is_null()) {
    if (learner == "randomized_response_dp") {
      return binary_domain();
    }
    throw ConfigError("scenario '" + c.name + "' needs a domain");
  }
  check_keys(c.domain, {"size", "prefix", "symbols"}, "domain");
  if (c.domain.contains("symbols")) {
    if (c.domain.contains("size")) {
      throw ConfigError("domain takes either 'size' or 'symbols'");
    }
    const auto symbols = get_as<std::vector<std::string>>(c.domain.at("symbols"), "domain.symbols");
    try {
      return Alphabet("Z", symbols);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("domain: ") + e.what());
    }
  }
  if (!c.domain.contains("size")) {
    throw ConfigError("domain needs 'size' or 'symbols'");
  }
  const auto n = get_count(c.domain.at("size"), "domain.size");
  if (n == 0) {
    throw ConfigError("domain.size must be positive");
  }
  const std::string prefix =
      c.domain.contains("prefix") ? get_as<std::string>(c.domain.at("prefix"), "domain.prefix") : "z";
  return Alphabet::range("Z", n, prefix);
}

template <Scalar T>
Dist<T> build_data(const ScenarioConfig& c, const Alphabet& d) {
  const Json& node = c.data_dist;
  if (node.is_string()) {
    if (node.get<std::string>() != "uniform") {
      throw ConfigError("data_dist string must be \"uniform\"");
    }
    return Dist<T>::uniform(d);
  }
  check_keys(node, {"weights", "family", "mass", "index"}, "data_dist");
  std::vector<T> w;
  if (node.contains("weights")) {
    if (!node.at("weights").is_array() || node.at("weights").size() != d.size()) {
      throw ConfigError("data_dist.weights needs one entry per domain symbol");
    }
    for (const auto& x : node.at("weights")) {
      w.push_back(scalar_param<T>(x, "data_dist.weights"));
    }
  } else if (node.contains("family")) {
    const auto family = get_as<std::string>(node.at("family"), "data_dist.family");
    if (family == "skewed") {
      // `mass` on the first symbol, the rest spread evenly.
      if (d.size() < 2) {
        throw ConfigError("skewed family needs at least two symbols");
      }
      const T mass = scalar_param<T>(node.value("mass", Json(0.9)), "data_dist.mass");
      w.assign(d.size(), (ScalarOps<T>::one() - mass) / T(static_cast<long>(d.size() - 1)));
      w[0] = mass;
    } else if (family == "point_mass") {
      const auto i = get_count(node.value("index", Json(0)), "data_dist.index");
      if (i >= d.size()) {
        throw ConfigError("data_dist.index out of range");
      }
      return Dist<T>::point_mass(d, i);
    } else {
      throw ConfigError("unknown data_dist family '" + family + "'");
    }
  } else {
    throw ConfigError("data_dist needs 'weights' or 'family'");
  }
  try {
    Dist<T> out(d, std::move(w));
    require_valid(out, ScalarOps<T>::exact ? NumericMode::exact()
                                           : NumericMode::float64(1e-9));
    return out;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("data_dist: ") + e.what());
  }
}

template <Scalar T>
std::vector<T> table_param(const Json& p, const std::string& where, std::size_t size) {
  if (!p.contains("table") || !p.at("table").is_array() || p.at("table").size() != size) {
    throw ConfigError(where + ".table needs " + std::to_string(size) + " entries");
  }
  std::vector<T> out;
  for (const auto& x : p.at("table")) {
    out.push_back(scalar_param<T>(x, where + ".table"));
  }
  return out;
}

template <Scalar T>
LearnerKernel<T> build_learner(const ScenarioConfig& c, const Alphabet& d) {
  check_keys(c.learner, {"name", "params"}, "learner");
  const auto name = get_as<std::string>(c.learner.at("name"), "learner.name");
  const Json p = params_of(c.learner);
  const std::string where = "learner '" + name + "' params";
  if (name == "constant" || name == "release_sample" || name == "first_example" ||
      name == "prop1_counterexample") {
    check_keys(p, {}, where);
    if (name == "constant") return constant_learner<T>(d);
    if (name == "release_sample") return release_sample<T>(d);
    if (name == "first_example") return first_example<T>(d);
    if (d.size() < 2 || d.size() % 2 != 0) {
      throw ConfigError("prop1_counterexample needs an even domain size");
    }
    if (!(d == Alphabet::range("Z", d.size(), "z"))) {
      throw ConfigError("prop1_counterexample uses the default labels z0, z1, ...");
    }
    return prop1_counterexample<T>(d.size());
  }
  if (name == "subsample_release") {
    check_keys(p, {"k", "delta"}, where);
    if (!p.contains("k") || !p.contains("delta")) {
      throw ConfigError(where + " need 'k' and 'delta'");
    }
    const auto k = get_count(p.at("k"), "learner.params.k");
    if (k < 1 || k > static_cast<std::uint64_t>(c.m)) {
      throw ConfigError("subsample_release needs 1 <= k <= m");
    }
    const T delta = scalar_param<T>(p.at("delta"), "learner.params.delta");
    if (delta < 0 || delta > 1) {
      throw ConfigError("subsample_release needs delta in [0, 1]");
    }
    return subsample_release<T>(d, static_cast<int>(k), delta);
  }
  if (name == "randomized_response_dp") {
    check_keys(p, {"epsilon"}, where);
    const double eps = double_param(p, "epsilon", where);
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
      throw ConfigError("randomized_response_dp needs a finite epsilon >= 0");
    }
    if (!(d == binary_domain())) {
      throw ConfigError("randomized_response_dp needs the binary domain {0, 1}");
    }
    return randomized_response_dp<T>(eps);
  }
  if (name == "erm_finite") {
    check_keys(p, {"hypotheses", "table"}, where);
    if (!p.contains("hypotheses")) {
      throw ConfigError(where + " need 'hypotheses'");
    }
    const auto hyps = get_as<std::vector<std::string>>(p.at("hypotheses"), "learner.params.hypotheses");
    if (hyps.empty()) {
      throw ConfigError("erm_finite needs at least one hypothesis");
    }
    Alphabet h("H", hyps);
    return erm_finite<T>(d, h, table_param<T>(p, "learner.params", d.size() * hyps.size()));
  }
  throw ConfigError("unknown learner '" + name + "'");
}

template <Scalar T>
std::optional<ParametricLoss<T>> build_loss(const ScenarioConfig& c, const Alphabet& d) {
  if (c.loss.is_null()) {
    return std::nullopt;
  }
  check_keys(c.loss, {"name", "params"}, "loss");
  const auto name = get_as<std::string>(c.loss.at("name"), "loss.name");
  const Json p = params_of(c.loss);
  const std::string where = "loss '" + name + "' params";
  if (name == "membership" || name == "prop1_paired" || name == "prop1_flipped" ||
      name == "erm_table") {
    check_keys(p, {}, where);
    if (name == "membership") return membership_loss<T>();
    if (name == "prop1_paired") return prop1_paired_loss<T>();
    if (name == "prop1_flipped") return prop1_flipped_loss<T>();
    if (c.learner.at("name") != "erm_finite") {
      throw ConfigError("erm_table loss needs the erm_finite learner");
    }
    const Json lp = params_of(c.learner);
    const auto nh = lp.at("hypotheses").size();
    return index_table_loss<T>("erm_table", d.size(), nh,
                               table_param<T>(lp, "learner.params", d.size() * nh));
  }
  if (name == "constant") {
    check_keys(p, {"c"}, where);
    return constant_loss<T>(scalar_param<T>(p.value("c", Json(0.5)), "loss.params.c"));
  }
  if (name == "random_table") {
    check_keys(p, {"seed"}, where);
    return random_table_loss<T>(get_count(p.value("seed", Json(0)), "loss.params.seed"));
  }
  if (name == "index_table") {
    check_keys(p, {"hypotheses", "table"}, where);
    const auto nh = get_count(p.value("hypotheses", Json(0)), "loss.params.hypotheses");
    if (nh == 0) {
      throw ConfigError("index_table needs 'hypotheses' > 0");
    }
    return index_table_loss<T>("index_table", d.size(), nh,
                               table_param<T>(p, "loss.params", d.size() * nh));
  }
  throw ConfigError("unknown loss '" + name + "'");
}

template <Scalar T>
Scenario<T> make_scenario(const ScenarioConfig& c) {
  const Alphabet d = build_domain(c);
  Scenario<T> s{.id = c.name,
                .learner = build_learner<T>(c, d),
                .data = build_data<T>(c, d),
                .m = c.m,
                .seed = c.seed,
                .budget = c.budget,
                .tolerance = c.tolerance};
  s.loss = build_loss<T>(c, d);
  if (s.loss) {
    try {
      s.loss->check_kind(s.learner.kind, s.learner.name);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  return s;
}

Json audit_params(const ScenarioConfig& c, const std::string& id) {
  return c.audit_params.contains(id) ? c.audit_params.at(id) : Json::object();
}

template <Scalar T>
Companion<T> build_companion(const ScenarioConfig& c, const Scenario<T>& s,
                             const std::string& id, const std::string& fallback) {
  const Json p = audit_params(c, id);
  const std::string kind = p.value("companion", fallback);
  if (kind == "constant") return constant_companion<T>();
  if (kind == "duplicate") return duplicate_companion(s.learner);
  if (kind == "sign") {
    if (!s.loss) {
      throw ConfigError(id + " with the sign companion needs a loss");
    }
    return sign_companion(*s.loss, s.data, scalar_param<T>(p.value("t", Json(0.25)), id + ".t"));
  }
  throw ConfigError("unknown companion '" + kind + "'");
}

template <Scalar T>
std::vector<AuditReport> run_exact(const ScenarioConfig& c, const BoundConstants& k) {
  const Scenario<T> s = make_scenario<T>(c);
  ScenarioAnalysis<T> a(s);
  std::vector<AuditReport> out;
  std::optional<std::vector<AuditReport>> dp;
  for (const auto& id : c.audits) {
    if (id == "T1") {
      out.push_back(audit_t1(a, default_battery(a), k));
    } else if (id == "T2") {
      out.push_back(audit_t2(a, build_companion(c, s, id, "duplicate"), k));
    } else if (id == "T3") {
      out.push_back(audit_t3(a, build_companion(c, s, id, "sign"), k));
    } else if (id == "T4") {
      out.push_back(audit_t4(a, c.t_grid, k));
    } else if (id == "P3") {
      out.push_back(audit_p3(a, c.t_grid, k));
    } else if (id == "C1" || id == "P4") {
      if (!dp) {
        Json p = audit_params(c, "C1");
        p.update(audit_params(c, "P4"));
        double eps_default = 0.0;
        if (c.learner.at("name") == "randomized_response_dp") {
          eps_default = double_param(params_of(c.learner), "epsilon", "learner");
        }
        dp = audit_dp(a, double_param(p, "epsilon", id, eps_default),
                      double_param(p, "delta", id, 0.0), c.t_grid, k);
      }
      out.push_back((*dp)[id == "C1" ? 0 : 1]);
    } else if (id == "T5") {
      if (c.learner.at("name") != "subsample_release") {
        throw ConfigError("T5 builds on the subsample_release learner");
      }
      const Json lp = params_of(c.learner);
      const Rational t = scalar_param<Rational>(audit_params(c, "T5").value("t", Json("1/2")), "T5.t");
      if (t * c.m != Rational(lp.at("k").get<long>())) {
        throw ConfigError("T5: t * m must equal the learner's k");
      }
      if (!(c.data_dist.is_string())) {
        throw ConfigError("T5 is defined for uniform data");
      }
      auto r = audit_t5<T>(t, c.m, scalar_param<T>(lp.at("delta"), "delta"),
                           s.learner.domain.size(), k, c.budget);
      r.scenario_id = c.name;
      r.tolerance = c.tolerance;
      out.push_back(std::move(r));
    } else if (id == "C2-forward") {
      const Json p = audit_params(c, id);
      out.push_back(audit_c2_forward(a, double_param(p, "epsilon", id),
                                     double_param(p, "delta", id), k));
    } else if (id == "P1") {
      out.push_back(audit_p1(a));
    } else if (id == "ERM") {
      out.push_back(audit_erm(a, c.t_grid, k));
    }
  }
  return out;
}

std::vector<AuditReport> run_mc(const ScenarioConfig& c, const BoundConstants& k) {
  const Scenario<double> s = make_scenario<double>(c);
  for (const auto& id : c.audits) {
    if (id != "P1" && id != "T4") {
      throw ConfigError("audit " + id + " needs exact enumeration; Monte Carlo "
                        "supports P1 and T4");
    }
  }
  const auto runs = draw_runs(s, c.n_runs, c.seed);
  std::vector<AuditReport> out;
  for (const auto& id : c.audits) {
    if (id == "P1") {
      out.push_back(audit_p1_mc(s, runs));
    } else {
      out.push_back(audit_t4_mc(s, runs, c.t_grid, k, {.seed = c.seed}));
    }
  }
  return out;
}

bool exact_feasible(const ScenarioConfig& c) {
  const Scenario<double> s = make_scenario<double>(c);
  try {
    plan_enumeration(s);
    return true;
  } catch (const BudgetExceeded&) {
    return false;
  }
}

AuditReport run_fuzz(const ScenarioConfig& c) {
  check_keys(c.fuzz, {"trials", "max_dim", "seed"}, "fuzz");
  const auto trials = get_count(c.fuzz.value("trials", Json(1000)), "fuzz.trials");
  const auto max_dim = get_count(c.fuzz.value("max_dim", Json(4)), "fuzz.max_dim");
  const auto seed = get_count(c.fuzz.value("seed", Json(c.seed)), "fuzz.seed");
  if (trials < 1 || max_dim < 2) {
    throw ConfigError("fuzz needs trials >= 1 and max_dim >= 2");
  }
  const auto f = chain_fuzz(trials, max_dim, seed, c.tolerance);
  AuditReport r;
  r.scenario_id = c.name;
  r.theorem = "T2";
  r.method = "fuzz";
  r.tolerance = 0.0;
  const auto& v = f.violations;
  r.computed = {{"trials", f.trials},
                {"chain_rule", v.chain_rule},
                {"gap_ab", v.gap_ab},
                {"gap_ac_given_b", v.gap_ac_given_b},
                {"cannot_hurt", v.cannot_hurt},
                {"triangle", v.triangle},
                {"dpi", v.dpi},
                {"markov_equality", v.markov_equality},
                {"pinsker", v.pinsker},
                {"min_chain_slack", f.min_chain_slack}};
  r.headline = static_cast<double>(v.total());
  r.bound = 0.0;
  r.slack = r.bound - r.headline;
  r.verdict = v.total() == 0 ? Verdict::pass : Verdict::fail;
  r.notes.push_back("violations counted at tolerance " + ScalarOps<double>::str(c.tolerance));
  return r;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw ConfigError("cannot write " + tmp.string());
    }
    f << contents;
    if (!f.flush()) {
      throw ConfigError("cannot write " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string safe_name(std::string s) {
  for (auto& ch : s) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) {
      ch = '_';
    }
  }
  return s;
}

}  // namespace

template <Scalar T>
Scenario<T> build_scenario(const ScenarioConfig& c) {
  if (c.kind != "scenario") {
    throw ConfigError("'" + c.name + "' is not a learner scenario");
  }
  return make_scenario<T>(c);
}

template Scenario<double> build_scenario(const ScenarioConfig&);
template Scenario<Rational> build_scenario(const ScenarioConfig&);

ScenarioConfig ScenarioConfig::from_json(const Json& j) {
  check_keys(j, {"name", "kind", "domain", "data_dist", "learner", "loss", "m",
                 "t_grid", "audits", "audit_params", "mode", "n_runs", "seed",
                 "budget", "numeric_mode", "tolerance", "fuzz"},
             "scenario");
  ScenarioConfig c;
  c.budget = default_budget();
  if (!j.contains("name") || !j.at("name").is_string() || j.at("name").get<std::string>().empty()) {
    throw ConfigError("scenario needs a nonempty 'name'");
  }
  c.name = j.at("name").get<std::string>();
  const std::string where = "scenario '" + c.name + "'";
  c.kind = get_as<std::string>(j.value("kind", Json("scenario")), "kind");
  if (c.kind != "scenario" && c.kind != "chain_fuzz") {
    throw ConfigError(where + ": kind must be scenario or chain_fuzz");
  }
  c.domain = j.value("domain", Json());
  c.data_dist = j.value("data_dist", Json("uniform"));
  c.learner = j.value("learner", Json());
  c.loss = j.value("loss", Json());
  if (j.contains("m")) {
    const auto m = get_count(j.at("m"), "m");
    if (m < 1 || m > 1000000) {
      throw ConfigError(where + ": m must be in [1, 10^6]");
    }
    c.m = static_cast<int>(m);
  }
  if (j.contains("t_grid")) {
    c.t_grid = get_as<std::vector<double>>(j.at("t_grid"), "t_grid");
  }
  if (c.t_grid.empty()) {
    throw ConfigError(where + ": t_grid is empty");
  }
  for (double t : c.t_grid) {
    if (!(t > 0.0 && t < 1.0)) {
      throw ConfigError(where + ": t_grid values must lie in (0, 1), got " + fmt(t));
    }
  }
  if (j.contains("audits")) {
    c.audits = get_as<std::vector<std::string>>(j.at("audits"), "audits");
  }
  for (const auto& a : c.audits) {
    const auto& ids = audit_ids();
    if (std::find(ids.begin(), ids.end(), a) == ids.end()) {
      throw ConfigError(where + ": unknown audit '" + a + "'");
    }
  }
  c.audit_params = j.value("audit_params", Json::object());
  if (!c.audit_params.is_object()) {
    throw ConfigError(where + ": audit_params must be an object");
  }
  for (const auto& [id, p] : c.audit_params.items()) {
    if (std::find(c.audits.begin(), c.audits.end(), id) == c.audits.end()) {
      throw ConfigError(where + ": audit_params for '" + id + "', which is not in audits");
    }
    check_keys(p, audit_param_keys(id), "audit_params." + id);
  }
  c.mode = get_as<std::string>(j.value("mode", Json("auto")), "mode");
  if (c.mode != "auto" && c.mode != "exact" && c.mode != "mc") {
    throw ConfigError(where + ": mode must be auto, exact or mc");
  }
  if (j.contains("n_runs")) c.n_runs = get_count(j.at("n_runs"), "n_runs");
  if (c.n_runs < 2) {
    throw ConfigError(where + ": n_runs must be at least 2");
  }
  if (j.contains("seed")) c.seed = get_count(j.at("seed"), "seed");
  if (j.contains("budget")) c.budget = get_count(j.at("budget"), "budget");
  c.numeric = get_as<std::string>(j.value("numeric_mode", Json("exact")), "numeric_mode");
  if (c.numeric != "exact" && c.numeric != "float") {
    throw ConfigError(where + ": numeric_mode must be exact or float");
  }
  if (j.contains("tolerance")) c.tolerance = get_as<double>(j.at("tolerance"), "tolerance");
  if (!(c.tolerance >= 0.0) || !std::isfinite(c.tolerance)) {
    throw ConfigError(where + ": tolerance must be finite and >= 0");
  }
  c.fuzz = j.value("fuzz", Json::object());

  if (c.kind == "scenario") {
    if (c.audits.empty()) {
      throw ConfigError(where + ": audits is empty");
    }
    if (!c.learner.is_object() || !c.learner.contains("name") || !c.learner.at("name").is_string()) {
      throw ConfigError(where + ": learner needs a 'name'");
    }
    if (!kLearners.count(c.learner.at("name").get<std::string>())) {
      throw ConfigError(where + ": unknown learner '" + c.learner.at("name").get<std::string>() + "'");
    }
    if (!c.loss.is_null() && (!c.loss.is_object() || !c.loss.contains("name") ||
                              !kLosses.count(c.loss.value("name", std::string())))) {
      throw ConfigError(where + ": unknown or malformed loss");
    }
    // Building once validates every parameter.
    try {
      make_scenario<double>(c);
    } catch (const DomainError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  } else {
    check_keys(c.fuzz, {"trials", "max_dim", "seed"}, "fuzz");
  }
  return c;
}

Json ScenarioConfig::to_json() const {
  Json j;
  j["name"] = name;
  j["kind"] = kind;
  if (kind == "chain_fuzz") {
    j["fuzz"] = fuzz;
  } else {
    j["domain"] = domain;
    j["data_dist"] = data_dist;
    j["learner"] = learner;
    j["loss"] = loss;
    j["m"] = m;
    j["audits"] = audits;
    j["audit_params"] = audit_params;
    j["mode"] = mode;
    j["n_runs"] = n_runs;
    j["numeric_mode"] = numeric;
  }
  j["t_grid"] = t_grid;
  j["seed"] = seed;
  j["budget"] = budget;
  j["tolerance"] = tolerance;
  return j;
}

void Overrides::apply(ScenarioConfig& c) const {
  if (mode) {
    if (*mode != "auto" && *mode != "exact" && *mode != "mc") {
      throw ConfigError("--mode must be auto, exact or mc");
    }
    c.mode = *mode;
  }
  if (seed) c.seed = *seed;
  if (n_runs) {
    if (*n_runs < 2) throw ConfigError("--n-runs must be at least 2");
    c.n_runs = *n_runs;
  }
  if (budget) c.budget = *budget;
  if (numeric) {
    if (*numeric != "exact" && *numeric != "float") {
      throw ConfigError("--numeric must be exact or float");
    }
    c.numeric = *numeric;
  }
  if (tolerance) {
    if (!(*tolerance >= 0.0)) throw ConfigError("--tolerance must be >= 0");
    c.tolerance = *tolerance;
  }
}

std::vector<ScenarioConfig> parse_configs(const Json& j) {
  std::vector<ScenarioConfig> out;
  if (j.is_object() && j.contains("scenarios")) {
    check_keys(j, {"scenarios"}, "config file");
    if (!j.at("scenarios").is_array()) {
      throw ConfigError("'scenarios' must be an array");
    }
    for (const auto& s : j.at("scenarios")) {
      out.push_back(ScenarioConfig::from_json(s));
    }
  } else {
    out.push_back(ScenarioConfig::from_json(j));
  }
  std::set<std::string> names;
  for (const auto& c : out) {
    if (!names.insert(c.name).second) {
      throw ConfigError("duplicate scenario name '" + c.name + "'");
    }
  }
  return out;
}

std::vector<ScenarioConfig> load_configs(const fs::path& path) {
  std::ifstream f(path);
  if (!f) {
    throw ConfigError("cannot read " + path.string());
  }
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_configs(j);
}

ScenarioResult run_scenario(const ScenarioConfig& c, const BoundConstants& k) {
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioResult r;
  r.name = c.name;
  if (c.kind == "chain_fuzz") {
    r.method = "fuzz";
    r.reports.push_back(run_fuzz(c));
  } else {
    bool exact = c.mode == "exact" || (c.mode == "auto" && exact_feasible(c));
    if (c.mode == "auto" && !exact) {
      for (const auto& id : c.audits) {
        if (id != "P1" && id != "T4") {
          // Surface the enumeration size rather than a Monte Carlo refusal.
          plan_enumeration(make_scenario<double>(c));
        }
      }
    }
    if (exact) {
      r.method = "exact-enumeration";
      r.reports = c.numeric == "exact" ? run_exact<Rational>(c, k) : run_exact<double>(c, k);
    } else {
      r.method = "monte-carlo";
      r.reports = run_mc(c, k);
    }
    const auto s = make_scenario<double>(c);
    r.quantities["collision_bound"] = s.collision_bound();
    for (const auto& rep : r.reports) {
      if (rep.computed.contains("info") && !r.quantities.contains("info")) {
        r.quantities["info"] = rep.computed.at("info");
        if (rep.exact.contains("info")) {
          r.quantities["info_exact"] = rep.exact.at("info");
        }
      }
      if (rep.theorem == "T5" || rep.theorem == "P1") {
        r.notes.push_back(rep.theorem + ": collision correction budget m^2 sum p^2 = " +
                          fmt(s.collision_bound()));
      }
    }
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Json report_bundle(const std::vector<ScenarioConfig>& configs,
                   const std::vector<ScenarioResult>& results, bool include_wall_times) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["toolkit_version"] = kToolkitVersion;
  Json echo = Json::array();
  for (const auto& c : configs) {
    echo.push_back(c.to_json());
  }
  j["config"] = std::move(echo);
  Json reports = Json::array();
  Json quantities = Json::object();
  Json notes = Json::array();
  std::size_t pass = 0, fail = 0, inconclusive = 0;
  for (const auto& r : results) {
    for (const auto& a : r.reports) {
      reports.push_back(a.to_json());
      pass += a.verdict == Verdict::pass;
      fail += a.verdict == Verdict::fail;
      inconclusive += a.verdict == Verdict::inconclusive;
    }
    Json q = r.quantities;
    q["method"] = r.method;
    quantities[r.name] = std::move(q);
    for (const auto& n : r.notes) {
      notes.push_back(r.name + ": " + n);
    }
  }
  j["reports"] = std::move(reports);
  j["quantities"] = std::move(quantities);
  j["collision_notes"] = std::move(notes);
  j["summary"] = {{"scenarios", results.size()},
                  {"audits", pass + fail + inconclusive},
                  {"pass", pass},
                  {"fail", fail},
                  {"inconclusive", inconclusive}};
  if (include_wall_times) {
    Json w = Json::object();
    for (const auto& r : results) {
      w[r.name] = r.wall_seconds;
    }
    j["wall_times"] = std::move(w);
  }
  return j;
}

std::string summary_csv(const std::vector<ScenarioResult>& results) {
  std::ostringstream out;
  out << "scenario,theorem,computed,bound,slack,verdict\n";
  for (const auto& r : results) {
    for (const auto& a : r.reports) {
      out << a.scenario_id << ',' << a.theorem << ',' << fmt(a.headline) << ','
          << fmt(a.bound) << ',' << fmt(a.slack) << ',' << to_string(a.verdict) << '\n';
    }
  }
  return out.str();
}

void write_outputs(const fs::path& dir, const std::vector<ScenarioConfig>& configs,
                   const std::vector<ScenarioResult>& results) {
  std::error_code ec;
  fs::create_directories(dir / "series", ec);
  if (ec) {
    throw ConfigError("cannot create " + (dir / "series").string() + ": " + ec.message());
  }
  write_atomic(dir / "report.json", report_bundle(configs, results).dump(2) + "\n");
  write_atomic(dir / "summary.csv", summary_csv(results));
  for (const auto& r : results) {
    for (const auto& a : r.reports) {
      if (a.series.empty()) {
        continue;
      }
      std::ostringstream csv;
      csv << "t,tail,bound,variant\n";
      for (const auto& row : a.series) {
        csv << fmt(row.t) << ',' << fmt(row.tail) << ',' << fmt(row.bound) << ','
            << row.variant << '\n';
      }
      write_atomic(dir / "series" / (safe_name(r.name) + "__" + safe_name(a.theorem) + ".csv"),
                   csv.str());
    }
  }
}

int run_batch(const std::vector<ScenarioConfig>& configs, const fs::path& out_dir,
              const BoundConstants& k, std::ostream& err,
              std::vector<ScenarioResult>* results_out) {
  std::vector<ScenarioResult> results;
  for (const auto& c : configs) {
    try {
      results.push_back(run_scenario(c, k));
    } catch (const BudgetExceeded& e) {
      err << "error: " << c.name << ": " << e.what() << " (required " << e.required()
          << ", budget " << e.budget() << "); set mode=mc or raise --budget\n";
      return kExitBudget;
    } catch (const ConfigError& e) {
      err << "error: " << c.name << ": " << e.what() << "\n";
      return kExitConfig;
    } catch (const DomainError& e) {
      err << "error: " << c.name << ": " << e.what() << "\n";
      return kExitConfig;
    }
  }
  if (!out_dir.empty()) {
    try {
      write_outputs(out_dir, configs, results);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  bool failed = false;
  for (const auto& r : results) {
    for (const auto& a : r.reports) {
      if (a.verdict == Verdict::fail) {
        failed = true;
        err << "FAIL " << a.scenario_id << " " << a.theorem << ": slack " << fmt(a.slack);
        for (const auto& n : a.notes) {
          err << "; " << n;
        }
        err << "\n";
      }
    }
  }
  if (results_out) {
    *results_out = std::move(results);
  }
  return failed ? kExitFail : kExitPass;
}

Json builtin_listing() {
  Json j;
  j["learners"] = {
      {{"name", "constant"}, {"params", Json::object()}},
      {{"name", "release_sample"}, {"params", Json::object()}},
      {{"name", "first_example"}, {"params", Json::object()}},
      {{"name", "subsample_release"},
       {"params", {{"k", "integer in [1, m]"}, {"delta", "probability, number or \"p/q\""}}}},
      {{"name", "randomized_response_dp"},
       {"params", {{"epsilon", "number >= 0; binary domain"}}}},
      {{"name", "erm_finite"},
       {"params", {{"hypotheses", "list of labels"},
                   {"table", "loss values, |Z| x |H| row-major"}}}},
      {{"name", "prop1_counterexample"}, {"params", {{"domain", "even size"}}}}};
  j["losses"] = {
      {{"name", "membership"}, {"params", Json::object()}},
      {{"name", "constant"}, {"params", {{"c", "number in [0, 1], default 1/2"}}}},
      {{"name", "random_table"}, {"params", {{"seed", "integer"}}}},
      {{"name", "prop1_paired"}, {"params", Json::object()}},
      {{"name", "prop1_flipped"}, {"params", Json::object()}},
      {{"name", "erm_table"}, {"params", Json::object()}},
      {{"name", "index_table"},
       {"params", {{"hypotheses", "integer"}, {"table", "|Z| x |H| values"}}}}};
  Json audits = Json::array();
  for (const auto& id : audit_ids()) {
    Json keys = Json::array();
    for (const auto& k : audit_param_keys(id)) {
      keys.push_back(k);
    }
    audits.push_back({{"id", id}, {"params", keys}});
  }
  j["audits"] = std::move(audits);
  Json corpus = Json::array();
  for (const auto& c : builtin_corpus()) {
    corpus.push_back({{"name", c.name}, {"audits", c.audits}, {"mode", c.mode}});
  }
  j["corpus"] = std::move(corpus);
  return j;
}

}  // namespace genaudit
