#include "genaudit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "genaudit/enumerate.hpp"
#include "genaudit/errors.hpp"
#include "genaudit/info.hpp"
#include "audit_detail.hpp"

namespace genaudit {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "inconclusive") return Verdict::inconclusive;
  throw DomainError("unknown verdict '" + s + "'");
}

Json AuditReport::to_json() const {
  Json j;
  j["scenario_id"] = scenario_id;
  j["theorem"] = theorem;
  j["verdict"] = to_string(verdict);
  j["headline"] = headline;
  j["bound"] = bound;
  j["slack"] = slack;
  j["tolerance"] = tolerance;
  j["method"] = method;
  j["computed"] = computed;
  j["exact"] = exact;
  j["notes"] = notes;
  Json rows = Json::array();
  for (const auto& r : series) {
    rows.push_back({{"t", r.t}, {"tail", r.tail}, {"bound", r.bound},
                    {"variant", r.variant}});
  }
  j["series"] = std::move(rows);
  return j;
}

AuditReport AuditReport::from_json(const Json& j) {
  AuditReport r;
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.theorem = j.at("theorem").get<std::string>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.headline = j.at("headline").get<double>();
  r.bound = j.at("bound").get<double>();
  r.slack = j.at("slack").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.method = j.at("method").get<std::string>();
  r.computed = j.at("computed");
  r.exact = j.at("exact");
  r.notes = j.at("notes").get<std::vector<std::string>>();
  for (const auto& row : j.at("series")) {
    r.series.push_back({row.at("t").get<double>(), row.at("tail").get<double>(),
                        row.at("bound").get<double>(),
                        row.at("variant").get<std::string>()});
  }
  return r;
}

BoundConstants::BoundConstants()
    : t4_inner(std::log(9.0) / 25.0), c1_inner(2.0 * std::log(9.0) / 25.0) {}

std::vector<std::string> BoundConstants::names() {
  return {"t1_scale",    "t2_scale",       "t3_base",   "t3_k_factor",
          "t3_root_factor", "t4_lead",     "t4_inner",  "p3_offset",
          "p3_factor",   "c1_lead",        "c1_inner",  "p4_scale",
          "t5_scale",    "c2_scale",       "erm_scale"};
}

double& BoundConstants::at(const std::string& name) {
  if (name == "t1_scale") return t1_scale;
  if (name == "t2_scale") return t2_scale;
  if (name == "t3_base") return t3_base;
  if (name == "t3_k_factor") return t3_k_factor;
  if (name == "t3_root_factor") return t3_root_factor;
  if (name == "t4_lead") return t4_lead;
  if (name == "t4_inner") return t4_inner;
  if (name == "p3_offset") return p3_offset;
  if (name == "p3_factor") return p3_factor;
  if (name == "c1_lead") return c1_lead;
  if (name == "c1_inner") return c1_inner;
  if (name == "p4_scale") return p4_scale;
  if (name == "t5_scale") return t5_scale;
  if (name == "c2_scale") return c2_scale;
  if (name == "erm_scale") return erm_scale;
  throw DomainError("unknown bound constant '" + name + "'");
}

double t3_bound(double info, std::size_t companion_size, int m,
                const BoundConstants& c) {
  const double k = static_cast<double>(companion_size);
  return (c.t3_base + c.t3_k_factor * k) * info +
         std::sqrt(c.t3_root_factor * std::log(k) / m);
}

double t4_bound(double t, double info, int m, const BoundConstants& c) {
  return (c.t4_lead / t) * (info + std::sqrt(c.t4_inner / m));
}

double p3_bound(double t, double mutual_info_nats, int m, const BoundConstants& c) {
  return (1.0 / t) * std::sqrt(c.p3_factor * (mutual_info_nats + c.p3_offset) / m);
}

double c1_bound(double t, double epsilon, double delta, int m,
                const BoundConstants& c) {
  return (c.c1_lead / t) *
         (std::exp(epsilon) - 1.0 + delta + std::sqrt(c.c1_inner / m));
}

double p4_bound(double epsilon, double delta, const BoundConstants& c) {
  return c.p4_scale * (std::exp(epsilon) - 1.0 + delta);
}

const std::vector<std::string>& audit_ids() {
  static const std::vector<std::string> ids = {
      "T1", "T2", "T3", "T4", "P3", "C1", "P4", "T5", "C2-forward", "P1", "ERM"};
  return ids;
}

namespace {

using detail::Check;
using detail::exact_check;
using detail::finalize;
using detail::float_check;
using detail::put;
using detail::rational_tolerance;

template <Scalar T>
AuditReport start(const Scenario<T>& s, std::string theorem, double tol) {
  AuditReport r;
  r.scenario_id = s.id;
  r.theorem = std::move(theorem);
  r.tolerance = tol;
  return r;
}

void require_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) {
    throw DomainError("t grid is empty");
  }
  for (double t : t_grid) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw DomainError("t grid values must be positive and finite");
    }
  }
}

template <Scalar T>
T max_weight(const Dist<T>& d) {
  T out = ScalarOps<T>::zero();
  for (const auto& w : d.weights()) {
    if (w > out) {
      out = w;
    }
  }
  return out;
}

}  // namespace

template <Scalar T>
ScenarioAnalysis<T>::ScenarioAnalysis(Scenario<T> s) : s_(std::move(s)) {
  s_.check();
}

template <Scalar T>
const ParametricLoss<T>& ScenarioAnalysis<T>::loss() const {
  if (!s_.loss) {
    throw DomainError("scenario '" + s_.id + "' has no loss");
  }
  return *s_.loss;
}

template <Scalar T>
const TrnHypJoint<T>& ScenarioAnalysis<T>::joint() {
  if (!joint_) {
    joint_ = exact_trn_hyp_joint(s_);
  }
  return *joint_;
}

template <Scalar T>
const T& ScenarioAnalysis<T>::info() {
  if (!info_) {
    info_ = variational_info(joint().joint);
  }
  return *info_;
}

template <Scalar T>
const DeviationLaw<T>& ScenarioAnalysis<T>::deviation() {
  if (!deviation_) {
    deviation_ = deviation_law(s_, loss());
  }
  return *deviation_;
}

template <Scalar T>
double ScenarioAnalysis<T>::sample_info() {
  if (!sample_info_) {
    sample_info_ = sample_hyp_mutual_info(s_);
  }
  return *sample_info_;
}

template <Scalar T>
std::vector<ParametricLoss<T>> default_battery(ScenarioAnalysis<T>& a) {
  const auto& s = a.scenario();
  std::vector<ParametricLoss<T>> out;
  auto add = [&](ParametricLoss<T> l) {
    if (l.accepts(s.learner.kind)) {
      out.push_back(std::move(l));
    }
  };
  add(membership_loss<T>());
  add(constant_loss<T>(ScalarOps<T>::ratio(1, 2)));
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    add(random_table_loss<T>(s.seed * 1000 + seed));
  }
  if (s.loss) {
    add(*s.loss);
  }
  out.push_back(worst_case_loss(a.joint(), s.tolerance).loss);
  return out;
}

template <Scalar T>
AuditReport audit_t1(ScenarioAnalysis<T>& a,
                     const std::vector<ParametricLoss<T>>& battery,
                     const BoundConstants& c) {
  const auto& s = a.scenario();
  if (battery.empty()) {
    throw DomainError("T1 needs at least one loss");
  }
  auto r = start(s, "T1", rational_tolerance(s));
  const T& j = a.info();
  put(r, "info", j);

  const auto by_samples = expected_gen_risks(s, battery);
  T sup = ScalarOps<T>::zero();
  std::string argmax;
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const T by_joint = joint_gen_risk(a.joint(), battery[i]);
    if (!eq_tol(by_samples[i], by_joint, 1e-9)) {
      throw ConsistencyError("generalization risk of '" + battery[i].name +
                             "' differs between sample and joint routes: " +
                             ScalarOps<T>::str(by_samples[i]) + " vs " +
                             ScalarOps<T>::str(by_joint));
    }
    put(r, "gen_risk:" + battery[i].name, by_samples[i]);
    const T mag = ScalarOps<T>::abs(by_samples[i]);
    if (i == 0 || mag > sup) {
      sup = mag;
      argmax = battery[i].name;
    }
  }
  put(r, "sup_abs_gen_risk", sup);
  r.notes.push_back("supremum attained by " + argmax);
  const T bound = ScalarOps<T>::from_double(c.t1_scale) * j;
  finalize(r, {exact_check<T>("|R_gen| <= J", sup, bound)});
  return r;
}

template <Scalar T>
AuditReport audit_t2(ScenarioAnalysis<T>& a, const Companion<T>& k,
                     const BoundConstants& c) {
  const auto& s = a.scenario();
  auto r = start(s, "T2", rational_tolerance(s));
  const auto jk = exact_trn_hyp_joint(s, std::optional<Companion<T>>(k));
  const auto chain = chain_decompose(jk.joint, s.tolerance);
  put(r, "info_z_hk", chain.total);
  put(r, "info_z_h", chain.terms.at(0));
  put(r, "info_z_k_given_h", chain.terms.at(1));
  r.notes.push_back("companion: " + k.name);
  T sum = ScalarOps<T>::zero();
  for (const auto& t : chain.terms) {
    sum += t;
  }
  const T bound = ScalarOps<T>::from_double(c.t2_scale) * sum;
  finalize(r, {exact_check<T>("chain rule", chain.total, bound)});
  return r;
}

template <Scalar T>
AuditReport audit_t3(ScenarioAnalysis<T>& a, const Companion<T>& k,
                     const BoundConstants& c) {
  const auto& s = a.scenario();
  auto r = start(s, "T3", s.tolerance);
  const auto jk = exact_trn_hyp_joint(s, std::optional<Companion<T>>(k));
  const T total = variational_info(jk.joint, {"Z_trn"}, {"H", "K"});
  const T cond = conditional_variational_info(jk.joint, {"Z_trn"}, {"K"}, {"H"});
  const T& j = a.info();
  const double kk = static_cast<double>(jk.companion_codes.size());
  const double m = s.m;
  put(r, "info", j);
  put(r, "info_z_hk", total);
  put(r, "info_z_k_given_h", cond);
  r.computed["companion_size"] = kk;
  r.notes.push_back("companion: " + k.name);

  const double jd = to_double(j);
  const double stated = t3_bound(jd, jk.companion_codes.size(), s.m, c);
  // Conditional-term form that appears inside the argument for the bound.
  const double cond_bound =
      c.t3_k_factor * kk * jd + std::sqrt(c.t3_root_factor * kk / m);
  r.computed["bound_stated"] = stated;
  r.computed["bound_conditional_term"] = cond_bound;
  finalize(r, {float_check("J(Z;(H,K)) bound", to_double(total), stated),
               float_check("J(Z;K|H) bound", to_double(cond), cond_bound)});
  return r;
}

template <Scalar T>
AuditReport audit_t4(ScenarioAnalysis<T>& a, const std::vector<double>& t_grid,
                     const BoundConstants& c) {
  require_grid(t_grid);
  const auto& s = a.scenario();
  auto r = start(s, "T4", s.tolerance);
  const T& j = a.info();
  const auto& law = a.deviation();
  const double jd = to_double(j);
  const double m = s.m;
  put(r, "info", j);
  std::vector<Check> checks;
  for (double t : t_grid) {
    const double tail = to_double(law.tail(ScalarOps<T>::from_decimal(t), s.tolerance));
    const double stated = t4_bound(t, jd, s.m, c);
    // Same bound written the way the proof ends; equal to `stated` at the
    // published constants.
    const double proof = (1.0 / t) * (c.t4_lead * jd +
                                      std::sqrt(std::log(3.0) / (2.0 * m)));
    r.series.push_back({t, tail, stated, "stated"});
    r.series.push_back({t, tail, proof, "proof"});
    checks.push_back(float_check("tail at t=" + ScalarOps<double>::str(t), tail, stated));
  }
  finalize(r, checks);
  return r;
}

template <Scalar T>
AuditReport audit_p3(ScenarioAnalysis<T>& a, const std::vector<double>& t_grid,
                     const BoundConstants& c) {
  require_grid(t_grid);
  const auto& s = a.scenario();
  auto r = start(s, "P3", s.tolerance);
  const double info = a.sample_info();
  const auto& law = a.deviation();
  const double m = s.m;
  r.computed["mutual_info_nats"] = info;
  std::vector<Check> checks;
  for (double t : t_grid) {
    const double tail = to_double(law.tail(ScalarOps<T>::from_decimal(t), s.tolerance));
    const double stated = p3_bound(t, info, s.m, c);
    const double variant = (1.0 / t) * std::sqrt(c.p3_factor * (info + std::log(3.0)) / m);
    r.series.push_back({t, tail, stated, "stated"});
    r.series.push_back({t, tail, variant, "log3"});
    checks.push_back(float_check("tail at t=" + ScalarOps<double>::str(t), tail, stated));
  }
  finalize(r, checks);
  return r;
}

template <Scalar T>
DpMechanism audit_dp_mechanism(const LearnerKernel<T>& learner, int m,
                               double epsilon, std::uint64_t budget) {
  if (m < 1) {
    throw DomainError("sample size must be at least 1");
  }
  const std::size_t n = learner.domain.size();
  Scenario<T> s{.id = "dp-mechanism",
                .learner = learner,
                .data = Dist<T>::uniform(learner.domain),
                .m = m,
                .budget = budget};
  const std::uint64_t per_sample = 1 + static_cast<std::uint64_t>(m) * (n - 1);
  const auto plan = plan_enumeration(s, per_sample, !learner.symmetric);

  using Law = std::map<HypCode, double>;
  auto law_of = [&](Sample x) {
    Law out;
    for (const auto& [h, p] : learner.law(x)) {
      out[h] += to_double(p);
    }
    return out;
  };

  DpMechanism out;
  out.queried_epsilon = epsilon;
  const double e_eps = std::exp(epsilon);
  std::vector<std::int32_t> other;
  for_each_sample(s, plan, [&](Sample x, const T&) {
    const Law p = law_of(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (plan.multiset && i > 0 && x[i] == x[i - 1]) {
        continue;
      }
      for (std::size_t v = 0; v < n; ++v) {
        if (static_cast<std::int32_t>(v) == x[i]) {
          continue;
        }
        other.assign(x.begin(), x.end());
        other[i] = static_cast<std::int32_t>(v);
        if (plan.multiset) {
          std::sort(other.begin(), other.end());
        }
        const Law q = law_of(Sample(other));
        ++out.adjacent_pairs;
        double hockey = 0.0;
        for (const auto& [h, ph] : p) {
          if (ph <= 0.0) {
            continue;
          }
          const auto it = q.find(h);
          const double qh = it == q.end() ? 0.0 : it->second;
          if (qh <= 0.0) {
            out.unbounded = true;
          } else {
            out.effective_epsilon =
                std::max(out.effective_epsilon, std::log(ph) - std::log(qh));
          }
          hockey += std::max(0.0, ph - e_eps * qh);
        }
        out.effective_delta = std::max(out.effective_delta, hockey);
      }
    }
  });
  if (out.unbounded) {
    out.effective_epsilon = std::numeric_limits<double>::infinity();
  }
  return out;
}

template <Scalar T>
std::vector<AuditReport> audit_dp(ScenarioAnalysis<T>& a, double epsilon,
                                  double delta, const std::vector<double>& t_grid,
                                  const BoundConstants& c) {
  require_grid(t_grid);
  if (!(epsilon >= 0.0) || !(delta >= 0.0) || delta > 1.0) {
    throw DomainError("privacy parameters need epsilon >= 0 and delta in [0, 1]");
  }
  const auto& s = a.scenario();
  const auto mech = audit_dp_mechanism(s.learner, s.m, epsilon, s.budget);
  const bool private_enough = mech.effective_delta <= delta + 1e-12;
  const double slack_term = std::exp(epsilon) - 1.0 + delta;
  const double m = s.m;

  auto annotate = [&](AuditReport& r) {
    r.computed["epsilon"] = epsilon;
    r.computed["delta"] = delta;
    r.computed["effective_epsilon"] =
        mech.unbounded ? Json(nullptr) : Json(mech.effective_epsilon);
    r.computed["effective_delta"] = mech.effective_delta;
    r.computed["adjacent_pairs"] = mech.adjacent_pairs;
    if (!private_enough) {
      r.notes.push_back("learner is not (epsilon, delta)-private: hockey-stick "
                        "divergence " + ScalarOps<double>::str(mech.effective_delta) +
                        " at the declared epsilon");
      r.verdict = Verdict::inconclusive;
    }
  };

  auto p4 = start(s, "P4", s.tolerance);
  const T& j = a.info();
  put(p4, "info", j);
  finalize(p4, {float_check("J <= (e^eps - 1 + delta) / 2", to_double(j),
                            p4_bound(epsilon, delta, c))});
  annotate(p4);

  auto c1 = start(s, "C1", s.tolerance);
  const auto& law = a.deviation();
  std::vector<Check> checks;
  for (double t : t_grid) {
    const double tail = to_double(law.tail(ScalarOps<T>::from_decimal(t), s.tolerance));
    const double stated = c1_bound(t, epsilon, delta, s.m, c);
    // The concentration bound applied to the information bound above.
    const double composed =
        (c.t4_lead / t) * (c.p4_scale * slack_term + std::sqrt(c.t4_inner / m));
    c1.series.push_back({t, tail, stated, "stated"});
    c1.series.push_back({t, tail, composed, "composed"});
    checks.push_back(float_check("tail at t=" + ScalarOps<double>::str(t), tail, stated));
  }
  finalize(c1, checks);
  annotate(c1);
  return {std::move(c1), std::move(p4)};
}

template <Scalar T>
AuditReport audit_t5(const Rational& t, int m, const T& delta, std::size_t n,
                     const BoundConstants& c, std::uint64_t budget) {
  if (m < 1 || n < 1) {
    throw DomainError("T5 needs m >= 1 and a nonempty domain");
  }
  const Rational km = t * m;
  if (km.get_den() != 1 || km < 1 || km > m) {
    throw DomainError("T5 needs t * m to be an integer in [1, m]");
  }
  const int k = static_cast<int>(km.get_num().get_si());
  const auto domain = Alphabet::range("Z", n, "z");
  Scenario<T> s{.id = "t5",
                .learner = subsample_release<T>(domain, k, delta),
                .data = Dist<T>::uniform(domain),
                .m = m,
                .loss = membership_loss<T>(),
                .budget = budget};
  ScenarioAnalysis<T> a(s);
  auto r = start(s, "T5", s.tolerance);

  T tt;
  if constexpr (ScalarOps<T>::exact) {
    tt = t;
  } else {
    tt = t.get_d();
  }
  const T window = ScalarOps<T>::ratio(k, static_cast<long>(n));
  const T atom = a.deviation().atom(tt, window);
  const T& j = a.info();
  const T j_over_t = j / tt;
  const double cb = s.collision_bound();
  put(r, "t", tt);
  put(r, "delta", delta);
  put(r, "atom_probability", atom);
  put(r, "info", j);
  put(r, "info_over_t", j_over_t);
  put(r, "window", window);
  r.computed["collision_bound"] = cb;
  r.computed["k"] = k;
  r.computed["m"] = m;
  r.computed["n"] = n;

  const T scaled = ScalarOps<T>::from_double(c.t5_scale) * j_over_t;
  const double d1 = std::fabs(to_double(T(atom - scaled)));
  const double d2 = std::fabs(to_double(T(atom - delta)));
  const double d3 = std::fabs(to_double(T(j - tt * delta)));
  r.computed["gap_atom_vs_info_over_t"] = d1;
  r.computed["gap_atom_vs_delta"] = d2;
  r.computed["gap_info_vs_t_delta"] = d3;
  finalize(r, {float_check("|P{|G|=t} - J/t|", d1, cb),
               float_check("|P{|G|=t} - delta|", d2, cb),
               float_check("|J - t delta|", d3, cb)});
  return r;
}

template <Scalar T>
AuditReport audit_c2_forward(ScenarioAnalysis<T>& a, double epsilon,
                             double delta, const BoundConstants& c) {
  if (!(epsilon >= 0.0) || !(delta >= 0.0) || delta > 1.0) {
    throw DomainError("robustness parameters need epsilon >= 0 and delta in [0, 1]");
  }
  const auto& s = a.scenario();
  auto r = start(s, "C2-forward", rational_tolerance(s));
  const auto worst = worst_case_loss(a.joint(), s.tolerance);
  const auto law = deviation_law(s, worst.loss);
  const T eps = ScalarOps<T>::from_decimal(epsilon);
  const T del = ScalarOps<T>::from_decimal(delta);
  // P{|G_L*| <= eps}
  T inside = ScalarOps<T>::zero();
  for (const auto& [g, p] : law.support) {
    if (le_tol(ScalarOps<T>::abs(g), eps, s.tolerance)) {
      inside += p;
    }
  }
  const bool premise = le_tol(T(ScalarOps<T>::one() - del), inside, s.tolerance);
  const T& j = a.info();
  put(r, "info", j);
  put(r, "prob_within_epsilon", inside);
  r.computed["epsilon"] = epsilon;
  r.computed["delta"] = delta;
  r.computed["premise"] = premise;
  r.computed["worst_case_ties"] = worst.ties;
  if (premise) {
    const T bound = ScalarOps<T>::from_double(c.c2_scale) * (eps + del);
    finalize(r, {exact_check<T>("J <= eps + delta", j, bound)});
  } else {
    r.notes.push_back("premise false, implication vacuous; compared with J <= 1");
    finalize(r, {exact_check<T>("J <= 1", j, ScalarOps<T>::one())});
  }
  return r;
}

template <Scalar T>
AuditReport audit_erm(ScenarioAnalysis<T>& a, const std::vector<double>& t_grid,
                      const BoundConstants& c) {
  require_grid(t_grid);
  const auto& s = a.scenario();
  auto r = start(s, "ERM", rational_tolerance(s));
  const auto erm = erm_consistency_bound(s, t_grid);
  put(r, "info", erm.info);
  put(r, "best_true_risk", erm.best_true_risk);
  r.computed["best_hypothesis"] = erm.best_hypothesis;
  const T scale = ScalarOps<T>::from_double(c.erm_scale);
  std::vector<Check> checks;
  for (const auto& pt : erm.curve) {
    const T bound = scale * pt.bound;
    r.series.push_back({pt.t, to_double(pt.tail), to_double(bound), "stated"});
    checks.push_back(exact_check<T>("excess tail at t=" + ScalarOps<double>::str(pt.t),
                                    pt.tail, bound));
  }
  finalize(r, checks);
  return r;
}

template <Scalar T>
AuditReport audit_p1(ScenarioAnalysis<T>& a) {
  const auto& s = a.scenario();
  if (s.learner.kind != HypKind::tagged_sample) {
    throw DomainError("P1 needs the counterexample learner");
  }
  auto r = start(s, "P1", rational_tolerance(s));
  const auto paired = prop1_paired_loss<T>();
  const auto flipped = prop1_flipped_loss<T>();
  const auto risks = expected_gen_risks(s, {paired, flipped});
  const auto law = deviation_law(s, paired);
  // The sample covers at most m * max p of the data mass, so the off-sample
  // half pushes |G| to at least (1 - m max p) / 2.
  const T floor = (ScalarOps<T>::one() - T(max_weight(s.data) * s.m)) / 2;
  const T tail = law.tail(floor, s.tolerance);
  put(r, "info", a.info());
  put(r, "gen_risk:prop1_paired", risks[0]);
  put(r, "gen_risk:prop1_flipped", risks[1]);
  put(r, "deviation_floor", floor);
  put(r, "prob_deviation_above_floor", tail);
  finalize(r, {exact_check<T>("|R_gen(paired)| = 0", ScalarOps<T>::abs(risks[0]),
                              ScalarOps<T>::zero()),
               exact_check<T>("P{|G| >= floor} = 1", T(ScalarOps<T>::one() - tail),
                              ScalarOps<T>::zero()),
               exact_check<T>("R_gen(flipped) <= -floor", risks[1], T(-floor))});
  return r;
}

#define GENAUDIT_INSTANTIATE_AUDIT(T)                                             \
  template class ScenarioAnalysis<T>;                                             \
  template std::vector<ParametricLoss<T>> default_battery(ScenarioAnalysis<T>&);  \
  template AuditReport audit_t1(ScenarioAnalysis<T>&,                             \
                                const std::vector<ParametricLoss<T>>&,            \
                                const BoundConstants&);                           \
  template AuditReport audit_t2(ScenarioAnalysis<T>&, const Companion<T>&,        \
                                const BoundConstants&);                           \
  template AuditReport audit_t3(ScenarioAnalysis<T>&, const Companion<T>&,        \
                                const BoundConstants&);                           \
  template AuditReport audit_t4(ScenarioAnalysis<T>&, const std::vector<double>&, \
                                const BoundConstants&);                           \
  template AuditReport audit_p3(ScenarioAnalysis<T>&, const std::vector<double>&, \
                                const BoundConstants&);                           \
  template DpMechanism audit_dp_mechanism(const LearnerKernel<T>&, int, double,   \
                                          std::uint64_t);                         \
  template std::vector<AuditReport> audit_dp(ScenarioAnalysis<T>&, double, double, \
                                             const std::vector<double>&,          \
                                             const BoundConstants&);              \
  template AuditReport audit_t5(const Rational&, int, const T&, std::size_t,      \
                                const BoundConstants&, std::uint64_t);            \
  template AuditReport audit_c2_forward(ScenarioAnalysis<T>&, double, double,     \
                                        const BoundConstants&);                   \
  template AuditReport audit_erm(ScenarioAnalysis<T>&, const std::vector<double>&, \
                                 const BoundConstants&);                          \
  template AuditReport audit_p1(ScenarioAnalysis<T>&);

GENAUDIT_INSTANTIATE_AUDIT(double)
GENAUDIT_INSTANTIATE_AUDIT(Rational)

}  // namespace genaudit
