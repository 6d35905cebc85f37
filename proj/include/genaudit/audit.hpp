#pragma once

// Executable checks of the generalization and concentration bounds against
// exactly computed quantities.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genaudit/learners.hpp"
#include "genaudit/losses.hpp"
#include "genaudit/model.hpp"

namespace genaudit {

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct SeriesRow {
  double t = 0.0;
  double tail = 0.0;
  double bound = 0.0;
  std::string variant;
};

struct AuditReport {
  std::string scenario_id;
  std::string theorem;
  Json computed = Json::object();  // name -> number
  Json exact = Json::object();     // name -> "p/q", rational mode only
  double headline = 0.0;           // the quantity compared with `bound`
  double bound = 0.0;
  double slack = 0.0;              // bound - headline
  Verdict verdict = Verdict::pass;
  std::vector<std::string> notes;
  std::string method = "exact-enumeration";
  double tolerance = 1e-12;
  std::vector<SeriesRow> series;

  Json to_json() const;
  static AuditReport from_json(const Json& j);
};

// Every multiplicative or additive constant that enters a bound formula.
// The defaults are the published values; the mutation test scales them.
struct BoundConstants {
  double t1_scale = 1.0;       // |R_gen| <= s * J
  double t2_scale = 1.0;       // J(Z;(H,K)) <= s * (sum of chain terms)
  double t3_base = 1.0;        // (base + k * |K|) J + sqrt(root * log|K| / m)
  double t3_k_factor = 0.5;
  double t3_root_factor = 0.5;
  double t4_lead = 2.5;        // (lead / t) [J + sqrt(inner / m)]
  double t4_inner;             // log 9 / 25
  double p3_offset = 3.0;      // (1/t) sqrt(factor * (I + offset) / m)
  double p3_factor = 0.5;
  double c1_lead = 1.25;       // (lead / t) [e^eps - 1 + delta + sqrt(inner / m)]
  double c1_inner;             // 2 log 9 / 25
  double p4_scale = 0.5;       // J <= s * (e^eps - 1 + delta)
  double t5_scale = 1.0;       // P{|G| = t} = s * J / t
  double c2_scale = 1.0;       // J <= s * (eps + delta)
  double erm_scale = 1.0;      // P{excess >= t} <= s * J / t

  BoundConstants();

  static std::vector<std::string> names();
  double& at(const std::string& name);
};

// Closed-form right-hand sides at constants `c`.
double t3_bound(double info, std::size_t companion_size, int m,
                const BoundConstants& c = {});
double t4_bound(double t, double info, int m, const BoundConstants& c = {});
double p3_bound(double t, double mutual_info_nats, int m,
                const BoundConstants& c = {});
double c1_bound(double t, double epsilon, double delta, int m,
                const BoundConstants& c = {});
double p4_bound(double epsilon, double delta, const BoundConstants& c = {});

// Lazily computed quantities shared by the audits of one scenario.
template <Scalar T>
class ScenarioAnalysis {
 public:
  explicit ScenarioAnalysis(Scenario<T> s);

  const Scenario<T>& scenario() const { return s_; }
  const ParametricLoss<T>& loss() const;  // throws DomainError if absent
  const TrnHypJoint<T>& joint();
  const T& info();
  const DeviationLaw<T>& deviation();  // of the scenario loss
  double sample_info();                // I(S_m; H) in nats

 private:
  Scenario<T> s_;
  std::optional<TrnHypJoint<T>> joint_;
  std::optional<T> info_;
  std::optional<DeviationLaw<T>> deviation_;
  std::optional<double> sample_info_;
};

// Battery used by the supremum audit when none is given.
template <Scalar T>
std::vector<ParametricLoss<T>> default_battery(ScenarioAnalysis<T>& a);

template <Scalar T>
AuditReport audit_t1(ScenarioAnalysis<T>& a,
                     const std::vector<ParametricLoss<T>>& battery,
                     const BoundConstants& c = {});

// Chain rule over (Z_trn, H, K).
template <Scalar T>
AuditReport audit_t2(ScenarioAnalysis<T>& a, const Companion<T>& k,
                     const BoundConstants& c = {});

template <Scalar T>
AuditReport audit_t3(ScenarioAnalysis<T>& a, const Companion<T>& k,
                     const BoundConstants& c = {});

template <Scalar T>
AuditReport audit_t4(ScenarioAnalysis<T>& a, const std::vector<double>& t_grid,
                     const BoundConstants& c = {});

template <Scalar T>
AuditReport audit_p3(ScenarioAnalysis<T>& a, const std::vector<double>& t_grid,
                     const BoundConstants& c = {});

struct DpMechanism {
  double effective_epsilon = 0.0;  // max log-ratio over adjacent samples
  bool unbounded = false;          // some output has zero mass next door
  double queried_epsilon = 0.0;
  double effective_delta = 0.0;    // hockey-stick divergence at queried_epsilon
  std::uint64_t adjacent_pairs = 0;
};

// Samples range over the learner's whole domain; pairs differ in one entry.
template <Scalar T>
DpMechanism audit_dp_mechanism(const LearnerKernel<T>& learner, int m,
                               double epsilon = 0.0,
                               std::uint64_t budget = kDefaultBudget);

// Returns the tail report ("C1") and the information report ("P4").
template <Scalar T>
std::vector<AuditReport> audit_dp(ScenarioAnalysis<T>& a, double epsilon,
                                  double delta, const std::vector<double>& t_grid,
                                  const BoundConstants& c = {});

// Builds subsample_release(k = t m, delta) on a uniform n-symbol domain with
// the membership loss. |G| = t is read as | |G| - t | <= k / n, the most
// R_true(H) can move away from 0 on a finite domain.
template <Scalar T>
AuditReport audit_t5(const Rational& t, int m, const T& delta, std::size_t n,
                     const BoundConstants& c = {},
                     std::uint64_t budget = kDefaultBudget);

template <Scalar T>
AuditReport audit_c2_forward(ScenarioAnalysis<T>& a, double epsilon,
                             double delta, const BoundConstants& c = {});

template <Scalar T>
AuditReport audit_erm(ScenarioAnalysis<T>& a, const std::vector<double>& t_grid,
                      const BoundConstants& c = {});

// Counterexample learner with its paired and flipped losses, exact.
template <Scalar T>
AuditReport audit_p1(ScenarioAnalysis<T>& a);

// All theorem ids understood by the dispatcher.
const std::vector<std::string>& audit_ids();

}  // namespace genaudit
