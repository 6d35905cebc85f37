#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "genaudit/learners.hpp"
#include "genaudit/model.hpp"

namespace genaudit {

// 1{z in H} for set-valued hypotheses.
template <Scalar T>
ParametricLoss<T> membership_loss();

template <Scalar T>
ParametricLoss<T> constant_loss(T c);

// Table over (z, code); codes not listed are a DomainError at evaluation.
// table[z * codes.size() + column].
template <Scalar T>
ParametricLoss<T> table_loss(std::string name, std::size_t domain_size,
                             std::vector<HypCode> codes, std::vector<T> table);

// Table over (z, hypothesis index) for index-kind learners such as ERM.
template <Scalar T>
ParametricLoss<T> index_table_loss(std::string name, std::size_t domain_size,
                                   std::size_t hypotheses, std::vector<T> table);

// Pseudo-random values in {0, 1/1000, ..., 1}, a pure function of
// (seed, z, code).
template <Scalar T>
ParametricLoss<T> random_table_loss(std::uint64_t seed);

// Misclassification against the reference predictor. On the sample it is 0
// for flip bit 1 and 1 for flip bit 0; off the sample the prediction is a
// fair coin, so the loss takes its expectation 1/2.
template <Scalar T>
ParametricLoss<T> prop1_paired_loss();

// Same after flipping the predictions of the k = 0 hypothesis: 0 on the
// sample, 1/2 off it.
template <Scalar T>
ParametricLoss<T> prop1_flipped_loss();

template <Scalar T>
T empirical_risk(const ParametricLoss<T>& loss, const HypCode& h, Sample s);

template <Scalar T>
T true_risk(const ParametricLoss<T>& loss, const HypCode& h, const Dist<T>& data);

// E[R_emp(H;S) - R_true(H)] by sample enumeration.
template <Scalar T>
T expected_gen_risk(const Scenario<T>& s, const ParametricLoss<T>& loss);

// One enumeration for a whole battery.
template <Scalar T>
std::vector<T> expected_gen_risks(const Scenario<T>& s,
                                  const std::vector<ParametricLoss<T>>& losses);

// E_{P(Z_trn,H)}[L] - E_{P(Z_trn)P(H)}[L] from an exact joint.
template <Scalar T>
T joint_gen_risk(const TrnHypJoint<T>& j, const ParametricLoss<T>& loss);

// Finite law of G = R_emp(H;S) - R_true(H).
template <Scalar T>
struct DeviationLaw {
  std::vector<std::pair<T, T>> support;  // (value, probability), ascending
  std::string method = "exact";

  // P{|G| >= t}; in float mode values within `tol` below t count.
  T tail(const T& t, double tol) const;
  // P{ | |G| - t | <= window }
  T atom(const T& t, const T& window) const;
  T mean() const;
  T mass() const;
};

template <Scalar T>
DeviationLaw<T> deviation_law(const Scenario<T>& s, const ParametricLoss<T>& loss);

template <Scalar T>
struct WorstCaseLoss {
  ParametricLoss<T> loss;
  std::vector<T> table;  // [z * |H| + h] over the joint's H axis
  std::size_t ties = 0;  // cells with P(z,h) == P(z)P(h) and P(h) > 0
};

// L*(z;h) = 1{P(z,h) >= P(z)P(h)}.
template <Scalar T>
WorstCaseLoss<T> worst_case_loss(const TrnHypJoint<T>& j, double tol = 1e-12);

// K = +1 when G >= t, -1 when G <= -t, 0 otherwise.
template <Scalar T>
Companion<T> sign_companion(const ParametricLoss<T>& loss, const Dist<T>& data, T t);

template <Scalar T>
struct ErmPoint {
  double t;
  T tail;   // P{excess >= t}
  T bound;  // J / t
  bool holds = true;
};

template <Scalar T>
struct ErmConsistency {
  std::size_t best_hypothesis = 0;
  T best_true_risk;
  std::vector<std::pair<T, T>> excess_law;  // (excess risk, probability)
  T info;
  std::vector<ErmPoint<T>> curve;
  bool holds = true;
};

// Needs an index-kind learner and the scenario loss; h* minimizes the true
// risk (lowest index on ties).
template <Scalar T>
ErmConsistency<T> erm_consistency_bound(const Scenario<T>& s,
                                        const std::vector<double>& t_grid);

}  // namespace genaudit
