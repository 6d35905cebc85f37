#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "genaudit/model.hpp"

namespace genaudit {

// {"0", "1"}
Alphabet binary_domain();

template <Scalar T>
LearnerKernel<T> constant_learner(const Alphabet& domain);

// H is the whole sample as a sorted multiset; at m = 1 this is the identity.
template <Scalar T>
LearnerKernel<T> release_sample(const Alphabet& domain);

// H = Z_1 regardless of the rest of the sample. Not symmetric.
template <Scalar T>
LearnerKernel<T> first_example(const Alphabet& domain);

// With probability delta, a uniformly random size-k sub-multiset of the
// sample (positions drawn without replacement); otherwise the empty set.
template <Scalar T>
LearnerKernel<T> subsample_release(const Alphabet& domain, int k, T delta);

// Binary domain. Majority bit b of the sample is kept with probability
// e^eps / (1 + e^eps); an exact tie releases a fair coin.
template <Scalar T>
LearnerKernel<T> randomized_response_dp(double epsilon);

// Deterministic empirical-risk minimizer over a finite class.
// loss_table[z * |H| + h]; ties go to the lowest hypothesis index.
template <Scalar T>
LearnerKernel<T> erm_finite(const Alphabet& domain, const Alphabet& hypotheses,
                            std::vector<T> loss_table);

// Hypothesis (sorted sample, k) with k a fair coin bit. On sample points its
// predictions agree with the reference predictor when k = 1 and disagree
// when k = 0; off the sample they are uniformly random.
template <Scalar T>
LearnerKernel<T> prop1_counterexample(std::size_t domain_size);

// Reference predictor of the counterexample: +1 on the first half.
inline bool prop1_reference(std::int32_t z, std::size_t domain_size) {
  return static_cast<std::size_t>(z) < domain_size / 2;
}

// Second hypothesis K produced from the same sample, possibly using H.
template <Scalar T>
struct Companion {
  std::string name;
  std::vector<HypCode> hypotheses;  // empty: observed codes, sorted
  std::function<HypLaw<T>(Sample, const HypCode& h)> law;
  std::function<std::string(const HypCode&)> label;
};

template <Scalar T>
Companion<T> constant_companion();

template <Scalar T>
Companion<T> duplicate_companion(const LearnerKernel<T>& learner);

template <Scalar T>
struct TrnHypJoint {
  Joint<T> joint;  // axes (Z_trn, H) or (Z_trn, H, K)
  std::vector<HypCode> codes;
  std::vector<HypCode> companion_codes;
  std::string scenario_id;
  std::string method = "exact-enumeration";
  std::uint64_t kernel_evaluations = 0;
  double collision_bound = 0.0;
};

// P(Z_trn = z, H = h) = E_S[ #{i : Z_i = z} / m * P(H = h | S) ], with an
// optional companion axis K evaluated on the same samples.
template <Scalar T>
TrnHypJoint<T> exact_trn_hyp_joint(
    const Scenario<T>& s, const std::optional<Companion<T>>& companion = {});

// Shannon I(S_m; H) in nats by enumeration.
template <Scalar T>
double sample_hyp_mutual_info(const Scenario<T>& s);

// Dense joint over (S, H) with the ordered sample as one tuple axis. Only
// for small instances; budget counts |supp|^m kernel evaluations.
template <Scalar T>
Joint<T> sample_hyp_joint(const Scenario<T>& s);

template <Scalar T>
struct StabilitySearch {
  std::vector<T> per_dist_info;
  T sup_info;
  std::size_t argmax = 0;
};

// J(Z_trn;H) for each family member. sup_info is a lower bound on
// sup over all data distributions.
template <Scalar T>
StabilitySearch<T> stability_search(const LearnerKernel<T>& learner, int m,
                                    const std::vector<Dist<T>>& family,
                                    std::uint64_t budget = kDefaultBudget);

// All distributions with weights in {0, 1/r, ..., 1}.
template <Scalar T>
std::vector<Dist<T>> simplex_grid(const Alphabet& domain, int resolution);

}  // namespace genaudit
