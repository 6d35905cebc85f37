#pragma once

// Learners as stochastic kernels, losses on (observation, hypothesis), and
// the scenario bundle that the risk and audit layers consume.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "genaudit/dist.hpp"
#include "genaudit/philox.hpp"

namespace genaudit {

using Json = nlohmann::ordered_json;

// Canonical integer encoding of a hypothesis. Set-valued hypotheses are the
// sorted domain indices; index hypotheses are a single entry; the
// counterexample learner appends its flip bit to the sorted sample.
using HypCode = std::vector<std::int32_t>;

struct HypCodeHash {
  std::size_t operator()(const HypCode& c) const noexcept;
};

template <Scalar T>
using HypLaw = std::vector<std::pair<HypCode, T>>;

enum class HypKind { set, index, tagged_sample };

std::string to_string(HypKind k);

using Sample = std::span<const std::int32_t>;

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

template <Scalar T>
struct LearnerKernel {
  std::string name;
  Alphabet domain;
  HypKind kind = HypKind::set;
  Json params = Json::object();
  // Output law depends only on the multiset of the sample.
  bool symmetric = true;
  // Declared hypothesis alphabet, in axis order. Empty means the alphabet is
  // built from the codes observed during enumeration, sorted.
  std::vector<HypCode> hypotheses;
  std::function<HypLaw<T>(Sample)> law;
  std::function<std::string(const HypCode&)> label;
  // Direct sampler for Monte Carlo; when absent the law is sampled.
  std::function<HypCode(Sample, RandomStream&)> draw;

  HypCode sample_hypothesis(Sample s, RandomStream& rng) const;
};

template <Scalar T>
struct ParametricLoss {
  std::string name;
  std::vector<HypKind> kinds;  // empty: any hypothesis kind
  Json params = Json::object();
  std::function<T(std::int32_t z, const HypCode& h)> value;
  // E_{Z ~ data}[L(Z;h)] without a pass over the domain, when available.
  std::function<T(const HypCode& h, const Dist<T>& data)> true_risk_fast;

  bool accepts(HypKind k) const;
  // Throws DomainError when the loss is not defined for learners of kind `k`.
  void check_kind(HypKind k, const std::string& learner) const;
};

template <Scalar T>
struct Scenario {
  std::string id;
  LearnerKernel<T> learner;
  Dist<T> data;
  int m = 1;
  std::optional<ParametricLoss<T>> loss;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  double tolerance = 1e-12;

  // Throws DomainError unless m >= 1 and data is over learner.domain.
  void check() const;
  // m^2 times the collision probability sum p(z)^2; m^2/n for uniform data.
  double collision_bound() const;
};

// Label of a set-valued code, e.g. "{z1,z4}".
std::string set_label(const Alphabet& domain, const HypCode& code);

}  // namespace genaudit
