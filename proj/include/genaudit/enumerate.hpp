#pragma once

// Exhaustive enumeration of samples S_m ~ P^m. Symmetric learners are
// enumerated over sorted multisets with multinomial weights; others over
// ordered tuples. Only symbols with positive mass are visited.

#include <cstdint>
#include <string>
#include <vector>

#include "genaudit/errors.hpp"
#include "genaudit/model.hpp"

namespace genaudit {

// Number of samples of size m over `support` symbols, saturating at
// UINT64_MAX.
std::uint64_t count_samples(std::uint64_t support, int m, bool multiset);

struct EnumerationPlan {
  bool multiset = true;
  std::vector<std::int32_t> support;
  std::uint64_t samples = 0;
  std::uint64_t kernel_evaluations = 0;
};

// Throws BudgetExceeded when samples * kernels_per_sample exceeds the
// scenario budget.
template <Scalar T>
EnumerationPlan plan_enumeration(const Scenario<T>& s,
                                 std::uint64_t kernels_per_sample = 1,
                                 bool force_ordered = false) {
  s.check();
  EnumerationPlan plan;
  plan.multiset = s.learner.symmetric && !force_ordered;
  for (std::size_t z = 0; z < s.data.size(); ++z) {
    if (s.data[z] != ScalarOps<T>::zero()) {
      plan.support.push_back(static_cast<std::int32_t>(z));
    }
  }
  plan.samples = count_samples(plan.support.size(), s.m, plan.multiset);
  const std::uint64_t cap = UINT64_MAX / kernels_per_sample;
  plan.kernel_evaluations = plan.samples > cap
                                ? UINT64_MAX
                                : plan.samples * kernels_per_sample;
  if (plan.kernel_evaluations > s.budget) {
    throw BudgetExceeded("exact enumeration of '" + s.id + "' needs " +
                             std::to_string(plan.samples) +
                             " samples; use the Monte Carlo estimator or "
                             "raise the budget",
                         plan.kernel_evaluations, s.budget);
  }
  return plan;
}

// Calls visit(Sample, const T& weight) once per sample; weights sum to one.
template <Scalar T, class Visit>
void for_each_sample(const Scenario<T>& s, const EnumerationPlan& plan,
                     Visit&& visit) {
  const auto m = static_cast<std::size_t>(s.m);
  const std::size_t k = plan.support.size();
  if (k == 0) {
    return;
  }
  std::vector<T> p(k);
  for (std::size_t i = 0; i < k; ++i) {
    p[i] = s.data[static_cast<std::size_t>(plan.support[i])];
  }
  std::vector<T> fact(m + 1, ScalarOps<T>::one());
  for (std::size_t i = 1; i <= m; ++i) {
    fact[i] = fact[i - 1] * static_cast<long>(i);
  }

  std::vector<std::size_t> idx(m, 0);
  std::vector<std::int32_t> sample(m);
  while (true) {
    T w = ScalarOps<T>::one();
    for (std::size_t i = 0; i < m; ++i) {
      sample[i] = plan.support[idx[i]];
      w *= p[idx[i]];
    }
    if (plan.multiset) {
      // m! / prod(run lengths!) orderings share this sorted sample.
      T denom = ScalarOps<T>::one();
      std::size_t run = 1;
      for (std::size_t i = 1; i <= m; ++i) {
        if (i < m && idx[i] == idx[i - 1]) {
          ++run;
        } else {
          denom *= fact[run];
          run = 1;
        }
      }
      w *= fact[m];
      w /= denom;
    }
    visit(Sample(sample), static_cast<const T&>(w));

    std::size_t i = m;
    while (i > 0 && idx[i - 1] + 1 == k) {
      --i;
    }
    if (i == 0) {
      break;
    }
    ++idx[i - 1];
    for (std::size_t j = i; j < m; ++j) {
      idx[j] = plan.multiset ? idx[i - 1] : 0;
    }
  }
}

}  // namespace genaudit
