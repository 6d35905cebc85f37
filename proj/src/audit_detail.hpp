#pragma once

// Shared by the exact and Monte Carlo audits; not installed.

#include <cmath>
#include <string>
#include <vector>

#include "genaudit/audit.hpp"
#include "genaudit/errors.hpp"

namespace genaudit::detail {

// One inequality headline <= bound; slack = bound - headline, computed in T
// by the caller when the bound is rational.
struct Check {
  std::string name;
  double headline;
  double bound;
  double slack;
};

inline Check float_check(std::string name, double headline, double bound) {
  return {std::move(name), headline, bound, bound - headline};
}

template <Scalar T>
Check exact_check(std::string name, const T& headline, const T& bound) {
  return {std::move(name), to_double(headline), to_double(bound),
          to_double(T(bound - headline))};
}

// The binding (smallest-slack) check becomes the headline; the verdict is
// pass iff that slack is within tolerance.
inline void finalize(AuditReport& r, const std::vector<Check>& checks) {
  if (checks.empty()) {
    throw ConsistencyError("audit produced no checks");
  }
  const auto* worst = &checks.front();
  for (const auto& c : checks) {
    if (c.slack < worst->slack) {
      worst = &c;
    }
  }
  r.headline = worst->headline;
  r.bound = worst->bound;
  r.slack = worst->slack;
  r.verdict = r.slack >= -r.tolerance ? Verdict::pass : Verdict::fail;
  if (checks.size() > 1) {
    r.notes.push_back("binding check: " + worst->name);
  }
  for (const auto& c : checks) {
    if (c.slack < -r.tolerance) {
      r.notes.push_back("violated: " + c.name);
    }
  }
}

template <Scalar T>
void put(AuditReport& r, const std::string& name, const T& x) {
  r.computed[name] = to_double(x);
  if constexpr (ScalarOps<T>::exact) {
    r.exact[name] = ScalarOps<T>::str(x);
  }
}

// Tolerance for an audit whose bound is rational: zero in exact mode.
template <Scalar T>
double rational_tolerance(const Scenario<T>& s) {
  return ScalarOps<T>::exact ? 0.0 : s.tolerance;
}

}  // namespace genaudit::detail
