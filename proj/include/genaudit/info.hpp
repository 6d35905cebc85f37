#pragma once

// Variational information J(X;Y) = TV(P(X,Y), P(X)P(Y)), its conditional
// form, the chain-rule decomposition, and Shannon mutual information.

#include <string>
#include <string_view>
#include <vector>

#include "genaudit/dist.hpp"
#include "genaudit/philox.hpp"

namespace genaudit {

// Rank-2 joint: TV between the joint and the product of its marginals.
template <Scalar T>
T variational_info(const Joint<T>& j);

// J(X;Y) where X and Y are groups of axes of `j`; groups of more than one
// axis are treated as a single tuple-valued variable.
template <Scalar T>
T variational_info(const Joint<T>& j, const std::vector<std::string>& x,
                   const std::vector<std::string>& y);

template <Scalar T>
T mutual_stability(const Joint<T>& j);

// Rank-3 joint: E_C[ TV(P(A,B|C), P(A|C)P(B|C)) ] with C = `given_axis` and
// A, B the remaining two axes. Zero-mass slices of C carry zero weight.
template <Scalar T>
T conditional_variational_info(const Joint<T>& j, std::string_view given_axis);

// J(X;Y|C) for axis groups.
template <Scalar T>
T conditional_variational_info(const Joint<T>& j,
                               const std::vector<std::string>& x,
                               const std::vector<std::string>& y,
                               const std::vector<std::string>& given);

template <Scalar T>
struct ChainDecomposition {
  T total;               // J(Z; (H1..Hk))
  std::vector<T> terms;  // J(Z; Ht | H1..H(t-1)), term 1 unconditional
  T slack;               // sum(terms) - total
  bool holds = true;     // slack >= -tolerance
};

// First axis is Z, the remaining k >= 1 axes are H1..Hk in order.
template <Scalar T>
ChainDecomposition<T> chain_decompose(const Joint<T>& j, double tolerance);

template <Scalar T>
struct Prop2Check {
  T info_a_bc;       // J(A;(B,C))
  T info_ab;         // J(A;B)
  T info_ac_given_b; // J(A;C|B)
  T gap1;            // |J(A;(B,C)) - J(A;C|B)|, bounded by J(A;B)
  T gap2;            // |J(A;(B,C)) - J(A;B)|, bounded by J(A;C|B)
  bool holds1 = true;
  bool holds2 = true;
};

// Axes are taken in order as A, B, C.
template <Scalar T>
Prop2Check<T> prop2_gap_check(const Joint<T>& j, double tolerance);

// Row-stochastic map from `in` to `out`, rows[i * out.size() + o].
template <Scalar T>
struct Channel {
  Alphabet in;
  Alphabet out;
  std::vector<T> rows;

  // Throws DomainError when a row is not a distribution.
  void check(const NumericMode& mode) const;
};

// Joint over (A, B, C) for the Markov chain A -> B -> C.
template <Scalar T>
Joint<T> markov_chain_joint(const Dist<T>& p_a, const Channel<T>& a_to_b,
                            const Channel<T>& b_to_c);

template <Scalar T>
struct DpiCheck {
  T info_ab;
  T info_ac;
  T info_a_bc;
  bool inequality = true;  // J(A;C) <= J(A;B)
  bool equality = true;    // J(A;(B,C)) == J(A;B)
};

template <Scalar T>
DpiCheck<T> dpi_check(const Channel<T>& a_to_b, const Channel<T>& b_to_c,
                      const Dist<T>& p_a, const NumericMode& mode);

// Mutual information in nats with the 0 ln 0 = 0 convention.
template <Scalar T>
double shannon_mutual_info(const Joint<T>& j);

// Dirichlet(1,...,1) over the flattened tensor. Axes are named A, B, C, ...
// with symbols "0", "1", ...
Joint<double> random_joint(const std::vector<std::size_t>& shape,
                           RandomStream& rng);

// Full-support joint with integer weights in [1, 1000], normalized exactly.
Joint<Rational> random_joint_exact(const std::vector<std::size_t>& shape,
                                   RandomStream& rng);

// Rows drawn from Dirichlet(1,...,1).
Channel<double> random_channel(const Alphabet& in, const Alphabet& out,
                               RandomStream& rng);

struct FuzzViolations {
  std::size_t chain_rule = 0;       // sum of conditional terms < total
  std::size_t gap_ab = 0;           // |J(A;(B,C)) - J(A;C|B)| > J(A;B)
  std::size_t gap_ac_given_b = 0;   // |J(A;(B,C)) - J(A;B)| > J(A;C|B)
  std::size_t cannot_hurt = 0;      // J(X;Y) > J(X;(Y,Z))
  std::size_t triangle = 0;         // J(X;Y) > J(X;Z) + J(X;Y|Z)
  std::size_t dpi = 0;              // J(A;C) > J(A;B)
  std::size_t markov_equality = 0;  // J(A;(B,C)) != J(A;B)
  std::size_t pinsker = 0;          // J > sqrt(I/2)

  std::size_t total() const;
};

struct FuzzSummary {
  std::size_t trials = 0;
  FuzzViolations violations;
  double min_chain_slack = 0.0;
};

// Random 3-axis joints with each dimension in [2, max_dim] and random
// Markov chains A -> B -> C, checked in float64 at `tolerance`.
FuzzSummary chain_fuzz(std::size_t trials, std::size_t max_dim,
                       std::uint64_t seed, double tolerance);

}  // namespace genaudit
