#pragma once

// Finite probability distributions and dense joint tensors over named
// alphabets, in exact-rational or float64 arithmetic.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genaudit/scalar.hpp"

namespace genaudit {

// Ordered set of distinct symbol labels. Cheap to copy; immutable.
//
// Large observation spaces use the implicit form, where the label of
// symbol i is `prefix + std::to_string(i)` and nothing is stored per symbol.
class Alphabet {
 public:
  Alphabet(std::string name, std::vector<std::string> symbols);

  static Alphabet range(std::string name, std::size_t size,
                        std::string prefix = "");

  const std::string& name() const;
  std::size_t size() const;
  std::string symbol(std::size_t i) const;
  std::size_t index_of(std::string_view label) const;
  bool implicit() const;

  Alphabet renamed(std::string name) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b);

 private:
  struct Data;
  explicit Alphabet(std::shared_ptr<const Data> data);
  std::shared_ptr<const Data> data_;
};

template <Scalar T>
class Dist {
 public:
  Dist(Alphabet alphabet, std::vector<T> weights);

  static Dist uniform(Alphabet alphabet);
  static Dist point_mass(Alphabet alphabet, std::size_t index);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<T>& weights() const { return weights_; }
  const T& operator[](std::size_t i) const { return weights_[i]; }
  std::size_t size() const { return weights_.size(); }

 private:
  Alphabet alphabet_;
  std::vector<T> weights_;
};

// Dense row-major tensor over the product of its axes (last axis fastest).
template <Scalar T>
class Joint {
 public:
  Joint(std::vector<Alphabet> axes, std::vector<T> weights);

  static Joint from_dist(const Dist<T>& d);

  const std::vector<Alphabet>& axes() const { return axes_; }
  std::size_t rank() const { return axes_.size(); }
  const std::vector<T>& weights() const { return weights_; }
  std::vector<std::size_t> shape() const;
  std::vector<std::size_t> strides() const;

  std::size_t axis_index(std::string_view name) const;
  std::vector<std::string> axis_names() const;

  const T& at(std::span<const std::size_t> index) const;

  // Only valid for rank-1 joints.
  Dist<T> as_dist() const;

 private:
  std::vector<Alphabet> axes_;
  std::vector<T> weights_;
};

template <Scalar T>
T tv_distance(const Dist<T>& p, const Dist<T>& q);

template <Scalar T>
T tv_distance(const Joint<T>& p, const Joint<T>& q);

template <Scalar T>
T overlap(const Dist<T>& p, const Dist<T>& q);

// Sums out every axis not named in `keep`. The result's axes follow the
// order given in `keep`, so this doubles as an axis permutation.
template <Scalar T>
Joint<T> marginal(const Joint<T>& j, const std::vector<std::string>& keep);

template <Scalar T>
Dist<T> marginal_dist(const Joint<T>& j, std::string_view axis);

// Slice at `given_axis == value`, renormalized. Throws ConditioningError on a
// zero-mass slice.
template <Scalar T>
Joint<T> condition(const Joint<T>& j, std::string_view given_axis,
                   std::string_view value);

template <Scalar T>
Joint<T> product(const Dist<T>& p, const Dist<T>& q);

template <Scalar T>
Joint<T> product(const Joint<T>& a, const Joint<T>& b);

// Replaces the named axes by one product axis called `merged_name`, placed
// where the first of them stood. Labels are tuples "(a,b,...)".
template <Scalar T>
Joint<T> merge_axes(const Joint<T>& j, const std::vector<std::string>& axes,
                    std::string merged_name);

struct Validation {
  bool ok = true;
  double mass_deviation = 0.0;
  std::size_t negative_weights = 0;
  std::size_t nan_weights = 0;
  std::vector<std::string> diagnostics;
};

template <Scalar T>
Validation validate(std::span<const T> weights, const NumericMode& mode);

template <Scalar T>
Validation validate(const Dist<T>& d, const NumericMode& mode) {
  return validate<T>(std::span<const T>(d.weights()), mode);
}

template <Scalar T>
Validation validate(const Joint<T>& j, const NumericMode& mode) {
  return validate<T>(std::span<const T>(j.weights()), mode);
}

// Throws DomainError carrying the diagnostics when `d` is not a valid Dist.
template <Scalar T>
void require_valid(const Dist<T>& d, const NumericMode& mode);

template <Scalar T>
Dist<double> to_float(const Dist<T>& d);

}  // namespace genaudit
