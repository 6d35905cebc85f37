#include "genaudit/dist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "genaudit/errors.hpp"

namespace genaudit {

struct Alphabet::Data {
  std::string name;
  std::size_t size = 0;
  bool implicit = false;
  std::string prefix;
  std::vector<std::string> symbols;
  std::unordered_map<std::string, std::size_t> index;
};

Alphabet::Alphabet(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

Alphabet::Alphabet(std::string name, std::vector<std::string> symbols) {
  if (symbols.empty()) {
    throw DomainError("alphabet '" + name + "' has no symbols");
  }
  auto data = std::make_shared<Data>();
  data->name = std::move(name);
  data->size = symbols.size();
  data->index.reserve(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (!data->index.emplace(symbols[i], i).second) {
      throw DomainError("alphabet '" + data->name + "' repeats symbol '" +
                        symbols[i] + "'");
    }
  }
  data->symbols = std::move(symbols);
  data_ = std::move(data);
}

Alphabet Alphabet::range(std::string name, std::size_t size,
                         std::string prefix) {
  if (size == 0) {
    throw DomainError("alphabet '" + name + "' has no symbols");
  }
  auto data = std::make_shared<Data>();
  data->name = std::move(name);
  data->size = size;
  data->implicit = true;
  data->prefix = std::move(prefix);
  return Alphabet(std::move(data));
}

const std::string& Alphabet::name() const { return data_->name; }
std::size_t Alphabet::size() const { return data_->size; }
bool Alphabet::implicit() const { return data_->implicit; }

std::string Alphabet::symbol(std::size_t i) const {
  if (i >= data_->size) {
    throw DomainError("symbol index out of range in alphabet '" +
                      data_->name + "'");
  }
  if (data_->implicit) {
    return data_->prefix + std::to_string(i);
  }
  return data_->symbols[i];
}

std::size_t Alphabet::index_of(std::string_view label) const {
  if (data_->implicit) {
    std::string_view rest = label;
    if (rest.substr(0, data_->prefix.size()) == data_->prefix) {
      rest.remove_prefix(data_->prefix.size());
      std::size_t value = 0;
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
      if (ec == std::errc{} && ptr == rest.data() + rest.size() &&
          value < data_->size && symbol(value) == label) {
        return value;
      }
    }
  } else if (auto it = data_->index.find(std::string(label));
             it != data_->index.end()) {
    return it->second;
  }
  throw DomainError("unknown symbol '" + std::string(label) +
                    "' in alphabet '" + data_->name + "'");
}

Alphabet Alphabet::renamed(std::string name) const {
  auto data = std::make_shared<Data>(*data_);
  data->name = std::move(name);
  return Alphabet(std::move(data));
}

bool operator==(const Alphabet& a, const Alphabet& b) {
  if (a.data_ == b.data_) {
    return true;
  }
  if (a.name() != b.name() || a.size() != b.size()) {
    return false;
  }
  if (a.implicit() && b.implicit()) {
    return a.data_->prefix == b.data_->prefix;
  }
  if (!a.implicit() && !b.implicit()) {
    return a.data_->symbols == b.data_->symbols;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.symbol(i) != b.symbol(i)) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

template <Scalar T>
Dist<T>::Dist(Alphabet alphabet, std::vector<T> weights)
    : alphabet_(std::move(alphabet)), weights_(std::move(weights)) {
  if (weights_.size() != alphabet_.size()) {
    throw DomainError("distribution over '" + alphabet_.name() + "' has " +
                      std::to_string(weights_.size()) + " weights for " +
                      std::to_string(alphabet_.size()) + " symbols");
  }
}

template <Scalar T>
Dist<T> Dist<T>::uniform(Alphabet alphabet) {
  const auto n = static_cast<long>(alphabet.size());
  std::vector<T> w(alphabet.size(), ScalarOps<T>::ratio(1, n));
  return Dist(std::move(alphabet), std::move(w));
}

template <Scalar T>
Dist<T> Dist<T>::point_mass(Alphabet alphabet, std::size_t index) {
  std::vector<T> w(alphabet.size(), ScalarOps<T>::zero());
  if (index >= w.size()) {
    throw DomainError("point mass index out of range");
  }
  w[index] = ScalarOps<T>::one();
  return Dist(std::move(alphabet), std::move(w));
}

// ---------------------------------------------------------------------------

template <Scalar T>
Joint<T>::Joint(std::vector<Alphabet> axes, std::vector<T> weights)
    : axes_(std::move(axes)), weights_(std::move(weights)) {
  if (axes_.empty()) {
    throw DomainError("joint needs at least one axis");
  }
  std::unordered_set<std::string> names;
  std::size_t cells = 1;
  for (const auto& a : axes_) {
    if (!names.insert(a.name()).second) {
      throw DomainError("duplicate axis name '" + a.name() + "'");
    }
    cells *= a.size();
  }
  if (cells != weights_.size()) {
    throw DomainError("joint has " + std::to_string(weights_.size()) +
                      " weights for " + std::to_string(cells) + " cells");
  }
}

template <Scalar T>
Joint<T> Joint<T>::from_dist(const Dist<T>& d) {
  return Joint({d.alphabet()}, d.weights());
}

template <Scalar T>
std::vector<std::size_t> Joint<T>::shape() const {
  std::vector<std::size_t> s;
  s.reserve(axes_.size());
  for (const auto& a : axes_) {
    s.push_back(a.size());
  }
  return s;
}

template <Scalar T>
std::vector<std::size_t> Joint<T>::strides() const {
  std::vector<std::size_t> s(axes_.size(), 1);
  for (std::size_t k = axes_.size(); k-- > 1;) {
    s[k - 1] = s[k] * axes_[k].size();
  }
  return s;
}

template <Scalar T>
std::size_t Joint<T>::axis_index(std::string_view name) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (axes_[k].name() == name) {
      return k;
    }
  }
  throw DomainError("unknown axis '" + std::string(name) + "'");
}

template <Scalar T>
std::vector<std::string> Joint<T>::axis_names() const {
  std::vector<std::string> out;
  for (const auto& a : axes_) {
    out.push_back(a.name());
  }
  return out;
}

template <Scalar T>
const T& Joint<T>::at(std::span<const std::size_t> index) const {
  if (index.size() != axes_.size()) {
    throw DomainError("index rank mismatch");
  }
  const auto st = strides();
  std::size_t flat = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= axes_[k].size()) {
      throw DomainError("index out of range on axis '" + axes_[k].name() + "'");
    }
    flat += index[k] * st[k];
  }
  return weights_[flat];
}

template <Scalar T>
Dist<T> Joint<T>::as_dist() const {
  if (axes_.size() != 1) {
    throw DomainError("as_dist on a joint of rank " +
                      std::to_string(axes_.size()));
  }
  return Dist<T>(axes_[0], weights_);
}

// ---------------------------------------------------------------------------

namespace {

template <Scalar T>
T half_l1(std::span<const T> a, std::span<const T> b) {
  T sum = ScalarOps<T>::zero();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if constexpr (ScalarOps<T>::exact) {
      T d = a[i] - b[i];
      sum += ::abs(d);
    } else {
      sum += std::fabs(a[i] - b[i]);
    }
  }
  return sum / 2;
}

// Iterates over every multi-index of `shape`, last axis fastest.
class Odometer {
 public:
  explicit Odometer(std::vector<std::size_t> shape)
      : shape_(std::move(shape)), index_(shape_.size(), 0) {}

  const std::vector<std::size_t>& index() const { return index_; }

  bool next() {
    for (std::size_t k = shape_.size(); k-- > 0;) {
      if (++index_[k] < shape_[k]) {
        return true;
      }
      index_[k] = 0;
    }
    return false;
  }

 private:
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> index_;
};

}  // namespace

template <Scalar T>
T tv_distance(const Dist<T>& p, const Dist<T>& q) {
  if (!(p.alphabet() == q.alphabet())) {
    throw DomainError("tv_distance: alphabets differ ('" + p.alphabet().name() +
                      "' vs '" + q.alphabet().name() + "')");
  }
  return half_l1<T>(p.weights(), q.weights());
}

template <Scalar T>
T tv_distance(const Joint<T>& p, const Joint<T>& q) {
  if (p.rank() != q.rank()) {
    throw DomainError("tv_distance: joints of different rank");
  }
  for (std::size_t k = 0; k < p.rank(); ++k) {
    if (!(p.axes()[k] == q.axes()[k])) {
      throw DomainError("tv_distance: axis '" + p.axes()[k].name() +
                        "' differs");
    }
  }
  return half_l1<T>(p.weights(), q.weights());
}

template <Scalar T>
T overlap(const Dist<T>& p, const Dist<T>& q) {
  return ScalarOps<T>::one() - tv_distance(p, q);
}

template <Scalar T>
Joint<T> marginal(const Joint<T>& j, const std::vector<std::string>& keep) {
  if (keep.empty()) {
    throw DomainError("marginal: no axes kept");
  }
  std::vector<std::size_t> kept;
  std::vector<Alphabet> axes;
  for (const auto& name : keep) {
    const auto k = j.axis_index(name);
    if (std::find(kept.begin(), kept.end(), k) != kept.end()) {
      throw DomainError("marginal: axis '" + name + "' listed twice");
    }
    kept.push_back(k);
    axes.push_back(j.axes()[k]);
  }
  std::vector<std::size_t> out_strides(kept.size(), 1);
  for (std::size_t k = kept.size(); k-- > 1;) {
    out_strides[k - 1] = out_strides[k] * axes[k].size();
  }
  std::size_t cells = out_strides[0] * axes[0].size();
  std::vector<T> w(cells, ScalarOps<T>::zero());

  Odometer it(j.shape());
  std::size_t flat = 0;
  do {
    const auto& idx = it.index();
    std::size_t target = 0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      target += idx[kept[k]] * out_strides[k];
    }
    w[target] += j.weights()[flat];
    ++flat;
  } while (it.next());
  return Joint<T>(std::move(axes), std::move(w));
}

template <Scalar T>
Dist<T> marginal_dist(const Joint<T>& j, std::string_view axis) {
  return marginal(j, {std::string(axis)}).as_dist();
}

template <Scalar T>
Joint<T> condition(const Joint<T>& j, std::string_view given_axis,
                   std::string_view value) {
  if (j.rank() < 2) {
    throw DomainError("condition: joint must have at least two axes");
  }
  const auto g = j.axis_index(given_axis);
  const auto v = j.axes()[g].index_of(value);
  std::vector<Alphabet> axes;
  for (std::size_t k = 0; k < j.rank(); ++k) {
    if (k != g) {
      axes.push_back(j.axes()[k]);
    }
  }
  std::vector<T> w;
  T mass = ScalarOps<T>::zero();
  Odometer it(j.shape());
  std::size_t flat = 0;
  do {
    if (it.index()[g] == v) {
      w.push_back(j.weights()[flat]);
      mass += j.weights()[flat];
    }
    ++flat;
  } while (it.next());
  if (mass == ScalarOps<T>::zero()) {
    throw ConditioningError("condition: slice " + std::string(given_axis) +
                            "=" + std::string(value) + " has zero mass");
  }
  for (auto& x : w) {
    x /= mass;
  }
  return Joint<T>(std::move(axes), std::move(w));
}

template <Scalar T>
Joint<T> product(const Joint<T>& a, const Joint<T>& b) {
  std::vector<Alphabet> axes = a.axes();
  axes.insert(axes.end(), b.axes().begin(), b.axes().end());
  std::vector<T> w;
  w.reserve(a.weights().size() * b.weights().size());
  for (const auto& x : a.weights()) {
    for (const auto& y : b.weights()) {
      w.push_back(x * y);
    }
  }
  return Joint<T>(std::move(axes), std::move(w));
}

template <Scalar T>
Joint<T> product(const Dist<T>& p, const Dist<T>& q) {
  return product(Joint<T>::from_dist(p), Joint<T>::from_dist(q));
}

template <Scalar T>
Joint<T> merge_axes(const Joint<T>& j, const std::vector<std::string>& names,
                    std::string merged_name) {
  if (names.empty()) {
    throw DomainError("merge_axes: nothing to merge");
  }
  std::vector<std::size_t> merged;
  for (const auto& n : names) {
    merged.push_back(j.axis_index(n));
  }
  std::vector<std::string> order;
  const auto first = *std::min_element(merged.begin(), merged.end());
  for (std::size_t k = 0; k < j.rank(); ++k) {
    if (k == first) {
      order.insert(order.end(), names.begin(), names.end());
    } else if (std::find(merged.begin(), merged.end(), k) == merged.end()) {
      order.push_back(j.axes()[k].name());
    }
  }
  // A permutation keeps every cell; afterwards the merged block is contiguous
  // so the flat weights can be reused as-is.
  auto permuted = marginal(j, order);

  std::vector<Alphabet> axes;
  for (std::size_t k = 0; k < permuted.rank();) {
    if (permuted.axes()[k].name() != names.front()) {
      axes.push_back(permuted.axes()[k]);
      ++k;
      continue;
    }
    std::vector<std::size_t> shape;
    for (std::size_t i = 0; i < names.size(); ++i) {
      shape.push_back(permuted.axes()[k + i].size());
    }
    std::vector<std::string> labels;
    Odometer it(shape);
    do {
      std::string label = "(";
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) {
          label += ",";
        }
        label += permuted.axes()[k + i].symbol(it.index()[i]);
      }
      label += ")";
      labels.push_back(std::move(label));
    } while (it.next());
    axes.emplace_back(merged_name, std::move(labels));
    k += names.size();
  }
  return Joint<T>(std::move(axes), permuted.weights());
}

template <Scalar T>
Validation validate(std::span<const T> weights, const NumericMode& mode) {
  Validation v;
  if constexpr (ScalarOps<T>::exact) {
    Rational sum = 0;
    for (const auto& w : weights) {
      if (w < 0) {
        ++v.negative_weights;
      }
      sum += w;
    }
    v.mass_deviation = Rational(sum - 1).get_d();
    if (sum != 1) {
      v.diagnostics.push_back("total mass is " + sum.get_str() + ", not 1");
    }
  } else {
    // Neumaier summation keeps large uniform alphabets inside 1e-12.
    long double sum = 0.0L;
    long double comp = 0.0L;
    for (double w : weights) {
      if (std::isnan(w)) {
        ++v.nan_weights;
        continue;
      }
      if (w < 0) {
        ++v.negative_weights;
      }
      const long double t = sum + w;
      if (std::fabs(static_cast<double>(sum)) >= std::fabs(w)) {
        comp += (sum - t) + w;
      } else {
        comp += (w - t) + sum;
      }
      sum = t;
    }
    v.mass_deviation = static_cast<double>(sum + comp - 1.0L);
    const double tol = mode.kind == NumericKind::exact ? 0.0 : mode.tolerance;
    if (std::fabs(v.mass_deviation) > tol) {
      v.diagnostics.push_back("total mass deviates from 1 by " +
                              std::to_string(v.mass_deviation));
    }
    if (v.nan_weights > 0) {
      v.diagnostics.push_back(std::to_string(v.nan_weights) + " NaN weights");
    }
  }
  if (v.negative_weights > 0) {
    v.diagnostics.push_back(std::to_string(v.negative_weights) +
                            " negative weights");
  }
  v.ok = v.diagnostics.empty();
  return v;
}

template <Scalar T>
void require_valid(const Dist<T>& d, const NumericMode& mode) {
  auto v = validate(d, mode);
  if (!v.ok) {
    std::string msg = "invalid distribution over '" + d.alphabet().name() + "':";
    for (const auto& m : v.diagnostics) {
      msg += " " + m + ";";
    }
    throw DomainError(msg);
  }
}

template <Scalar T>
Dist<double> to_float(const Dist<T>& d) {
  std::vector<double> w;
  w.reserve(d.size());
  for (const auto& x : d.weights()) {
    w.push_back(to_double(x));
  }
  return Dist<double>(d.alphabet(), std::move(w));
}

#define GENAUDIT_INSTANTIATE_DIST(T)                                           \
  template class Dist<T>;                                                      \
  template class Joint<T>;                                                     \
  template T tv_distance(const Dist<T>&, const Dist<T>&);                      \
  template T tv_distance(const Joint<T>&, const Joint<T>&);                    \
  template T overlap(const Dist<T>&, const Dist<T>&);                          \
  template Joint<T> marginal(const Joint<T>&, const std::vector<std::string>&); \
  template Dist<T> marginal_dist(const Joint<T>&, std::string_view);           \
  template Joint<T> condition(const Joint<T>&, std::string_view,               \
                              std::string_view);                               \
  template Joint<T> product(const Dist<T>&, const Dist<T>&);                   \
  template Joint<T> product(const Joint<T>&, const Joint<T>&);                 \
  template Joint<T> merge_axes(const Joint<T>&, const std::vector<std::string>&, \
                               std::string);                                   \
  template Validation validate(std::span<const T>, const NumericMode&);        \
  template void require_valid(const Dist<T>&, const NumericMode&);             \
  template Dist<double> to_float(const Dist<T>&);

GENAUDIT_INSTANTIATE_DIST(double)
GENAUDIT_INSTANTIATE_DIST(Rational)

}  // namespace genaudit
