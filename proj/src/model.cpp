#include "genaudit/model.hpp"

#include <algorithm>
#include <limits>

#include "genaudit/errors.hpp"

namespace genaudit {

std::size_t HypCodeHash::operator()(const HypCode& c) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto v : c) {
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
    h *= 0x100000001b3ull;
  }
  return h ^ c.size();
}

std::string to_string(HypKind k) {
  switch (k) {
    case HypKind::set:
      return "set";
    case HypKind::index:
      return "index";
    case HypKind::tagged_sample:
      return "tagged_sample";
  }
  return "?";
}

std::string set_label(const Alphabet& domain, const HypCode& code) {
  std::string out = "{";
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (i) {
      out += ",";
    }
    out += domain.symbol(static_cast<std::size_t>(code[i]));
  }
  return out + "}";
}

template <Scalar T>
HypCode LearnerKernel<T>::sample_hypothesis(Sample s, RandomStream& rng) const {
  if (draw) {
    return draw(s, rng);
  }
  const auto dist = law(s);
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto& [code, p] : dist) {
    acc += to_double(p);
    if (u < acc) {
      return code;
    }
  }
  // Rounding left u above the accumulated mass: take the last positive atom.
  for (auto it = dist.rbegin(); it != dist.rend(); ++it) {
    if (it->second > ScalarOps<T>::zero()) {
      return it->first;
    }
  }
  throw DomainError("learner '" + name + "' returned an empty law");
}

template <Scalar T>
bool ParametricLoss<T>::accepts(HypKind k) const {
  return kinds.empty() || std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

template <Scalar T>
void ParametricLoss<T>::check_kind(HypKind k, const std::string& learner) const {
  if (!accepts(k)) {
    throw DomainError("loss '" + name + "' is not defined on " + to_string(k) +
                      " hypotheses of learner '" + learner + "'");
  }
}

template <Scalar T>
void Scenario<T>::check() const {
  if (m < 1) {
    throw DomainError("scenario '" + id + "': sample size m must be >= 1");
  }
  if (!(data.alphabet() == learner.domain)) {
    throw DomainError("scenario '" + id +
                      "': data distribution is not over the learner's domain");
  }
  if (loss) {
    loss->check_kind(learner.kind, learner.name);
  }
}

template <Scalar T>
double Scenario<T>::collision_bound() const {
  double c = 0.0;
  for (std::size_t z = 0; z < data.size(); ++z) {
    const double p = to_double(data[z]);
    c += p * p;
  }
  return static_cast<double>(m) * m * c;
}

template struct LearnerKernel<double>;
template struct LearnerKernel<Rational>;
template struct ParametricLoss<double>;
template struct ParametricLoss<Rational>;
template struct Scenario<double>;
template struct Scenario<Rational>;

}  // namespace genaudit
