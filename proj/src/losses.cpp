#include "genaudit/losses.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <unordered_map>

#include "genaudit/enumerate.hpp"
#include "genaudit/errors.hpp"
#include "genaudit/info.hpp"

namespace genaudit {

namespace {

bool contains_sorted(HypCode::const_iterator first, HypCode::const_iterator last,
                     std::int32_t z) {
  return std::binary_search(first, last, z);
}

// Total data mass on the distinct symbols in [first, last).
template <Scalar T>
T mass_on(HypCode::const_iterator first, HypCode::const_iterator last,
          const Dist<T>& data) {
  T mass = ScalarOps<T>::zero();
  for (auto it = first; it != last; ++it) {
    if (it == first || *it != *(it - 1)) {
      mass += data[static_cast<std::size_t>(*it)];
    }
  }
  return mass;
}

void require_tagged(const HypCode& h) {
  if (h.empty() || (h.back() != 0 && h.back() != 1)) {
    throw DomainError("hypothesis code lacks a flip bit");
  }
}

template <Scalar T>
class TrueRiskCache {
 public:
  TrueRiskCache(ParametricLoss<T> loss, Dist<T> data)
      : loss_(std::move(loss)), data_(std::move(data)) {}

  const T& operator()(const HypCode& h) {
    auto it = cache_.find(h);
    if (it == cache_.end()) {
      it = cache_.emplace(h, true_risk(loss_, h, data_)).first;
    }
    return it->second;
  }

 private:
  ParametricLoss<T> loss_;
  Dist<T> data_;
  std::unordered_map<HypCode, T, HypCodeHash> cache_;
};

// Sums the probabilities of equal values: exact keys for rationals, runs
// within `tol` for floats.
template <Scalar T>
std::vector<std::pair<T, T>> merge_atoms(std::vector<std::pair<T, T>> atoms,
                                         double tol) {
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<T, T>> out;
  for (auto& [v, p] : atoms) {
    bool same;
    if (out.empty()) {
      same = false;
    } else if constexpr (ScalarOps<T>::exact) {
      same = v == out.back().first;
    } else {
      same = v - out.back().first <= tol;
    }
    if (same) {
      out.back().second += p;
    } else {
      out.emplace_back(std::move(v), std::move(p));
    }
  }
  return out;
}

template <Scalar T>
Joint<T> zh_joint(const TrnHypJoint<T>& j) {
  if (j.joint.rank() == 2) {
    return j.joint;
  }
  return marginal(j.joint, {"Z_trn", "H"});
}

}  // namespace

template <Scalar T>
ParametricLoss<T> membership_loss() {
  ParametricLoss<T> l{.name = "membership", .kinds = {HypKind::set}};
  l.value = [](std::int32_t z, const HypCode& h) {
    return contains_sorted(h.begin(), h.end(), z) ? ScalarOps<T>::one()
                                                  : ScalarOps<T>::zero();
  };
  l.true_risk_fast = [](const HypCode& h, const Dist<T>& data) {
    return mass_on(h.begin(), h.end(), data);
  };
  return l;
}

template <Scalar T>
ParametricLoss<T> constant_loss(T c) {
  if (c < 0 || c > 1) {
    throw DomainError("constant loss value must lie in [0, 1]");
  }
  ParametricLoss<T> l{.name = "constant", .params = Json{{"c", to_double(c)}}};
  l.value = [c](std::int32_t, const HypCode&) { return c; };
  l.true_risk_fast = [c](const HypCode&, const Dist<T>&) { return c; };
  return l;
}

template <Scalar T>
ParametricLoss<T> table_loss(std::string name, std::size_t domain_size,
                             std::vector<HypCode> codes, std::vector<T> table) {
  const std::size_t nh = codes.size();
  if (table.size() != domain_size * nh) {
    throw DomainError("loss table '" + name + "' must have |Z| * |H| entries");
  }
  for (const auto& v : table) {
    if (v < 0 || v > 1) {
      throw DomainError("loss table '" + name + "' has values outside [0, 1]");
    }
  }
  auto column = std::make_shared<std::unordered_map<HypCode, std::size_t, HypCodeHash>>();
  for (std::size_t i = 0; i < nh; ++i) {
    column->emplace(codes[i], i);
  }
  auto values = std::make_shared<const std::vector<T>>(std::move(table));
  ParametricLoss<T> l{.name = std::move(name)};
  l.value = [column, values, nh, label = l.name](std::int32_t z, const HypCode& h) {
    auto it = column->find(h);
    if (it == column->end()) {
      throw DomainError("loss table '" + label + "' has no column for this hypothesis");
    }
    return (*values)[static_cast<std::size_t>(z) * nh + it->second];
  };
  return l;
}

template <Scalar T>
ParametricLoss<T> index_table_loss(std::string name, std::size_t domain_size,
                                   std::size_t hypotheses, std::vector<T> table) {
  std::vector<HypCode> codes;
  for (std::size_t h = 0; h < hypotheses; ++h) {
    codes.push_back(HypCode{static_cast<std::int32_t>(h)});
  }
  auto l = table_loss(std::move(name), domain_size, std::move(codes), std::move(table));
  l.kinds = {HypKind::index};
  return l;
}

template <Scalar T>
ParametricLoss<T> random_table_loss(std::uint64_t seed) {
  ParametricLoss<T> l{.name = "random_table", .params = Json{{"seed", seed}}};
  l.value = [seed](std::int32_t z, const HypCode& h) {
    const std::uint64_t id =
        HypCodeHash{}(h) * 0x9E3779B97F4A7C15ull + static_cast<std::uint32_t>(z);
    RandomStream rng(seed, id);
    return ScalarOps<T>::ratio(static_cast<long>(rng.below(1001)), 1000);
  };
  return l;
}

template <Scalar T>
ParametricLoss<T> prop1_paired_loss() {
  ParametricLoss<T> l{.name = "prop1_paired", .kinds = {HypKind::tagged_sample}};
  l.value = [](std::int32_t z, const HypCode& h) {
    require_tagged(h);
    if (contains_sorted(h.begin(), h.end() - 1, z)) {
      return h.back() == 1 ? ScalarOps<T>::zero() : ScalarOps<T>::one();
    }
    return ScalarOps<T>::ratio(1, 2);
  };
  l.true_risk_fast = [](const HypCode& h, const Dist<T>& data) {
    require_tagged(h);
    const T on = mass_on(h.begin(), h.end() - 1, data);
    T r = (ScalarOps<T>::one() - on) / 2;
    if (h.back() == 0) {
      r += on;
    }
    return r;
  };
  return l;
}

template <Scalar T>
ParametricLoss<T> prop1_flipped_loss() {
  ParametricLoss<T> l{.name = "prop1_flipped", .kinds = {HypKind::tagged_sample}};
  l.value = [](std::int32_t z, const HypCode& h) {
    require_tagged(h);
    return contains_sorted(h.begin(), h.end() - 1, z) ? ScalarOps<T>::zero()
                                                      : ScalarOps<T>::ratio(1, 2);
  };
  l.true_risk_fast = [](const HypCode& h, const Dist<T>& data) {
    require_tagged(h);
    const T on = mass_on(h.begin(), h.end() - 1, data);
    return T((ScalarOps<T>::one() - on) / 2);
  };
  return l;
}

template <Scalar T>
T empirical_risk(const ParametricLoss<T>& loss, const HypCode& h, Sample s) {
  if (s.empty()) {
    throw DomainError("empirical risk of an empty sample");
  }
  T sum = ScalarOps<T>::zero();
  for (auto z : s) {
    sum += loss.value(z, h);
  }
  return sum / static_cast<long>(s.size());
}

template <Scalar T>
T true_risk(const ParametricLoss<T>& loss, const HypCode& h, const Dist<T>& data) {
  if (loss.true_risk_fast) {
    return loss.true_risk_fast(h, data);
  }
  T sum = ScalarOps<T>::zero();
  for (std::size_t z = 0; z < data.size(); ++z) {
    if (data[z] != ScalarOps<T>::zero()) {
      sum += data[z] * loss.value(static_cast<std::int32_t>(z), h);
    }
  }
  return sum;
}

template <Scalar T>
std::vector<T> expected_gen_risks(const Scenario<T>& s,
                                  const std::vector<ParametricLoss<T>>& losses) {
  for (const auto& loss : losses) {
    loss.check_kind(s.learner.kind, s.learner.name);
  }
  const auto plan = plan_enumeration(s);
  std::vector<TrueRiskCache<T>> truth;
  truth.reserve(losses.size());
  for (const auto& loss : losses) {
    truth.emplace_back(loss, s.data);
  }
  std::vector<T> out(losses.size(), ScalarOps<T>::zero());
  for_each_sample(s, plan, [&](Sample sample, const T& w) {
    for (const auto& [h, p] : s.learner.law(sample)) {
      if (p == ScalarOps<T>::zero()) {
        continue;
      }
      const T wp = w * p;
      for (std::size_t i = 0; i < losses.size(); ++i) {
        out[i] += wp * (empirical_risk(losses[i], h, sample) - truth[i](h));
      }
    }
  });
  return out;
}

template <Scalar T>
T expected_gen_risk(const Scenario<T>& s, const ParametricLoss<T>& loss) {
  return expected_gen_risks(s, std::vector<ParametricLoss<T>>{loss}).front();
}

template <Scalar T>
T joint_gen_risk(const TrnHypJoint<T>& j, const ParametricLoss<T>& loss) {
  const Joint<T> p = zh_joint(j);
  const std::size_t nz = p.axes()[0].size();
  const std::size_t nh = p.axes()[1].size();
  const auto& w = p.weights();
  std::vector<T> pz(nz, ScalarOps<T>::zero());
  std::vector<T> ph(nh, ScalarOps<T>::zero());
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t h = 0; h < nh; ++h) {
      pz[z] += w[z * nh + h];
      ph[h] += w[z * nh + h];
    }
  }
  T out = ScalarOps<T>::zero();
  for (std::size_t h = 0; h < nh; ++h) {
    if (ph[h] == ScalarOps<T>::zero()) {
      continue;
    }
    for (std::size_t z = 0; z < nz; ++z) {
      const T d = w[z * nh + h] - pz[z] * ph[h];
      if (d != ScalarOps<T>::zero()) {
        out += d * loss.value(static_cast<std::int32_t>(z), j.codes[h]);
      }
    }
  }
  return out;
}

template <Scalar T>
T DeviationLaw<T>::tail(const T& t, double tol) const {
  T out = ScalarOps<T>::zero();
  for (const auto& [g, p] : support) {
    const T a = ScalarOps<T>::abs(g);
    bool hit;
    if constexpr (ScalarOps<T>::exact) {
      hit = a >= t;
    } else {
      hit = a >= t - tol;
    }
    if (hit) {
      out += p;
    }
  }
  return out;
}

template <Scalar T>
T DeviationLaw<T>::atom(const T& t, const T& window) const {
  T out = ScalarOps<T>::zero();
  for (const auto& [g, p] : support) {
    const T d = ScalarOps<T>::abs(g) - t;
    if (ScalarOps<T>::abs(d) <= window) {
      out += p;
    }
  }
  return out;
}

template <Scalar T>
T DeviationLaw<T>::mean() const {
  T out = ScalarOps<T>::zero();
  for (const auto& [g, p] : support) {
    out += g * p;
  }
  return out;
}

template <Scalar T>
T DeviationLaw<T>::mass() const {
  T out = ScalarOps<T>::zero();
  for (const auto& [g, p] : support) {
    out += p;
  }
  return out;
}

template <Scalar T>
DeviationLaw<T> deviation_law(const Scenario<T>& s, const ParametricLoss<T>& loss) {
  loss.check_kind(s.learner.kind, s.learner.name);
  const auto plan = plan_enumeration(s);
  TrueRiskCache<T> truth(loss, s.data);
  std::vector<std::pair<T, T>> atoms;
  std::map<T, T> exact_atoms;
  for_each_sample(s, plan, [&](Sample sample, const T& w) {
    for (const auto& [h, p] : s.learner.law(sample)) {
      if (p == ScalarOps<T>::zero()) {
        continue;
      }
      T g = empirical_risk(loss, h, sample) - truth(h);
      if constexpr (ScalarOps<T>::exact) {
        exact_atoms[g] += w * p;
      } else {
        atoms.emplace_back(g, w * p);
      }
    }
  });
  DeviationLaw<T> out;
  if constexpr (ScalarOps<T>::exact) {
    out.support.assign(exact_atoms.begin(), exact_atoms.end());
  } else {
    out.support = merge_atoms(std::move(atoms), 1e-12);
  }
  return out;
}

template <Scalar T>
WorstCaseLoss<T> worst_case_loss(const TrnHypJoint<T>& j, double tol) {
  const Joint<T> p = zh_joint(j);
  const std::size_t nz = p.axes()[0].size();
  const std::size_t nh = p.axes()[1].size();
  const auto& w = p.weights();
  std::vector<T> pz(nz, ScalarOps<T>::zero());
  std::vector<T> ph(nh, ScalarOps<T>::zero());
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t h = 0; h < nh; ++h) {
      pz[z] += w[z * nh + h];
      ph[h] += w[z * nh + h];
    }
  }
  std::vector<T> table(nz * nh, ScalarOps<T>::zero());
  std::size_t ties = 0;
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t h = 0; h < nh; ++h) {
      const T d = w[z * nh + h] - pz[z] * ph[h];
      bool tie;
      bool include;
      if constexpr (ScalarOps<T>::exact) {
        tie = d == 0;
        include = d >= 0;
      } else {
        tie = std::fabs(d) <= tol;
        include = d >= -tol;
      }
      if (tie && ph[h] != ScalarOps<T>::zero()) {
        ++ties;
      }
      if (include) {
        table[z * nh + h] = ScalarOps<T>::one();
      }
    }
  }
  auto loss = table_loss("worst_case", nz, j.codes, table);
  return {std::move(loss), std::move(table), ties};
}

template <Scalar T>
Companion<T> sign_companion(const ParametricLoss<T>& loss, const Dist<T>& data, T t) {
  auto truth = std::make_shared<TrueRiskCache<T>>(loss, data);
  Companion<T> c;
  c.name = "sign";
  c.hypotheses = {HypCode{-1}, HypCode{0}, HypCode{1}};
  c.law = [loss, truth, t](Sample sample, const HypCode& h) {
    const T g = empirical_risk(loss, h, sample) - (*truth)(h);
    std::int32_t k = 0;
    if constexpr (ScalarOps<T>::exact) {
      k = g >= t ? 1 : (g <= -t ? -1 : 0);
    } else {
      k = g >= t - 1e-12 ? 1 : (g <= -t + 1e-12 ? -1 : 0);
    }
    return HypLaw<T>{{HypCode{k}, ScalarOps<T>::one()}};
  };
  c.label = [](const HypCode& k) {
    return k.at(0) > 0 ? std::string("+1") : std::to_string(k.at(0));
  };
  return c;
}

template <Scalar T>
ErmConsistency<T> erm_consistency_bound(const Scenario<T>& s,
                                        const std::vector<double>& t_grid) {
  if (s.learner.kind != HypKind::index || s.learner.hypotheses.empty()) {
    throw DomainError("erm_consistency_bound needs a finite-class learner");
  }
  if (!s.loss) {
    throw DomainError("erm_consistency_bound needs the scenario loss");
  }
  const auto& codes = s.learner.hypotheses;
  std::vector<T> risk;
  for (const auto& h : codes) {
    risk.push_back(true_risk(*s.loss, h, s.data));
  }
  ErmConsistency<T> out;
  out.best_hypothesis = 0;
  for (std::size_t h = 1; h < codes.size(); ++h) {
    if (risk[h] < risk[out.best_hypothesis]) {
      out.best_hypothesis = h;
    }
  }
  out.best_true_risk = risk[out.best_hypothesis];

  const auto j = exact_trn_hyp_joint(s);
  out.info = variational_info(j.joint);
  const Dist<T> ph = marginal_dist(j.joint, "H");
  std::vector<std::pair<T, T>> atoms;
  for (std::size_t h = 0; h < j.codes.size(); ++h) {
    atoms.emplace_back(risk[h] - out.best_true_risk, ph[h]);
  }
  out.excess_law = merge_atoms(std::move(atoms), s.tolerance);

  for (double t : t_grid) {
    if (!(t > 0)) {
      throw DomainError("erm_consistency_bound: t must be positive");
    }
    const T tt = ScalarOps<T>::from_decimal(t);
    ErmPoint<T> pt{t, ScalarOps<T>::zero(), out.info / tt};
    for (const auto& [e, p] : out.excess_law) {
      if (le_tol(tt, e, s.tolerance)) {
        pt.tail += p;
      }
    }
    pt.holds = le_tol(pt.tail, pt.bound, s.tolerance);
    out.holds = out.holds && pt.holds;
    out.curve.push_back(std::move(pt));
  }
  return out;
}

#define GENAUDIT_INSTANTIATE_LOSSES(T)                                            \
  template ParametricLoss<T> membership_loss();                                   \
  template ParametricLoss<T> constant_loss(T);                                    \
  template ParametricLoss<T> table_loss(std::string, std::size_t,                 \
                                        std::vector<HypCode>, std::vector<T>);    \
  template ParametricLoss<T> index_table_loss(std::string, std::size_t,           \
                                              std::size_t, std::vector<T>);       \
  template ParametricLoss<T> random_table_loss(std::uint64_t);                    \
  template ParametricLoss<T> prop1_paired_loss();                                 \
  template ParametricLoss<T> prop1_flipped_loss();                                \
  template T empirical_risk(const ParametricLoss<T>&, const HypCode&, Sample);    \
  template T true_risk(const ParametricLoss<T>&, const HypCode&, const Dist<T>&); \
  template T expected_gen_risk(const Scenario<T>&, const ParametricLoss<T>&);     \
  template std::vector<T> expected_gen_risks(const Scenario<T>&,                  \
                                             const std::vector<ParametricLoss<T>>&); \
  template T joint_gen_risk(const TrnHypJoint<T>&, const ParametricLoss<T>&);     \
  template struct DeviationLaw<T>;                                                \
  template DeviationLaw<T> deviation_law(const Scenario<T>&,                      \
                                         const ParametricLoss<T>&);               \
  template WorstCaseLoss<T> worst_case_loss(const TrnHypJoint<T>&, double);       \
  template Companion<T> sign_companion(const ParametricLoss<T>&, const Dist<T>&, T); \
  template ErmConsistency<T> erm_consistency_bound(const Scenario<T>&,            \
                                                   const std::vector<double>&);

GENAUDIT_INSTANTIATE_LOSSES(double)
GENAUDIT_INSTANTIATE_LOSSES(Rational)

}  // namespace genaudit
