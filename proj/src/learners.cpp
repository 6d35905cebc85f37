#include "genaudit/learners.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <unordered_map>

#include "genaudit/enumerate.hpp"
#include "genaudit/errors.hpp"
#include "genaudit/info.hpp"

namespace genaudit {

std::uint64_t count_samples(std::uint64_t support, int m, bool multiset) {
  if (support == 0) {
    return 0;
  }
  using u128 = unsigned __int128;
  const u128 cap = UINT64_MAX;
  u128 r = 1;
  for (int i = 1; i <= m; ++i) {
    if (multiset) {
      // After step i, r = C(support - 1 + i, i).
      r = r * (support - 1 + static_cast<u128>(i)) / static_cast<u128>(i);
    } else {
      r *= support;
    }
    if (r > cap) {
      return UINT64_MAX;
    }
  }
  return static_cast<std::uint64_t>(r);
}

Alphabet binary_domain() { return Alphabet("Z", {"0", "1"}); }

namespace {

HypCode sorted_copy(Sample s) {
  HypCode out(s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

template <Scalar T>
HypLaw<T> point_law(HypCode code) {
  return {{std::move(code), ScalarOps<T>::one()}};
}

}  // namespace

template <Scalar T>
LearnerKernel<T> constant_learner(const Alphabet& domain) {
  LearnerKernel<T> l{.name = "constant", .domain = domain};
  l.kind = HypKind::set;
  l.hypotheses = {HypCode{}};
  l.law = [](Sample) { return point_law<T>({}); };
  l.label = [](const HypCode&) { return std::string("const"); };
  l.draw = [](Sample, RandomStream&) { return HypCode{}; };
  return l;
}

template <Scalar T>
LearnerKernel<T> release_sample(const Alphabet& domain) {
  LearnerKernel<T> l{.name = "release_sample", .domain = domain};
  l.kind = HypKind::set;
  l.law = [](Sample s) { return point_law<T>(sorted_copy(s)); };
  l.label = [domain](const HypCode& c) { return set_label(domain, c); };
  l.draw = [](Sample s, RandomStream&) { return sorted_copy(s); };
  return l;
}

template <Scalar T>
LearnerKernel<T> first_example(const Alphabet& domain) {
  LearnerKernel<T> l{.name = "first_example", .domain = domain};
  l.kind = HypKind::set;
  l.symmetric = false;
  l.law = [](Sample s) { return point_law<T>({s[0]}); };
  l.label = [domain](const HypCode& c) { return set_label(domain, c); };
  l.draw = [](Sample s, RandomStream&) { return HypCode{s[0]}; };
  return l;
}

template <Scalar T>
LearnerKernel<T> subsample_release(const Alphabet& domain, int k, T delta) {
  if (k < 1) {
    throw DomainError("subsample_release: k must be >= 1");
  }
  if (delta < 0 || delta > 1) {
    throw DomainError("subsample_release: delta must lie in [0, 1]");
  }
  LearnerKernel<T> l{.name = "subsample_release", .domain = domain};
  l.kind = HypKind::set;
  l.params = Json{{"k", k}, {"delta", to_double(delta)}};
  l.law = [k, delta](Sample s) {
    const auto m = s.size();
    const auto kk = static_cast<std::size_t>(k);
    if (kk > m) {
      throw DomainError("subsample_release: k = " + std::to_string(k) +
                        " exceeds the sample size " + std::to_string(m));
    }
    HypLaw<T> out;
    const T none = ScalarOps<T>::one() - delta;
    if (none != ScalarOps<T>::zero()) {
      out.emplace_back(HypCode{}, none);
    }
    if (delta == ScalarOps<T>::zero()) {
      return out;
    }
    const HypCode sorted = sorted_copy(s);
    const T each = delta / T(static_cast<long>(binomial(m, kk)));
    std::map<HypCode, T> acc;
    // Position subsets in lexicographic order; sorted input keeps codes sorted.
    std::vector<std::size_t> pos(kk);
    std::iota(pos.begin(), pos.end(), 0);
    while (true) {
      HypCode code(kk);
      for (std::size_t i = 0; i < kk; ++i) {
        code[i] = sorted[pos[i]];
      }
      auto [it, fresh] = acc.try_emplace(std::move(code), each);
      if (!fresh) {
        it->second += each;
      }
      std::size_t i = kk;
      while (i > 0 && pos[i - 1] == m - kk + i - 1) {
        --i;
      }
      if (i == 0) {
        break;
      }
      ++pos[i - 1];
      for (std::size_t j = i; j < kk; ++j) {
        pos[j] = pos[j - 1] + 1;
      }
    }
    for (auto& [code, p] : acc) {
      out.emplace_back(code, p);
    }
    return out;
  };
  l.label = [domain](const HypCode& c) { return set_label(domain, c); };
  const double d = to_double(delta);
  l.draw = [k, d](Sample s, RandomStream& rng) {
    if (!(rng.uniform() < d)) {
      return HypCode{};
    }
    HypCode pool(s.begin(), s.end());
    if (static_cast<std::size_t>(k) > pool.size()) {
      throw DomainError("subsample_release: k exceeds the sample size");
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
      const auto j = i + rng.below(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
  };
  return l;
}

template <Scalar T>
LearnerKernel<T> randomized_response_dp(double epsilon) {
  if (!(epsilon >= 0) || !std::isfinite(epsilon)) {
    throw DomainError("randomized_response_dp: epsilon must be finite and >= 0");
  }
  LearnerKernel<T> l{.name = "randomized_response_dp", .domain = binary_domain()};
  l.kind = HypKind::set;
  l.params = Json{{"epsilon", epsilon}};
  l.hypotheses = {HypCode{0}, HypCode{1}};
  const double e = std::exp(epsilon);
  const T keep = ScalarOps<T>::from_double(e / (1.0 + e));
  const T flip = ScalarOps<T>::one() - keep;
  l.law = [keep, flip](Sample s) {
    const auto ones = std::count(s.begin(), s.end(), 1);
    const auto zeros = static_cast<long>(s.size()) - ones;
    if (ones == zeros) {
      const T half = ScalarOps<T>::ratio(1, 2);
      return HypLaw<T>{{HypCode{0}, half}, {HypCode{1}, half}};
    }
    const bool b = ones > zeros;
    return HypLaw<T>{{HypCode{0}, b ? flip : keep}, {HypCode{1}, b ? keep : flip}};
  };
  l.label = [](const HypCode& c) { return std::to_string(c.at(0)); };
  return l;
}

template <Scalar T>
LearnerKernel<T> erm_finite(const Alphabet& domain, const Alphabet& hypotheses,
                            std::vector<T> loss_table) {
  const std::size_t nh = hypotheses.size();
  if (loss_table.size() != domain.size() * nh) {
    throw DomainError("erm_finite: loss table must have |Z| * |H| entries");
  }
  for (const auto& v : loss_table) {
    if (v < 0 || v > 1) {
      throw DomainError("erm_finite: loss values must lie in [0, 1]");
    }
  }
  LearnerKernel<T> l{.name = "erm_finite", .domain = domain};
  l.kind = HypKind::index;
  Json names = Json::array();
  for (std::size_t h = 0; h < nh; ++h) {
    names.push_back(hypotheses.symbol(h));
    l.hypotheses.push_back(HypCode{static_cast<std::int32_t>(h)});
  }
  l.params = Json{{"hypotheses", names}};
  auto table = std::make_shared<const std::vector<T>>(std::move(loss_table));
  l.law = [table, nh](Sample s) {
    std::size_t best = 0;
    T best_risk = ScalarOps<T>::zero();
    for (std::size_t h = 0; h < nh; ++h) {
      T risk = ScalarOps<T>::zero();
      for (auto z : s) {
        risk += (*table)[static_cast<std::size_t>(z) * nh + h];
      }
      bool better;
      if constexpr (ScalarOps<T>::exact) {
        better = risk < best_risk;
      } else {
        better = risk < best_risk - 1e-12;
      }
      if (h == 0 || better) {
        best = h;
        best_risk = risk;
      }
    }
    return point_law<T>({static_cast<std::int32_t>(best)});
  };
  l.label = [hypotheses](const HypCode& c) {
    return hypotheses.symbol(static_cast<std::size_t>(c.at(0)));
  };
  return l;
}

template <Scalar T>
LearnerKernel<T> prop1_counterexample(std::size_t domain_size) {
  if (domain_size < 2 || domain_size % 2 != 0) {
    throw DomainError("prop1_counterexample: domain size must be even and >= 2");
  }
  LearnerKernel<T> l{.name = "prop1_counterexample", .domain = Alphabet::range("Z", domain_size, "z")};
  l.kind = HypKind::tagged_sample;
  l.params = Json{{"domain_size", domain_size}};
  l.law = [](Sample s) {
    HypCode agree = sorted_copy(s);
    HypCode disagree = agree;
    agree.push_back(1);
    disagree.push_back(0);
    const T half = ScalarOps<T>::ratio(1, 2);
    return HypLaw<T>{{std::move(disagree), half}, {std::move(agree), half}};
  };
  const Alphabet domain = l.domain;
  l.label = [domain](const HypCode& c) {
    std::string out = "(";
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      out += (i ? "," : "") + domain.symbol(static_cast<std::size_t>(c[i]));
    }
    return out + "|" + std::to_string(c.back()) + ")";
  };
  l.draw = [](Sample s, RandomStream& rng) {
    HypCode code = sorted_copy(s);
    code.push_back(static_cast<std::int32_t>(rng.next_u32() & 1u));
    return code;
  };
  return l;
}

template <Scalar T>
Companion<T> constant_companion() {
  return {"constant",
          {HypCode{}},
          [](Sample, const HypCode&) { return point_law<T>({}); },
          [](const HypCode&) { return std::string("const"); }};
}

template <Scalar T>
Companion<T> duplicate_companion(const LearnerKernel<T>& learner) {
  return {"duplicate", learner.hypotheses,
          [](Sample, const HypCode& h) { return point_law<T>(h); },
          learner.label};
}

namespace {

std::vector<HypCode> axis_codes(const std::vector<HypCode>& declared,
                                std::vector<HypCode> observed,
                                const std::string& what) {
  std::sort(observed.begin(), observed.end());
  observed.erase(std::unique(observed.begin(), observed.end()), observed.end());
  if (declared.empty()) {
    return observed;
  }
  std::vector<HypCode> sorted_declared = declared;
  std::sort(sorted_declared.begin(), sorted_declared.end());
  for (const auto& c : observed) {
    if (!std::binary_search(sorted_declared.begin(), sorted_declared.end(), c)) {
      throw DomainError(what + " emitted a hypothesis outside its declared alphabet");
    }
  }
  return declared;
}

Alphabet code_alphabet(const std::string& name, const std::vector<HypCode>& codes,
                       const std::function<std::string(const HypCode&)>& label) {
  std::vector<std::string> labels;
  labels.reserve(codes.size());
  for (const auto& c : codes) {
    labels.push_back(label(c));
  }
  return Alphabet(name, std::move(labels));
}

// (symbol, multiplicity) pairs of a sample.
std::vector<std::pair<std::int32_t, long>> multiplicities(Sample s) {
  HypCode sorted = sorted_copy(s);
  std::vector<std::pair<std::int32_t, long>> out;
  for (auto z : sorted) {
    if (out.empty() || out.back().first != z) {
      out.emplace_back(z, 1);
    } else {
      ++out.back().second;
    }
  }
  return out;
}

}  // namespace

template <Scalar T>
TrnHypJoint<T> exact_trn_hyp_joint(const Scenario<T>& s,
                                   const std::optional<Companion<T>>& companion) {
  const auto plan = plan_enumeration(s, companion ? 2 : 1);
  const std::size_t n = s.learner.domain.size();
  const T inv_m = ScalarOps<T>::ratio(1, s.m);

  std::map<std::pair<HypCode, HypCode>, std::vector<T>> rows;
  std::vector<std::pair<std::int32_t, long>> counts;
  auto add = [&](const HypCode& h, const HypCode& k, const T& mass) {
    auto& row = rows[{h, k}];
    if (row.empty()) {
      row.assign(n, ScalarOps<T>::zero());
    }
    for (const auto& [z, c] : counts) {
      row[static_cast<std::size_t>(z)] += mass * c * inv_m;
    }
  };

  for_each_sample(s, plan, [&](Sample sample, const T& w) {
    counts = multiplicities(sample);
    for (const auto& [h, p] : s.learner.law(sample)) {
      if (p == ScalarOps<T>::zero()) {
        continue;
      }
      const T base = w * p;
      if (!companion) {
        add(h, HypCode{}, base);
        continue;
      }
      for (const auto& [k, q] : companion->law(sample, h)) {
        if (q != ScalarOps<T>::zero()) {
          add(h, k, base * q);
        }
      }
    }
  });

  std::vector<HypCode> seen_h, seen_k;
  for (const auto& [key, row] : rows) {
    seen_h.push_back(key.first);
    seen_k.push_back(key.second);
  }
  TrnHypJoint<T> out{Joint<T>({Alphabet("x", {"x"})}, {ScalarOps<T>::one()})};
  out.codes = axis_codes(s.learner.hypotheses, std::move(seen_h),
                         "learner '" + s.learner.name + "'");
  std::vector<Alphabet> axes{s.learner.domain.renamed("Z_trn"),
                             code_alphabet("H", out.codes, s.learner.label)};
  std::size_t nk = 1;
  if (companion) {
    out.companion_codes = axis_codes(companion->hypotheses, std::move(seen_k),
                                     "companion '" + companion->name + "'");
    axes.push_back(code_alphabet("K", out.companion_codes, companion->label));
    nk = out.companion_codes.size();
  }
  const std::size_t nh = out.codes.size();

  std::map<HypCode, std::size_t> h_index, k_index;
  for (std::size_t i = 0; i < nh; ++i) {
    h_index[out.codes[i]] = i;
  }
  for (std::size_t i = 0; i < out.companion_codes.size(); ++i) {
    k_index[out.companion_codes[i]] = i;
  }
  std::vector<T> w(n * nh * nk, ScalarOps<T>::zero());
  for (const auto& [key, row] : rows) {
    const std::size_t h = h_index.at(key.first);
    const std::size_t k = companion ? k_index.at(key.second) : 0;
    for (std::size_t z = 0; z < n; ++z) {
      w[(z * nh + h) * nk + k] = row[z];
    }
  }
  out.joint = Joint<T>(std::move(axes), std::move(w));
  out.scenario_id = s.id;
  out.kernel_evaluations = plan.kernel_evaluations;
  out.collision_bound = s.collision_bound();
  return out;
}

template <Scalar T>
double sample_hyp_mutual_info(const Scenario<T>& s) {
  // Two passes: the hypothesis marginal, then E[log K(h|S) / P(h)].
  const auto plan = plan_enumeration(s, 2);
  std::unordered_map<HypCode, T, HypCodeHash> ph;
  for_each_sample(s, plan, [&](Sample sample, const T& w) {
    for (const auto& [h, p] : s.learner.law(sample)) {
      auto [it, fresh] = ph.try_emplace(h, w * p);
      if (!fresh) {
        it->second += w * p;
      }
    }
  });
  double mi = 0.0;
  for_each_sample(s, plan, [&](Sample sample, const T& w) {
    for (const auto& [h, p] : s.learner.law(sample)) {
      if (p == ScalarOps<T>::zero()) {
        continue;
      }
      const T ratio = p / ph.at(h);
      mi += to_double(w) * to_double(p) * std::log(to_double(ratio));
    }
  });
  return mi;
}

template <Scalar T>
Joint<T> sample_hyp_joint(const Scenario<T>& s) {
  const auto plan = plan_enumeration(s, 1, /*force_ordered=*/true);
  std::vector<std::string> sample_labels;
  std::vector<HypLaw<T>> laws;
  std::vector<HypCode> seen;
  for_each_sample(s, plan, [&](Sample sample, const T& w) {
    std::string label = "(";
    for (std::size_t i = 0; i < sample.size(); ++i) {
      label += (i ? "," : "") +
               s.learner.domain.symbol(static_cast<std::size_t>(sample[i]));
    }
    sample_labels.push_back(label + ")");
    auto law = s.learner.law(sample);
    for (auto& [h, p] : law) {
      seen.push_back(h);
      p *= w;
    }
    laws.push_back(std::move(law));
  });
  const auto codes = axis_codes(s.learner.hypotheses, std::move(seen),
                                "learner '" + s.learner.name + "'");
  std::map<HypCode, std::size_t> index;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    index[codes[i]] = i;
  }
  std::vector<T> w(laws.size() * codes.size(), ScalarOps<T>::zero());
  for (std::size_t i = 0; i < laws.size(); ++i) {
    for (const auto& [h, p] : laws[i]) {
      w[i * codes.size() + index.at(h)] += p;
    }
  }
  return Joint<T>({Alphabet("S", std::move(sample_labels)),
                   code_alphabet("H", codes, s.learner.label)},
                  std::move(w));
}

template <Scalar T>
StabilitySearch<T> stability_search(const LearnerKernel<T>& learner, int m,
                                    const std::vector<Dist<T>>& family,
                                    std::uint64_t budget) {
  if (family.empty()) {
    throw DomainError("stability_search: empty distribution family");
  }
  StabilitySearch<T> out{{}, ScalarOps<T>::zero(), 0};
  for (std::size_t i = 0; i < family.size(); ++i) {
    Scenario<T> s{.id = learner.name + "/family[" + std::to_string(i) + "]",
                  .learner = learner,
                  .data = family[i],
                  .m = m,
                  .budget = budget};
    T j = variational_info(exact_trn_hyp_joint(s).joint);
    if (i == 0 || j > out.sup_info) {
      out.sup_info = j;
      out.argmax = i;
    }
    out.per_dist_info.push_back(std::move(j));
  }
  return out;
}

template <Scalar T>
std::vector<Dist<T>> simplex_grid(const Alphabet& domain, int resolution) {
  if (resolution < 1) {
    throw DomainError("simplex_grid: resolution must be >= 1");
  }
  const std::size_t n = domain.size();
  std::vector<Dist<T>> out;
  std::vector<long> parts(n, 0);
  // Compositions of `resolution` into n nonnegative parts.
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
    if (i + 1 == n) {
      parts[i] = left;
      std::vector<T> w;
      for (auto c : parts) {
        w.push_back(ScalarOps<T>::ratio(c, resolution));
      }
      out.emplace_back(domain, std::move(w));
      return;
    }
    for (long c = left; c >= 0; --c) {
      parts[i] = c;
      rec(i + 1, left - c);
    }
  };
  rec(0, resolution);
  return out;
}

#define GENAUDIT_INSTANTIATE_LEARNERS(T)                                        \
  template LearnerKernel<T> constant_learner(const Alphabet&);                  \
  template LearnerKernel<T> release_sample(const Alphabet&);                    \
  template LearnerKernel<T> first_example(const Alphabet&);                     \
  template LearnerKernel<T> subsample_release(const Alphabet&, int, T);         \
  template LearnerKernel<T> randomized_response_dp(double);                     \
  template LearnerKernel<T> erm_finite(const Alphabet&, const Alphabet&,        \
                                       std::vector<T>);                         \
  template LearnerKernel<T> prop1_counterexample(std::size_t);                  \
  template Companion<T> constant_companion();                                   \
  template Companion<T> duplicate_companion(const LearnerKernel<T>&);           \
  template TrnHypJoint<T> exact_trn_hyp_joint(const Scenario<T>&,               \
                                              const std::optional<Companion<T>>&); \
  template double sample_hyp_mutual_info(const Scenario<T>&);                   \
  template Joint<T> sample_hyp_joint(const Scenario<T>&);                       \
  template StabilitySearch<T> stability_search(                                 \
      const LearnerKernel<T>&, int, const std::vector<Dist<T>>&, std::uint64_t); \
  template std::vector<Dist<T>> simplex_grid(const Alphabet&, int);

GENAUDIT_INSTANTIATE_LEARNERS(double)
GENAUDIT_INSTANTIATE_LEARNERS(Rational)

}  // namespace genaudit
