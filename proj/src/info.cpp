#include "genaudit/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "genaudit/errors.hpp"

namespace genaudit {

namespace {

template <Scalar T>
T abs_of(const T& x) {
  return ScalarOps<T>::abs(x);
}

std::string group_name(const std::vector<std::string>& group) {
  if (group.size() == 1) {
    return group.front();
  }
  std::string name = "(";
  for (std::size_t i = 0; i < group.size(); ++i) {
    name += (i ? "," : "") + group[i];
  }
  return name + ")";
}

// Marginalizes onto the concatenated groups and merges each group into one
// axis, yielding a joint whose rank equals the number of groups.
template <Scalar T>
Joint<T> grouped(const Joint<T>& j,
                 const std::vector<std::vector<std::string>>& groups) {
  std::vector<std::string> order;
  for (const auto& g : groups) {
    if (g.empty()) {
      throw DomainError("empty axis group");
    }
    order.insert(order.end(), g.begin(), g.end());
  }
  Joint<T> out = marginal(j, order);
  for (const auto& g : groups) {
    if (g.size() > 1) {
      out = merge_axes(out, g, group_name(g));
    }
  }
  return out;
}

}  // namespace

template <Scalar T>
T variational_info(const Joint<T>& j) {
  if (j.rank() != 2) {
    throw DomainError("variational_info needs exactly two axes, got " +
                      std::to_string(j.rank()));
  }
  const std::size_t nx = j.axes()[0].size();
  const std::size_t ny = j.axes()[1].size();
  const auto& w = j.weights();
  std::vector<T> px(nx, ScalarOps<T>::zero());
  std::vector<T> py(ny, ScalarOps<T>::zero());
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      px[x] += w[x * ny + y];
      py[y] += w[x * ny + y];
    }
  }
  T sum = ScalarOps<T>::zero();
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      T d = w[x * ny + y] - px[x] * py[y];
      sum += abs_of(d);
    }
  }
  return sum / 2;
}

template <Scalar T>
T variational_info(const Joint<T>& j, const std::vector<std::string>& x,
                   const std::vector<std::string>& y) {
  return variational_info(grouped(j, {x, y}));
}

template <Scalar T>
T mutual_stability(const Joint<T>& j) {
  return ScalarOps<T>::one() - variational_info(j);
}

template <Scalar T>
T conditional_variational_info(const Joint<T>& j, std::string_view given_axis) {
  if (j.rank() != 3) {
    throw DomainError("conditional_variational_info needs exactly three axes, got " +
                      std::to_string(j.rank()));
  }
  const auto g = j.axis_index(given_axis);
  std::vector<std::string> order{std::string(given_axis)};
  for (std::size_t k = 0; k < 3; ++k) {
    if (k != g) {
      order.push_back(j.axes()[k].name());
    }
  }
  // Layout (C, A, B): each C slice is one contiguous block.
  const Joint<T> p = marginal(j, order);
  const std::size_t nc = p.axes()[0].size();
  const std::size_t na = p.axes()[1].size();
  const std::size_t nb = p.axes()[2].size();
  const auto& w = p.weights();

  T total = ScalarOps<T>::zero();
  std::vector<T> pa(na);
  std::vector<T> pb(nb);
  for (std::size_t c = 0; c < nc; ++c) {
    const std::size_t base = c * na * nb;
    T pc = ScalarOps<T>::zero();
    std::fill(pa.begin(), pa.end(), ScalarOps<T>::zero());
    std::fill(pb.begin(), pb.end(), ScalarOps<T>::zero());
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < nb; ++b) {
        const T& v = w[base + a * nb + b];
        pa[a] += v;
        pb[b] += v;
        pc += v;
      }
    }
    if (pc == ScalarOps<T>::zero()) {
      continue;
    }
    // P(c) * TV(P(A,B|c), P(A|c)P(B|c)) = 1/2 sum |P(a,b,c) - P(a,c)P(b,c)/P(c)|
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < nb; ++b) {
        T d = w[base + a * nb + b] - pa[a] * pb[b] / pc;
        total += abs_of(d);
      }
    }
  }
  return total / 2;
}

template <Scalar T>
T conditional_variational_info(const Joint<T>& j,
                               const std::vector<std::string>& x,
                               const std::vector<std::string>& y,
                               const std::vector<std::string>& given) {
  const Joint<T> g = grouped(j, {x, y, given});
  return conditional_variational_info(g, g.axes()[2].name());
}

template <Scalar T>
ChainDecomposition<T> chain_decompose(const Joint<T>& j, double tolerance) {
  if (j.rank() < 2) {
    throw DomainError("chain_decompose needs Z and at least one hypothesis axis");
  }
  const auto names = j.axis_names();
  const std::vector<std::string> z{names[0]};
  const std::vector<std::string> hyps(names.begin() + 1, names.end());

  ChainDecomposition<T> out{variational_info(j, z, hyps), {}, {}};
  T sum = ScalarOps<T>::zero();
  for (std::size_t t = 0; t < hyps.size(); ++t) {
    T term = t == 0
                 ? variational_info(j, z, {hyps[0]})
                 : conditional_variational_info(
                       j, z, {hyps[t]},
                       std::vector<std::string>(hyps.begin(), hyps.begin() + t));
    sum += term;
    out.terms.push_back(std::move(term));
  }
  out.slack = sum - out.total;
  out.holds = le_tol<T>(ScalarOps<T>::zero(), out.slack, tolerance);
  return out;
}

template <Scalar T>
Prop2Check<T> prop2_gap_check(const Joint<T>& j, double tolerance) {
  if (j.rank() != 3) {
    throw DomainError("prop2_gap_check needs exactly three axes");
  }
  const auto n = j.axis_names();
  Prop2Check<T> out{
      variational_info(j, {n[0]}, {n[1], n[2]}),
      variational_info(j, {n[0]}, {n[1]}),
      conditional_variational_info(j, {n[0]}, {n[2]}, {n[1]}),
      {},
      {},
  };
  T d1 = out.info_a_bc - out.info_ac_given_b;
  T d2 = out.info_a_bc - out.info_ab;
  out.gap1 = abs_of(d1);
  out.gap2 = abs_of(d2);
  out.holds1 = le_tol(out.gap1, out.info_ab, tolerance);
  out.holds2 = le_tol(out.gap2, out.info_ac_given_b, tolerance);
  return out;
}

template <Scalar T>
void Channel<T>::check(const NumericMode& mode) const {
  if (rows.size() != in.size() * out.size()) {
    throw DomainError("channel " + in.name() + "->" + out.name() +
                      " has the wrong number of entries");
  }
  for (std::size_t i = 0; i < in.size(); ++i) {
    std::span<const T> row(rows.data() + i * out.size(), out.size());
    auto v = validate<T>(row, mode);
    if (!v.ok) {
      throw DomainError("channel " + in.name() + "->" + out.name() + " row '" +
                        in.symbol(i) + "' is not stochastic: " +
                        v.diagnostics.front());
    }
  }
}

template <Scalar T>
Joint<T> markov_chain_joint(const Dist<T>& p_a, const Channel<T>& a_to_b,
                            const Channel<T>& b_to_c) {
  if (!(p_a.alphabet() == a_to_b.in) || !(a_to_b.out == b_to_c.in)) {
    throw DomainError("markov_chain_joint: alphabets do not chain");
  }
  const std::size_t na = a_to_b.in.size();
  const std::size_t nb = a_to_b.out.size();
  const std::size_t nc = b_to_c.out.size();
  std::vector<T> w;
  w.reserve(na * nb * nc);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      T ab = p_a[a] * a_to_b.rows[a * nb + b];
      for (std::size_t c = 0; c < nc; ++c) {
        w.push_back(ab * b_to_c.rows[b * nc + c]);
      }
    }
  }
  return Joint<T>({a_to_b.in, a_to_b.out, b_to_c.out}, std::move(w));
}

template <Scalar T>
DpiCheck<T> dpi_check(const Channel<T>& a_to_b, const Channel<T>& b_to_c,
                      const Dist<T>& p_a, const NumericMode& mode) {
  a_to_b.check(mode);
  b_to_c.check(mode);
  const auto j = markov_chain_joint(p_a, a_to_b, b_to_c);
  const auto n = j.axis_names();
  DpiCheck<T> out{
      variational_info(j, {n[0]}, {n[1]}),
      variational_info(j, {n[0]}, {n[2]}),
      variational_info(j, {n[0]}, {n[1], n[2]}),
  };
  out.inequality = le_tol(out.info_ac, out.info_ab, mode.tolerance);
  out.equality = eq_tol(out.info_a_bc, out.info_ab, mode.tolerance);
  return out;
}

template <Scalar T>
double shannon_mutual_info(const Joint<T>& j) {
  if (j.rank() != 2) {
    throw DomainError("shannon_mutual_info needs exactly two axes");
  }
  const std::size_t nx = j.axes()[0].size();
  const std::size_t ny = j.axes()[1].size();
  const auto& w = j.weights();
  std::vector<T> px(nx, ScalarOps<T>::zero());
  std::vector<T> py(ny, ScalarOps<T>::zero());
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      px[x] += w[x * ny + y];
      py[y] += w[x * ny + y];
    }
  }
  double mi = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const T& p = w[x * ny + y];
      if (p == ScalarOps<T>::zero()) {
        continue;
      }
      T ratio = p / (px[x] * py[y]);
      mi += to_double(p) * std::log(to_double(ratio));
    }
  }
  return mi;
}

namespace {

std::vector<Alphabet> letter_axes(const std::vector<std::size_t>& shape) {
  if (shape.empty() || shape.size() > 26) {
    throw DomainError("random joints need between 1 and 26 axes");
  }
  std::vector<Alphabet> axes;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    axes.push_back(Alphabet::range(std::string(1, static_cast<char>('A' + k)),
                                   shape[k]));
  }
  return axes;
}

std::vector<double> dirichlet_ones(std::size_t n, RandomStream& rng) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) {
    // 1 - u lies in (0, 1], so the log is finite.
    x = -std::log(1.0 - rng.uniform());
    sum += x;
  }
  for (auto& x : w) {
    x /= sum;
  }
  return w;
}

std::size_t cells(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto d : shape) {
    n *= d;
  }
  return n;
}

}  // namespace

Joint<double> random_joint(const std::vector<std::size_t>& shape,
                           RandomStream& rng) {
  auto axes = letter_axes(shape);
  return Joint<double>(std::move(axes), dirichlet_ones(cells(shape), rng));
}

Joint<Rational> random_joint_exact(const std::vector<std::size_t>& shape,
                                   RandomStream& rng) {
  auto axes = letter_axes(shape);
  std::vector<Rational> w(cells(shape));
  Rational sum = 0;
  for (auto& x : w) {
    x = static_cast<long>(1 + rng.below(1000));
    sum += x;
  }
  for (auto& x : w) {
    x /= sum;
  }
  return Joint<Rational>(std::move(axes), std::move(w));
}

Channel<double> random_channel(const Alphabet& in, const Alphabet& out,
                               RandomStream& rng) {
  Channel<double> c{in, out, {}};
  for (std::size_t i = 0; i < in.size(); ++i) {
    auto row = dirichlet_ones(out.size(), rng);
    c.rows.insert(c.rows.end(), row.begin(), row.end());
  }
  return c;
}

std::size_t FuzzViolations::total() const {
  return chain_rule + gap_ab + gap_ac_given_b + cannot_hurt + triangle + dpi +
         markov_equality + pinsker;
}

FuzzSummary chain_fuzz(std::size_t trials, std::size_t max_dim,
                       std::uint64_t seed, double tolerance) {
  if (max_dim < 2) {
    throw DomainError("chain_fuzz: max_dim must be at least 2");
  }
  FuzzSummary out;
  out.trials = trials;
  out.min_chain_slack = std::numeric_limits<double>::infinity();
  auto& v = out.violations;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream rng(seed, trial);
    auto dim = [&] { return 2 + rng.below(max_dim - 1); };
    const auto j = random_joint({dim(), dim(), dim()}, rng);

    const auto chain = chain_decompose(j, tolerance);
    out.min_chain_slack = std::min(out.min_chain_slack, chain.slack);
    v.chain_rule += !chain.holds;

    const auto gaps = prop2_gap_check(j, tolerance);
    v.gap_ab += !gaps.holds1;
    v.gap_ac_given_b += !gaps.holds2;

    const double xy = variational_info(j, {"A"}, {"B"});
    const double x_yz = variational_info(j, {"A"}, {"B", "C"});
    const double xz = variational_info(j, {"A"}, {"C"});
    const double xy_given_z = conditional_variational_info(j, {"A"}, {"B"}, {"C"});
    v.cannot_hurt += !le_tol(xy, x_yz, tolerance);
    v.triangle += !le_tol(xy, xz + xy_given_z, tolerance);

    const double mi = shannon_mutual_info(marginal(j, {"A", "B"}));
    v.pinsker += !le_tol(xy, std::sqrt(std::max(mi, 0.0) / 2.0), tolerance);

    const auto a = Alphabet::range("A", dim());
    const auto b = Alphabet::range("B", dim());
    const auto c = Alphabet::range("C", dim());
    const auto pa = random_joint({a.size()}, rng).as_dist();
    const auto ab = random_channel(a, b, rng);
    const auto bc = random_channel(b, c, rng);
    const auto dpi = dpi_check(ab, bc, pa, NumericMode::float64(tolerance));
    v.dpi += !dpi.inequality;
    v.markov_equality += !dpi.equality;
  }
  return out;
}

#define GENAUDIT_INSTANTIATE_INFO(T)                                             \
  template T variational_info(const Joint<T>&);                                  \
  template T variational_info(const Joint<T>&, const std::vector<std::string>&,  \
                              const std::vector<std::string>&);                  \
  template T mutual_stability(const Joint<T>&);                                  \
  template T conditional_variational_info(const Joint<T>&, std::string_view);    \
  template T conditional_variational_info(                                       \
      const Joint<T>&, const std::vector<std::string>&,                          \
      const std::vector<std::string>&, const std::vector<std::string>&);         \
  template ChainDecomposition<T> chain_decompose(const Joint<T>&, double);       \
  template Prop2Check<T> prop2_gap_check(const Joint<T>&, double);               \
  template struct Channel<T>;                                                    \
  template Joint<T> markov_chain_joint(const Dist<T>&, const Channel<T>&,        \
                                       const Channel<T>&);                       \
  template DpiCheck<T> dpi_check(const Channel<T>&, const Channel<T>&,           \
                                 const Dist<T>&, const NumericMode&);            \
  template double shannon_mutual_info(const Joint<T>&);

GENAUDIT_INSTANTIATE_INFO(double)
GENAUDIT_INSTANTIATE_INFO(Rational)

}  // namespace genaudit
