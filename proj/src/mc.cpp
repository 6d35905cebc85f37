#include "genaudit/mc.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "genaudit/errors.hpp"
#include "genaudit/losses.hpp"

namespace genaudit {

AliasTable::AliasTable(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) {
    throw DomainError("alias table over an empty distribution");
  }
  uniform_ = std::all_of(weights.begin(), weights.end(),
                         [&](double w) { return w == weights.front(); });
  prob_.assign(n, 1.0);
  alias_.resize(n);
  if (uniform_) {
    return;
  }
  double total = 0.0;
  for (double w : weights) {
    total += w;
  }
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
    alias_[i] = static_cast<std::int32_t>(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = static_cast<std::int32_t>(l);
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::size_t i : small) prob_[i] = 1.0;
  for (std::size_t i : large) prob_[i] = 1.0;
}

std::int32_t AliasTable::operator()(RandomStream& rng) const {
  const auto i = static_cast<std::size_t>(rng.below(prob_.size()));
  if (uniform_) {
    return static_cast<std::int32_t>(i);
  }
  return rng.uniform() < prob_[i] ? static_cast<std::int32_t>(i) : alias_[i];
}

RunSample draw_run(const Scenario<double>& s, const AliasTable& data,
                   std::uint64_t seed, std::uint64_t run) {
  RandomStream rng(seed, run);
  RunSample r;
  r.seed = seed;
  r.run = run;
  r.sample.resize(static_cast<std::size_t>(s.m));
  for (auto& z : r.sample) {
    z = data(rng);
  }
  r.hypothesis = s.learner.sample_hypothesis(Sample(r.sample), rng);
  r.trn_index = static_cast<int>(rng.below(static_cast<std::uint64_t>(s.m)));
  return r;
}

std::vector<RunSample> draw_runs(const Scenario<double>& s, std::uint64_t n_runs,
                                 std::uint64_t seed) {
  s.check();
  if (n_runs < 1) {
    throw DomainError("n_runs must be at least 1");
  }
  const AliasTable data(s.data.weights());
  std::vector<RunSample> out;
  out.reserve(n_runs);
  for (std::uint64_t i = 0; i < n_runs; ++i) {
    out.push_back(draw_run(s, data, seed, i));
  }
  return out;
}

Json Estimate::to_json() const {
  return Json{{"point", point},   {"ci_low", ci_low}, {"ci_high", ci_high},
              {"se", se},         {"n_runs", n_runs}, {"method", method},
              {"warnings", warnings}};
}

double normal_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("confidence level must be in (0, 1)");
  }
  // Solve erfc(z / sqrt 2) = 1 - level by bisection.
  const double target = 1.0 - level;
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(mid / std::sqrt(2.0)) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// Runs reduced to cell indices of the empirical (Z_trn, H) table.
struct Cells {
  std::vector<std::uint32_t> run_cell, cell_z, cell_h;
  std::size_t nz = 0, nh = 0;
};

Cells index_cells(const std::vector<RunSample>& runs) {
  std::unordered_map<HypCode, std::uint32_t, HypCodeHash> hyp;
  std::unordered_map<std::int32_t, std::uint32_t> zs;
  std::unordered_map<std::uint64_t, std::uint32_t> cells;
  Cells c;
  c.run_cell.reserve(runs.size());
  for (const auto& r : runs) {
    const auto z = zs.try_emplace(r.z_trn(), static_cast<std::uint32_t>(zs.size())).first->second;
    const auto h = hyp.try_emplace(r.hypothesis, static_cast<std::uint32_t>(hyp.size())).first->second;
    const std::uint64_t key = (static_cast<std::uint64_t>(z) << 32) | h;
    auto [it, fresh] = cells.try_emplace(key, static_cast<std::uint32_t>(cells.size()));
    if (fresh) {
      c.cell_z.push_back(z);
      c.cell_h.push_back(h);
    }
    c.run_cell.push_back(it->second);
  }
  c.nz = zs.size();
  c.nh = hyp.size();
  return c;
}

// 1/2 sum over all cells |a - b| = 1/2 (1 + sum over observed (|a - b| - b)).
double plug_in(const Cells& c, const std::vector<std::uint32_t>& cell_count) {
  std::vector<double> z(c.nz, 0.0), h(c.nh, 0.0);
  double n = 0.0;
  for (std::size_t k = 0; k < cell_count.size(); ++k) {
    z[c.cell_z[k]] += cell_count[k];
    h[c.cell_h[k]] += cell_count[k];
    n += cell_count[k];
  }
  double acc = 1.0;
  for (std::size_t k = 0; k < cell_count.size(); ++k) {
    if (cell_count[k] == 0) {
      continue;
    }
    const double a = cell_count[k] / n;
    const double b = (z[c.cell_z[k]] / n) * (h[c.cell_h[k]] / n);
    acc += std::fabs(a - b) - b;
  }
  return std::clamp(0.5 * acc, 0.0, 1.0);
}

}  // namespace

Estimate estimate_variational_info(const std::vector<RunSample>& runs,
                                   const BootstrapOptions& opts) {
  if (runs.empty()) {
    throw DomainError("no runs to estimate from");
  }
  if (opts.resamples < 2) {
    throw DomainError("bootstrap needs at least 2 resamples");
  }
  const Cells c = index_cells(runs);
  const std::size_t ncells = c.cell_z.size();
  std::vector<std::uint32_t> count(ncells, 0);
  for (auto k : c.run_cell) {
    ++count[k];
  }
  Estimate e;
  e.method = "plug-in";
  e.n_runs = runs.size();
  e.point = plug_in(c, count);

  double sum = 0.0, sum2 = 0.0;
  for (int b = 0; b < opts.resamples; ++b) {
    RandomStream rng(opts.seed, (1ull << 63) + static_cast<std::uint64_t>(b));
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      ++count[c.run_cell[rng.below(runs.size())]];
    }
    const double j = plug_in(c, count);
    sum += j;
    sum2 += j * j;
  }
  const double r = opts.resamples;
  const double mean = sum / r;
  e.se = std::sqrt(std::max(0.0, (sum2 - r * mean * mean) / (r - 1.0)));
  const double z = normal_quantile(opts.level);
  e.ci_low = std::max(0.0, e.point - z * e.se);
  e.ci_high = std::min(1.0, e.point + z * e.se);
  e.warnings.push_back("plug-in estimate is biased upward");
  if (static_cast<double>(c.nh) > static_cast<double>(runs.size()) / 10.0) {
    e.warnings.push_back("coverage: " + std::to_string(c.nh) +
                         " distinct hypotheses in " + std::to_string(runs.size()) +
                         " runs; the plug-in estimate is dominated by unseen cells");
  }
  return e;
}

std::vector<double> run_deviations(const std::vector<RunSample>& runs,
                                   const ParametricLoss<double>& loss,
                                   const Dist<double>& data) {
  std::unordered_map<HypCode, double, HypCodeHash> truth;
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& r : runs) {
    auto it = truth.find(r.hypothesis);
    if (it == truth.end()) {
      it = truth.emplace(r.hypothesis, true_risk(loss, r.hypothesis, data)).first;
    }
    out.push_back(empirical_risk(loss, r.hypothesis, Sample(r.sample)) - it->second);
  }
  return out;
}

std::vector<Estimate> estimate_tail(const std::vector<double>& deviations,
                                    const std::vector<double>& t_grid,
                                    double level, double tol) {
  if (deviations.empty()) {
    throw DomainError("no runs to estimate from");
  }
  const double z = normal_quantile(level);
  const double n = static_cast<double>(deviations.size());
  std::vector<Estimate> out;
  for (double t : t_grid) {
    double hits = 0.0;
    for (double g : deviations) {
      if (std::fabs(g) >= t - tol) {
        hits += 1.0;
      }
    }
    const double p = hits / n;
    Estimate e;
    e.method = "tail-frequency";
    e.n_runs = deviations.size();
    e.point = p;
    e.se = std::sqrt(p * (1.0 - p) / n);
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half =
        z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    e.ci_low = std::clamp(centre - half, 0.0, p);
    e.ci_high = std::clamp(centre + half, p, 1.0);
    out.push_back(std::move(e));
  }
  return out;
}

Estimate estimate_gen_risk(const std::vector<double>& deviations, double level) {
  if (deviations.size() < 2) {
    throw DomainError("need at least 2 runs");
  }
  const double n = static_cast<double>(deviations.size());
  double sum = 0.0, sum2 = 0.0;
  for (double g : deviations) {
    sum += g;
    sum2 += g * g;
  }
  Estimate e;
  e.method = "sample-mean";
  e.n_runs = deviations.size();
  e.point = sum / n;
  e.se = std::sqrt(std::max(0.0, (sum2 - n * e.point * e.point) / (n - 1.0)) / n);
  const double z = normal_quantile(level);
  e.ci_low = e.point - z * e.se;
  e.ci_high = e.point + z * e.se;
  return e;
}

}  // namespace genaudit
