#pragma once

// Monte Carlo fallback: i.i.d. (S_m, H, Z_trn) runs keyed by (seed, run
// index), a plug-in estimate of J(Z_trn;H) with bootstrap intervals, and
// frequency estimates of deviation tails.

#include <cstdint>
#include <string>
#include <vector>

#include "genaudit/audit.hpp"
#include "genaudit/model.hpp"

namespace genaudit {

struct RunSample {
  std::vector<std::int32_t> sample;
  HypCode hypothesis;
  int trn_index = 0;
  // Reproducibility record: RandomStream(seed, run) regenerates this run.
  std::uint64_t seed = 0;
  std::uint64_t run = 0;

  std::int32_t z_trn() const { return sample[static_cast<std::size_t>(trn_index)]; }
};

// Draws from a finite distribution in O(1) per draw (Walker/Vose alias).
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& weights);
  std::int32_t operator()(RandomStream& rng) const;
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::int32_t> alias_;
  bool uniform_ = false;
};

RunSample draw_run(const Scenario<double>& s, const AliasTable& data,
                   std::uint64_t seed, std::uint64_t run);

std::vector<RunSample> draw_runs(const Scenario<double>& s, std::uint64_t n_runs,
                                 std::uint64_t seed);

struct Estimate {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double se = 0.0;
  std::uint64_t n_runs = 0;
  std::string method;
  std::vector<std::string> warnings;

  Json to_json() const;
};

struct BootstrapOptions {
  int resamples = 500;
  double level = 0.95;
  std::uint64_t seed = 0;
};

// Plug-in TV between the empirical (Z_trn, H) joint and the product of its
// marginals. The interval is point +- z * (bootstrap standard error), clipped
// to [0, 1]; the plug-in is biased upward and the report says so.
Estimate estimate_variational_info(const std::vector<RunSample>& runs,
                                   const BootstrapOptions& opts = {});

// G = R_emp(H; S) - R_true(H) for each run.
std::vector<double> run_deviations(const std::vector<RunSample>& runs,
                                   const ParametricLoss<double>& loss,
                                   const Dist<double>& data);

// Frequency of |G| >= t with Wilson intervals; se is the binomial one.
std::vector<Estimate> estimate_tail(const std::vector<double>& deviations,
                                    const std::vector<double>& t_grid,
                                    double level = 0.95, double tol = 1e-12);

// Mean of G with a normal interval.
Estimate estimate_gen_risk(const std::vector<double>& deviations,
                           double level = 0.95);

// Counterexample audit from runs: the paired-loss risk is 0 within 3 SE,
// every run deviates by at least (1 - m max p) / 2, and the flipped-loss risk
// sits below minus that floor.
AuditReport audit_p1_mc(const Scenario<double>& s, const std::vector<RunSample>& runs);

// Concentration audit from runs, conservative on both sides: the lower
// Wilson limit of each tail against the bound at the upper limit of J.
AuditReport audit_t4_mc(const Scenario<double>& s, const std::vector<RunSample>& runs,
                        const std::vector<double>& t_grid,
                        const BoundConstants& c = {},
                        const BootstrapOptions& opts = {});

// Two-sided standard normal quantile for a central `level` interval.
double normal_quantile(double level);

}  // namespace genaudit
