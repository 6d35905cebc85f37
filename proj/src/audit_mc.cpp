#include <algorithm>
#include <cmath>

#include "audit_detail.hpp"
#include "genaudit/errors.hpp"
#include "genaudit/losses.hpp"
#include "genaudit/mc.hpp"

namespace genaudit {

using detail::finalize;
using detail::float_check;

AuditReport audit_p1_mc(const Scenario<double>& s, const std::vector<RunSample>& runs) {
  if (s.learner.kind != HypKind::tagged_sample) {
    throw DomainError("P1 needs the counterexample learner");
  }
  AuditReport r;
  r.scenario_id = s.id;
  r.theorem = "P1";
  r.method = "monte-carlo";
  r.tolerance = s.tolerance;
  const auto paired = run_deviations(runs, prop1_paired_loss<double>(), s.data);
  const auto flipped = run_deviations(runs, prop1_flipped_loss<double>(), s.data);
  const double pmax = *std::max_element(s.data.weights().begin(), s.data.weights().end());
  const double floor = 0.5 * (1.0 - s.m * pmax);
  const auto rp = estimate_gen_risk(paired);
  const auto rf = estimate_gen_risk(flipped);
  const auto tail = estimate_tail(paired, {floor}, 0.95, s.tolerance).front();
  r.computed["n_runs"] = runs.size();
  r.computed["gen_risk:prop1_paired"] = rp.to_json();
  r.computed["gen_risk:prop1_flipped"] = rf.to_json();
  r.computed["deviation_floor"] = floor;
  r.computed["prob_deviation_above_floor"] = tail.to_json();
  r.notes.push_back("collision correction: the sample covers at most m max p = " +
                    ScalarOps<double>::str(s.m * pmax) + " of the data mass");
  finalize(r, {float_check("|R_gen(paired)| within 3 SE of 0", std::fabs(rp.point), 3 * rp.se),
               float_check("P{|G| >= floor} = 1", 1.0 - tail.point, 3 * tail.se),
               float_check("R_gen(flipped) <= -floor", rf.point, -floor + 3 * rf.se)});
  return r;
}

AuditReport audit_t4_mc(const Scenario<double>& s, const std::vector<RunSample>& runs,
                        const std::vector<double>& t_grid, const BoundConstants& c,
                        const BootstrapOptions& opts) {
  if (!s.loss) {
    throw DomainError("scenario '" + s.id + "' has no loss");
  }
  if (t_grid.empty()) {
    throw DomainError("t grid is empty");
  }
  AuditReport r;
  r.scenario_id = s.id;
  r.theorem = "T4";
  r.method = "monte-carlo";
  r.tolerance = s.tolerance;
  const auto j = estimate_variational_info(runs, opts);
  const auto tails = estimate_tail(run_deviations(runs, *s.loss, s.data), t_grid,
                                   opts.level, s.tolerance);
  r.computed["info"] = j.to_json();
  r.notes.insert(r.notes.end(), j.warnings.begin(), j.warnings.end());
  std::vector<detail::Check> checks;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    r.series.push_back({t, tails[i].point, t4_bound(t, j.point, s.m, c), "stated"});
    checks.push_back(float_check("tail at t=" + ScalarOps<double>::str(t), tails[i].ci_low,
                                 t4_bound(t, j.ci_high, s.m, c)));
  }
  finalize(r, checks);
  return r;
}

}  // namespace genaudit
