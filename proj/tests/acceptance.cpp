// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "genaudit/audit.hpp"
#include "genaudit/enumerate.hpp"
#include "genaudit/errors.hpp"
#include "genaudit/harness.hpp"
#include "genaudit/info.hpp"
#include "genaudit/learners.hpp"
#include "genaudit/losses.hpp"
#include "genaudit/mc.hpp"

using namespace genaudit;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances.
constexpr double kAc1Slop = 1e-9;
constexpr double kAc1Runtime = 10.0;
constexpr double kAc2PairedWindow = 0.02;
constexpr double kAc2TailThreshold = 0.49;
constexpr double kAc2TailMin = 0.98;
constexpr double kAc2FlippedMin = 0.45;
constexpr double kAc2Runtime = 60.0;
constexpr std::size_t kAc3MaxCells = 12;
constexpr double kAc3Runtime = 120.0;
constexpr std::size_t kAc4Trials = 1000;
constexpr std::size_t kAc4MaxDim = 4;
constexpr double kAc4Tolerance = 1e-12;
constexpr double kAc4Runtime = 30.0;
constexpr double kAc5EpsilonSlop = 1e-9;
constexpr double kAc5Runtime = 10.0;
constexpr double kAc6SpotRelative = 5e-7;  // six significant figures
constexpr int kAc9Replicates = 20;
constexpr double kAc9Coverage = 0.95;
constexpr double kAc9Sigmas = 3.0;
constexpr int kAc9Resamples = 200;
constexpr double kAc10Runtime = 300.0;
constexpr double kAc10Mutation = 0.9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const AuditReport& report_for(const ScenarioResult& r, const std::string& theorem) {
  for (const auto& a : r.reports) {
    if (a.theorem == theorem) {
      return a;
    }
  }
  throw std::runtime_error("no " + theorem + " report for " + r.name);
}

bool enumerable(const ScenarioConfig& c) {
  if (c.kind != "scenario") {
    return false;
  }
  try {
    plan_enumeration(build_scenario<double>(c));
    return true;
  } catch (const BudgetExceeded&) {
    return false;
  }
}

ScenarioConfig with_audits(ScenarioConfig c, std::vector<std::string> audits,
                           Json params = Json::object()) {
  c.audits = std::move(audits);
  c.audit_params = std::move(params);
  c.mode = "exact";
  return c;
}

Outcome ac1() {
  const auto t0 = Clock::now();
  const auto& cfg = corpus_scenario("t5-tightness");
  const auto r = run_scenario(with_audits(cfg, {"T5"}, cfg.audit_params));
  const double secs = seconds_since(t0);
  const auto& t5 = report_for(r, "T5");
  const double atom = t5.computed.at("atom_probability").get<double>();
  const double info = t5.computed.at("info").get<double>();
  const double t = 0.5, delta = 0.3;
  const double allowance = static_cast<double>(cfg.m * cfg.m) / 256.0 + kAc1Slop;
  const double d_atom = std::fabs(atom - delta), d_info = std::fabs(info - t * delta);
  std::ostringstream s;
  s << "P{|G|=t}=" << t5.exact.value("atom_probability", "?") << " (|.-delta|="
    << fmt("%.6g", d_atom) << "), J=" << t5.exact.value("info", "?") << " (|J-t delta|="
    << fmt("%.6g", d_info) << "), allowance m^2/n=" << fmt("%.6g", allowance - kAc1Slop)
    << ", " << fmt("%.2f", secs) << " s";
  return {d_atom <= allowance && d_info <= allowance && t5.verdict == Verdict::pass &&
              secs < kAc1Runtime,
          s.str()};
}

Outcome ac2() {
  const auto t0 = Clock::now();
  const auto& cfg = corpus_scenario("prop1-counterexample");
  const auto s = build_scenario<double>(cfg);
  const auto runs = draw_runs(s, cfg.n_runs, cfg.seed);
  const auto paired = run_deviations(runs, prop1_paired_loss<double>(), s.data);
  const auto flipped = run_deviations(runs, prop1_flipped_loss<double>(), s.data);
  const auto rp = estimate_gen_risk(paired);
  const auto rf = estimate_gen_risk(flipped);
  const auto tail = estimate_tail(paired, {kAc2TailThreshold}).front();
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "n=" << s.data.size() << " m=" << s.m << " runs=" << runs.size()
    << ": R_gen(paired)=" << fmt("%.5f", rp.point) << ", P{|G|>=0.49}=" << fmt("%.4f", tail.point)
    << ", R_gen(flipped)=" << fmt("%.5f", rf.point) << ", " << fmt("%.2f", secs) << " s";
  // The flipped loss has zero loss on the sample, so its R_gen is negative;
  // the criterion is on its magnitude.
  return {std::fabs(rp.point) <= kAc2PairedWindow && tail.point >= kAc2TailMin &&
              rf.point <= -kAc2FlippedMin && secs < kAc2Runtime,
          d.str()};
}

Outcome ac3() {
  const auto t0 = Clock::now();
  std::size_t checked = 0;
  std::vector<std::string> bad;
  for (const auto& cfg : builtin_corpus()) {
    if (!enumerable(cfg)) {
      continue;
    }
    const auto s = build_scenario<Rational>(cfg);
    const auto j = exact_trn_hyp_joint(s);
    const std::size_t nz = s.data.size(), nh = j.codes.size();
    if (nz * nh > kAc3MaxCells) {
      continue;
    }
    ++checked;
    // Every binary loss on Z x H, with R_gen computed by enumerating samples.
    std::vector<ParametricLoss<Rational>> losses;
    const std::size_t cells = nz * nh;
    for (std::uint64_t mask = 0; mask < (1ull << cells); ++mask) {
      std::vector<Rational> table(cells);
      for (std::size_t c = 0; c < cells; ++c) {
        table[c] = (mask >> c) & 1 ? 1 : 0;
      }
      losses.push_back(table_loss<Rational>("bin", nz, j.codes, std::move(table)));
    }
    const auto risks = expected_gen_risks(s, losses);
    Rational sup = 0;
    for (const auto& r : risks) {
      sup = std::max(sup, Rational(abs(r)));
    }
    const Rational info = variational_info(j.joint);
    const Rational worst = expected_gen_risk(s, worst_case_loss(j).loss);
    if (!(sup == info && worst == info)) {
      bad.push_back(cfg.name + " (sup " + sup.get_str() + ", L* " + worst.get_str() +
                    ", J " + info.get_str() + ")");
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << checked << " scenarios with |Z||H| <= 12 brute-forced exactly";
  for (const auto& b : bad) d << "; mismatch " << b;
  d << ", " << fmt("%.2f", secs) << " s";
  return {checked > 0 && bad.empty() && secs < kAc3Runtime, d.str()};
}

Outcome ac4() {
  const auto t0 = Clock::now();
  const auto f = chain_fuzz(kAc4Trials, kAc4MaxDim, corpus_scenario("chain-fuzz").seed, kAc4Tolerance);
  const double secs = seconds_since(t0);
  const auto& v = f.violations;
  std::ostringstream d;
  d << f.trials << " joints: violations chain=" << v.chain_rule << " gap_ab=" << v.gap_ab
    << " gap_ac|b=" << v.gap_ac_given_b << " cannot_hurt=" << v.cannot_hurt
    << " triangle=" << v.triangle << " dpi=" << v.dpi << ", min chain slack "
    << fmt("%.3g", f.min_chain_slack) << ", " << fmt("%.2f", secs) << " s";
  return {f.trials >= kAc4Trials && v.total() == 0 && secs < kAc4Runtime, d.str()};
}

Outcome ac5() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream d;
  for (const auto& cfg : builtin_corpus()) {
    if (cfg.kind != "scenario" || cfg.learner.at("name") != "randomized_response_dp") {
      continue;
    }
    auto c = with_audits(cfg, {"C1", "P4"});
    c.t_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const auto r = run_scenario(c);
    const auto& c1 = report_for(r, "C1");
    const auto& p4 = report_for(r, "P4");
    const double nominal = cfg.learner.at("params").at("epsilon").get<double>();
    const double eff = c1.computed.at("effective_epsilon").get<double>();
    bool row = c1.verdict == Verdict::pass && p4.verdict == Verdict::pass;
    if (cfg.m == 1) {
      row = row && std::fabs(eff - nominal) <= kAc5EpsilonSlop;
    }
    ok = ok && row;
    d << cfg.name << " eps_eff=" << fmt("%.12g", eff) << (row ? " ok" : " BAD") << "; ";
  }
  const double secs = seconds_since(t0);
  d << fmt("%.2f", secs) << " s";
  return {ok && secs < kAc5Runtime, d.str()};
}

Outcome ac6() {
  const double spot = t4_bound(0.1, 0.01, 100, {});
  const double oracle = 25.0 * (0.01 + std::sqrt(std::log(9.0) / 2500.0));
  bool ok = std::fabs(spot - oracle) <= kAc6SpotRelative * oracle;
  std::ostringstream d;
  d << "spot bound " << fmt("%.6g", spot) << " vs " << fmt("%.6g", oracle);
  std::size_t n = 0;
  for (const auto& cfg : builtin_corpus()) {
    if (!enumerable(cfg)) {
      continue;
    }
    const auto r = run_scenario(with_audits(cfg, {"T4", "P3"}));
    for (const auto& a : r.reports) {
      ++n;
      if (a.verdict != Verdict::pass) {
        ok = false;
        d << "; " << cfg.name << " " << a.theorem << " " << to_string(a.verdict);
      }
    }
  }
  d << "; " << n << " exact T4/P3 audits";
  return {ok, d.str()};
}

Outcome ac7() {
  bool ok = true;
  std::size_t n = 0;
  std::ostringstream d;
  for (const auto& cfg : builtin_corpus()) {
    if (cfg.kind != "scenario") {
      continue;
    }
    const std::string learner = cfg.learner.at("name");
    if (learner != "subsample_release" && learner != "erm_finite") {
      continue;
    }
    for (double t : {0.1, 0.25, 0.5}) {
      const Json params = {{"T3", {{"companion", "sign"}, {"t", t}}}};
      const auto r = run_scenario(with_audits(cfg, {"T3"}, params));
      const auto& a = report_for(r, "T3");
      ++n;
      if (a.verdict != Verdict::pass) {
        ok = false;
        d << cfg.name << " t=" << t << " " << to_string(a.verdict) << "; ";
      }
    }
  }
  d << n << " sign-companion audits on subsample and ERM scenarios";
  return {ok && n > 0, d.str()};
}

Outcome ac8() {
  auto cfg = corpus_scenario("erm-threshold");
  cfg.t_grid = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  const auto r = run_scenario(with_audits(cfg, {"ERM"}));
  const auto& a = report_for(r, "ERM");
  std::ostringstream d;
  d << "J=" << a.exact.value("info", "?") << ", min slack " << fmt("%.6g", a.slack)
    << " over " << a.series.size() << " grid points";
  return {a.verdict == Verdict::pass && a.series.size() == cfg.t_grid.size(), d.str()};
}

Outcome ac9() {
  bool ok = true;
  std::ostringstream d;
  for (const auto& cfg : builtin_corpus()) {
    if (!enumerable(cfg)) {
      continue;
    }
    const auto s = build_scenario<double>(cfg);
    if (!s.loss) {
      continue;
    }
    const double exact_j = variational_info(exact_trn_hyp_joint(s).joint);
    const auto law = deviation_law(s, *s.loss);
    std::vector<double> exact_tail;
    for (double t : cfg.t_grid) {
      exact_tail.push_back(law.tail(t, 1e-12));
    }
    int j_hits = 0, tail_hits = 0, tail_total = 0;
    for (int rep = 0; rep < kAc9Replicates; ++rep) {
      const std::uint64_t seed = cfg.seed * 1000 + static_cast<std::uint64_t>(rep);
      const auto runs = draw_runs(s, cfg.n_runs, seed);
      const auto e = estimate_variational_info(runs, {.resamples = kAc9Resamples, .seed = seed});
      j_hits += std::fabs(e.point - exact_j) <= kAc9Sigmas * e.se + 1e-12;
      const auto tails = estimate_tail(run_deviations(runs, *s.loss, s.data), cfg.t_grid);
      for (std::size_t i = 0; i < tails.size(); ++i) {
        ++tail_total;
        tail_hits += std::fabs(tails[i].point - exact_tail[i]) <= kAc9Sigmas * tails[i].se + 1e-12;
      }
    }
    const double jr = static_cast<double>(j_hits) / kAc9Replicates;
    const double tr = static_cast<double>(tail_hits) / tail_total;
    const bool row = jr >= kAc9Coverage && tr >= kAc9Coverage;
    ok = ok && row;
    d << cfg.name << " J " << j_hits << "/" << kAc9Replicates << " tails " << tail_hits << "/"
      << tail_total << (row ? "" : " BAD") << "; ";
  }
  return {ok, d.str()};
}

Outcome ac10() {
  std::ostringstream err;
  const auto out = std::filesystem::temp_directory_path() / "genaudit_acceptance_corpus";
  std::filesystem::remove_all(out);
  const auto t0 = Clock::now();
  const int status = run_batch(builtin_corpus(), out, {}, err);
  const double secs = seconds_since(t0);
  std::filesystem::remove_all(out);
  std::ostringstream d;
  d << "corpus exit " << status << " in " << fmt("%.1f", secs) << " s; mutations x"
    << kAc10Mutation << ":";

  const auto names = BoundConstants::names();
  std::vector<std::future<int>> jobs;
  for (const auto& name : names) {
    jobs.push_back(std::async(std::launch::async, [name] {
      BoundConstants k;
      k.at(name) *= kAc10Mutation;
      std::ostringstream sink;
      return run_batch(builtin_corpus(), {}, k, sink);
    }));
  }
  std::size_t detected = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const int rc = jobs[i].get();
    detected += rc == kExitFail;
    d << " " << names[i] << (rc == kExitFail ? "=detected" : "=missed(exit " + std::to_string(rc) + ")");
  }
  d << "; " << detected << "/" << names.size() << " constants detected";
  return {status == kExitPass && secs < kAc10Runtime && detected == names.size(), d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"tightness of the subsample construction (exact)", ac1},
      {"counterexample at n=10^6, m=50 (Monte Carlo)", ac2},
      {"supremum over binary losses equals J (exact)", ac3},
      {"chain rule and companion inequalities fuzz", ac4},
      {"randomized response privacy audit", ac5},
      {"concentration bounds on exact corpus scenarios", ac6},
      {"robustness to the sign companion", ac7},
      {"ERM excess-risk tail", ac8},
      {"Monte Carlo vs exact cross-validation", ac9},
      {"full corpus run and mutation test", ac10},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("AC%zu %s %s: %s [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
