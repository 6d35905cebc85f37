#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "genaudit/errors.hpp"
#include "genaudit/info.hpp"
#include "genaudit/learners.hpp"
#include "genaudit/losses.hpp"
#include "genaudit/mc.hpp"

using namespace genaudit;

namespace {

Alphabet dom(std::size_t n) { return Alphabet::range("Z", n, "z"); }

Scenario<double> scen(LearnerKernel<double> l, Dist<double> d, int m) {
  return Scenario<double>{.id = "mc", .learner = std::move(l), .data = std::move(d), .m = m};
}

// Hypothesis is a fair coin that ignores the sample.
LearnerKernel<double> coin_learner(const Alphabet& d) {
  LearnerKernel<double> l{.name = "coin", .domain = d};
  l.law = [](Sample) { return HypLaw<double>{{{0}, 0.5}, {{1}, 0.5}}; };
  return l;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.95) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.6826894921370859) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
}

TEST_CASE("runs are reproducible and order independent") {
  const auto s = scen(subsample_release<double>(dom(10), 2, 0.5), Dist<double>::uniform(dom(10)), 4);
  const auto a = draw_runs(s, 200, 9);
  const auto b = draw_runs(s, 200, 9);
  const auto c = draw_runs(s, 200, 10);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].sample == b[i].sample);
    CHECK(a[i].hypothesis == b[i].hypothesis);
    CHECK(a[i].trn_index == b[i].trn_index);
    differs = differs || a[i].sample != c[i].sample;
  }
  CHECK(differs);
  const AliasTable table(s.data.weights());
  const auto r = draw_run(s, table, 9, 137);
  CHECK(r.sample == a[137].sample);
  CHECK(r.hypothesis == a[137].hypothesis);
  CHECK(r.run == 137);
  CHECK_THROWS_AS(draw_runs(s, 0, 1), DomainError);
}

TEST_CASE("observation and index frequencies") {
  const std::vector<double> p{0.5, 0.3, 0.15, 0.05};
  const auto s = scen(constant_learner<double>(dom(4)), Dist<double>(dom(4), p), 4);
  const std::uint64_t n_runs = 20000;
  const auto runs = draw_runs(s, n_runs, 3);
  std::vector<double> sym(4, 0.0), idx(4, 0.0);
  for (const auto& r : runs) {
    for (auto z : r.sample) {
      sym[static_cast<std::size_t>(z)] += 1;
    }
    idx[static_cast<std::size_t>(r.trn_index)] += 1;
  }
  const double draws = 4.0 * n_runs;
  for (std::size_t z = 0; z < 4; ++z) {
    const double sd = std::sqrt(draws * p[z] * (1 - p[z]));
    CHECK(std::fabs(sym[z] - draws * p[z]) <= 4 * sd);
    const double sdi = std::sqrt(n_runs * 0.25 * 0.75);
    CHECK(std::fabs(idx[z] - n_runs * 0.25) <= 4 * sdi);
  }
}

TEST_CASE("plug-in variational information") {
  SUBCASE("constant learner") {
    const auto runs = draw_runs(scen(constant_learner<double>(dom(3)), Dist<double>::uniform(dom(3)), 2), 1000, 1);
    const auto e = estimate_variational_info(runs, {.resamples = 100, .seed = 1});
    CHECK(e.point == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(e.ci_low <= e.point);
    CHECK(e.point <= e.ci_high);
  }
  SUBCASE("identity learner") {
    const auto runs = draw_runs(scen(release_sample<double>(binary_domain()),
                                     Dist<double>::uniform(binary_domain()), 1), 100000, 5);
    const auto e = estimate_variational_info(runs, {.seed = 5});
    CHECK(e.point == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::fabs(e.point - 0.5) <= 0.01);
    CHECK(e.n_runs == 100000);
    CHECK(e.se > 0.0);
    CHECK(e.ci_low <= e.point);
    CHECK(e.point <= e.ci_high);
  }
  SUBCASE("bias of independent variables shrinks with the number of runs") {
    const auto s = scen(coin_learner(dom(4)), Dist<double>::uniform(dom(4)), 2);
    std::vector<double> medians;
    for (std::uint64_t n : {1000ull, 10000ull, 100000ull}) {
      std::vector<double> pts;
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        pts.push_back(estimate_variational_info(draw_runs(s, n, seed), {.resamples = 20, .seed = seed}).point);
      }
      medians.push_back(median(pts));
    }
    CHECK(medians[0] > medians[1]);
    CHECK(medians[1] > medians[2]);
    CHECK(medians[2] > 0.0);
  }
  SUBCASE("coverage warning on large hypothesis spaces") {
    // Every released pair is new, so the plug-in table never sees a
    // hypothesis twice and the estimate says nothing about J = 0.1.
    const auto s = scen(subsample_release<double>(dom(10000), 2, 0.5),
                        Dist<double>::uniform(dom(10000)), 10);
    const auto e = estimate_variational_info(draw_runs(s, 100000, 2), {.resamples = 50, .seed = 2});
    const bool warned = std::any_of(e.warnings.begin(), e.warnings.end(),
                                    [](const std::string& w) { return w.rfind("coverage", 0) == 0; });
    CHECK(warned);
    CHECK(e.point > 0.3);
  }
}

TEST_CASE("monte carlo agrees with exact values on a small scenario") {
  auto s = scen(randomized_response_dp<double>(1.0), Dist<double>(binary_domain(), {0.4, 0.6}), 3);
  s.loss = membership_loss<double>();
  const double exact_j = variational_info(exact_trn_hyp_joint(s).joint);
  const auto law = deviation_law(s, *s.loss);
  const std::vector<double> grid{0.1, 0.3, 0.5};
  int j_ok = 0, tail_ok = 0, tail_total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto runs = draw_runs(s, 20000, seed);
    const auto e = estimate_variational_info(runs, {.resamples = 200, .seed = seed});
    j_ok += std::fabs(e.point - exact_j) <= 3 * e.se;
    const auto tails = estimate_tail(run_deviations(runs, *s.loss, s.data), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ++tail_total;
      tail_ok += std::fabs(tails[i].point - law.tail(grid[i], 1e-12)) <= 3 * tails[i].se + 1e-12;
    }
  }
  CHECK(j_ok >= 19);
  CHECK(tail_ok >= 0.95 * tail_total);
}

TEST_CASE("tails and generalization risk") {
  SUBCASE("constant learner and loss") {
    const auto s = scen(constant_learner<double>(dom(3)), Dist<double>::uniform(dom(3)), 2);
    const auto dev = run_deviations(draw_runs(s, 500, 1), constant_loss<double>(0.3), s.data);
    for (const auto& e : estimate_tail(dev, {0.1, 0.5})) {
      CHECK(e.point == 0.0);
      CHECK(e.ci_low == 0.0);
      CHECK(e.ci_high > 0.0);
    }
    CHECK(estimate_gen_risk(dev).point == doctest::Approx(0.0));
  }
  SUBCASE("wilson interval contains the point") {
    const std::vector<double> dev{0.0, 0.5, -0.5, 0.2, 0.7};
    const auto e = estimate_tail(dev, {0.5});
    CHECK(e[0].point == doctest::Approx(0.6));
    CHECK(e[0].ci_low < 0.6);
    CHECK(e[0].ci_high > 0.6);
    CHECK(e[0].method == "tail-frequency");
  }
  SUBCASE("counterexample at scale") {
    const std::size_t n = 1000000;
    const auto s = scen(prop1_counterexample<double>(n), Dist<double>::uniform(dom(n)), 50);
    const auto runs = draw_runs(s, 2000, 11);
    const auto paired = run_deviations(runs, prop1_paired_loss<double>(), s.data);
    const auto flipped = run_deviations(runs, prop1_flipped_loss<double>(), s.data);
    CHECK(std::fabs(estimate_gen_risk(paired).point) <= 0.05);
    CHECK(estimate_tail(paired, {0.49})[0].point >= 0.98);
    CHECK(estimate_gen_risk(flipped).point <= -0.45);
  }
}
