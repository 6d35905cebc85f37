#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "genaudit/enumerate.hpp"
#include "genaudit/errors.hpp"
#include "genaudit/info.hpp"
#include "genaudit/learners.hpp"
#include "oracle.hpp"

using namespace genaudit;

namespace {

using Q = Rational;

Q q(long n, long d) { return ScalarOps<Q>::ratio(n, d); }

template <Scalar T>
Scenario<T> scen(LearnerKernel<T> l, Dist<T> d, int m) {
  return Scenario<T>{.id = "test", .learner = std::move(l), .data = std::move(d), .m = m};
}

Alphabet dom(std::size_t n) { return Alphabet::range("Z", n, "z"); }

Alphabet xy_domain() { return Alphabet("Z", {"00", "01", "10", "11"}); }

// Threshold class on (x, y): h0(x) = x, h1(x) = 0; 0/1 loss on y.
std::vector<Q> threshold_table() {
  return {0, 0, 1, 0, 1, 1, 0, 1};
}

LearnerKernel<Q> threshold_erm() {
  return erm_finite<Q>(xy_domain(), Alphabet("H", {"x", "zero"}), threshold_table());
}

Dist<Q> threshold_data() {
  return Dist<Q>(xy_domain(), {q(3, 10), q(2, 10), q(2, 10), q(3, 10)});
}

template <Scalar T>
void check_against_oracle(const Scenario<T>& s) {
  const auto j = exact_trn_hyp_joint(s);
  CHECK(variational_info(j.joint) == oracle::info(oracle::trn_hyp(s)));
  CHECK(marginal_dist(j.joint, "Z_trn").weights() == s.data.weights());
}

}  // namespace

TEST_CASE("sample counts saturate") {
  CHECK(count_samples(2, 3, false) == 8);
  CHECK(count_samples(4, 3, true) == 20);
  CHECK(count_samples(256, 2, true) == 32896);
  CHECK(count_samples(1000000, 50, false) == UINT64_MAX);
  CHECK(count_samples(1000000, 50, true) == UINT64_MAX);
  CHECK(count_samples(0, 3, true) == 0);
}

TEST_CASE("enumeration weights sum to one in both orders") {
  auto d = Dist<Q>(dom(3), {q(1, 2), q(1, 3), q(1, 6)});
  for (bool sym : {true, false}) {
    auto l = release_sample<Q>(dom(3));
    l.symmetric = sym;
    auto s = scen(l, d, 4);
    const auto plan = plan_enumeration(s);
    CHECK(plan.samples == (sym ? 15u : 81u));
    Q total = 0;
    std::uint64_t visited = 0;
    for_each_sample(s, plan, [&](Sample, const Q& w) {
      total += w;
      ++visited;
    });
    CHECK(total == 1);
    CHECK(visited == plan.samples);
  }
}

TEST_CASE("zero-mass symbols are skipped") {
  auto d = Dist<Q>(dom(4), {q(1, 2), 0, q(1, 2), 0});
  auto s = scen(release_sample<Q>(dom(4)), d, 2);
  CHECK(plan_enumeration(s).samples == 3);
  check_against_oracle(s);
}

TEST_CASE("budget is enforced") {
  auto s = scen(release_sample<Q>(dom(1000)), Dist<Q>::uniform(dom(1000)), 3);
  s.budget = 1000;
  CHECK_THROWS_AS(exact_trn_hyp_joint(s), BudgetExceeded);
  try {
    plan_enumeration(s);
  } catch (const BudgetExceeded& e) {
    CHECK(e.budget() == 1000);
    CHECK(e.required() == count_samples(1000, 3, true));
  }
}

TEST_CASE("constant learner carries no information") {
  auto s = scen(constant_learner<Q>(dom(5)), Dist<Q>::uniform(dom(5)), 3);
  CHECK(variational_info(exact_trn_hyp_joint(s).joint) == 0);
}

TEST_CASE("identity learner on a fair bit") {
  auto s = scen(release_sample<Q>(binary_domain()), Dist<Q>::uniform(binary_domain()), 1);
  auto j = exact_trn_hyp_joint(s);
  CHECK(j.joint.weights() == std::vector<Q>{q(1, 2), 0, 0, q(1, 2)});
  CHECK(variational_info(j.joint) == q(1, 2));
  CHECK(j.joint.axes()[1].symbol(0) == "{0}");
}

TEST_CASE("subsample release") {
  SUBCASE("frozen values") {
    auto s = scen(subsample_release<Q>(dom(64), 1, q(1, 2)), Dist<Q>::uniform(dom(64)), 2);
    CHECK(variational_info(exact_trn_hyp_joint(s).joint) == q(63, 256));
    auto full = scen(subsample_release<Q>(dom(8), 2, Q(1)), Dist<Q>::uniform(dom(8)), 2);
    CHECK(variational_info(exact_trn_hyp_joint(full).joint) == q(49, 64));
  }
  SUBCASE("k/m within the collision budget") {
    auto s = scen(subsample_release<double>(dom(64), 2, 1.0), Dist<double>::uniform(dom(64)), 4);
    const double j = variational_info(exact_trn_hyp_joint(s).joint);
    CHECK(std::fabs(j - 0.5) <= 16.0 / 64.0);
  }
  SUBCASE("delta zero is constant") {
    auto s = scen(subsample_release<Q>(dom(6), 1, Q(0)), Dist<Q>::uniform(dom(6)), 2);
    CHECK(variational_info(exact_trn_hyp_joint(s).joint) == 0);
  }
  SUBCASE("k above m") {
    auto s = scen(subsample_release<Q>(dom(4), 3, Q(1)), Dist<Q>::uniform(dom(4)), 2);
    CHECK_THROWS_AS(exact_trn_hyp_joint(s), DomainError);
    CHECK_THROWS_AS(subsample_release<Q>(dom(4), 0, Q(1)), DomainError);
    CHECK_THROWS_AS(subsample_release<Q>(dom(4), 1, Q(2)), DomainError);
  }
  SUBCASE("law on a sample with repeats") {
    auto l = subsample_release<Q>(dom(4), 2, q(1, 3));
    const std::int32_t s[] = {2, 1, 2};
    auto law = l.law(s);
    REQUIRE(law.size() == 3);
    CHECK(law[0].first.empty());
    CHECK(law[0].second == q(2, 3));
    CHECK(law[1].first == HypCode{1, 2});
    CHECK(law[1].second == q(2, 9));
    CHECK(law[2].first == HypCode{2, 2});
    CHECK(law[2].second == q(1, 9));
  }
}

TEST_CASE("randomized response") {
  auto s = scen(randomized_response_dp<Q>(std::log(2.0)), Dist<Q>::uniform(binary_domain()), 1);
  CHECK(std::fabs(to_double(variational_info(exact_trn_hyp_joint(s).joint)) - 1.0 / 6.0) < 1e-15);
  auto s3 = scen(randomized_response_dp<double>(1.0), Dist<double>::uniform(binary_domain()), 3);
  CHECK(variational_info(exact_trn_hyp_joint(s3).joint) ==
        doctest::Approx(0.11552928931500245).epsilon(1e-13));
  auto flat = scen(randomized_response_dp<Q>(0.0), Dist<Q>::uniform(binary_domain()), 3);
  CHECK(variational_info(exact_trn_hyp_joint(flat).joint) == 0);
  // Even m: the 1-1 tie releases a fair coin.
  auto l = randomized_response_dp<Q>(1.0);
  const std::int32_t tie[] = {0, 1};
  CHECK(l.law(tie)[0].second == q(1, 2));
  CHECK_THROWS_AS(randomized_response_dp<Q>(-1.0), DomainError);
}

TEST_CASE("erm on the threshold class") {
  auto s = scen(threshold_erm(), threshold_data(), 3);
  CHECK(variational_info(exact_trn_hyp_joint(s).joint) == q(89, 625));
  auto ph = marginal_dist(exact_trn_hyp_joint(s).joint, "H");
  CHECK(ph[0] == q(373, 500));
  CHECK(ph[1] == q(127, 500));

  // A single hypothesis, and a class with one dominating hypothesis.
  auto one = erm_finite<Q>(xy_domain(), Alphabet("H", {"h"}), {0, 1, 1, 0});
  CHECK(variational_info(exact_trn_hyp_joint(scen(one, threshold_data(), 3)).joint) == 0);
  auto dom2 = erm_finite<Q>(xy_domain(), Alphabet("H", {"a", "b"}),
                            {0, 1, q(1, 2), 1, 0, 1, 0, 1});
  auto j = exact_trn_hyp_joint(scen(dom2, threshold_data(), 3));
  CHECK(variational_info(j.joint) == 0);
  CHECK(marginal_dist(j.joint, "H")[0] == 1);

  // Ties go to the lowest index.
  auto tied = erm_finite<Q>(xy_domain(), Alphabet("H", {"a", "b"}), {0, 0, 0, 0, 1, 1, 1, 1});
  const std::int32_t sample[] = {0, 1};
  CHECK(tied.law(sample)[0].first == HypCode{0});
  CHECK_THROWS_AS(erm_finite<Q>(xy_domain(), Alphabet("H", {"a"}), {0, 1}), DomainError);
}

TEST_CASE("counterexample learner") {
  auto s = scen(prop1_counterexample<Q>(16), Dist<Q>::uniform(dom(16)), 2);
  CHECK(variational_info(exact_trn_hyp_joint(s).joint) == q(225, 256));
  CHECK(prop1_reference(7, 16));
  CHECK_FALSE(prop1_reference(8, 16));
  CHECK_THROWS_AS(prop1_counterexample<Q>(7), DomainError);
  // J grows toward 1 as n / m^2 grows.
  Q prev = 0;
  for (std::size_t n : {4u, 8u, 16u, 32u}) {
    auto sn = scen(prop1_counterexample<Q>(n), Dist<Q>::uniform(dom(n)), 2);
    Q j = variational_info(exact_trn_hyp_joint(sn).joint);
    CHECK(j > prev);
    prev = j;
  }
  auto small = scen(prop1_counterexample<Q>(2), Dist<Q>::uniform(dom(2)), 3);
  CHECK_NOTHROW(exact_trn_hyp_joint(small));
}

TEST_CASE("joints match the brute-force oracle") {
  RandomStream rng(41, 0);
  for (int trial = 0; trial < 5; ++trial) {
    auto d = random_joint_exact({4}, rng).as_dist();
    Dist<Q> data(dom(4), d.weights());
    check_against_oracle(scen(release_sample<Q>(dom(4)), data, 3));
    check_against_oracle(scen(first_example<Q>(dom(4)), data, 2));
    check_against_oracle(scen(subsample_release<Q>(dom(4), 2, q(3, 7)), data, 3));
    check_against_oracle(scen(prop1_counterexample<Q>(4), data, 2));
    Dist<Q> xy(xy_domain(), d.weights());
    check_against_oracle(scen(threshold_erm(), xy, 3));
  }
  auto rr = scen(randomized_response_dp<Q>(0.7),
                 Dist<Q>(binary_domain(), {q(1, 3), q(2, 3)}), 4);
  check_against_oracle(rr);
}

TEST_CASE("multiset and ordered enumeration agree") {
  auto data = Dist<Q>(dom(3), {q(1, 5), q(1, 2), q(3, 10)});
  auto l = subsample_release<Q>(dom(3), 2, q(2, 3));
  auto a = exact_trn_hyp_joint(scen(l, data, 3));
  l.symmetric = false;
  auto b = exact_trn_hyp_joint(scen(l, data, 3));
  CHECK(a.joint.weights() == b.joint.weights());
  CHECK(a.codes == b.codes);
}

TEST_CASE("built-in learners are permutation invariant") {
  std::vector<LearnerKernel<Q>> ls{
      release_sample<Q>(dom(4)), subsample_release<Q>(dom(4), 2, q(1, 2)),
      prop1_counterexample<Q>(4), constant_learner<Q>(dom(4))};
  std::vector<std::int32_t> s{3, 0, 2, 0};
  for (const auto& l : ls) {
    auto base = l.law(s);
    std::vector<std::int32_t> p = s;
    std::sort(p.begin(), p.end());
    do {
      CHECK(l.law(p) == base);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  auto rr = randomized_response_dp<Q>(0.5);
  std::vector<std::int32_t> b{1, 0, 1};
  auto base = rr.law(b);
  std::sort(b.begin(), b.end());
  do {
    CHECK(rr.law(b) == base);
  } while (std::next_permutation(b.begin(), b.end()));
  auto erm = threshold_erm();
  std::vector<std::int32_t> e{3, 1, 2};
  auto eb = erm.law(e);
  std::sort(e.begin(), e.end());
  do {
    CHECK(erm.law(e) == eb);
  } while (std::next_permutation(e.begin(), e.end()));
}

TEST_CASE("Z_trn marginal equals the data distribution") {
  RandomStream rng(42, 0);
  for (int trial = 0; trial < 10; ++trial) {
    Dist<Q> data(dom(6), random_joint_exact({6}, rng).weights());
    for (const auto& l : {release_sample<Q>(dom(6)), subsample_release<Q>(dom(6), 1, q(1, 4)),
                          prop1_counterexample<Q>(6), first_example<Q>(dom(6))}) {
      auto j = exact_trn_hyp_joint(scen(l, data, 3));
      CHECK(marginal_dist(j.joint, "Z_trn").weights() == data.weights());
    }
  }
}

TEST_CASE("companion axis") {
  auto s = scen(subsample_release<Q>(dom(5), 1, q(1, 2)), Dist<Q>::uniform(dom(5)), 2);
  auto base = exact_trn_hyp_joint(s);
  auto dup = exact_trn_hyp_joint(s, std::optional(duplicate_companion(s.learner)));
  CHECK(dup.joint.rank() == 3);
  CHECK(variational_info(dup.joint, {"Z_trn"}, {"H", "K"}) == variational_info(base.joint));
  auto cst = exact_trn_hyp_joint(s, std::optional(constant_companion<Q>()));
  CHECK(variational_info(cst.joint, {"Z_trn"}, {"H", "K"}) == variational_info(base.joint));
  CHECK(marginal(dup.joint, {"Z_trn", "H"}).weights() == base.joint.weights());
}

TEST_CASE("sample/hypothesis mutual information") {
  auto s = scen(release_sample<Q>(binary_domain()), Dist<Q>::uniform(binary_domain()), 1);
  CHECK(sample_hyp_mutual_info(s) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  auto c = scen(constant_learner<Q>(dom(3)), Dist<Q>::uniform(dom(3)), 2);
  CHECK(sample_hyp_mutual_info(c) == 0.0);
  auto sub = scen(subsample_release<Q>(dom(3), 1, q(2, 5)),
                  Dist<Q>(dom(3), {q(1, 2), q(1, 4), q(1, 4)}), 3);
  CHECK(sample_hyp_mutual_info(sub) ==
        doctest::Approx(shannon_mutual_info(sample_hyp_joint(sub))).epsilon(1e-13));
  CHECK(sample_hyp_joint(sub).axes()[0].size() == 27);
}

TEST_CASE("stability search") {
  auto grid = simplex_grid<Q>(dom(3), 8);
  CHECK(grid.size() == 45);
  for (const auto& d : grid) {
    CHECK(validate(d, NumericMode::exact()).ok);
  }
  auto cst = stability_search(constant_learner<Q>(dom(3)), 2, grid);
  CHECK(cst.sup_info == 0);

  auto sub = subsample_release<Q>(dom(16), 1, Q(1));
  // 0.9 of the mass on the first half, 0.1 on the second.
  std::vector<Q> skew(16, q(1, 80));
  std::fill(skew.begin(), skew.begin() + 8, q(9, 80));
  auto res = stability_search(sub, 2, {Dist<Q>::uniform(dom(16)), Dist<Q>(dom(16), skew)});
  REQUIRE(res.per_dist_info.size() == 2);
  const double gap = to_double(Q(res.per_dist_info[0] - res.per_dist_info[1]));
  CHECK(std::fabs(gap) <= 4.0 / 16.0);
  CHECK(res.argmax == 0);
  // A point-heavy distribution is governed by m^2 * sum p^2 instead.
  std::vector<Q> heavy(16, q(1, 150));
  heavy[0] = 1 - q(15, 150);
  auto s_heavy = scen(sub, Dist<Q>(dom(16), heavy), 2);
  const double j_heavy = to_double(variational_info(exact_trn_hyp_joint(s_heavy).joint));
  CHECK(to_double(res.per_dist_info[0]) - j_heavy > 4.0 / 16.0);
  CHECK(to_double(res.per_dist_info[0]) - j_heavy <= s_heavy.collision_bound());

  std::vector<Q> table{0, 1, 1, 0, q(1, 2), q(1, 2)};
  auto erm = erm_finite<Q>(dom(3), Alphabet("H", {"a", "b"}), table);
  auto r = stability_search(erm, 2, grid);
  CHECK(r.sup_info == *std::max_element(r.per_dist_info.begin(), r.per_dist_info.end()));
  CHECK(r.sup_info > 0);
}
