#include "doctest.h"

#include "genaudit/dist.hpp"
#include "genaudit/errors.hpp"
#include "genaudit/info.hpp"

using namespace genaudit;

namespace {

const Alphabet ab("X", {"a", "b"});

Rational q(long n, long d) { return ScalarOps<Rational>::ratio(n, d); }

Joint<Rational> diagonal2() {
  return Joint<Rational>({Alphabet("X", {"0", "1"}), Alphabet("Y", {"0", "1"})},
                         {q(1, 2), 0, 0, q(1, 2)});
}

}  // namespace

TEST_CASE("alphabet labels and lookup") {
  CHECK(ab.index_of("b") == 1);
  CHECK_THROWS_AS(ab.index_of("c"), DomainError);
  CHECK_THROWS_AS(Alphabet("X", {"a", "a"}), DomainError);

  auto big = Alphabet::range("Z", 1000000, "z");
  CHECK(big.size() == 1000000);
  CHECK(big.symbol(42) == "z42");
  CHECK(big.index_of("z999999") == 999999);
  CHECK_THROWS_AS(big.index_of("z1000000"), DomainError);
  CHECK_THROWS_AS(big.index_of("z007"), DomainError);

  CHECK(Alphabet::range("X", 2) == Alphabet("X", {"0", "1"}));
  CHECK_FALSE(ab == ab.renamed("Y"));
}

TEST_CASE("tv distance and overlap") {
  auto u = Dist<Rational>::uniform(ab);
  auto a = Dist<Rational>::point_mass(ab, 0);
  auto b = Dist<Rational>::point_mass(ab, 1);
  CHECK(tv_distance(u, u) == 0);
  CHECK(tv_distance(a, b) == 1);
  CHECK(tv_distance(u, a) == q(1, 2));
  CHECK(overlap(u, u) == 1);
  CHECK(overlap(a, b) == 0);
  CHECK(overlap(u, a) == q(1, 2));

  auto other = Dist<Rational>::uniform(Alphabet("Y", {"a", "b"}));
  CHECK_THROWS_AS(tv_distance(u, other), DomainError);
  CHECK_THROWS_AS(Dist<double>(ab, {1.0}), DomainError);
}

TEST_CASE("marginal, condition, product") {
  auto d = diagonal2();
  CHECK(marginal(d, {"X", "Y"}).weights() == d.weights());
  auto mx = marginal_dist(d, "X");
  CHECK(mx[0] == q(1, 2));
  CHECK(mx[1] == q(1, 2));

  auto c = condition(d, "X", "0");
  CHECK(c.rank() == 1);
  CHECK(c.weights() == std::vector<Rational>{1, 0});

  auto p = Dist<Rational>(Alphabet("P", {"x", "y", "z"}), {q(1, 2), q(1, 3), q(1, 6)});
  auto r = Dist<Rational>(Alphabet("R", {"u", "v"}), {q(1, 4), q(3, 4)});
  auto pr = product(p, r);
  CHECK(marginal_dist(pr, "P").weights() == p.weights());
  CHECK(marginal_dist(pr, "R").weights() == r.weights());
  CHECK(condition(pr, "R", "v").weights() == p.weights());

  auto uu = product(Dist<Rational>::uniform(ab), Dist<Rational>::uniform(ab.renamed("Y")));
  for (const auto& w : uu.weights()) {
    CHECK(w == q(1, 4));
  }
  auto pm = product(Dist<Rational>::point_mass(ab, 1),
                    Dist<Rational>::point_mass(ab.renamed("Y"), 0));
  CHECK(pm.weights() == std::vector<Rational>{0, 0, 1, 0});

  // Permuting axes via marginal keeps every cell.
  auto swapped = marginal(pr, {"R", "P"});
  CHECK(swapped.axis_names() == std::vector<std::string>{"R", "P"});
  const std::size_t idx[] = {1, 2};
  CHECK(swapped.at(idx) == q(3, 4) * q(1, 6));

  Joint<Rational> zero_row({Alphabet("X", {"0", "1"}), Alphabet("Y", {"0", "1"})},
                           {q(1, 2), q(1, 2), 0, 0});
  CHECK_THROWS_AS(condition(zero_row, "X", "1"), ConditioningError);
  CHECK_THROWS_AS(condition(zero_row, "W", "1"), DomainError);
}

TEST_CASE("merge_axes builds tuple labels") {
  RandomStream rng(3, 0);
  auto j = random_joint_exact({2, 3, 2}, rng);
  auto m = merge_axes(j, {"A", "C"}, "AC");
  CHECK(m.axis_names() == std::vector<std::string>{"AC", "B"});
  CHECK(m.axes()[0].size() == 4);
  CHECK(m.axes()[0].symbol(1) == "(0,1)");
  // cell (A=1,C=0), B=2
  const std::size_t merged[] = {2, 2};
  const std::size_t orig[] = {1, 2, 0};
  CHECK(m.at(merged) == j.at(orig));
}

TEST_CASE("validate reports diagnostics") {
  auto u = Dist<double>::uniform(ab);
  CHECK(validate(u, NumericMode::float64()).ok);
  auto short_mass = Dist<double>(ab, {0.5, 0.48});
  auto v = validate(short_mass, NumericMode::float64(1e-12));
  CHECK_FALSE(v.ok);
  CHECK(v.diagnostics.size() == 1);
  CHECK(v.mass_deviation == doctest::Approx(-0.02));
  auto neg = Dist<double>(ab, {1.5, -0.5});
  auto vn = validate(neg, NumericMode::float64());
  CHECK_FALSE(vn.ok);
  CHECK(vn.negative_weights == 1);
  CHECK_THROWS_AS(require_valid(neg, NumericMode::float64()), DomainError);

  auto exact = Dist<Rational>(ab, {q(1, 3), q(2, 3)});
  CHECK(validate(exact, NumericMode::exact()).ok);
  auto off = Dist<Rational>(ab, {q(1, 3), q(1, 3)});
  CHECK_FALSE(validate(off, NumericMode::exact()).ok);

  // A million equal float weights still sum to 1 within 1e-12.
  auto big = Dist<double>::uniform(Alphabet::range("Z", 1000000));
  CHECK(validate(big, NumericMode::float64()).ok);
}

TEST_CASE("decimal to rational conversion") {
  CHECK(rational_from_decimal(0.3) == q(3, 10));
  CHECK(rational_from_decimal(-1.25) == q(-5, 4));
  CHECK(rational_from_decimal(1e-5) == q(1, 100000));
  CHECK(rational_from_decimal(2.5e3) == 2500);
  CHECK(rational_from_double(0.5) == q(1, 2));
}

TEST_CASE("tv is a metric on random triples") {
  const Alphabet x = Alphabet::range("A", 5);
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    RandomStream rng(11, trial);
    const std::size_t n = 2 + rng.below(4);
    auto p = random_joint({n}, rng).as_dist();
    auto r = random_joint({n}, rng).as_dist();
    auto s = random_joint({n}, rng).as_dist();
    const double pr = tv_distance(p, r);
    CHECK(pr >= 0.0);
    CHECK(pr <= 1.0 + 1e-12);
    CHECK(std::fabs(pr - tv_distance(r, p)) <= 1e-12);
    CHECK(pr <= tv_distance(p, s) + tv_distance(s, r) + 1e-12);
    CHECK(std::fabs(overlap(p, r) + pr - 1.0) <= 1e-12);
  }
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    RandomStream rng(12, trial);
    auto p = random_joint_exact({4}, rng).as_dist();
    auto r = random_joint_exact({4}, rng).as_dist();
    auto s = random_joint_exact({4}, rng).as_dist();
    CHECK(tv_distance(p, r) == tv_distance(r, p));
    CHECK(tv_distance(p, r) <= tv_distance(p, s) + tv_distance(s, r));
    CHECK(overlap(p, r) + tv_distance(p, r) == 1);
  }
}

TEST_CASE("marginal and condition preserve validity") {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    RandomStream rng(13, trial);
    auto j = random_joint_exact({2, 3, 4}, rng);
    CHECK(validate(marginal(j, {"C", "A"}), NumericMode::exact()).ok);
    CHECK(validate(condition(j, "B", "1"), NumericMode::exact()).ok);
  }
}
