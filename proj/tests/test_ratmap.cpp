#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "nrdyn/ratmap.hpp"
#include "support.hpp"

using namespace nrdyn;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Plain bisection on a sign change; the reference for the cubic solver.
double bisect(double (*fn)(double), double lo, double hi) {
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if ((fn(lo) < 0) == (fn(mid) < 0)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("parameter domain") {
  CHECK_NOTHROW(Params(4, 2));
  CHECK_THROWS_AS(Params(2, 4), InvalidParams);
  CHECK_THROWS_AS(Params(3, 3), InvalidParams);
  CHECK_THROWS_AS(Params(3, 0), InvalidParams);
  CHECK_THROWS_AS(Params(3, -1), InvalidParams);
  CHECK_THROWS_AS(Params(NAN, 1), InvalidParams);
  CHECK_THROWS_AS(Params(INFINITY, 1), InvalidParams);
}

TEST_CASE("extended reals") {
  CHECK(ExtReal(INFINITY) == ExtReal(-INFINITY));
  CHECK(ExtReal::infinity().is_infinite());
  CHECK(ExtReal(2.5).value() == 2.5);
  CHECK_THROWS(ExtReal(NAN));
  CHECK_THROWS(ExtReal::infinity().value());
  CHECK_FALSE(ExtReal(1.0) == ExtReal::infinity());
  std::ostringstream os;
  os << ExtReal::infinity() << ' ' << ExtReal(0.5);
  CHECK(os.str() == "inf 0.5");
}

TEST_CASE("map evaluation") {
  const Params p(4, 2);
  CHECK(eval_map(p, 0.0).value() == 2.0);
  CHECK(eval_map(p, ExtReal::infinity()).value() == 1.0);
  CHECK(eval_map(p, 1.0).value() == 3.0);
  CHECK(eval_map(p, std::sqrt(2.0)).is_infinite());
  CHECK(eval_map(p, -std::sqrt(2.0)).is_infinite());
  CHECK_THAT(eval_map(p, 1e200).value(), WithinAbs(1.0, 1e-15));

  const Params q(4.01, 2.5);
  CHECK_THAT(eval_map(q, 0.0).value(), WithinRel(4.01 / 2.5, 1e-15));
}

TEST_CASE("derivative matches central differences") {
  std::mt19937_64 rng(3);
  for (const Params& p : testing::random_pairs(50, 7)) {
    const double x = testing::uniform(rng, -5, 5);
    if (std::abs(x * x - p.b()) < 0.1) continue;
    const double h = 1e-6;
    const double fd = (eval_map(p, x + h).value() - eval_map(p, x - h).value()) / (2 * h);
    CHECK_THAT(map_derivative(p, x), WithinAbs(fd, 1e-5 * (1 + std::abs(fd))));
  }
  // f decreases on (-inf, 0) away from the poles and increases on (0, inf).
  const Params p(4, 2);
  CHECK(map_derivative(p, 0.5) > 0);
  CHECK(map_derivative(p, -0.5) < 0);
  CHECK(map_derivative(p, 0.0) == 0);
}

TEST_CASE("special points") {
  const auto sp = special_points(Params(4, 2));
  CHECK(sp.zeros[0] == -2.0);
  CHECK(sp.zeros[1] == 2.0);
  CHECK_THAT(sp.poles[1], WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK(sp.critical[0] == ExtReal(0.0));
  CHECK(sp.critical[1].is_infinite());

  const Params q(4.01, 2.5);
  const auto sq = special_points(q);
  CHECK_THAT(sq.zeros[1], WithinAbs(2.00249843945, 1e-10));
  CHECK_THAT(sq.poles[1], WithinAbs(1.58113883008, 1e-10));
  CHECK(std::abs(eval_map(q, sq.zeros[1]).value()) < 1e-12);
}

TEST_CASE("fixed points against bisection") {
  const Params p(4, 2);
  const auto plus = fixed_points(p, 1);
  REQUIRE(plus.size() == 1);
  const double want = bisect([](double x) { return x * x * x - x * x - 2 * x + 4; }, -3, 0);
  CHECK_THAT(plus[0], WithinAbs(want, 1e-12));
  CHECK_THAT(plus[0], WithinAbs(-1.658967, 1e-6));

  const auto minus = fixed_points(p, -1);
  REQUIRE(minus.size() == 1);
  CHECK_THAT(minus[0], WithinAbs(-want, 1e-12));
  CHECK_THAT(eval_map(p, minus[0]).value(), WithinAbs(-minus[0], 1e-12));

  CHECK_THROWS(fixed_points(p, 0));
}

TEST_CASE("fixed points solve f(x) = +-x for random parameters") {
  for (const Params& p : testing::random_pairs(200, 13)) {
    for (int s : {1, -1}) {
      const auto roots = fixed_points(p, s);
      CHECK(!roots.empty());  // an odd-degree cubic
      for (double x : roots) CHECK_THAT(eval_map(p, x).value(), WithinAbs(s * x, 1e-9 * (1 + std::abs(x))));
    }
  }
}

TEST_CASE("orbits") {
  const Params p(4, 2);
  const Orbit orb = iterate(p, std::sqrt(2.0), 4);
  REQUIRE(orb.points.size() == 5);
  CHECK(orb.points[1].is_infinite());
  CHECK(orb.points[2].value() == 1.0);
  CHECK(orb.points[3].value() == 3.0);
  CHECK_THAT(orb.points[4].value(), WithinAbs(5.0 / 7.0, 1e-15));
  CHECK(orb.pole_hits == std::vector<std::size_t>{0});

  // The fixed point is repelling (f' ~ -11.7), so only a short horizon stays put.
  const double fp = fixed_points(p, 1)[0];
  CHECK(std::abs(map_derivative(p, fp)) > 1.0);
  for (const ExtReal& x : iterate(p, fp, 8).points) CHECK_THAT(x.value(), WithinAbs(fp, 1e-6));

  CHECK(iterate(p, 0.7, 0).points.size() == 1);
}

TEST_CASE("critical orbit for a=4.01, b=2.5 by stepwise evaluation") {
  const Orbit orb = iterate(Params(4.01, 2.5), 0.0, 3);
  CHECK(orb.points[0].value() == 0.0);
  CHECK_THAT(orb.points[1].value(), WithinRel(1.604, 1e-15));
  CHECK_THAT(orb.points[2].value(), WithinRel(-19.73720061524952, 1e-12));
  CHECK_THAT(orb.points[3].value(), WithinRel(0.9960987667031017, 1e-12));
}

TEST_CASE("range of f on finite non-poles") {
  const Params p(4, 2);
  CHECK(range_membership(p, 2.0));
  CHECK_FALSE(range_membership(p, 1.0));
  CHECK_FALSE(range_membership(p, 1.5));
  CHECK(range_membership(p, eval_map(p, 1.5).value()));
  CHECK(eval_map(p, 1.5).value() == -7.0);

  std::mt19937_64 rng(19);
  for (const Params& q : testing::random_pairs(100, 21)) {
    for (int k = 0; k < 50; ++k) {
      const double x = testing::uniform(rng, -100, 100);
      if (is_pole(q, x)) continue;
      CHECK(range_membership(q, eval_map(q, x).value()));
    }
  }
}
