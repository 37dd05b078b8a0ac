#include <catch_amalgamated.hpp>

#include <cmath>

#include "nrdyn/polynomial.hpp"

using nrdyn::Polynomial;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("evaluation, arithmetic and trimming") {
  const Polynomial p{1.0, -3.0, 0.0, 2.0};  // 2x^3 - 3x + 1
  CHECK(p.degree() == 3);
  CHECK(p(2.0) == 11.0);
  CHECK(p.derivative().coefficients() == std::vector<double>{-3.0, 0.0, 6.0});

  const Polynomial q{-1.0, 1.0};
  const Polynomial prod = p * q;
  CHECK(prod.degree() == 4);
  for (double x : {-2.0, -0.5, 0.0, 0.7, 3.0}) CHECK_THAT(prod(x), WithinAbs(p(x) * q(x), 1e-12));

  CHECK((p - p).is_zero());
  CHECK(Polynomial{0.0, 1.0, 0.0, 0.0}.degree() == 1);
}

TEST_CASE("deflation by a known root leaves a zero remainder") {
  const Polynomial p = Polynomial{-1.0, 1.0} * Polynomial{2.0, 1.0} * Polynomial{-5.0, 1.0};
  const auto [quot, rem] = p.deflate(5.0);
  CHECK(quot.degree() == 2);
  CHECK_THAT(rem, WithinAbs(0.0, 1e-12));
  CHECK_THAT(quot(1.0), WithinAbs(0.0, 1e-12));
  CHECK_THAT(quot(-2.0), WithinAbs(0.0, 1e-12));
}

TEST_CASE("real roots of products of linear factors") {
  const std::vector<double> want = {-3.5, -1.0, 0.25, 2.0, 7.0};
  Polynomial p{1.0};
  for (double r : want) p = p * Polynomial{-r, 1.0};
  const auto got = nrdyn::real_roots(p);
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k) CHECK_THAT(got[k], WithinAbs(want[k], 1e-10));
}

TEST_CASE("double roots are found where no sign change exists") {
  const Polynomial p = Polynomial{-1.5, 1.0} * Polynomial{-1.5, 1.0} * Polynomial{1.0, 0.0, 1.0};
  const auto got = nrdyn::real_roots(p, -10.0, 10.0);
  REQUIRE(got.size() == 1);
  CHECK_THAT(got[0], WithinAbs(1.5, 1e-7));
}

TEST_CASE("roots restricted to a window") {
  const Polynomial p = Polynomial{-1.0, 0.0, 1.0};  // x^2 - 1
  CHECK(nrdyn::real_roots(p, 0.0, 5.0).size() == 1);
  CHECK(nrdyn::real_roots(p, 2.0, 5.0).empty());
  CHECK(nrdyn::real_roots(Polynomial{1.0, 0.0, 1.0}).empty());
}

TEST_CASE("Cauchy bound encloses every root") {
  const Polynomial p{4.0, -2.0, -1.0, 1.0};
  const double bound = p.root_bound();
  for (double r : nrdyn::real_roots(p)) CHECK(std::abs(r) <= bound);
}

TEST_CASE("newton polish sharpens a rough root") {
  const Polynomial p{-2.0, 0.0, 1.0};
  CHECK_THAT(nrdyn::newton_polish(p, 1.4), WithinRel(std::sqrt(2.0), 1e-15));
}
