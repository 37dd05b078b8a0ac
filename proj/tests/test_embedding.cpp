#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nrdyn/embedding.hpp"
#include "support.hpp"

using namespace nrdyn;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("z at the reference points") {
  const Params p(4, 2);
  const Complex w = z_eval(p, 1.0);
  CHECK_THAT(w.real(), WithinAbs(-1.7, 1e-14));
  CHECK_THAT(w.imag(), WithinAbs(-1.5, 1e-14));
  CHECK_THAT(omega_residual(p, w), WithinAbs(0.0, 1e-12));

  CHECK(z_eval(p, 0.0) == Complex(-2.0, 0.0));
  CHECK(z_eval(p, ExtReal::infinity()) == Complex(1.0, 0.0));
  CHECK(z_eval(p, std::sqrt(2.0)) == Complex(-2.0, 0.0));
  CHECK(z_eval(p, -std::sqrt(2.0)) == Complex(-2.0, 0.0));
  const GH at_zero_of_f = gh_eval(p, 2.0);
  CHECK(at_zero_of_f.g == 1.0);
  CHECK(at_zero_of_f.h == 0.0);
  CHECK_THAT(gh_eval(p, 1.0).h, WithinAbs(-1.5, 1e-14));
}

TEST_CASE("reduced and expanded forms agree") {
  std::mt19937_64 rng(2);
  for (const Params& p : testing::random_pairs(100, 4)) {
    for (int k = 0; k < 20; ++k) {
      const double x = testing::uniform(rng, -6, 6);
      if (std::abs(x * x - p.b()) < 1e-3) continue;
      CHECK(std::abs(z_eval(p, x) - z_expanded(p, x)) < 1e-10);
    }
  }
}

TEST_CASE("z lies on Omega") {
  std::mt19937_64 rng(6);
  for (const Params& p : testing::random_pairs(200, 8)) {
    CHECK(std::abs(omega_residual(p, z_eval(p, 0.0))) <= 1e-9);
    CHECK(std::abs(omega_residual(p, z_eval(p, ExtReal::infinity()))) <= 1e-9);
    for (int k = 0; k < 50; ++k) {
      const double x = k % 2 ? testing::uniform(rng, -10, 10) : 1.0 / testing::uniform(rng, -1, 1);
      CHECK(std::abs(omega_residual(p, z_eval(p, x))) <= 1e-9);
    }
  }
}

TEST_CASE("the denominator of z never vanishes") {
  std::mt19937_64 rng(24);
  for (const Params& p : testing::random_pairs(100, 26)) {
    const Polynomial d = z_polynomials(p).den;
    const double sa = std::sqrt(p.a());
    const double sb = std::sqrt(p.b());
    CHECK(d(0.0) == p.a() * p.a());
    CHECK(d(sa) > 0.0);
    CHECK(d(-sa) > 0.0);
    CHECK(d(sb) > 0.0);
    CHECK(d(-sb) > 0.0);
    for (int k = 0; k < 1000; ++k) CHECK(d(testing::uniform(rng, -20, 20)) > 0.0);
  }
}

TEST_CASE("conjugation symmetry z(-x) = conj z(x)") {
  std::mt19937_64 rng(10);
  for (const Params& p : testing::random_pairs(50, 12))
    for (int k = 0; k < 20; ++k) {
      const double x = testing::uniform(rng, -8, 8);
      CHECK(std::abs(z_eval(p, -x) - std::conj(z_eval(p, x))) <= 1e-12);
    }
}

TEST_CASE("Omega geometry") {
  const OmegaEllipse e = omega(Params(4, 2));
  CHECK(e.center_x == -0.5);
  CHECK(e.rx == 1.5);
  CHECK(e.ry == 2.5);
  const OmegaEllipse f = omega(Params(4.01, 2.5));
  CHECK(f.center_x == -0.75);
  CHECK(f.rx == 1.75);
  CHECK_THAT(f.ry, WithinAbs(2.505, 1e-15));

  const Params p(4, 2);
  CHECK(omega_residual(p, {-0.5, 0.0}) == -1.0);
  CHECK(omega_residual(p, {1.0, 0.0}) == 0.0);
  CHECK(angle_of(p, {1.0, 0.0}) == 0.0);
  CHECK_THAT(angle_of(p, {-2.0, 0.0}), WithinAbs(kPi, 1e-15));
  CHECK_THAT(angle_of(p, {-0.5, -2.5}), WithinAbs(1.5 * kPi, 1e-15));
  CHECK_THROWS_AS(angle_of(p, {0.0, 0.0}), DomainError);
  for (int j = 0; j < 100; ++j) {
    const double t = 2 * kPi * j / 100;
    CHECK_THAT(angle_of(p, e.point_at(t)), WithinAbs(t, 1e-12));
  }
}

TEST_CASE("vertex lemma") {
  const Params p(4, 2);
  const VertexImages v = vertex_images(p);
  CHECK(v.fix_plus == Complex(-0.5, -2.5));
  CHECK(v.fix_minus == Complex(-0.5, 2.5));
  CHECK(std::abs(z_eval(p, fixed_points(p, 1)[0]) - v.fix_plus) < 1e-9);

  for (const Params& q : testing::random_pairs(300, 14)) {
    const VertexImages vq = vertex_images(q);
    for (double x : fixed_points(q, 1)) CHECK(std::abs(z_eval(q, x) - vq.fix_plus) < 1e-9);
    for (double x : fixed_points(q, -1)) CHECK(std::abs(z_eval(q, x) - vq.fix_minus) < 1e-9);
  }
}

TEST_CASE("derivative of z against finite differences") {
  const Params p(4, 2);
  for (double x : {-3.0, -0.7, 0.3, 1.1, 2.5}) {
    const double h = 1e-6;
    const Complex fd = (z_eval(p, x + h) - z_eval(p, x - h)) / (2 * h);
    CHECK(std::abs(z_derivative(p, x) - fd) < 1e-6);
  }
}

TEST_CASE("shift points") {
  const Params p(4, 2);
  const ShiftPoints sp = shift_points(p);
  CHECK(sp.solutions.size() + sp.dropped == 4);
  CHECK(sp.solutions.size() >= 2);
  bool found = false;
  for (const auto& s : sp.solutions) {
    CHECK(std::abs(z_eval(p, s.x + 1) - z_eval(p, s.x)) < 1e-9);
    if (s.outer_sign == 1 && s.inner_sign == 1) {
      found = true;
      CHECK_THAT(s.x, WithinAbs(0.5 * (-1 + std::sqrt(21 + 2 * std::sqrt(84.0))), 1e-14));
      CHECK_THAT(s.x, WithinAbs(2.635694, 1e-6));
    }
  }
  CHECK(found);

  for (const Params& q : testing::random_pairs(500, 16))
    for (const auto& s : shift_points(q).solutions) CHECK(std::abs(z_eval(q, s.x + 1) - z_eval(q, s.x)) < 1e-9);
}

TEST_CASE("preimages on Omega") {
  const Params p(4, 2);
  const auto at_vertex = z_preimages(p, {1.0, 0.0}, -10, 10);
  REQUIRE(at_vertex.size() == 2);
  CHECK_THAT(at_vertex[0], WithinAbs(-2.0, 1e-9));
  CHECK_THAT(at_vertex[1], WithinAbs(2.0, 1e-9));

  const auto at_minus_b = z_preimages(p, {-2.0, 0.0}, -10, 10);
  REQUIRE(at_minus_b.size() == 3);
  CHECK_THAT(at_minus_b[0], WithinAbs(-std::sqrt(2.0), 1e-9));
  CHECK_THAT(at_minus_b[1], WithinAbs(0.0, 1e-9));
  CHECK_THAT(at_minus_b[2], WithinAbs(std::sqrt(2.0), 1e-9));

  const auto self = z_preimages(p, z_eval(p, 1.2), 1.19, 1.21);
  REQUIRE(self.size() == 1);
  CHECK_THAT(self[0], WithinAbs(1.2, 1e-9));

  CHECK_THROWS_AS(z_preimages(p, {0.0, 0.0}, -1, 1), DomainError);

  std::mt19937_64 rng(20);
  for (const Params& q : testing::random_pairs(50, 22)) {
    const double x = testing::uniform(rng, -4, 4);
    bool hit = false;
    for (double y : z_preimages(q, z_eval(q, x), -10, 10)) {
      CHECK(std::abs(z_eval(q, y) - z_eval(q, x)) < 1e-8);
      hit = hit || std::abs(y - x) < 1e-6;
    }
    CHECK(hit);
  }
}
