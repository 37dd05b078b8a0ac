#pragma once

// The real quadratic rational family f(x) = (x^2 - a)/(x^2 - b) acting on
// the one-point compactification R u {inf}.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <vector>

#include "nrdyn/errors.hpp"
#include "nrdyn/polynomial.hpp"

namespace nrdyn {

/// Parameter pair with a > b > 0.
class Params {
 public:
  Params(double a, double b) : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > 0.0) || !(a > b)) {
      std::ostringstream msg;
      msg << "parameters must satisfy a > b > 0 (got a=" << a << ", b=" << b << ")";
      throw InvalidParams(msg.str());
    }
  }

  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double b() const { return b_; }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  double a_;
  double b_;
};

/// A point of R u {inf}. Infinity is unsigned; constructing from +-HUGE_VAL
/// yields it.
class ExtReal {
 public:
  ExtReal(double v) : value_(v), infinite_(std::isinf(v)) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw DomainError("ExtReal: NaN is not a point of the extended line");
    if (infinite_) value_ = 0.0;
  }

  static ExtReal infinity() { return ExtReal(HUGE_VAL); }

  [[nodiscard]] bool is_infinite() const { return infinite_; }
  [[nodiscard]] bool is_finite() const { return !infinite_; }

  [[nodiscard]] double value() const {
    if (infinite_) throw DomainError("ExtReal: value() on the point at infinity");
    return value_;
  }

  friend bool operator==(const ExtReal& x, const ExtReal& y) {
    return x.infinite_ == y.infinite_ && (x.infinite_ || x.value_ == y.value_);
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
    if (x.infinite_) return os << "inf";
    return os << x.value_;
  }

 private:
  double value_;
  bool infinite_;
};

/// |x^2 - b| < 1e-13 max(1, b): x is treated as landing on a pole.
inline bool is_pole(const Params& p, double x) {
  return std::abs(x * x - p.b()) < 1e-13 * std::max(1.0, p.b());
}

inline ExtReal eval_map(const Params& p, const ExtReal& x) {
  if (x.is_infinite()) return 1.0;
  const double v = x.value();
  if (is_pole(p, v)) return ExtReal::infinity();
  if (std::abs(v) > 1e150) {
    const double inv2 = 1.0 / (v * v);
    return (1.0 - p.a() * inv2) / (1.0 - p.b() * inv2);
  }
  const double v2 = v * v;
  return (v2 - p.a()) / (v2 - p.b());
}

/// f'(x) = 2x(a - b)/(x^2 - b)^2 for finite non-pole x.
inline double map_derivative(const Params& p, double x) {
  const double d = x * x - p.b();
  return 2.0 * x * (p.a() - p.b()) / (d * d);
}

struct SpecialPoints {
  std::array<double, 2> zeros;
  std::array<double, 2> poles;
  std::array<ExtReal, 2> critical;
};

inline SpecialPoints special_points(const Params& p) {
  const double za = std::sqrt(p.a());
  const double pb = std::sqrt(p.b());
  return {{-za, za}, {-pb, pb}, {ExtReal(0.0), ExtReal::infinity()}};
}

/// Real solutions of f(x) = sign * x, ascending: the real roots of
/// x^3 - sign x^2 - b x + sign a.
inline std::vector<double> fixed_points(const Params& p, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("fixed_points: sign must be +1 or -1");
  const double s = sign;
  const Polynomial cubic{s * p.a(), -p.b(), -s, 1.0};
  const double k = std::max(2.0 * (1.0 + std::sqrt(p.a()) + std::sqrt(p.b())), cubic.root_bound());
  std::vector<double> roots = real_roots(cubic, -k, k);
  for (double& r : roots) r = newton_polish(cubic, r);
  return roots;
}

/// Forward orbit of length n + 1.
struct Orbit {
  ExtReal start = 0.0;
  std::vector<ExtReal> points;
  /// Indices k where points[k] was a pole hit, i.e. points[k + 1] is inf.
  std::vector<std::size_t> pole_hits;
};

inline Orbit iterate(const Params& p, const ExtReal& x0, std::size_t n) {
  Orbit orb;
  orb.start = x0;
  orb.points.reserve(n + 1);
  orb.points.push_back(x0);
  for (std::size_t k = 0; k < n; ++k) {
    const ExtReal& cur = orb.points.back();
    const ExtReal next = eval_map(p, cur);
    if (cur.is_finite() && next.is_infinite()) orb.pole_hits.push_back(k);
    orb.points.push_back(next);
  }
  return orb;
}

/// Image of the finite non-pole reals: (-inf, 1) u [a/b, +inf).
inline bool range_membership(const Params& p, double y) { return y < 1.0 || y >= p.a() / p.b(); }

}  // namespace nrdyn
