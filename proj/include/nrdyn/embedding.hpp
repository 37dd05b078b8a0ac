#pragma once

// The embedding z(x) = v*A v / v*v with v = (x, i f(x)) of the extended
// real line into the numerical range of A = [[1, -a], [1, -b]]. Its image
// is the ellipse
//
//   ((Re w - (1-b)/2) / ((1+b)/2))^2 + (Im w / ((1+a)/2))^2 = 1.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "nrdyn/errors.hpp"
#include "nrdyn/numrange.hpp"
#include "nrdyn/polynomial.hpp"
#include "nrdyn/ratmap.hpp"

namespace nrdyn {

struct OmegaEllipse {
  double center_x = 0.0;
  double rx = 0.0;  ///< horizontal semi-axis (1+b)/2
  double ry = 0.0;  ///< vertical semi-axis (1+a)/2

  [[nodiscard]] Complex center() const { return {center_x, 0.0}; }
  [[nodiscard]] Complex point_at(double t) const { return {center_x + rx * std::cos(t), ry * std::sin(t)}; }
  /// Right, top, left, bottom.
  [[nodiscard]] std::array<Complex, 4> vertices() const {
    return {Complex(center_x + rx, 0.0), Complex(center_x, ry), Complex(center_x - rx, 0.0),
            Complex(center_x, -ry)};
  }
};

inline OmegaEllipse omega(const Params& p) {
  return {0.5 * (1.0 - p.b()), 0.5 * (1.0 + p.b()), 0.5 * (1.0 + p.a())};
}

inline double omega_residual(const Params& p, Complex w) {
  const OmegaEllipse e = omega(p);
  const double u = (w.real() - e.center_x) / e.rx;
  const double v = w.imag() / e.ry;
  return u * u + v * v - 1.0;
}

/// Axis-frame angle t in [0, 2pi) with w = (cx + rx cos t, ry sin t).
inline double angle_of(const Params& p, Complex w) {
  if (!(std::abs(omega_residual(p, w)) < 1e-6)) throw DomainError("angle_of: point is not on the ellipse");
  const OmegaEllipse e = omega(p);
  double t = std::atan2(w.imag() / e.ry, (w.real() - e.center_x) / e.rx);
  if (t < 0.0) t += 2.0 * std::numbers::pi;
  if (t >= 2.0 * std::numbers::pi) t = 0.0;
  return t;
}

struct GH {
  double g;
  double h;
};

/// Real and imaginary part of z at a finite x. Uses the reduced form
/// g = (x^2 - b f^2)/(x^2 + f^2), h = -(a+1) x f/(x^2 + f^2), divided
/// through by whichever of x^2, f^2 is larger so that nothing overflows.
inline GH gh_eval(const Params& p, double x) {
  const double a = p.a();
  const double b = p.b();
  if (is_pole(p, x)) return {-b, 0.0};
  const double f = eval_map(p, x).value();
  if (std::abs(x) >= std::abs(f)) {
    const double r = f / x;
    const double den = 1.0 + r * r;
    return {(1.0 - b * r * r) / den, -(a + 1.0) * r / den};
  }
  const double s = x / f;
  const double den = s * s + 1.0;
  return {(s * s - b) / den, -(a + 1.0) * s / den};
}

/// z(x); z(+-sqrt b) = -b and z(inf) = 1 exactly.
inline Complex z_eval(const Params& p, const ExtReal& x) {
  if (x.is_infinite()) return {1.0, 0.0};
  const GH v = gh_eval(p, x.value());
  return {v.g, v.h};
}

/// The rational form of z as polynomials in x: z = (G + iH)/D with
///   G = x^6 - 3b x^4 + (2a+b) b x^2 - a^2 b
///   H = (a+1)(-ab x + (a+b) x^3 - x^5)
///   D = x^6 + (1-2b) x^4 + (b^2-2a) x^2 + a^2.
struct ZPolynomials {
  Polynomial g_num;
  Polynomial h_num;
  Polynomial den;
};

inline ZPolynomials z_polynomials(const Params& p) {
  const double a = p.a();
  const double b = p.b();
  const double c = a + 1.0;
  return {
      Polynomial{-a * a * b, 0.0, (2.0 * a + b) * b, 0.0, -3.0 * b, 0.0, 1.0},
      Polynomial{0.0, -c * a * b, 0.0, c * (a + b), 0.0, -c},
      Polynomial{a * a, 0.0, b * b - 2.0 * a, 0.0, 1.0 - 2.0 * b, 0.0, 1.0},
  };
}

/// Direct evaluation of the expanded rational form (reference route).
inline Complex z_expanded(const Params& p, double x) {
  const ZPolynomials zp = z_polynomials(p);
  return Complex(zp.g_num(x), zp.h_num(x)) / zp.den(x);
}

/// dz/dx by the quotient rule on the expanded form.
inline Complex z_derivative(const Params& p, double x) {
  const ZPolynomials zp = z_polynomials(p);
  const double d = zp.den(x);
  const double dd = zp.den.derivative()(x);
  const Complex num(zp.g_num(x), zp.h_num(x));
  const Complex dnum(zp.g_num.derivative()(x), zp.h_num.derivative()(x));
  return (dnum * d - num * dd) / (d * d);
}

struct VertexImages {
  Complex fix_plus;   ///< image of solutions of f(x) = x
  Complex fix_minus;  ///< image of solutions of f(x) = -x
  Complex pole_img;   ///< image of +-sqrt(b) and of 0
  Complex zero_img;   ///< image of +-sqrt(a) and of inf
};

inline VertexImages vertex_images(const Params& p) {
  const double cx = 0.5 * (1.0 - p.b());
  const double ry = 0.5 * (1.0 + p.a());
  return {{cx, -ry}, {cx, ry}, {-p.b(), 0.0}, {1.0, 0.0}};
}

struct ShiftSolution {
  int outer_sign;  ///< sign in front of the outer square root
  int inner_sign;  ///< sign in front of the inner square root
  double x;
};

struct ShiftPoints {
  std::vector<ShiftSolution> solutions;
  int dropped = 0;  ///< sign combinations with a complex value
};

/// Closed-form solutions of z(x + 1) = z(x):
/// x = (-1 +- sqrt(1 + 6a - 2b +- 2 sqrt(4a + 9a^2 - 10ab + b^2)))/2.
inline ShiftPoints shift_points(const Params& p) {
  const double a = p.a();
  const double b = p.b();
  ShiftPoints out;
  const double disc = 4.0 * a + 9.0 * a * a - 10.0 * a * b + b * b;
  for (int inner : {1, -1}) {
    const double radicand = disc < 0.0 ? -1.0 : 1.0 + 6.0 * a - 2.0 * b + inner * 2.0 * std::sqrt(disc);
    for (int outer : {1, -1}) {
      if (disc < 0.0 || radicand < 0.0) {
        ++out.dropped;
        continue;
      }
      out.solutions.push_back({outer, inner, 0.5 * (-1.0 + outer * std::sqrt(radicand))});
    }
  }
  return out;
}

/// All x in [lo, hi] with |z(x) - w| < 1e-8, ascending.
///
/// Re z(x) = Re w is an even sextic in x, i.e. a cubic in u = x^2:
///   u(u-b)^2 - b(u-a)^2 - Re(w) (u(u-b)^2 + (u-a)^2) = 0.
/// Each nonnegative root gives candidates +-sqrt(u); the sign of h picks
/// between them, then a Gauss-Newton step on |z(x) - w|^2 polishes
/// double roots.
inline std::vector<double> z_preimages(const Params& p, Complex w, double lo, double hi) {
  if (!(std::abs(omega_residual(p, w)) < 1e-6)) throw DomainError("z_preimages: target is not on the ellipse");
  if (!(lo < hi)) throw std::invalid_argument("z_preimages: empty interval");
  const double a = p.a();
  const double b = p.b();
  const Polynomial ub{-b, 1.0};
  const Polynomial ua{-a, 1.0};
  const Polynomial u{0.0, 1.0};
  const Polynomial t1 = u * ub * ub;
  const Polynomial t2 = ua * ua;
  const Polynomial cubic = t1 - b * t2 - w.real() * (t1 + t2);

  const double umax = std::max(lo * lo, hi * hi);
  const double umin = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(lo * lo, hi * hi);
  const double slack = 1e-9 * std::max(1.0, umax);
  std::vector<double> candidates;
  for (double r : real_roots(cubic, std::max(0.0, umin - slack) - slack, umax + slack)) {
    const double x = std::sqrt(std::max(0.0, r));
    candidates.push_back(x);
    if (x != 0.0) candidates.push_back(-x);
  }

  std::vector<double> out;
  const double h_scale = 0.5 * (1.0 + a);
  for (double x : candidates) {
    const bool h_matters = std::abs(w.imag()) > 1e-6 * h_scale;
    if (h_matters && x != 0.0 && ((gh_eval(p, x).h > 0.0) != (w.imag() > 0.0))) continue;
    for (int it = 0; it < 32; ++it) {
      const Complex dz = z_derivative(p, x);
      const double n2 = std::norm(dz);
      if (n2 == 0.0) break;
      const Complex err = z_eval(p, x) - w;
      const double step = (std::conj(dz) * err).real() / n2;
      const double next = x - step;
      if (!(std::abs(z_eval(p, next) - w) < std::abs(err))) break;
      x = next;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    if (x < lo || x > hi) continue;
    if (!(std::abs(z_eval(p, x) - w) < 1e-8)) continue;
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  std::vector<double> merged;
  for (double x : out) {
    if (!merged.empty() && std::abs(x - merged.back()) <= 1e-9 * std::max(1.0, std::abs(x))) continue;
    merged.push_back(x);
  }
  return merged;
}

}  // namespace nrdyn
