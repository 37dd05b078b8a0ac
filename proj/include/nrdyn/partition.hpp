#pragma once

// Thirteen partition points x_1 < ... < x_13 of the real line, the
// interval alphabet I_1..I_14 they cut out, the arc alphabet J_1..J_14 on
// the ellipse, and the diagonal transfer matrix between them.
//
// Nine of the points solve g'(x) = 0:
//   x_1, x_13 = -+sqrt(u+),  x_2, x_12 = -+sqrt(a),  x_5, x_9 = -+sqrt(b),
//   x_6, x_8 = -+sqrt(u-),   x_7 = 0,
// where u-+ are the roots of the residual factor of g'. The remaining four
// are coincidence points: z(x_11) = z(x_1), z(x_10) = z(x_6),
// z(x_4) = z(x_8), z(x_3) = z(x_13).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "nrdyn/embedding.hpp"
#include "nrdyn/errors.hpp"
#include "nrdyn/polynomial.hpp"
#include "nrdyn/ratmap.hpp"

namespace nrdyn {

inline constexpr std::size_t kPartitionSize = 13;
inline constexpr int kAlphabetSize = 14;

namespace detail {

inline std::string params_tag(const Params& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(a=" << p.a() << ", b=" << p.b() << ")";
  return os.str();
}

inline double wrap_angle(double t) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  t = std::fmod(t, two_pi);
  if (t < 0.0) t += two_pi;
  return t;
}

}  // namespace detail

/// Numerator P'Q - PQ' of g'(x), where g = P/Q in expanded form.
inline Polynomial g_derivative_numerator(const Params& p) {
  const ZPolynomials zp = z_polynomials(p);
  return zp.g_num.derivative() * zp.den - zp.g_num * zp.den.derivative();
}

/// g'(x) from the factorization
///   P'Q - PQ' = 2(b+1) x (x^2-a)(x^2-b)(x^4 + (b-3a) x^2 + ab),
///   Q = x^2 (x^2-b)^2 + (x^2-a)^2,
/// which stays accurate where the expanded numerator cancels (a close to b).
inline double g_derivative(const Params& p, double x) {
  const double a = p.a();
  const double b = p.b();
  const double u = x * x;
  const double q = u * (u - b) * (u - b) + (u - a) * (u - a);
  return 2.0 * (b + 1.0) * x * (u - a) * (u - b) * (u * u + (b - 3.0 * a) * u + a * b) / (q * q);
}

/// The nine solutions of g'(x) = 0, ascending.
inline std::array<double, 9> g_critical_points(const Params& p) {
  const double a = p.a();
  const double b = p.b();
  const Polynomial num = g_derivative_numerator(p);

  // num is odd: num(x) = x R(x^2).
  std::vector<double> rc;
  for (std::size_t k = 1; k < num.coefficients().size(); k += 2) rc.push_back(num.coefficient(k));
  const Polynomial r_u(rc);

  // u = a and u = b are known roots (zeros and poles of f).
  auto [q1, rem1] = r_u.deflate(a);
  auto [q2, rem2] = q1.deflate(b);
  const double rel1 = std::abs(rem1) / std::max(1e-300, r_u.magnitude(a));
  const double rel2 = std::abs(rem2) / std::max(1e-300, q1.magnitude(b));
  if (rel1 > 1e-9 || rel2 > 1e-9)
    throw NumericalError("g_critical_points: deflation by u=a, u=b left a remainder " + detail::params_tag(p));

  const double upper = std::max(4.0 * a, 4.0 * (1.0 + a + b));
  std::vector<double> us;
  for (double u : real_roots(q2, 0.0, upper))
    if (u > 0.0) us.push_back(newton_polish(q2, u));
  if (us.size() != 2)
    throw StructuralError("g_critical_points: expected 2 positive residual roots, found " +
                          std::to_string(us.size()) + " " + detail::params_tag(p));

  const double sa = std::sqrt(a);
  const double sb = std::sqrt(b);
  const double s_lo = std::sqrt(us[0]);
  const double s_hi = std::sqrt(us[1]);
  std::array<double, 9> xs = {-s_hi, -sa, -sb, -s_lo, 0.0, s_lo, sb, sa, s_hi};
  if (!std::is_sorted(xs.begin(), xs.end()) || std::adjacent_find(xs.begin(), xs.end()) != xs.end())
    throw StructuralError("g_critical_points: critical points are not strictly ordered " + detail::params_tag(p));
  for (double x : xs) {
    if (!(std::abs(g_derivative(p, x)) < 1e-9))
      throw NumericalError("g_critical_points: residual |g'| above 1e-9 " + detail::params_tag(p));
  }
  return xs;
}

/// x_3, x_4, x_10, x_11 from the nine critical points.
inline std::array<double, 4> coincidence_points(const Params& p, const std::array<double, 9>& nine) {
  const double sa = std::sqrt(p.a());
  const double sb = std::sqrt(p.b());
  auto unique_in = [&](double source, double lo, double hi, const char* name) {
    const Complex target = z_eval(p, source);
    std::vector<double> found;
    for (double x : z_preimages(p, target, lo, hi))
      if (x > lo && x < hi) found.push_back(x);
    if (found.size() != 1)
      throw StructuralError(std::string("coincidence_points: ") + name + " has " + std::to_string(found.size()) +
                            " candidates " + detail::params_tag(p));
    return found.front();
  };
  // nine = {x1, x2, x5, x6, x7, x8, x9, x12, x13}
  const double x3 = unique_in(nine[8], -sa, -sb, "x3");
  const double x4 = unique_in(nine[5], -sa, -sb, "x4");
  const double x10 = unique_in(nine[3], sb, sa, "x10");
  const double x11 = unique_in(nine[0], sb, sa, "x11");
  return {x3, x4, x10, x11};
}

enum class PointKind { g_critical, coincidence };
enum class PointTag { zero_of_f, pole, origin, turning, coincidence };

struct PointRole {
  PointKind kind;
  PointTag tag;

  friend bool operator==(const PointRole&, const PointRole&) = default;
};

inline const char* to_string(PointTag t) {
  switch (t) {
    case PointTag::zero_of_f: return "zero-of-f";
    case PointTag::pole: return "pole";
    case PointTag::origin: return "origin";
    case PointTag::turning: return "turning";
    case PointTag::coincidence: return "coincidence";
  }
  return "?";
}

inline const char* to_string(PointKind k) { return k == PointKind::g_critical ? "g-critical" : "coincidence"; }

/// Partition points with their images on the ellipse. Indexing through
/// x(i), S(i) is 1-based to match the usual numbering.
struct PartitionPoints {
  std::array<double, kPartitionSize> xs{};
  std::array<Complex, kPartitionSize> Ss{};
  std::array<double, kPartitionSize> angles{};  ///< angle_of(S_i)
  std::array<PointRole, kPartitionSize> roles{};

  [[nodiscard]] double x(int i) const { return xs.at(static_cast<std::size_t>(i - 1)); }
  [[nodiscard]] Complex S(int i) const { return Ss.at(static_cast<std::size_t>(i - 1)); }
  [[nodiscard]] double angle(int i) const { return angles.at(static_cast<std::size_t>(i - 1)); }
};

inline constexpr std::array<PointRole, kPartitionSize> kRoles = {{
    {PointKind::g_critical, PointTag::turning},
    {PointKind::g_critical, PointTag::zero_of_f},
    {PointKind::coincidence, PointTag::coincidence},
    {PointKind::coincidence, PointTag::coincidence},
    {PointKind::g_critical, PointTag::pole},
    {PointKind::g_critical, PointTag::turning},
    {PointKind::g_critical, PointTag::origin},
    {PointKind::g_critical, PointTag::turning},
    {PointKind::g_critical, PointTag::pole},
    {PointKind::coincidence, PointTag::coincidence},
    {PointKind::coincidence, PointTag::coincidence},
    {PointKind::g_critical, PointTag::zero_of_f},
    {PointKind::g_critical, PointTag::turning},
}};

/// Fill S_i and angles from xs. Throws if some S_i is off the ellipse.
inline void refresh_images(const Params& p, PartitionPoints& pp) {
  for (std::size_t i = 0; i < kPartitionSize; ++i) {
    pp.Ss[i] = z_eval(p, pp.xs[i]);
    pp.angles[i] = angle_of(p, pp.Ss[i]);
  }
}

inline PartitionPoints build_partition(const Params& p) {
  const auto nine = g_critical_points(p);
  const auto four = coincidence_points(p, nine);
  PartitionPoints pp;
  pp.xs = {nine[0], nine[1], four[0], four[1], nine[2], nine[3], nine[4],
           nine[5], nine[6], four[2], four[3], nine[7], nine[8]};
  pp.roles = kRoles;
  for (std::size_t i = 0; i + 1 < kPartitionSize; ++i) {
    if (!(pp.xs[i] < pp.xs[i + 1]))
      throw StructuralError("build_partition: x_" + std::to_string(i + 1) + " >= x_" + std::to_string(i + 2) + " " +
                            detail::params_tag(p));
  }
  refresh_images(p, pp);
  constexpr std::array<std::array<int, 2>, 4> pairs{{{1, 11}, {6, 10}, {8, 4}, {13, 3}}};
  for (const auto& [i, j] : pairs) {
    if (!(std::abs(pp.S(i) - pp.S(j)) < 1e-8))
      throw StructuralError("build_partition: z(x_" + std::to_string(i) + ") != z(x_" + std::to_string(j) + ") " +
                            detail::params_tag(p));
  }
  return pp;
}

enum class Alphabet { interval, arc };

/// A letter of I_1..I_14 (or J_1..J_14), or a marker for an orbit point
/// that sits exactly on a partition point (boundary) or at inf (junction
/// between the first and last letters).
template <Alphabet A>
struct Symbol {
  enum class Kind : std::uint8_t { cell, boundary, junction };

  Kind kind = Kind::cell;
  int index = 1;  ///< 1..14 for cells, 1..13 for boundaries, 0 for the junction

  static Symbol cell(int i) { return {Kind::cell, i}; }
  static Symbol boundary(int i) { return {Kind::boundary, i}; }
  static Symbol junction() { return {Kind::junction, 0}; }

  [[nodiscard]] bool is_cell() const { return kind == Kind::cell; }

  [[nodiscard]] std::string to_string() const {
    constexpr bool arc = A == Alphabet::arc;
    switch (kind) {
      case Kind::cell: return (arc ? "J" : "I") + std::to_string(index);
      case Kind::boundary: return (arc ? "S" : "x") + std::to_string(index);
      case Kind::junction: return arc ? "Sinf" : "inf";
    }
    return "?";
  }

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

using SymbolI = Symbol<Alphabet::interval>;
using SymbolJ = Symbol<Alphabet::arc>;

/// |x - x_i| < 1e-10 max(1, |x_i|) counts as sitting on x_i.
inline bool on_boundary(double x, double xi) { return std::abs(x - xi) < 1e-10 * std::max(1.0, std::abs(xi)); }

inline SymbolI classify_pa(const PartitionPoints& pp, const ExtReal& x) {
  if (x.is_infinite()) return SymbolI::junction();
  const double v = x.value();
  const auto it = std::upper_bound(pp.xs.begin(), pp.xs.end(), v);
  const auto idx = static_cast<int>(it - pp.xs.begin());  // number of x_i <= v
  if (idx > 0 && on_boundary(v, pp.xs[static_cast<std::size_t>(idx - 1)])) return SymbolI::boundary(idx);
  if (idx < static_cast<int>(kPartitionSize) && on_boundary(v, pp.xs[static_cast<std::size_t>(idx)]))
    return SymbolI::boundary(idx + 1);
  return SymbolI::cell(idx + 1);
}

/// Orientation of z on each I_i: +1 counterclockwise, -1 clockwise.
inline constexpr std::array<int, kAlphabetSize> sign_table() {
  return {1, -1, -1, -1, -1, -1, 1, 1, -1, -1, -1, -1, -1, 1};
}

inline int sign_of(int i) { return sign_table().at(static_cast<std::size_t>(i - 1)); }

/// Counterclockwise arc [start, start + span] in angle coordinates.
struct Arc {
  double start = 0.0;
  double span = 0.0;

  [[nodiscard]] bool contains(double t, double tol) const {
    const double off = detail::wrap_angle(t - start);
    return off <= span + tol || off >= 2.0 * std::numbers::pi - tol;
  }
};

/// J_i as a counterclockwise arc. Its endpoints are z(x_{i-1}) and z(x_i)
/// (z(inf) standing in for x_0 and x_14); for clockwise letters the
/// counterclockwise arc runs from z(x_i) back to z(x_{i-1}), so that J_i is
/// the arc z actually sweeps over I_i.
inline Arc arc_of(const PartitionPoints& pp, int i) {
  const double from = i == 1 ? 0.0 : pp.angle(i - 1);
  const double to = i == kAlphabetSize ? 0.0 : pp.angle(i);
  const double s = sign_of(i) > 0 ? from : to;
  const double e = sign_of(i) > 0 ? to : from;
  return {s, detail::wrap_angle(e - s)};
}

/// Set of arc indices, bit i set for J_i.
class ArcSet {
 public:
  void insert(int i) { bits_ |= static_cast<std::uint16_t>(1u << i); }
  [[nodiscard]] bool contains(int i) const { return (bits_ >> i) & 1u; }
  [[nodiscard]] bool empty() const { return bits_ == 0; }
  [[nodiscard]] std::vector<int> indices() const {
    std::vector<int> out;
    for (int i = 1; i <= kAlphabetSize; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }
  friend bool operator==(const ArcSet&, const ArcSet&) = default;

 private:
  std::uint16_t bits_ = 0;
};

inline constexpr double kArcTolerance = 1e-9;

/// Every J_i whose closed arc contains w.
inline ArcSet arc_membership(const Params& p, const PartitionPoints& pp, Complex w) {
  const double t = angle_of(p, w);
  ArcSet set;
  for (int i = 1; i <= kAlphabetSize; ++i)
    if (arc_of(pp, i).contains(t, kArcTolerance)) set.insert(i);
  return set;
}

/// diag(N_7, N_7) with N_7 = diag(1, -1, -1, -1, -1, -1, 1).
struct TransferMatrix {
  std::array<int, kAlphabetSize> signs{};

  [[nodiscard]] int entry(int i, int j) const {
    return i == j ? signs.at(static_cast<std::size_t>(i - 1)) : 0;
  }

  /// Dense integer product with another 14x14 matrix.
  [[nodiscard]] std::array<std::array<long long, kAlphabetSize>, kAlphabetSize> times(const TransferMatrix& o) const {
    std::array<std::array<long long, kAlphabetSize>, kAlphabetSize> r{};
    for (int i = 1; i <= kAlphabetSize; ++i)
      for (int j = 1; j <= kAlphabetSize; ++j) {
        long long s = 0;
        for (int k = 1; k <= kAlphabetSize; ++k) s += static_cast<long long>(entry(i, k)) * o.entry(k, j);
        r[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = s;
      }
    return r;
  }

  [[nodiscard]] bool is_involutory() const {
    const auto sq = times(*this);
    for (std::size_t i = 0; i < sq.size(); ++i)
      for (std::size_t j = 0; j < sq.size(); ++j)
        if (sq[i][j] != (i == j ? 1 : 0)) return false;
    return true;
  }

  [[nodiscard]] long long determinant() const {
    long long d = 1;
    for (int s : signs) d *= s;
    return d;
  }

  [[nodiscard]] long long trace() const {
    long long t = 0;
    for (int s : signs) t += s;
    return t;
  }
};

inline TransferMatrix t_matrix() { return {sign_table()}; }

struct PartitionReport {
  bool ordering = false;
  std::array<double, 4> coincidence_residuals{};  ///< |z(x1)-z(x11)|, |z(x6)-z(x10)|, |z(x8)-z(x4)|, |z(x13)-z(x3)|
  bool coincidences = false;
  double anchor_residual = 0.0;  ///< vertex and conjugate-pair identities
  bool anchors = false;
  bool arc_coverage = false;
  bool orientation = false;
  std::vector<std::string> failures;

  [[nodiscard]] bool ok() const { return ordering && coincidences && anchors && arc_coverage && orientation; }
};

/// 32 interior sample points of I_i, ascending.
inline std::vector<double> interval_samples(const PartitionPoints& pp, int i, int count = 32) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(count));
  const double half_pi = 0.5 * std::numbers::pi;
  for (int k = 1; k <= count; ++k) {
    const double s = static_cast<double>(k) / (count + 1);
    if (i == 1) {
      const double scale = std::max(1.0, std::abs(pp.x(1)));
      xs.push_back(pp.x(1) - scale * std::tan(half_pi * (1.0 - s)));
    } else if (i == kAlphabetSize) {
      const double scale = std::max(1.0, std::abs(pp.x(13)));
      xs.push_back(pp.x(13) + scale * std::tan(half_pi * s));
    } else {
      xs.push_back(pp.x(i - 1) + s * (pp.x(i) - pp.x(i - 1)));
    }
  }
  return xs;
}

inline PartitionReport verify_partition(const Params& p, const PartitionPoints& pp) {
  PartitionReport rep;

  rep.ordering = true;
  for (std::size_t i = 0; i + 1 < kPartitionSize; ++i) {
    if (!(pp.xs[i] < pp.xs[i + 1])) {
      rep.ordering = false;
      rep.failures.push_back("ordering: x_" + std::to_string(i + 1) + " >= x_" + std::to_string(i + 2));
    }
  }

  auto zx = [&](int i) { return z_eval(p, pp.x(i)); };
  constexpr std::array<std::array<int, 2>, 4> pairs{{{1, 11}, {6, 10}, {8, 4}, {13, 3}}};
  rep.coincidences = true;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    rep.coincidence_residuals[k] = std::abs(zx(pairs[k][0]) - zx(pairs[k][1]));
    if (!(rep.coincidence_residuals[k] < 1e-8)) {
      rep.coincidences = false;
      rep.failures.push_back("coincidence: z(x_" + std::to_string(pairs[k][0]) + ") != z(x_" +
                             std::to_string(pairs[k][1]) + ")");
    }
  }

  const Complex right(1.0, 0.0);
  const Complex left(-p.b(), 0.0);
  const std::array<double, 7> anchor = {
      std::abs(zx(2) - right),  std::abs(zx(12) - right),
      std::abs(zx(5) - left),   std::abs(zx(7) - left),
      std::abs(zx(9) - left),   std::abs(zx(1) - std::conj(zx(13))),
      std::abs(zx(6) - std::conj(zx(8))),
  };
  rep.anchor_residual = *std::max_element(anchor.begin(), anchor.end());
  rep.anchors = rep.anchor_residual < 1e-9;
  if (!rep.anchors) rep.failures.push_back("anchors: vertex or conjugate identity violated");

  rep.arc_coverage = true;
  rep.orientation = true;
  for (int i = 1; i <= kAlphabetSize; ++i) {
    const Arc arc = arc_of(pp, i);
    const int dir = sign_of(i);
    double prev = 0.0;
    bool first = true;
    bool covered = true;
    bool monotone = true;
    for (double x : interval_samples(pp, i)) {
      double t = 0.0;
      try {
        t = angle_of(p, z_eval(p, x));
      } catch (const DomainError&) {
        covered = false;
        continue;
      }
      if (!arc.contains(t, kArcTolerance)) covered = false;
      if (!first) {
        double d = detail::wrap_angle(t - prev);
        if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
        if (!(d * dir > 0.0)) monotone = false;
      }
      prev = t;
      first = false;
    }
    if (!covered) {
      rep.arc_coverage = false;
      rep.failures.push_back("arc coverage: z(I_" + std::to_string(i) + ") leaves J_" + std::to_string(i));
    }
    if (!monotone) {
      rep.orientation = false;
      rep.failures.push_back("orientation: z is not monotone on I_" + std::to_string(i) + " in direction " +
                             std::to_string(dir));
    }
  }
  return rep;
}

}  // namespace nrdyn
