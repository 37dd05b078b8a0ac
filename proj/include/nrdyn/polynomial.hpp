#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <utility>
#include <vector>

namespace nrdyn {

/// Dense real polynomial, coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  /// Degree of the zero polynomial is reported as 0.
  [[nodiscard]] std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  [[nodiscard]] const std::vector<double>& coefficients() const { return c_; }

  [[nodiscard]] double coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }

  [[nodiscard]] double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Sum of |c_k| |x|^k; the natural scale of rounding error in operator().
  [[nodiscard]] double magnitude(double x) const {
    double acc = 0.0;
    const double ax = std::abs(x);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * ax + std::abs(*it);
    return acc;
  }

  [[nodiscard]] Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<double> r(std::max(p.c_.size(), q.c_.size()), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = p.coefficient(k) + q.coefficient(k);
    return Polynomial(std::move(r));
  }

  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) {
    std::vector<double> r(std::max(p.c_.size(), q.c_.size()), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = p.coefficient(k) - q.coefficient(k);
    return Polynomial(std::move(r));
  }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<double> r(p.c_.size() + q.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.c_.size(); ++i)
      for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    return Polynomial(std::move(r));
  }

  friend Polynomial operator*(double s, const Polynomial& p) {
    std::vector<double> r = p.c_;
    for (double& v : r) v *= s;
    return Polynomial(std::move(r));
  }

  /// Synthetic division by (x - root). Returns quotient and remainder.
  [[nodiscard]] std::pair<Polynomial, double> deflate(double root) const {
    if (c_.size() <= 1) return {Polynomial{}, coefficient(0)};
    std::vector<double> q(c_.size() - 1);
    double carry = c_.back();
    for (std::size_t k = c_.size() - 1; k-- > 0;) {
      q[k] = carry;
      carry = c_[k] + carry * root;
    }
    return {Polynomial(std::move(q)), carry};
  }

  /// Cauchy bound: every root has modulus at most this value.
  [[nodiscard]] double root_bound() const {
    if (c_.size() <= 1) return 0.0;
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < c_.size(); ++k) m = std::max(m, std::abs(c_[k] / c_.back()));
    return 1.0 + m;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

namespace detail {

inline double bisect_root(const Polynomial& p, double lo, double hi) {
  double flo = p(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline void real_roots_rec(const Polynomial& p, double lo, double hi, std::vector<double>& out) {
  if (p.is_zero() || p.degree() == 0) return;
  if (p.degree() == 1) {
    const double r = -p.coefficient(0) / p.coefficient(1);
    if (r >= lo && r <= hi) out.push_back(r);
    return;
  }
  std::vector<double> crit;
  real_roots_rec(p.derivative(), lo, hi, crit);

  // p is monotone between consecutive critical points, so each piece holds
  // at most one simple root; even-multiplicity roots show up as critical
  // points where p touches zero.
  std::vector<double> knots;
  knots.reserve(crit.size() + 2);
  knots.push_back(lo);
  knots.insert(knots.end(), crit.begin(), crit.end());
  knots.push_back(hi);

  constexpr double touch_tol = 64.0 * std::numeric_limits<double>::epsilon();
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double u = knots[k];
    const double v = knots[k + 1];
    const double pu = p(u);
    const double pv = p(v);
    if (pu == 0.0) out.push_back(u);
    if ((pu < 0.0 && pv > 0.0) || (pu > 0.0 && pv < 0.0)) out.push_back(bisect_root(p, u, v));
  }
  if (p(hi) == 0.0) out.push_back(hi);
  for (double c : crit) {
    if (std::abs(p(c)) <= touch_tol * p.magnitude(c)) out.push_back(c);
  }
}

}  // namespace detail

/// All real roots of p in [lo, hi], ascending. Roots closer than a
/// relative 1e-12 are merged.
inline std::vector<double> real_roots(const Polynomial& p, double lo, double hi) {
  std::vector<double> roots;
  detail::real_roots_rec(p, lo, hi, roots);
  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (!merged.empty() && std::abs(r - merged.back()) <= 1e-12 * std::max(1.0, std::abs(r))) continue;
    merged.push_back(r);
  }
  return merged;
}

/// All real roots of p, ascending.
inline std::vector<double> real_roots(const Polynomial& p) {
  const double bound = p.root_bound();
  return real_roots(p, -bound, bound);
}

/// Newton refinement that only accepts steps reducing |p|.
inline double newton_polish(const Polynomial& p, double x, int max_iter = 8) {
  const Polynomial dp = p.derivative();
  double fx = p(x);
  for (int it = 0; it < max_iter && fx != 0.0; ++it) {
    const double d = dp(x);
    if (d == 0.0) break;
    const double next = x - fx / d;
    const double fn = p(next);
    if (!(std::abs(fn) < std::abs(fx))) break;
    x = next;
    fx = fn;
  }
  return x;
}

}  // namespace nrdyn
