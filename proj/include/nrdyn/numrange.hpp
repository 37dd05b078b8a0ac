#pragma once

// Small dense complex matrices and their numerical ranges.
//
// W(M) = { u*Mu : |u| = 1 }. Everything here is sized for n <= 4, so the
// matrix is a plain dense row-major buffer and the Hermitian eigenvalue
// problem is solved with cyclic Jacobi rotations.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nrdyn/errors.hpp"

namespace nrdyn {

using Complex = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  /// Row-major nested initializer; all rows must have the same length.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  [[nodiscard]] const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] ComplexMatrix adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  [[nodiscard]] Complex trace() const {
    require_square("trace");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  /// Square submatrix starting at (offset, offset).
  [[nodiscard]] ComplexMatrix block(std::size_t row, std::size_t col, std::size_t n) const {
    if (row + n > rows_ || col + n > cols_) throw DimensionError("block out of range");
    ComplexMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) = (*this)(row + i, col + j);
    return r;
  }

  [[nodiscard]] double frobenius_norm() const {
    double s = 0.0;
    for (const Complex& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  [[nodiscard]] bool is_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
  }

  friend ComplexMatrix operator+(const ComplexMatrix& x, const ComplexMatrix& y) {
    x.require_same_shape(y);
    ComplexMatrix r = x;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += y.data_[k];
    return r;
  }

  friend ComplexMatrix operator-(const ComplexMatrix& x, const ComplexMatrix& y) {
    x.require_same_shape(y);
    ComplexMatrix r = x;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= y.data_[k];
    return r;
  }

  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& x) {
    ComplexMatrix r = x;
    for (Complex& v : r.data_) v *= s;
    return r;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.cols_ != y.rows_) throw DimensionError("matrix product shape mismatch");
    ComplexMatrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const Complex xik = x(i, k);
        for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += xik * y(k, j);
      }
    return r;
  }

  friend bool operator==(const ComplexMatrix& x, const ComplexMatrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
  }

  void require_square(const char* what) const {
    if (!is_square()) throw DimensionError(std::string(what) + ": matrix is not square");
  }

 private:
  void require_same_shape(const ComplexMatrix& y) const {
    if (rows_ != y.rows_ || cols_ != y.cols_) throw DimensionError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline double max_abs_difference(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionError("matrix shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) m = std::max(m, std::abs(x(i, j) - y(i, j)));
  return m;
}

struct HermitianSplit {
  ComplexMatrix hermitian;
  ComplexMatrix skew;
};

/// H = (M + M*)/2, S = (M - M*)/2.
inline HermitianSplit hermitian_split(const ComplexMatrix& m) {
  m.require_square("hermitian_split");
  const ComplexMatrix ma = m.adjoint();
  return {0.5 * (m + ma), 0.5 * (m - ma)};
}

/// Eigenvalues of a Hermitian matrix, ascending. Closed form for n = 2,
/// cyclic Jacobi otherwise (off-diagonal norm driven below 1e-13 relative).
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  h.require_square("hermitian_eigenvalues");
  const std::size_t n = h.rows();
  if (n == 0) return {};
  if (n == 1) return {h(0, 0).real()};
  if (n == 2) {
    const double p = h(0, 0).real();
    const double q = h(1, 1).real();
    const double mean = 0.5 * (p + q);
    const double radius = std::hypot(0.5 * (p - q), std::abs(h(0, 1)));
    return {mean - radius, mean + radius};
  }

  ComplexMatrix a = h;
  const double scale = std::max(1.0, a.frobenius_norm());
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 64 && off_norm() > 1e-13 * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        // Phase-rotate the pair so the pivot is real, then apply the real
        // symmetric Jacobi rotation.
        const Complex phase = a(p, q) / r;
        const double alpha = a(p, p).real();
        const double beta = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * r, beta - alpha);
        const double c = std::cos(theta);
        const double s = std::sin(theta);

        ComplexMatrix u = ComplexMatrix::identity(n);
        const Complex dq = std::conj(phase);
        u(p, p) = c;
        u(p, q) = s;
        u(q, p) = -s * dq;
        u(q, q) = c * dq;
        a = u.adjoint() * a * u;
      }
    }
  }

  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// v*Mv / v*v.
inline Complex rayleigh(const ComplexMatrix& m, std::span<const Complex> v) {
  m.require_square("rayleigh");
  if (v.size() != m.rows()) throw DimensionError("rayleigh: vector length does not match matrix");
  double vv = 0.0;
  for (const Complex& c : v) vv += std::norm(c);
  if (vv == 0.0) throw DomainError("rayleigh: zero vector");
  Complex num = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Complex row = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) row += m(i, j) * v[j];
    num += std::conj(v[i]) * row;
  }
  return num / vv;
}

/// Elliptical disc in the complex plane. `semi_axis_u` runs along
/// direction `axis_angle`, `semi_axis_v` perpendicular to it. A zero
/// v-axis encodes a segment.
struct Ellipse2D {
  Complex center;
  double semi_axis_u = 0.0;
  double semi_axis_v = 0.0;
  double axis_angle = 0.0;
  std::array<Complex, 2> foci;

  [[nodiscard]] double semi_major() const { return std::max(semi_axis_u, semi_axis_v); }
  [[nodiscard]] double semi_minor() const { return std::min(semi_axis_u, semi_axis_v); }

  /// |focal half-distance^2 - (major^2 - minor^2)|.
  [[nodiscard]] double focal_defect() const {
    const double c = 0.5 * std::abs(foci[0] - foci[1]);
    return std::abs(c * c - (semi_major() * semi_major() - semi_minor() * semi_minor()));
  }

  /// Boundary point at parameter t (counterclockwise in the axis frame).
  [[nodiscard]] Complex point_at(double t) const {
    const Complex local(semi_axis_u * std::cos(t), semi_axis_v * std::sin(t));
    return center + local * std::polar(1.0, axis_angle);
  }
};

/// Eigenvalues of a 2x2 matrix from the characteristic quadratic.
inline std::array<Complex, 2> eigenvalues_2x2(const ComplexMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionError("eigenvalues_2x2: matrix is not 2x2");
  const Complex half_trace = 0.5 * m.trace();
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex root = std::sqrt(half_trace * half_trace - det);
  return {half_trace + root, half_trace - root};
}

/// W(M) for a 2x2 matrix: the elliptical disc with foci at the eigenvalues
/// and minor axis sqrt(tr(M*M) - |l1|^2 - |l2|^2).
inline Ellipse2D numerical_range_2x2(const ComplexMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionError("numerical_range_2x2: matrix is not 2x2");
  const auto lambda = eigenvalues_2x2(m);
  const double frob2 = m.frobenius_norm() * m.frobenius_norm();
  const double minor_full = std::sqrt(std::max(0.0, frob2 - std::norm(lambda[0]) - std::norm(lambda[1])));
  const Complex focal = lambda[0] - lambda[1];
  const double half_focal = 0.5 * std::abs(focal);

  Ellipse2D e;
  e.center = 0.5 * (lambda[0] + lambda[1]);
  e.semi_axis_v = 0.5 * minor_full;
  e.semi_axis_u = std::hypot(e.semi_axis_v, half_focal);
  e.axis_angle = half_focal > 0.0 ? std::arg(focal) : 0.0;
  e.foci = lambda;
  return e;
}

/// True iff w lies in the closed disc of e inflated by tol.
inline bool ellipse_contains(const Ellipse2D& e, Complex w, double tol) {
  const Complex local = (w - e.center) * std::polar(1.0, -e.axis_angle);
  const double su = e.semi_axis_u + tol;
  const double sv = e.semi_axis_v + tol;
  if (sv <= 0.0) return std::abs(local.imag()) <= tol && std::abs(local.real()) <= su;
  const double u = local.real() / su;
  const double v = local.imag() / sv;
  return u * u + v * v <= 1.0;
}

/// max over W(M) of Re(e^{-i theta} w) = lambda_max(cos(theta) H + sin(theta) (-i S)).
inline double support_function(const ComplexMatrix& m, double theta) {
  m.require_square("support_function");
  const auto [h, s] = hermitian_split(m);
  const ComplexMatrix pencil = Complex(std::cos(theta)) * h + Complex(0.0, -std::sin(theta)) * s;
  return hermitian_eigenvalues(pencil).back();
}

/// Support function sampled on equispaced angles in [0, 2pi).
struct SupportProfile {
  std::vector<double> angles;
  std::vector<double> values;

  /// Hull test: w is inside iff every supporting half-plane admits it.
  [[nodiscard]] bool contains(Complex w, double tol) const {
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const double proj = w.real() * std::cos(angles[k]) + w.imag() * std::sin(angles[k]);
      if (proj > values[k] + tol) return false;
    }
    return true;
  }
};

inline SupportProfile support_profile(const ComplexMatrix& m, std::size_t count = 720) {
  SupportProfile prof;
  prof.angles.reserve(count);
  prof.values.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    prof.angles.push_back(t);
    prof.values.push_back(support_function(m, t));
  }
  return prof;
}

/// Determinant by Gaussian elimination with partial pivoting.
inline Complex determinant(ComplexMatrix m) {
  m.require_square("determinant");
  const std::size_t n = m.rows();
  Complex det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (m(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex factor = m(r, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(r, j) -= factor * m(col, j);
    }
  }
  return det;
}

/// k(a1, a2, a3) = det(a1 H - i a2 S + a3 I). The line
/// a1 Re w + a2 Im w + a3 = 0 is tangent to the Kippenhahn curve of M
/// exactly when this vanishes.
inline Complex kippenhahn_eval(const ComplexMatrix& m, double a1, double a2, double a3) {
  m.require_square("kippenhahn_eval");
  const auto [h, s] = hermitian_split(m);
  const ComplexMatrix pencil =
      Complex(a1) * h + Complex(0.0, -a2) * s + Complex(a3) * ComplexMatrix::identity(m.rows());
  return determinant(pencil);
}

/// Coefficient matrix [[1, -a], [1, -b]] of (x^2 - a)/(x^2 - b).
inline ComplexMatrix coefficient_matrix(double a, double b) {
  return ComplexMatrix{{1.0, -a}, {1.0, -b}};
}

/// Sylvester resultant matrix of x^2 - a and x^2 - b; det = (a - b)^2.
inline ComplexMatrix resultant_matrix(double a, double b) {
  return ComplexMatrix{
      {1.0, 0.0, -a, 0.0},
      {0.0, 1.0, 0.0, -a},
      {1.0, 0.0, -b, 0.0},
      {0.0, 1.0, 0.0, -b},
  };
}

/// Permutation swapping the middle two coordinates.
inline ComplexMatrix block_permutation() {
  return ComplexMatrix{
      {1.0, 0.0, 0.0, 0.0},
      {0.0, 0.0, 1.0, 0.0},
      {0.0, 1.0, 0.0, 0.0},
      {0.0, 0.0, 0.0, 1.0},
  };
}

struct BlockDecomposition {
  ComplexMatrix unitary;
  ComplexMatrix top;
  ComplexMatrix bottom;
};

/// E*BE = diag(top, bottom) for a resultant-shaped B.
inline BlockDecomposition block_decompose(const ComplexMatrix& b) {
  if (b.rows() != 4 || b.cols() != 4) throw DimensionError("block_decompose: expected a 4x4 matrix");
  const ComplexMatrix e = block_permutation();
  const ComplexMatrix d = e.adjoint() * b * e;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 2; j < 4; ++j)
      if (d(i, j) != 0.0 || d(j, i) != 0.0)
        throw DimensionError("block_decompose: matrix is not of resultant shape");
  return {e, d.block(0, 0, 2), d.block(2, 2, 2)};
}

}  // namespace nrdyn
