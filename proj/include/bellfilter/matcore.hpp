#pragma once

// Fixed-size complex linear algebra for two-qubit work: 2x2 and 4x4
// operators, 4-component state vectors, a cyclic Jacobi Hermitian
// eigensolver and a Takagi factorization. Basis order is |00>, |01>,
// |10>, |11> throughout; the first tensor factor is qubit A.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "bellfilter/config.hpp"

namespace bellfilter {

using cplx = std::complex<double>;
inline constexpr cplx I_unit{0.0, 1.0};

template <std::size_t N>
struct Vec {
  std::array<cplx, N> v{};

  constexpr cplx& operator[](std::size_t i) { return v[i]; }
  constexpr const cplx& operator[](std::size_t i) const { return v[i]; }
  static constexpr std::size_t size() { return N; }

  Vec& operator+=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) v[i] -= o.v[i];
    return *this;
  }
  Vec& operator*=(cplx s) {
    for (auto& x : v) x *= s;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(cplx s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, cplx s) { return a *= s; }
  friend Vec operator/(Vec a, cplx s) { return a *= (1.0 / s); }
  friend Vec operator-(Vec a) { return a *= -1.0; }

  [[nodiscard]] Vec conj() const {
    Vec r;
    for (std::size_t i = 0; i < N; ++i) r.v[i] = std::conj(v[i]);
    return r;
  }
  [[nodiscard]] double norm() const {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
  }
  static Vec basis(std::size_t i) {
    Vec r;
    r.v[i] = 1.0;
    return r;
  }
};

/// Row-major N x N complex matrix.
template <std::size_t N>
struct Mat {
  std::array<cplx, N * N> a{};

  constexpr cplx& operator()(std::size_t r, std::size_t c) { return a[r * N + c]; }
  constexpr const cplx& operator()(std::size_t r, std::size_t c) const { return a[r * N + c]; }
  static constexpr std::size_t size() { return N; }

  static Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat diagonal(const std::array<cplx, N>& d) {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }
  static Mat diagonal(const std::array<double, N>& d) {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }
  /// Matrix whose columns are the given vectors.
  static Mat from_columns(const std::array<Vec<N>, N>& cols) {
    Mat m;
    for (std::size_t c = 0; c < N; ++c)
      for (std::size_t r = 0; r < N; ++r) m(r, c) = cols[c][r];
    return m;
  }

  [[nodiscard]] Vec<N> column(std::size_t c) const {
    Vec<N> x;
    for (std::size_t r = 0; r < N; ++r) x[r] = (*this)(r, c);
    return x;
  }
  void set_column(std::size_t c, const Vec<N>& x) {
    for (std::size_t r = 0; r < N; ++r) (*this)(r, c) = x[r];
  }

  Mat& operator+=(const Mat& o) {
    for (std::size_t i = 0; i < N * N; ++i) a[i] += o.a[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (std::size_t i = 0; i < N * N; ++i) a[i] -= o.a[i];
    return *this;
  }
  Mat& operator*=(cplx s) {
    for (auto& x : a) x *= s;
    return *this;
  }
  friend Mat operator+(Mat x, const Mat& y) { return x += y; }
  friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
  friend Mat operator*(cplx s, Mat x) { return x *= s; }
  friend Mat operator*(Mat x, cplx s) { return x *= s; }
  friend Mat operator/(Mat x, cplx s) { return x *= (1.0 / s); }

  friend Mat operator*(const Mat& x, const Mat& y) {
    Mat r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx xik = x(i, k);
        if (xik == cplx{}) continue;
        for (std::size_t j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
      }
    return r;
  }
  friend Vec<N> operator*(const Mat& m, const Vec<N>& x) {
    Vec<N> r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r[i] += m(i, j) * x[j];
    return r;
  }

  [[nodiscard]] Mat adjoint() const {
    Mat r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }
  [[nodiscard]] Mat transpose() const {
    Mat r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(i, j) = (*this)(j, i);
    return r;
  }
  [[nodiscard]] Mat conj() const {
    Mat r;
    for (std::size_t i = 0; i < N * N; ++i) r.a[i] = std::conj(a[i]);
    return r;
  }
  [[nodiscard]] cplx trace() const {
    cplx t{};
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }
  [[nodiscard]] double frobenius() const {
    double s = 0.0;
    for (const auto& x : a) s += std::norm(x);
    return std::sqrt(s);
  }
  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for (const auto& x : a) m = std::max(m, std::abs(x));
    return m;
  }
  /// (M + M^dagger) / 2.
  [[nodiscard]] Mat hermitian_part() const { return 0.5 * (*this + adjoint()); }
};

using CVec4 = Vec<4>;
using CMat2 = Mat<2>;
using CMat4 = Mat<4>;

// ---------------------------------------------------------------------------
// Vector helpers

/// <u|v>, antilinear in the first argument.
template <std::size_t N>
cplx inner(const Vec<N>& u, const Vec<N>& v) {
  cplx s{};
  for (std::size_t i = 0; i < N; ++i) s += std::conj(u[i]) * v[i];
  return s;
}

/// |u><v|.
template <std::size_t N>
Mat<N> outer(const Vec<N>& u, const Vec<N>& v) {
  Mat<N> m;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

template <std::size_t N>
double max_abs_diff(const Mat<N>& x, const Mat<N>& y) {
  return (x - y).max_abs();
}

// ---------------------------------------------------------------------------
// Spin flip

/// sigma_2 = [[0, -i], [i, 0]].
CMat2 sigma_y();
/// The Pauli matrices sigma_1, sigma_2, sigma_3.
const std::array<CMat2, 3>& pauli();
/// sigma_2 (x) sigma_2; real, symmetric and involutive.
const CMat4& spin_flip();

/// |v~> = (sigma_2 (x) sigma_2) |v*>.
CVec4 tilde_state(const CVec4& v);
/// M~ = (sigma_2 (x) sigma_2) M* (sigma_2 (x) sigma_2).
CMat4 tilde_op(const CMat4& m);
/// Bilinear spin-flip form u^T (sigma_2 (x) sigma_2) v. Note <u|v~> = conj of this.
cplx flip_form(const CVec4& u, const CVec4& v);
/// |<v|v~>| / <v|v>; throws on the zero vector.
double vec_concurrence(const CVec4& v);

// ---------------------------------------------------------------------------
// Tensor structure

enum class Subsystem { A, B };

CMat4 kron(const CMat2& a, const CMat2& b);
CVec4 kron(const Vec<2>& a, const Vec<2>& b);
/// Traces out `traced` and returns the reduced operator of the other qubit.
CMat2 partial_trace(const CMat4& m, Subsystem traced);

// ---------------------------------------------------------------------------
// Eigen / square root / Takagi

template <std::size_t N>
struct HermEig {
  std::array<double, N> values{};  ///< Descending.
  Mat<N> vectors;                  ///< Orthonormal eigenvectors as columns.
};

/// Cyclic Jacobi on a Hermitian matrix. Throws Error(invalid_input) when
/// ||M - M^dagger|| exceeds cfg.hermiticity * max(1, ||M||).
template <std::size_t N>
HermEig<N> herm_eig(const Mat<N>& m, const NumericConfig& cfg = {});

/// Hermitian PSD square root; eigenvalues in [-negative_eigenvalue, 0) are
/// clamped to zero, anything more negative throws.
template <std::size_t N>
Mat<N> psd_sqrt(const Mat<N>& m, const NumericConfig& cfg = {});

template <std::size_t N>
struct Takagi {
  Mat<N> unitary;                  ///< U with U S U^T = diag(values).
  std::array<double, N> values{};  ///< Nonnegative, descending.
};

/// Takagi factorization of a complex symmetric matrix. Throws
/// Error(invalid_input) if ||S - S^T|| exceeds the hermiticity tolerance.
template <std::size_t N>
Takagi<N> takagi(const Mat<N>& s, const NumericConfig& cfg = {});

}  // namespace bellfilter
