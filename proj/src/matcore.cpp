#include "bellfilter/matcore.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace bellfilter {

CMat2 sigma_y() {
  CMat2 s;
  s(0, 1) = -I_unit;
  s(1, 0) = I_unit;
  return s;
}

const std::array<CMat2, 3>& pauli() {
  static const std::array<CMat2, 3> p = [] {
    CMat2 x, z;
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return std::array<CMat2, 3>{x, sigma_y(), z};
  }();
  return p;
}

const CMat4& spin_flip() {
  static const CMat4 yy = kron(sigma_y(), sigma_y());
  return yy;
}

CVec4 tilde_state(const CVec4& v) { return spin_flip() * v.conj(); }

CMat4 tilde_op(const CMat4& m) {
  const CMat4& yy = spin_flip();
  return yy * m.conj() * yy;
}

cplx flip_form(const CVec4& u, const CVec4& v) {
  // u^T (sigma_2 x sigma_2) v; the flip matrix is real so this equals conj(<u|v~>).
  const CVec4 yv = spin_flip() * v;
  cplx s{};
  for (std::size_t i = 0; i < 4; ++i) s += u[i] * yv[i];
  return s;
}

double vec_concurrence(const CVec4& v) {
  const double nn = inner(v, v).real();
  if (!(nn > 0.0)) throw Error(ErrorKind::invalid_input, "concurrence of the zero vector");
  return std::abs(flip_form(v, v)) / nn;
}

CMat4 kron(const CMat2& a, const CMat2& b) {
  CMat4 m;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return m;
}

CVec4 kron(const Vec<2>& a, const Vec<2>& b) {
  CVec4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) r[2 * i + k] = a[i] * b[k];
  return r;
}

CMat2 partial_trace(const CMat4& m, Subsystem traced) {
  CMat2 r;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t t = 0; t < 2; ++t) {
        if (traced == Subsystem::A)
          r(x, y) += m(2 * t + x, 2 * t + y);
        else
          r(x, y) += m(2 * x + t, 2 * y + t);
      }
  return r;
}

namespace {

template <std::size_t N>
void check_hermitian(const Mat<N>& m, const NumericConfig& cfg) {
  const double scale = std::max(1.0, m.max_abs());
  const double defect = (m - m.adjoint()).max_abs();
  if (!(defect <= cfg.hermiticity * scale)) {
    std::ostringstream os;
    os << "matrix is not Hermitian (defect " << defect << ")";
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

template <std::size_t N>
double off_diagonal_norm(const Mat<N>& a) {
  double s = 0.0;
  for (std::size_t p = 0; p < N; ++p)
    for (std::size_t q = 0; q < N; ++q)
      if (p != q) s += std::norm(a(p, q));
  return std::sqrt(s);
}

// One complex Jacobi rotation G = [[c, s e^{i phi}], [-s e^{-i phi}, c]]
// in the (p, q) plane, applied as A <- G^dagger A G and V <- V G.
template <std::size_t N>
void jacobi_rotate(Mat<N>& a, Mat<N>& v, std::size_t p, std::size_t q) {
  const cplx apq = a(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const cplx ph = apq / g;
  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const cplx gpq = s * ph;             // G(p, q)
  const cplx gqp = -s * std::conj(ph); // G(q, p)

  for (std::size_t k = 0; k < N; ++k) {
    const cplx akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * c + akq * gqp;
    a(k, q) = akp * gpq + akq * c;
    const cplx vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * c + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * c;
  }
  for (std::size_t k = 0; k < N; ++k) {
    const cplx apk = a(p, k), aqk = a(q, k);
    a(p, k) = c * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

template <std::size_t N>
HermEig<N> herm_eig(const Mat<N>& m, const NumericConfig& cfg) {
  check_hermitian(m, cfg);
  Mat<N> a = m.hermitian_part();
  Mat<N> v = Mat<N>::identity();
  const double threshold = cfg.jacobi_threshold * a.frobenius();

  constexpr int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) break;
    if (cfg.sweep == SweepOrder::forward) {
      for (std::size_t p = 0; p + 1 < N; ++p)
        for (std::size_t q = p + 1; q < N; ++q) jacobi_rotate(a, v, p, q);
    } else {
      for (std::size_t p = N - 1; p-- > 0;)
        for (std::size_t q = N; q-- > p + 1;) jacobi_rotate(a, v, p, q);
    }
  }

  std::array<std::size_t, N> order;
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  HermEig<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    out.vectors.set_column(k, v.column(order[k]));
  }
  return out;
}

template <std::size_t N>
Mat<N> psd_sqrt(const Mat<N>& m, const NumericConfig& cfg) {
  const HermEig<N> e = herm_eig(m, cfg);
  const double scale = std::max(1.0, std::abs(e.values[0]));
  Mat<N> r;
  for (std::size_t k = 0; k < N; ++k) {
    double lam = e.values[k];
    if (lam < 0.0) {
      if (lam < -cfg.negative_eigenvalue * scale) {
        std::ostringstream os;
        os << "matrix is not positive semidefinite (eigenvalue " << lam << ")";
        throw Error(ErrorKind::invalid_input, os.str());
      }
      lam = 0.0;
    }
    const Vec<N> col = e.vectors.column(k);
    r += std::sqrt(lam) * outer(col, col);
  }
  return r.hermitian_part();
}

template <std::size_t N>
Takagi<N> takagi(const Mat<N>& s, const NumericConfig& cfg) {
  const double scale = std::max(1.0, s.max_abs());
  const double defect = (s - s.transpose()).max_abs();
  if (!(defect <= cfg.hermiticity * scale)) {
    std::ostringstream os;
    os << "matrix is not symmetric (defect " << defect << ")";
    throw Error(ErrorKind::invalid_input, os.str());
  }
  const Mat<N> sym = 0.5 * (s + s.transpose());

  // S w = d conj(w) with w = u + i v  <=>  K [u; v] = d [u; v],
  // K = [[Re S, -Im S], [-Im S, -Re S]]. Spectrum of K is {+d_i, -d_i}.
  Mat<2 * N> k;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const double x = sym(i, j).real(), y = sym(i, j).imag();
      k(i, j) = x;
      k(i, j + N) = -y;
      k(i + N, j) = -y;
      k(i + N, j + N) = -x;
    }
  const HermEig<2 * N> ke = herm_eig(k, cfg);

  const double dmax = std::max(ke.values[0], 0.0);
  const double zero_cut = 1e-12 * std::max(dmax, std::numeric_limits<double>::min());

  // Columns w_i, orthonormalized; directions with d ~ 0 are completed from
  // the standard basis (any orthonormal completion is a valid Takagi basis).
  std::array<Vec<N>, N> w{};
  std::size_t filled = 0;
  auto add_orthonormal = [&](Vec<N> x) {
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t j = 0; j < filled; ++j) x -= inner(w[j], x) * w[j];
    const double nx = x.norm();
    if (nx < 1e-8) return false;
    w[filled++] = x / nx;
    return true;
  };
  for (std::size_t i = 0; i < N && filled < N; ++i) {
    if (!(ke.values[i] > zero_cut)) break;
    Vec<N> x;
    for (std::size_t r = 0; r < N; ++r)
      x[r] = cplx(ke.vectors(r, i).real(), ke.vectors(r + N, i).real());
    add_orthonormal(x);
  }
  while (filled < N) {
    // Pick the basis vector with the largest component outside span(w).
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t e = 0; e < N; ++e) {
      Vec<N> x = Vec<N>::basis(e);
      for (std::size_t j = 0; j < filled; ++j) x -= inner(w[j], x) * w[j];
      if (x.norm() > best_norm + 1e-12) {
        best_norm = x.norm();
        best = e;
      }
    }
    add_orthonormal(Vec<N>::basis(best));
  }

  // Fix phases so that w_i^T S w_i is real nonnegative and read off d_i.
  std::array<double, N> d{};
  for (std::size_t i = 0; i < N; ++i) {
    cplx mii{};
    const Vec<N> sw = sym * w[i];
    for (std::size_t r = 0; r < N; ++r) mii += w[i][r] * sw[r];
    d[i] = std::abs(mii);
    if (d[i] > 0.0) w[i] *= std::exp(-0.5 * I_unit * std::arg(mii));
  }
  std::array<std::size_t, N> order;
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] > d[j]; });

  Takagi<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out.values[i] = d[order[i]];
    // U = W^T: row i of U is w_i.
    for (std::size_t r = 0; r < N; ++r) out.unitary(i, r) = w[order[i]][r];
  }
  return out;
}

template HermEig<1> herm_eig<1>(const Mat<1>&, const NumericConfig&);
template HermEig<2> herm_eig<2>(const Mat<2>&, const NumericConfig&);
template HermEig<3> herm_eig<3>(const Mat<3>&, const NumericConfig&);
template HermEig<4> herm_eig<4>(const Mat<4>&, const NumericConfig&);
template HermEig<6> herm_eig<6>(const Mat<6>&, const NumericConfig&);
template HermEig<8> herm_eig<8>(const Mat<8>&, const NumericConfig&);
template Mat<2> psd_sqrt<2>(const Mat<2>&, const NumericConfig&);
template Mat<4> psd_sqrt<4>(const Mat<4>&, const NumericConfig&);
template Takagi<1> takagi<1>(const Mat<1>&, const NumericConfig&);
template Takagi<2> takagi<2>(const Mat<2>&, const NumericConfig&);
template Takagi<3> takagi<3>(const Mat<3>&, const NumericConfig&);
template Takagi<4> takagi<4>(const Mat<4>&, const NumericConfig&);

}  // namespace bellfilter
