#include "bellfilter/wootters.hpp"

#include <algorithm>
#include <sstream>

namespace bellfilter {

DensityMatrix load_density(const CMat4& matrix, const NumericConfig& cfg) {
  for (const auto& z : matrix.a)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorKind::invalid_input, "density matrix has non-finite entries");

  DensityMatrix dm;
  dm.hermiticity_defect = (matrix - matrix.adjoint()).max_abs();
  if (dm.hermiticity_defect > cfg.hermiticity) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (defect " << dm.hermiticity_defect << ")";
    throw Error(ErrorKind::invalid_input, os.str());
  }
  CMat4 rho = matrix.hermitian_part();
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > cfg.trace_defect) {
    std::ostringstream os;
    os << "density matrix trace is " << tr << ", expected 1";
    throw Error(ErrorKind::invalid_input, os.str());
  }
  rho *= 1.0 / tr;

  const HermEig<4> e = herm_eig(rho, cfg);
  dm.min_eigenvalue = e.values[3];
  if (dm.min_eigenvalue < -cfg.negative_eigenvalue) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << dm.min_eigenvalue;
    throw Error(ErrorKind::invalid_input, os.str());
  }
  dm.rho = rho;
  dm.eigenvalues = e.values;
  dm.eigenvectors = e.vectors;
  const double cut = cfg.rank_cutoff * e.values[0];
  dm.rank = static_cast<int>(std::count_if(e.values.begin(), e.values.end(),
                                           [cut](double v) { return v > cut; }));
  return dm;
}

CMat4 r_matrix(const DensityMatrix& rho, const NumericConfig& cfg) {
  const CMat4 s = psd_sqrt(rho.rho, cfg);
  const CMat4 inner_prod = (s * tilde_op(rho.rho) * s).hermitian_part();
  return psd_sqrt(inner_prod, cfg);
}

std::array<double, 4> r_spectrum(const DensityMatrix& rho, const NumericConfig& cfg) {
  auto v = herm_eig(r_matrix(rho, cfg), cfg).values;
  for (auto& x : v) x = std::max(x, 0.0);
  return v;
}

double concurrence(const DensityMatrix& rho, const NumericConfig& cfg) {
  return wootters_decomposition(rho, cfg).concurrence;
}

namespace {

// Rotates the subnormalized eigenvectors v_1..v_N into the tilde-orthogonal
// set via a Takagi factorization of S_ij = v_i^T (sigma_2 x sigma_2) v_j.
template <std::size_t N>
void rotate_into_wootters(const std::vector<CVec4>& v, WoottersSet& ws, const NumericConfig& cfg) {
  Mat<N> s;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) s(i, j) = flip_form(v[i], v[j]);
  const Takagi<N> t = takagi(s, cfg);
  // x_i = sum_j v_j W_ji with W = U^T, i.e. x_i = sum_j U_ij v_j.
  ws.x.assign(N, CVec4{});
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) ws.x[i] += t.unitary(i, j) * v[j];
    ws.lambdas[i] = t.values[i];
  }
}

}  // namespace

WoottersSet wootters_decomposition(const DensityMatrix& rho, const NumericConfig& cfg) {
  std::vector<CVec4> v;
  for (int k = 0; k < rho.rank; ++k)
    v.push_back(std::sqrt(std::max(rho.eigenvalues[k], 0.0)) * rho.eigenvectors.column(k));

  WoottersSet ws;
  switch (rho.rank) {
    case 1: rotate_into_wootters<1>(v, ws, cfg); break;
    case 2: rotate_into_wootters<2>(v, ws, cfg); break;
    case 3: rotate_into_wootters<3>(v, ws, cfg); break;
    case 4: rotate_into_wootters<4>(v, ws, cfg); break;
    default: throw Error(ErrorKind::invalid_input, "density matrix has rank 0");
  }

  // Phase convention: <x_i|x~_i> real and nonnegative. The Takagi phases
  // already give this; re-applied so the invariant does not depend on it.
  for (std::size_t i = 0; i < ws.x.size(); ++i) {
    const cplx b = flip_form(ws.x[i], ws.x[i]);
    if (std::abs(b) > 0.0) ws.x[i] *= std::exp(-0.5 * I_unit * std::arg(b));
  }

  ws.tr_r = 0.0;
  for (double l : ws.lambdas) ws.tr_r += l;
  ws.concurrence = std::max(0.0, ws.lambdas[0] - ws.lambdas[1] - ws.lambdas[2] - ws.lambdas[3]);
  return ws;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::regular: return "regular";
    case Classification::lambda_n_zero: return "lambda_n_zero";
    case Classification::separable: return "separable";
  }
  return "unknown";
}

Classification detect_degenerate(const WoottersSet& ws, const NumericConfig& cfg) {
  if (ws.concurrence <= cfg.separable) return Classification::separable;
  const double lambda_n = ws.lambdas[static_cast<std::size_t>(ws.rank() - 1)];
  if (lambda_n <= cfg.lambda_zero * ws.lambdas[0]) return Classification::lambda_n_zero;
  return Classification::regular;
}

}  // namespace bellfilter
