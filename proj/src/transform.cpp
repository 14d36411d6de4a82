#include "bellfilter/transform.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace bellfilter {

namespace {

double marginal_defect_of(const CMat4& rho) {
  const CMat2 half = 0.5 * CMat2::identity();
  return std::max((partial_trace(rho, Subsystem::A) - half).frobenius(),
                  (partial_trace(rho, Subsystem::B) - half).frobenius());
}

}  // namespace

TransformResult apply_filter(const DensityMatrix& rho, const LocalFilter& lf, const NumericConfig& cfg) {
  return apply_filter(rho, lf, wootters_decomposition(rho, cfg), cfg);
}

TransformResult apply_filter(const DensityMatrix& rho, const LocalFilter& lf, const WoottersSet& ws,
                             const NumericConfig& cfg) {
  const CMat4 f = kron(lf.fA, lf.fB);
  TransformResult out;
  out.p_f = (rho.rho * f * f).trace().real();
  if (!(out.p_f > 1e-12)) {
    std::ostringstream os;
    os << "filter success probability vanishes (" << out.p_f << ")";
    throw Error(ErrorKind::vanishing_probability, os.str());
  }
  const CMat4 filtered = (f * rho.rho * f) / out.p_f;
  out.rho_prime = load_density(filtered.hermitian_part(), cfg);

  for (const CVec4& x : ws.x) {
    const CVec4 fx = f * x;
    const double w = inner(fx, fx).real();
    if (w <= 0.0) continue;
    out.components.push_back({w / out.p_f, fx / std::sqrt(w)});
  }
  std::stable_sort(out.components.begin(), out.components.end(),
                   [](const BellComponent& a, const BellComponent& b) { return a.p > b.p; });

  const WoottersSet ws_out = wootters_decomposition(out.rho_prime, cfg);
  out.c_out = ws_out.concurrence;
  out.trR_out = ws_out.tr_r;
  out.marginal_defect = marginal_defect_of(out.rho_prime.rho);
  return out;
}

BellVerdict verify_bell_diagonal(const TransformResult& tr, const NumericConfig& cfg) {
  BellVerdict v;
  v.marginal_defect = tr.marginal_defect;
  v.trR_defect = std::abs(tr.trR_out - 1.0);
  v.bell_diagonal = v.marginal_defect <= cfg.bell_certificate && v.trR_defect <= cfg.bell_certificate;
  return v;
}

BellVerdict verify_bell_diagonal(const DensityMatrix& rho, const NumericConfig& cfg) {
  BellVerdict v;
  v.marginal_defect = marginal_defect_of(rho.rho);
  v.trR_defect = std::abs(wootters_decomposition(rho, cfg).tr_r - 1.0);
  v.bell_diagonal = v.marginal_defect <= cfg.bell_certificate && v.trR_defect <= cfg.bell_certificate;
  return v;
}

double extractable_concurrence(const TransformResult& tr, const WoottersSet& ws_in, const NumericConfig& cfg) {
  const double expected = ws_in.concurrence / ws_in.tr_r;
  if (std::abs(tr.c_out - expected) > cfg.bell_certificate) {
    std::ostringstream os;
    os.precision(12);
    os << "C(rho') = " << tr.c_out << " differs from C(rho)/trR(rho) = " << expected;
    throw Error(ErrorKind::internal_consistency, os.str());
  }
  return tr.c_out;
}

}  // namespace bellfilter
