#include "bellfilter/filtercore.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

namespace bellfilter {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

// Rotates x so that <x|x~> is real and nonnegative.
CVec4 phase_fixed(CVec4 x) {
  const cplx b = flip_form(x, x);
  if (std::abs(b) > 0.0) x *= std::exp(-0.5 * I_unit * std::arg(b));
  return x;
}

// Orthonormal basis of the orthogonal complement of span(vs).
std::vector<CVec4> orthogonal_complement(const std::vector<CVec4>& vs, const NumericConfig& cfg) {
  std::vector<CVec4> q;
  for (CVec4 v : vs) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : q) v -= inner(e, v) * e;
    const double nv = v.norm();
    if (nv <= 1e-12) throw Error(ErrorKind::degenerate_geometry, "tilde states are linearly dependent");
    q.push_back(v / nv);
  }
  CMat4 p = CMat4::identity();
  for (const auto& e : q) p -= outer(e, e);
  const HermEig<4> eig = herm_eig(p.hermitian_part(), cfg);
  std::vector<CVec4> out;
  for (std::size_t k = 0; k < 4 - q.size(); ++k) out.push_back(eig.vectors.column(k));
  return out;
}

void require_geometry(const CVec4& x, const char* what, const NumericConfig& cfg) {
  const double nn = inner(x, x).real();
  if (!(std::abs(flip_form(x, x)) > cfg.lambda_zero * nn)) {
    std::ostringstream os;
    os << what << " has vanishing tilde inner product (factorizable completion direction)";
    throw Error(ErrorKind::degenerate_geometry, os.str());
  }
}

// x_2 for a pure state: with x_1 = e_1 + e_2 in Schmidt form, e_1 - e_2.
CVec4 schmidt_partner(const CVec4& x1, const NumericConfig& cfg) {
  CMat2 c;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) c(i, j) = x1[2 * i + j];
  const HermEig<2> e = herm_eig((c * c.adjoint()).hermitian_part(), cfg);
  std::array<CVec4, 2> parts;
  for (std::size_t k = 0; k < 2; ++k) {
    const Vec<2> u = e.vectors.column(k);
    const Vec<2> g = c.transpose() * u.conj();
    parts[k] = kron(u, g);
  }
  return phase_fixed(parts[0] - parts[1]);
}

// Completion pair i(t1 a + t2 b)/sqrt2, (t1 a - t2 b)/sqrt2 with t1 = e^{-s/2}, t2 = e^{s/2}.
std::array<CVec4, 2> ratio_pair(const CVec4& a, const CVec4& b, double s) {
  const double t1 = std::exp(-0.5 * s), t2 = std::exp(0.5 * s);
  return {kSqrtHalf * I_unit * (t1 * a + t2 * b), kSqrtHalf * (t1 * a - t2 * b)};
}

CMat4 projector_sum(const std::array<CVec4, 4>& xs) {
  CMat4 f;
  for (const CVec4& x : xs) {
    const CVec4 xt = tilde_state(x);
    f += outer(xt, xt) / std::abs(flip_form(x, x));
  }
  return f.hermitian_part();
}

// Log ratio s maximizing lambda_min(F); among maximizers, the one nearest 0.
double optimal_log_ratio(const CVec4& x1, const CVec4& x2, const CVec4& a, const CVec4& b,
                         const NumericConfig& cfg) {
  auto lmin = [&](double s) {
    const auto p = ratio_pair(a, b, s);
    return herm_eig(projector_sum({x1, x2, p[0], p[1]}), cfg).values[3];
  };
  constexpr double kSpan = 8.0, kStep = 0.1;
  const double f0 = lmin(0.0);
  double best_s = 0.0, best_f = f0;
  for (int k = -80; k <= 80; ++k) {
    const double s = k * kStep;
    const double f = lmin(s);
    if (f > best_f) best_s = s, best_f = f;
  }
  if (best_f <= f0 * (1.0 + 1e-12)) return 0.0;

  double lo = std::max(-kSpan, best_s - kStep), hi = std::min(kSpan, best_s + kStep);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = lmin(c), fd = lmin(d);
  while (hi - lo > 1e-13) {
    if (fc >= fd) {
      hi = d, d = c, fd = fc;
      c = hi - g * (hi - lo), fc = lmin(c);
    } else {
      lo = c, c = d, fc = fd;
      d = lo + g * (hi - lo), fd = lmin(d);
    }
  }
  const double peak_s = 0.5 * (lo + hi);
  const double target = std::max(best_f, lmin(peak_s)) * (1.0 - 1e-12);

  // Edge of the near-optimal set on the side of s = 0.
  double near = 0.0, far = peak_s;
  for (int it = 0; it < 200 && std::abs(far - near) > 1e-14; ++it) {
    const double mid = 0.5 * (near + far);
    (lmin(mid) >= target ? far : near) = mid;
  }
  return far;
}

std::array<CVec4, 2> complete_pair(const CVec4& x1, const CVec4& x2, const CompletionChoice& choice,
                                   const NumericConfig& cfg) {
  const auto w = orthogonal_complement({tilde_state(x1), tilde_state(x2)}, cfg);
  Mat<2> s;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) s(i, j) = flip_form(w[i], w[j]);
  const Takagi<2> t = takagi(s, cfg);
  if (!(t.values[1] > cfg.lambda_zero * std::max(t.values[0], 1.0)))
    throw Error(ErrorKind::degenerate_geometry, "spin-flip form degenerates on the completion subspace");

  // p, q: orthonormal for the spin-flip form and orthogonal in the Hilbert norm.
  CVec4 p = (t.unitary(0, 0) * w[0] + t.unitary(0, 1) * w[1]) / std::sqrt(t.values[0]);
  CVec4 q = (t.unitary(1, 0) * w[0] + t.unitary(1, 1) * w[1]) / std::sqrt(t.values[1]);
  CVec4 a = kSqrtHalf * (p + I_unit * q);
  CVec4 b = -kSqrtHalf * (p - I_unit * q);

  const double na = inner(a, a).real(), nb = inner(b, b).real();
  for (std::size_t k = 0; k < 4; ++k) {
    const double diff = std::norm(a[k]) / na - std::norm(b[k]) / nb;
    if (std::abs(diff) > 1e-8) {
      if (diff < 0.0) std::swap(a, b);
      break;
    }
  }

  const CVec4 u3 = kSqrtHalf * I_unit * (a + b);
  const CVec4 u4 = kSqrtHalf * (a - b);
  std::array<CVec4, 2> out;
  switch (choice.mode) {
    case CompletionChoice::Mode::canonical:
      out = ratio_pair(a, b, optimal_log_ratio(x1, x2, a, b, cfg));
      break;
    case CompletionChoice::Mode::rank2_tau:
      out = {I_unit * (choice.tau[0] * a + choice.tau[1] * b), choice.tau[0] * a - choice.tau[1] * b};
      break;
    case CompletionChoice::Mode::rank2_cd:
      out = {choice.cd[0] * u3 + choice.cd[1] * u4, choice.cd[2] * u3 + choice.cd[3] * u4};
      break;
  }
  out[0] = phase_fixed(out[0]);
  out[1] = phase_fixed(out[1]);
  require_geometry(out[0], "completion state x_3", cfg);
  require_geometry(out[1], "completion state x_4", cfg);
  return out;
}

}  // namespace

CompletionChoice CompletionChoice::from_tau(cplx tau1, cplx tau2) {
  CompletionChoice c;
  c.mode = Mode::rank2_tau;
  c.tau = {tau1, tau2};
  return c;
}

CompletionChoice CompletionChoice::from_tau_ratio(double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio))
    throw Error(ErrorKind::invalid_input, "tau ratio must be a positive number");
  return from_tau(1.0, ratio);
}

CompletionChoice CompletionChoice::from_cd(cplx c1, cplx d1, cplx c2, cplx d2) {
  CompletionChoice c;
  c.mode = Mode::rank2_cd;
  c.cd = {c1, d1, c2, d2};
  return c;
}

void CompletionChoice::validate(const NumericConfig& cfg) const {
  const double tol = cfg.reconstruction;
  switch (mode) {
    case Mode::canonical:
      return;
    case Mode::rank2_tau: {
      const cplx prod = tau[0] * tau[1];
      if (!(prod.real() > 0.0) || std::abs(prod.imag()) > tol * std::abs(prod))
        throw Error(ErrorKind::invalid_input, "tau_1 tau_2 must be real and positive");
      return;
    }
    case Mode::rank2_cd: {
      const auto [c1, d1, c2, d2] = cd;
      // Conjugate-invariant form of c1* c2* + d1* d2* = 0, c1*^2 + d1*^2 = 1, c2*^2 + d2*^2 = 1.
      if (std::abs(c1 * c2 + d1 * d2) > tol || std::abs(c1 * c1 + d1 * d1 - 1.0) > tol ||
          std::abs(c2 * c2 + d2 * d2 - 1.0) > tol)
        throw Error(ErrorKind::invalid_input, "(c, d) coefficients violate the completion constraints");
      return;
    }
  }
}

std::array<CVec4, 4> complete_basis(const WoottersSet& ws, const CompletionChoice& choice,
                                    const NumericConfig& cfg) {
  choice.validate(cfg);
  if (detect_degenerate(ws, cfg) != Classification::regular)
    throw Error(ErrorKind::invalid_input, "basis completion needs a regular (entangled, lambda_n > 0) state");
  const int n = ws.rank();
  if (n >= 3 && choice.mode != CompletionChoice::Mode::canonical)
    throw Error(ErrorKind::invalid_input, "completion choices apply to rank 1 and rank 2 states only");

  std::array<CVec4, 4> out{};
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = ws.x[static_cast<std::size_t>(i)];
  switch (n) {
    case 4:
      break;
    case 3: {
      const auto c = orthogonal_complement({tilde_state(out[0]), tilde_state(out[1]), tilde_state(out[2])}, cfg);
      out[3] = phase_fixed(c[0]);
      require_geometry(out[3], "completion state x_4", cfg);
      break;
    }
    case 2: {
      const auto pair = complete_pair(out[0], out[1], choice, cfg);
      out[2] = pair[0];
      out[3] = pair[1];
      break;
    }
    case 1: {
      out[1] = schmidt_partner(out[0], cfg);
      require_geometry(out[1], "Schmidt partner x_2", cfg);
      const auto pair = complete_pair(out[0], out[1], choice, cfg);
      out[2] = pair[0];
      out[3] = pair[1];
      break;
    }
    default:
      throw Error(ErrorKind::invalid_input, "Wootters set is empty");
  }
  return out;
}

AssociatedOperator associated_operator(const std::array<CVec4, 4>& completed,
                                       const std::array<double, 4>& lambdas, int rank,
                                       const NumericConfig& cfg) {
  AssociatedOperator op;
  op.completed_x = completed;
  op.rank = rank;
  for (std::size_t i = 0; i < 4; ++i) {
    const cplx t = std::conj(flip_form(completed[i], completed[i]));
    if (!(t.real() > 0.0) || std::abs(t.imag()) > cfg.consistency * std::max(1.0, t.real()))
      throw Error(ErrorKind::degenerate_geometry, "completed state has no positive tilde inner product");
    op.tilde_products[i] = t.real();
    const CVec4 xt = tilde_state(completed[i]);
    op.F += outer(xt, xt) / t.real();
  }
  op.F = op.F.hermitian_part();
  op.lambda_min_F = herm_eig(op.F, cfg).values[3];

  const double scale = std::max(1.0, op.F.max_abs());
  op.norm_defect = max_abs_diff(op.F * tilde_op(op.F), CMat4::identity());
  for (std::size_t i = 0; i < static_cast<std::size_t>(rank); ++i)
    for (std::size_t j = 0; j < static_cast<std::size_t>(rank); ++j) {
      const cplx fij = inner(completed[i], op.F * completed[j]);
      const double target = i == j ? lambdas[i] : 0.0;
      op.condition_defect = std::max(op.condition_defect, std::abs(fij - target));
    }
  op.t33 = inner(completed[2], op.F * completed[2]).real();
  op.t44 = inner(completed[3], op.F * completed[3]).real();
  op.t34 = inner(completed[2], op.F * completed[3]);

  if (op.norm_defect > cfg.consistency * scale * scale) {
    std::ostringstream os;
    os << "associated operator violates F F~ = I (defect " << op.norm_defect << ")";
    throw Error(ErrorKind::internal_consistency, os.str());
  }
  if (op.condition_defect > cfg.consistency * scale) {
    std::ostringstream os;
    os << "associated operator violates <x_i|F|x_j> = lambda_i delta_ij (defect " << op.condition_defect << ")";
    throw Error(ErrorKind::internal_consistency, os.str());
  }
  return op;
}

FactorTrace factorize(const AssociatedOperator& op, const NumericConfig& cfg) {
  const CMat4& f = op.F;
  // Reshuffle: R[(a a'), (b b')] = F[(a b), (a' b')].
  CMat4 r;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t ap = 0; ap < 2; ++ap)
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t bp = 0; bp < 2; ++bp) r(2 * a + ap, 2 * b + bp) = f(2 * a + b, 2 * ap + bp);

  const HermEig<4> e = herm_eig((r * r.adjoint()).hermitian_part(), cfg);
  const CVec4 u = e.vectors.column(0);
  const CVec4 gb_vec = r.transpose() * u.conj();

  FactorTrace ft;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      ft.GA(i, j) = u[2 * i + j];
      ft.GB(i, j) = gb_vec[2 * i + j];
    }
  const cplx phase = std::exp(-I_unit * std::arg(ft.GA.trace()));
  ft.GA *= phase;
  ft.GB *= std::conj(phase);
  if (ft.GB.trace().real() < 0.0) {
    ft.GA *= -1.0;
    ft.GB *= -1.0;
  }
  ft.GA = ft.GA.hermitian_part();
  ft.GB = ft.GB.hermitian_part();

  const double det_a = (ft.GA(0, 0) * ft.GA(1, 1) - ft.GA(0, 1) * ft.GA(1, 0)).real();
  const double det_b = (ft.GB(0, 0) * ft.GB(1, 1) - ft.GB(0, 1) * ft.GB(1, 0)).real();
  if (!(det_a > 0.0) || !(det_b > 0.0) || ft.GA.trace().real() <= 0.0)
    throw Error(ErrorKind::not_product, "local factors of the associated operator are not positive");
  const double sa = std::sqrt(det_a);
  ft.GA *= 1.0 / sa;
  ft.GB *= sa;
  // det F = 1 makes det G_B = 1 here up to rounding; normalize it exactly.
  const double det_b1 = (ft.GB(0, 0) * ft.GB(1, 1) - ft.GB(0, 1) * ft.GB(1, 0)).real();
  ft.GB *= 1.0 / std::sqrt(det_b1);

  ft.residual = (f - kron(ft.GA, ft.GB)).frobenius() / f.frobenius();
  if (ft.residual > cfg.product_residual) {
    std::ostringstream os;
    os << "associated operator is not a product operator (relative residual " << ft.residual << ")";
    throw Error(ErrorKind::not_product, os.str());
  }

  for (std::size_t i = 0; i < 4; ++i)
    ft.y[i] = tilde_state(op.completed_x[i]) / std::sqrt(op.tilde_products[i]);
  const auto& y = ft.y;
  ft.z[0] = 0.5 * ((y[0] + y[1]) + I_unit * (y[2] + y[3]));
  ft.z[1] = 0.5 * ((y[0] + y[1]) - I_unit * (y[2] + y[3]));
  ft.z[2] = 0.5 * ((y[0] - y[1]) + I_unit * (y[2] - y[3]));
  ft.z[3] = 0.5 * ((y[0] - y[1]) - I_unit * (y[2] - y[3]));
  return ft;
}

WitnessDefects witness_defects(const FactorTrace& ft, const AssociatedOperator& op) {
  WitnessDefects d;
  CMat4 ysum, zsum;
  // Tilde pairing of the z states: z_1 <-> z_2, z_3 <-> z_4.
  constexpr std::array<std::size_t, 4> partner{1, 0, 3, 2};
  for (std::size_t i = 0; i < 4; ++i) {
    ysum += outer(ft.y[i], ft.y[i]);
    zsum += outer(ft.z[i], ft.z[i]);
    d.z_concurrence = std::max(d.z_concurrence, vec_concurrence(ft.z[i]));
    for (std::size_t j = 0; j < 4; ++j) {
      const cplx yy = std::conj(flip_form(ft.y[i], ft.y[j]));
      d.normt = std::max(d.normt, std::abs(yy - (i == j ? 1.0 : 0.0)));
      const cplx zz = std::conj(flip_form(ft.z[i], ft.z[j]));
      d.z_pairing = std::max(d.z_pairing, std::abs(zz - (j == partner[i] ? 1.0 : 0.0)));
    }
  }
  d.y_reconstruction = max_abs_diff(ysum, op.F);
  d.z_reconstruction = max_abs_diff(zsum, op.F);
  d.alpha_balance = std::abs(ft.z[0].norm() * ft.z[1].norm() - ft.z[2].norm() * ft.z[3].norm());
  return d;
}

namespace {

struct FilterParams {
  double det = 1.0, a = 0.0, condition = 1.0;
  std::array<double, 3> axis{0.0, 0.0, 1.0};
};

FilterParams filter_params(const CMat2& f, const NumericConfig& cfg) {
  const HermEig<2> e = herm_eig(f, cfg);
  const double hi = e.values[0], lo = e.values[1];
  if (!(hi > 0.0) || lo < -cfg.negative_eigenvalue * hi)
    throw Error(ErrorKind::invalid_input, "local filter must be positive semidefinite and nonzero");
  FilterParams p;
  const double lo_c = std::max(lo, 0.0);
  p.det = hi * lo_c;
  p.a = (hi - lo_c) / (hi + lo_c);
  p.condition = lo_c > 0.0 ? hi / lo_c : std::numeric_limits<double>::infinity();
  if (p.a > 1e-12) {
    const Vec<2> top = e.vectors.column(0);
    for (std::size_t k = 0; k < 3; ++k) p.axis[k] = inner(top, pauli()[k] * top).real();
    const double len = std::sqrt(p.axis[0] * p.axis[0] + p.axis[1] * p.axis[1] + p.axis[2] * p.axis[2]);
    for (auto& c : p.axis) c /= len;
  }
  return p;
}

double largest_eigenvalue(const CMat2& m, const NumericConfig& cfg) { return herm_eig(m, cfg).values[0]; }

}  // namespace

double LocalFilter::condition_fA() const { return filter_params(fA, {}).condition; }
double LocalFilter::condition_fB() const { return filter_params(fB, {}).condition; }

LocalFilter LocalFilter::from_matrices(const CMat2& fA, const CMat2& fB, const NumericConfig& cfg) {
  LocalFilter lf;
  const FilterParams pa = filter_params(fA, cfg);
  const FilterParams pb = filter_params(fB, cfg);
  lf.fA = fA.hermitian_part();
  lf.fB = fB.hermitian_part();
  lf.det_fA = pa.det;
  lf.det_fB = pb.det;
  lf.a = pa.a;
  lf.b = pb.a;
  lf.m = pa.axis;
  lf.n = pb.axis;
  return lf;
}

LocalFilter extract_filters(const FactorTrace& ft, const NumericConfig& cfg) {
  const CMat2 sa = psd_sqrt(ft.GA, cfg);
  const CMat2 sb = psd_sqrt(ft.GB, cfg);
  return LocalFilter::from_matrices(sa / largest_eigenvalue(sa, cfg), sb / largest_eigenvalue(sb, cfg), cfg);
}

double success_probability(const DensityMatrix& rho, const LocalFilter& lf, const AssociatedOperator& op,
                           const WoottersSet& ws, const NumericConfig& cfg) {
  const CMat4 f2 = kron(lf.fA * lf.fA, lf.fB * lf.fB);
  const double direct = (rho.rho * f2).trace().real();
  const double via_spectrum = op.lambda_min_F * ws.tr_r;
  if (std::abs(direct - via_spectrum) > cfg.consistency * std::max(1.0, direct)) {
    std::ostringstream os;
    os.precision(12);
    os << "success probability routes disagree: tr(rho f^2) = " << direct
       << ", lambda_min^F trR = " << via_spectrum;
    throw Error(ErrorKind::internal_consistency, os.str());
  }
  if (!(direct > 0.0) || direct > 1.0 + cfg.consistency)
    throw Error(ErrorKind::internal_consistency, "success probability outside (0, 1]");
  return direct;
}

Plan plan(const DensityMatrix& rho, const CompletionChoice& choice, const NumericConfig& cfg) {
  Plan out;
  out.wootters = wootters_decomposition(rho, cfg);
  const WoottersSet& ws = out.wootters;
  out.classification = detect_degenerate(ws, cfg);

  if (out.classification == Classification::separable) {
    std::ostringstream os;
    os << "state is separable (C = " << ws.concurrence << "); no filter produces entanglement";
    out.message = os.str();
    return out;
  }
  if (out.classification == Classification::lambda_n_zero) {
    out.message =
        "lambda_n = 0: the tilde-orthogonal set contains a factorizable state, so no invertible local "
        "filter reaches a Bell diagonal state; it is only approached asymptotically, with vanishing "
        "success probability";
    return out;
  }

  const std::size_t n = static_cast<std::size_t>(ws.rank());
  const double rho_ratio = rho.eigenvalues[n - 1] / rho.eigenvalues[0];
  const double lambda_ratio = ws.lambdas[n - 1] / ws.lambdas[0];
  // Retained eigenvalues are above the rank cutoff, so this is the
  // [rank_cutoff, near_degenerate] window.
  if (rho_ratio <= cfg.near_degenerate) {
    std::ostringstream os;
    os << "near-degenerate: smallest retained eigenvalue of rho is " << rho_ratio
       << " of the largest; filter norms grow as it shrinks";
    out.warnings.push_back(os.str());
  }
  if (lambda_ratio <= cfg.near_degenerate) {
    std::ostringstream os;
    os << "near-degenerate: lambda_n / lambda_1 = " << lambda_ratio;
    out.warnings.push_back(os.str());
  }

  const auto completed = complete_basis(ws, choice, cfg);
  out.op = associated_operator(completed, ws.lambdas, ws.rank(), cfg);
  out.factors = factorize(*out.op, cfg);
  out.filter = extract_filters(*out.factors, cfg);
  out.p_f = success_probability(rho, *out.filter, *out.op, ws, cfg);

  if (out.op->lambda_min_F < cfg.ill_conditioned) {
    std::ostringstream os;
    os << "ill-conditioned filter: lambda_min^F = " << out.op->lambda_min_F
       << ", condition numbers f_A " << out.filter->condition_fA() << ", f_B " << out.filter->condition_fB();
    out.warnings.push_back(os.str());
  }
  return out;
}

}  // namespace bellfilter
