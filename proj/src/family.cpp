#include "bellfilter/family.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace bellfilter {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

struct Common {
  double alpha, beta, p1, p2, p3, p4;
  double root;  // [alpha^2 beta^2 (p1 - p2)^2 + p1 p2]^(1/2)
  double theta, k;
};

Common common(const FamilyParams& fp) {
  Common c{};
  c.alpha = fp.alpha;
  c.beta = fp.beta();
  std::tie(c.p1, c.p2, c.p3, c.p4) = std::tuple{fp.p[0], fp.p[1], fp.p[2], fp.p[3]};
  const double ab = c.alpha * c.beta;
  c.root = std::sqrt(ab * ab * (c.p1 - c.p2) * (c.p1 - c.p2) + c.p1 * c.p2);
  c.theta = std::atan(std::sqrt(c.p1 * c.p2) * (c.alpha * c.alpha - c.beta * c.beta) /
                      (c.root + ab * (c.p1 + c.p2)));
  const double lambda1 = c.root + ab * (c.p1 - c.p2);
  c.k = std::sqrt(2.0 / lambda1) *
        (std::sqrt(c.p1) * c.alpha * std::cos(c.theta) - std::sqrt(c.p2) * c.beta * std::sin(c.theta));
  return c;
}

std::array<CVec4, 4> family_x(const Common& c) {
  const CVec4 e00 = CVec4::basis(0), e01 = CVec4::basis(1), e10 = CVec4::basis(2), e11 = CVec4::basis(3);
  const CVec4 psi1 = c.alpha * e01 - c.beta * e10;
  const CVec4 psi2 = c.beta * e01 + c.alpha * e10;
  const double ct = std::cos(c.theta), st = std::sin(c.theta);
  return {I_unit * (ct * std::sqrt(c.p1)) * psi1 - I_unit * (st * std::sqrt(c.p2)) * psi2,
          (st * std::sqrt(c.p1)) * psi1 + (ct * std::sqrt(c.p2)) * psi2,
          I_unit * kSqrtHalf * (std::sqrt(c.p3) * e00 + std::sqrt(c.p4) * e11),
          kSqrtHalf * (std::sqrt(c.p3) * e00 - std::sqrt(c.p4) * e11)};
}

void fill_spectrum(FamilyClosedForm& out, const Common& c) {
  const double ab = c.alpha * c.beta;
  const double l34 = std::sqrt(c.p3 * c.p4);
  out.lambdas = {c.root + ab * (c.p1 - c.p2), c.root - ab * (c.p1 - c.p2), l34, l34};
  std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<>());
  out.tr_r = 2.0 * (c.root + l34);
  out.concurrence = 2.0 * (ab * (c.p1 - c.p2) - l34);
  out.theta = c.theta;
  out.k = c.k;
  out.x = family_x(c);
}

CMat2 diag2(double a, double b) { return CMat2::diagonal(std::array<double, 2>{a, b}); }

// F = G_A (x) G_B with G_A = diag(ratio, k^2), G_B = diag(1, 1/(k^2 ratio)),
// where ratio is sqrt(p4/p3) or |tau_2|/|tau_1|.
CMat4 product_diagonal(double ratio, double k2) {
  return kron(diag2(ratio, k2), diag2(1.0, 1.0 / (k2 * ratio)));
}

// Max-eigenvalue-one square roots of the factors above.
void filters_from_factors(FamilyClosedForm& out, double ratio, double k2) {
  const double ga0 = ratio, ga1 = k2, gb0 = 1.0, gb1 = 1.0 / (k2 * ratio);
  const double ma = std::max(ga0, ga1), mb = std::max(gb0, gb1);
  out.fA = diag2(std::sqrt(ga0 / ma), std::sqrt(ga1 / ma));
  out.fB = diag2(std::sqrt(gb0 / mb), std::sqrt(gb1 / mb));
}

}  // namespace

double FamilyParams::concurrence() const {
  return 2.0 * (alpha * beta() * (p[0] - p[1]) - std::sqrt(p[2] * p[3]));
}

void FamilyParams::validate(bool require_entangled, double tol) const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::invalid_input, m); };
  if (!(alpha > 0.0 && alpha <= 1.0)) fail("alpha must lie in (0, 1]");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) fail("probabilities must be nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol) fail("probabilities must sum to 1");
  if (p[0] < p[1]) fail("ordering violated: p1 >= p2 required");
  if (p[2] < p[3]) fail("ordering violated: p3 >= p4 required");
  if (require_entangled && !(concurrence() > 0.0)) fail("parameters give C <= 0 (no entanglement)");
}

const char* to_string(FamilyRegime r) {
  switch (r) {
    case FamilyRegime::result1: return "result1";
    case FamilyRegime::middle: return "middle";
    case FamilyRegime::result2: return "result2";
    case FamilyRegime::rank2: return "rank2";
    case FamilyRegime::p4_zero_limit: return "p4_zero_limit";
  }
  return "unknown";
}

DensityMatrix family_state(const FamilyParams& fp, const NumericConfig& cfg) {
  fp.validate(false);
  const double a = fp.alpha, b = fp.beta();
  const CVec4 e01 = CVec4::basis(1), e10 = CVec4::basis(2);
  const CVec4 psi1 = a * e01 - b * e10;
  const CVec4 psi2 = b * e01 + a * e10;
  CMat4 rho = fp.p[0] * outer(psi1, psi1) + fp.p[1] * outer(psi2, psi2);
  rho(0, 0) += fp.p[2];
  rho(3, 3) += fp.p[3];
  return load_density(rho, cfg);
}

FamilyClosedForm family_closed_form(const FamilyParams& fp) {
  fp.validate(true);
  if (!(fp.p[2] * fp.p[3] > 0.0))
    throw Error(ErrorKind::invalid_input, "closed form needs p3 p4 > 0; use family_rank2 or family_p4_limit");
  const Common c = common(fp);
  FamilyClosedForm out;
  fill_spectrum(out, c);

  const double r = std::sqrt(c.p4 / c.p3);  // sqrt(p4/p3) <= 1
  const double k2 = c.k * c.k;
  const double k = std::abs(c.k);
  out.F = product_diagonal(r, k2);
  const double bracket = c.root + std::sqrt(c.p3 * c.p4);
  if (k2 >= 1.0 / r) {
    out.regime = FamilyRegime::result1;
    out.fA = diag2(std::sqrt(r) / k, 1.0);
    out.fB = diag2(1.0, 1.0 / (k * std::sqrt(r)));
    out.p_f = 2.0 / k2 * bracket;
  } else if (k2 <= r) {
    out.regime = FamilyRegime::result2;
    out.fA = diag2(1.0, k / std::sqrt(r));
    out.fB = diag2(k * std::sqrt(r), 1.0);
    out.p_f = 2.0 * k2 * bracket;
  } else {
    out.regime = FamilyRegime::middle;
    out.fA = diag2(std::sqrt(r) / k, 1.0);
    out.fB = diag2(k * std::sqrt(r), 1.0);
    out.p_f = 2.0 * r * bracket;
  }
  return out;
}

FamilyClosedForm family_rank2(const FamilyParams& fp, double tau_ratio) {
  if (!(tau_ratio > 0.0) || !std::isfinite(tau_ratio))
    throw Error(ErrorKind::invalid_input, "tau ratio must be positive");
  fp.validate(true);
  if (fp.p[2] != 0.0 || fp.p[3] != 0.0) throw Error(ErrorKind::invalid_input, "rank-2 branch needs p3 = p4 = 0");
  const Common c = common(fp);
  FamilyClosedForm out;
  fill_spectrum(out, c);
  // Completion states from the tau parametrization, tau_1 = 1, tau_2 = tau_ratio.
  const CVec4 e00 = CVec4::basis(0), e11 = CVec4::basis(3);
  out.x[2] = I_unit * (e00 + tau_ratio * e11);
  out.x[3] = e00 - tau_ratio * e11;

  const double k2 = c.k * c.k;
  out.regime = FamilyRegime::rank2;
  out.F = product_diagonal(tau_ratio, k2);
  filters_from_factors(out, tau_ratio, k2);
  const double lmin = std::min({tau_ratio, 1.0 / tau_ratio, k2, 1.0 / k2});
  // At tau_ratio = 1 this is 2 root min{k^2, 1/k^2}.
  out.p_f = 2.0 * c.root * lmin;
  return out;
}

FamilyClosedForm family_p4_limit(const FamilyParams& fp) {
  fp.validate(true);
  if (fp.p[3] == 0.0)
    throw Error(ErrorKind::lambda_n_zero,
                "p4 = 0: lambda_n vanishes and the state is only transformable asymptotically");
  if (!(fp.p[2] > 0.0)) throw Error(ErrorKind::invalid_input, "p3 must be positive");
  const Common c = common(fp);
  FamilyClosedForm out;
  fill_spectrum(out, c);
  const double q = std::pow(c.p4 / c.p3, 0.25);
  const double k = std::abs(c.k);
  out.regime = FamilyRegime::p4_zero_limit;
  out.F = product_diagonal(q * q, c.k * c.k);
  out.fA = diag2(q / k, 1.0);
  out.fB = diag2(k * q, 1.0);
  out.p_f = 2.0 * q * q * (c.root + std::sqrt(c.p3 * c.p4));
  return out;
}

FamilyParams sample_family_params(std::mt19937_64& rng, double min_concurrence) {
  std::uniform_real_distribution<double> alpha_dist(0.1, 0.99);
  std::exponential_distribution<double> expo(1.0);
  for (;;) {
    FamilyParams fp;
    fp.alpha = alpha_dist(rng);
    double sum = 0.0;
    for (auto& x : fp.p) sum += (x = expo(rng));
    for (auto& x : fp.p) x /= sum;
    if (fp.p[0] < fp.p[1] || fp.p[2] < fp.p[3]) continue;
    if (fp.concurrence() > min_concurrence) return fp;
  }
}

}  // namespace bellfilter
