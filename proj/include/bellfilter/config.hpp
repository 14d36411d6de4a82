#pragma once

#include <stdexcept>
#include <string>

namespace bellfilter {

/// Pivot order used by the cyclic Jacobi sweeps.
enum class SweepOrder { forward, reverse };

/// Every numerical threshold used by the library, in one place.
///
/// Thresholds on matrix quantities are relative to max(1, norm) of the
/// operand unless stated otherwise; density-matrix checks are absolute.
struct NumericConfig {
  double hermiticity = 1e-9;        ///< ||M - M^dagger|| allowed on input.
  double reconstruction = 1e-10;    ///< Decomposition self-checks.
  double rank_cutoff = 1e-10;       ///< Eigenvalue cutoff, relative to the largest.
  double trace_defect = 1e-9;       ///< |tr(rho) - 1| accepted and renormalized.
  double negative_eigenvalue = 1e-9;///< Most negative eigenvalue tolerated.
  double psd_clamp = 1e-12;         ///< Eigenvalues in [-psd_clamp, 0) are silently zeroed.
  double separable = 1e-10;         ///< C(rho) at or below this is separable.
  double lambda_zero = 1e-10;       ///< lambda_n / lambda_1 at or below this is zero.
  double product_residual = 1e-8;   ///< Relative rank-1 residual of the reshuffled operator.
  double consistency = 1e-9;        ///< Pipeline identities (F F~ = I, P_f routes, ...).
  double bell_certificate = 1e-8;   ///< Marginal and trR tolerance for Bell-diagonality.
  double jacobi_threshold = 1e-14;  ///< Off-diagonal sweep threshold, relative to ||M||_F.

  // Warning thresholds; these are not scaled by scaled().
  double near_degenerate = 1e-6;    ///< Upper end of the near-degenerate window.
  double ill_conditioned = 1e-2;    ///< lambda_min^F below this flags the filter.

  SweepOrder sweep = SweepOrder::forward;

  /// Every tolerance multiplied by factor (warning thresholds and the
  /// Jacobi threshold are left alone).
  [[nodiscard]] NumericConfig scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("tolerance scale must be positive");
    NumericConfig c = *this;
    c.hermiticity *= factor;
    c.reconstruction *= factor;
    c.rank_cutoff *= factor;
    c.trace_defect *= factor;
    c.negative_eigenvalue *= factor;
    c.psd_clamp *= factor;
    c.separable *= factor;
    c.lambda_zero *= factor;
    c.product_residual *= factor;
    c.consistency *= factor;
    c.bell_certificate *= factor;
    return c;
  }
};

/// Failure categories; the CLI maps them onto exit codes.
enum class ErrorKind {
  invalid_input,
  separable,
  lambda_n_zero,
  degenerate_geometry,
  not_product,
  vanishing_probability,
  internal_consistency,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bellfilter
