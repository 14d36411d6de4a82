#pragma once

#include <vector>

#include "bellfilter/config.hpp"
#include "bellfilter/filtercore.hpp"
#include "bellfilter/matcore.hpp"
#include "bellfilter/wootters.hpp"

namespace bellfilter {

struct BellComponent {
  double p = 0.0;  ///< Weight in rho'.
  CVec4 state;     ///< Normalized (f_A x f_B)|x_i>.
};

struct TransformResult {
  DensityMatrix rho_prime;
  double p_f = 0.0;
  std::vector<BellComponent> components;  ///< Descending weight, ties in input order.
  double c_out = 0.0;                     ///< C(rho').
  double trR_out = 0.0;                   ///< trR(rho').
  double marginal_defect = 0.0;           ///< max over both sides of ||tr_X rho' - I/2||_F.
};

/// rho' = (f_A x f_B) rho (f_A x f_B) / tr(rho f_A^2 x f_B^2). Throws
/// Error(vanishing_probability) when the success probability is <= 1e-12.
TransformResult apply_filter(const DensityMatrix& rho, const LocalFilter& lf, const NumericConfig& cfg = {});

/// Same, reusing an existing Wootters decomposition of rho for the components.
TransformResult apply_filter(const DensityMatrix& rho, const LocalFilter& lf, const WoottersSet& ws,
                             const NumericConfig& cfg = {});

struct BellVerdict {
  bool bell_diagonal = false;
  double marginal_defect = 0.0;
  double trR_defect = 0.0;
};

/// Bell-diagonal iff both marginals are I/2 and trR(rho') = 1, within
/// cfg.bell_certificate.
BellVerdict verify_bell_diagonal(const TransformResult& tr, const NumericConfig& cfg = {});

/// Certificate for an arbitrary state (used by the verify command).
BellVerdict verify_bell_diagonal(const DensityMatrix& rho, const NumericConfig& cfg = {});

/// C(rho'), checked against C(rho) / trR(rho). Throws
/// Error(internal_consistency) on disagreement beyond cfg.bell_certificate.
double extractable_concurrence(const TransformResult& tr, const WoottersSet& ws_in, const NumericConfig& cfg = {});

}  // namespace bellfilter
