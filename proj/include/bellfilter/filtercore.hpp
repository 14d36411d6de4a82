#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bellfilter/config.hpp"
#include "bellfilter/matcore.hpp"
#include "bellfilter/wootters.hpp"

namespace bellfilter {

/// How the two missing tilde-orthogonal states are chosen for rank <= 2.
///
/// The complement of span{x_1, x_2} contains exactly two product
/// directions a, b (the null lines of the spin-flip form), normalized so
/// that |a| = |b| and a^T Y b = -1 (Y = sigma_2 x sigma_2). Of the two, a
/// is the one with more weight on the lowest-index basis state.
///
///  * canonical: x_3 = i(t a + b/t)/sqrt2, x_4 = (t a - b/t)/sqrt2 with the
///    ratio 1/t^2 chosen to maximize lambda_min^F (hence P_f); among
///    maximizers the one closest to t = 1 is taken.
///  * rank2_tau: x_3 = i(tau_1 a + tau_2 b), x_4 = tau_1 a - tau_2 b.
///  * rank2_cd:  x_3 = c_1 u_3 + d_1 u_4, x_4 = c_2 u_3 + d_2 u_4 where
///    u_3 = i(a + b)/sqrt2, u_4 = (a - b)/sqrt2.
///
/// For the four-parameter family a = |00>, b = |11>, the optimum is a
/// plateau containing t = 1, so the canonical pair is (i Phi+, Phi-) and
/// rank2_tau reproduces the tau parametrization.
struct CompletionChoice {
  enum class Mode { canonical, rank2_tau, rank2_cd };

  Mode mode = Mode::canonical;
  std::array<cplx, 2> tau{1.0, 1.0};
  std::array<cplx, 4> cd{1.0, 0.0, 0.0, 1.0};  ///< (c1, d1, c2, d2).

  static CompletionChoice canonical() { return {}; }
  static CompletionChoice from_tau(cplx tau1, cplx tau2);
  /// tau_1 = 1, tau_2 = ratio, i.e. |tau_2| / |tau_1| = ratio.
  static CompletionChoice from_tau_ratio(double ratio);
  static CompletionChoice from_cd(cplx c1, cplx d1, cplx c2, cplx d2);

  /// Throws Error(invalid_input) when the parameters violate their constraints.
  void validate(const NumericConfig& cfg = {}) const;
};

/// Extends a regular Wootters set to four mutually tilde-orthogonal states
/// with <x_i|x~_i> > 0. Rank 4 passes through, rank 3 gains the unique
/// state orthogonal to {x~_1, x~_2, x~_3}, rank 2 uses `choice`, and rank 1
/// first adds its Schmidt partner and then proceeds as rank 2.
std::array<CVec4, 4> complete_basis(const WoottersSet& ws, const CompletionChoice& choice,
                                    const NumericConfig& cfg = {});

/// F = f_A^2 (x) f_B^2 / (det f_A det f_B) = sum_i |x~_i><x~_i| / <x_i|x~_i>.
struct AssociatedOperator {
  CMat4 F;
  double lambda_min_F = 0.0;
  std::array<CVec4, 4> completed_x{};
  std::array<double, 4> tilde_products{};  ///< <x_i|x~_i> of the completed set.
  int rank = 0;                            ///< Rank of the underlying state.
  double t33 = 0.0, t44 = 0.0;             ///< <x_3|F|x_3>, <x_4|F|x_4>.
  cplx t34{};                              ///< <x_3|F|x_4>.
  double norm_defect = 0.0;                ///< max |F F~ - I|.
  double condition_defect = 0.0;           ///< max |<x_i|F|x_j> - lambda_i delta_ij|.
};

/// Builds F from a completed basis and checks F F~ = I and the
/// <x_i|F|x_j> = lambda_i delta_ij conditions over the first `rank` states.
/// Throws Error(internal_consistency) when either fails.
AssociatedOperator associated_operator(const std::array<CVec4, 4>& completed,
                                       const std::array<double, 4>& lambdas, int rank,
                                       const NumericConfig& cfg = {});

/// Local factorization F = G_A (x) G_B, with the y/z decompositions kept as
/// independent witnesses of the product structure.
struct FactorTrace {
  std::array<CVec4, 4> y{};  ///< x~_i / sqrt(<x_i|x~_i>); <y_i|y~_j> = delta_ij.
  std::array<CVec4, 4> z{};  ///< Product-state decomposition of F.
  CMat2 GA, GB;              ///< Hermitian positive definite, det = 1.
  double residual = 0.0;     ///< ||F - G_A (x) G_B||_F / ||F||_F.
};

struct WitnessDefects {
  double normt = 0.0;            ///< max |<y_i|y~_j> - delta_ij|.
  double y_reconstruction = 0.0; ///< max |sum |y_i><y_i| - F|.
  double z_reconstruction = 0.0; ///< max |sum |z_i><z_i| - F|.
  double z_concurrence = 0.0;    ///< max_i vec_concurrence(z_i).
  double z_pairing = 0.0;        ///< max deviation from the z tilde-pairing pattern.
  double alpha_balance = 0.0;    ///< ||z_1||*||z_2|| - ||z_3||*||z_4||.
};

/// Reshuffles F so that a product operator becomes a rank-1 matrix and
/// unfolds its dominant singular pair. Throws Error(not_product) when the
/// relative residual exceeds cfg.product_residual.
FactorTrace factorize(const AssociatedOperator& op, const NumericConfig& cfg = {});

WitnessDefects witness_defects(const FactorTrace& ft, const AssociatedOperator& op);

/// f = (I + a m.sigma) / (1 + a), spectrum {1, (1 - a)/(1 + a)}.
struct LocalFilter {
  CMat2 fA = CMat2::identity();
  CMat2 fB = CMat2::identity();
  double det_fA = 1.0, det_fB = 1.0;
  double a = 0.0, b = 0.0;
  std::array<double, 3> m{0.0, 0.0, 1.0};
  std::array<double, 3> n{0.0, 0.0, 1.0};

  [[nodiscard]] double condition_fA() const;
  [[nodiscard]] double condition_fB() const;

  /// Wraps two Hermitian PSD matrices and recovers (a, m), (b, n) from them.
  /// Throws Error(invalid_input) for non-Hermitian or indefinite input.
  static LocalFilter from_matrices(const CMat2& fA, const CMat2& fB, const NumericConfig& cfg = {});
};

/// f_A = sqrt(G_A) / lambda_max(sqrt(G_A)), likewise f_B.
LocalFilter extract_filters(const FactorTrace& ft, const NumericConfig& cfg = {});

/// tr(rho f_A^2 (x) f_B^2), checked against lambda_min^F * trR(rho).
/// Throws Error(internal_consistency) if the two routes disagree.
double success_probability(const DensityMatrix& rho, const LocalFilter& lf,
                           const AssociatedOperator& op, const WoottersSet& ws,
                           const NumericConfig& cfg = {});

struct Plan {
  Classification classification = Classification::separable;
  WoottersSet wootters;
  std::optional<AssociatedOperator> op;
  std::optional<FactorTrace> factors;
  std::optional<LocalFilter> filter;
  double p_f = 0.0;
  std::vector<std::string> warnings;
  std::string message;
};

/// Runs the whole construction. Separable and lambda_n = 0 states come
/// back with their classification, a message and no filter.
Plan plan(const DensityMatrix& rho, const CompletionChoice& choice = {},
          const NumericConfig& cfg = {});

}  // namespace bellfilter
