#pragma once

// Closed-form treatment of the four-parameter family
//   rho = p1 |psi1><psi1| + p2 |psi2><psi2| + p3 |00><00| + p4 |11><11|,
//   psi1 = alpha|01> - beta|10>,  psi2 = beta|01> + alpha|10>,
// used as a differential oracle for the numerical pipeline.

#include <array>
#include <random>

#include "bellfilter/config.hpp"
#include "bellfilter/matcore.hpp"
#include "bellfilter/wootters.hpp"

namespace bellfilter {

struct FamilyParams {
  double alpha = 0.0;
  std::array<double, 4> p{};

  [[nodiscard]] double beta() const { return std::sqrt(std::max(0.0, 1.0 - alpha * alpha)); }
  /// 2 [alpha beta (p1 - p2) - sqrt(p3 p4)].
  [[nodiscard]] double concurrence() const;
  /// Range, normalization and ordering (p1 >= p2, p3 >= p4) checks; with
  /// require_entangled also C > 0. Throws Error(invalid_input).
  void validate(bool require_entangled, double tol = 1e-9) const;
};

enum class FamilyRegime { result1, middle, result2, rank2, p4_zero_limit };

const char* to_string(FamilyRegime r);

struct FamilyClosedForm {
  double theta = 0.0;
  double k = 0.0;
  std::array<double, 4> lambdas{};  ///< Descending.
  double tr_r = 0.0;
  double concurrence = 0.0;
  CMat4 F;                          ///< Diagonal in the product basis.
  CMat2 fA, fB;
  double p_f = 0.0;
  FamilyRegime regime = FamilyRegime::middle;
  std::array<CVec4, 4> x{};         ///< Tilde-orthogonal states of the family.
};

DensityMatrix family_state(const FamilyParams& fp, const NumericConfig& cfg = {});

/// Requires C > 0 and p3 p4 > 0. The regime follows k^2 against
/// sqrt(p4/p3) and sqrt(p3/p4); between the two thresholds the filters are
/// obtained by factorizing F directly.
FamilyClosedForm family_closed_form(const FamilyParams& fp);

/// Rank-2 members (p3 = p4 = 0) with completion ratio |tau_2| / |tau_1|.
FamilyClosedForm family_rank2(const FamilyParams& fp, double tau_ratio);

/// Small-p4 branch; filters collapse towards projectors as p4 -> 0.
/// Exactly p4 = 0 throws Error(lambda_n_zero).
FamilyClosedForm family_p4_limit(const FamilyParams& fp);

/// alpha uniform in (0.1, 0.99), p flat on the simplex, rejection-sampled
/// for p1 >= p2, p3 >= p4 and C > min_concurrence.
FamilyParams sample_family_params(std::mt19937_64& rng, double min_concurrence = 0.0);

}  // namespace bellfilter
