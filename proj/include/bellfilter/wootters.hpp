#pragma once

#include <array>
#include <vector>

#include "bellfilter/config.hpp"
#include "bellfilter/matcore.hpp"

namespace bellfilter {

/// A validated two-qubit density matrix together with its spectrum.
struct DensityMatrix {
  CMat4 rho;
  int rank = 0;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  std::array<double, 4> eigenvalues{};  ///< Descending.
  CMat4 eigenvectors;                   ///< Columns match eigenvalues.
};

/// Validates and wraps a 4x4 matrix. A trace defect within
/// cfg.trace_defect is renormalized away; larger defects, non-Hermitian
/// input and eigenvalues below -cfg.negative_eigenvalue throw
/// Error(invalid_input).
DensityMatrix load_density(const CMat4& matrix, const NumericConfig& cfg = {});

/// Tilde-orthogonal decomposition rho = sum_i |x_i><x_i| with
/// <x_i|x~_j> = lambda_i delta_ij.
struct WoottersSet {
  std::vector<CVec4> x;              ///< rank-many subnormalized states.
  std::array<double, 4> lambdas{};   ///< Descending; zero-padded past the rank.
  double tr_r = 0.0;                 ///< sum of lambdas.
  double concurrence = 0.0;
  [[nodiscard]] int rank() const { return static_cast<int>(x.size()); }
};

/// R(rho) = sqrt( sqrt(rho) rho~ sqrt(rho) ).
CMat4 r_matrix(const DensityMatrix& rho, const NumericConfig& cfg = {});

/// Descending eigenvalues of R(rho), computed through r_matrix.
std::array<double, 4> r_spectrum(const DensityMatrix& rho, const NumericConfig& cfg = {});

double concurrence(const DensityMatrix& rho, const NumericConfig& cfg = {});

WoottersSet wootters_decomposition(const DensityMatrix& rho, const NumericConfig& cfg = {});

enum class Classification { regular, lambda_n_zero, separable };

const char* to_string(Classification c);

Classification detect_degenerate(const WoottersSet& ws, const NumericConfig& cfg = {});

}  // namespace bellfilter
