#pragma once

#include <random>

#include "bellfilter/matcore.hpp"
#include "bellfilter/wootters.hpp"

namespace bftest {

using namespace bellfilter;

template <std::size_t N>
Vec<N> haar_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec<N> v;
  for (std::size_t i = 0; i < N; ++i) v[i] = cplx(g(rng), g(rng));
  return v / v.norm();
}

inline CMat2 haar_unitary2(std::mt19937_64& rng) {
  const Vec<2> ab = haar_vector<2>(rng);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979323846);
  const cplx e = std::polar(1.0, phase(rng));
  CMat2 u;
  u(0, 0) = e * ab[0];
  u(0, 1) = -e * std::conj(ab[1]);
  u(1, 0) = e * ab[1];
  u(1, 1) = e * std::conj(ab[0]);
  return u;
}

inline CMat4 random_hermitian(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  CMat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = scale * cplx(g(rng), g(rng));
  return m.hermitian_part();
}

/// Mixture of `rank` Haar pure states with flat weights.
inline CMat4 random_mixture(std::mt19937_64& rng, int rank) {
  std::exponential_distribution<double> expo(1.0);
  CMat4 rho;
  double total = 0.0;
  for (int i = 0; i < rank; ++i) {
    const double w = expo(rng);
    const CVec4 v = haar_vector<4>(rng);
    rho = rho + w * outer(v, v);
    total += w;
  }
  return rho / total;
}

/// Rejection-samples a rank-n state that is regular under the default
/// classification, with C(rho) > min_c and lambda_n / lambda_1 > min_ratio.
inline DensityMatrix random_entangled(std::mt19937_64& rng, int rank, double min_c = 1e-3,
                                      double min_ratio = 0.0) {
  for (;;) {
    const DensityMatrix d = load_density(random_mixture(rng, rank));
    if (d.rank != rank) continue;
    const WoottersSet ws = wootters_decomposition(d);
    if (ws.concurrence <= min_c) continue;
    if (detect_degenerate(ws) != Classification::regular) continue;
    if (ws.lambdas[rank - 1] / ws.lambdas[0] <= min_ratio) continue;
    return d;
  }
}

inline CVec4 bell_singlet() {
  const double s = std::sqrt(0.5);
  return s * CVec4::basis(1) - s * CVec4::basis(2);
}

inline CMat4 werner(double w) {
  const CVec4 s = bell_singlet();
  return w * outer(s, s) + ((1.0 - w) / 4.0) * CMat4::identity();
}

}  // namespace bftest
