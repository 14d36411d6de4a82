#include <doctest.h>

#include "bellfilter/family.hpp"
#include "bellfilter/wootters.hpp"
#include "support/eigen_oracle.hpp"
#include "support/random_states.hpp"

using namespace bellfilter;

namespace {

double reconstruction_error(const WoottersSet& ws, const CMat4& rho) {
  CMat4 sum;
  for (const CVec4& x : ws.x) sum = sum + outer(x, x);
  return max_abs_diff(sum, rho);
}

double tilde_orthogonality_error(const WoottersSet& ws) {
  double worst = 0.0;
  for (int i = 0; i < ws.rank(); ++i)
    for (int j = 0; j < ws.rank(); ++j) {
      const cplx want = i == j ? cplx(ws.lambdas[i]) : cplx(0.0);
      worst = std::max(worst, std::abs(inner(ws.x[i], tilde_state(ws.x[j])) - want));
    }
  return worst;
}

}  // namespace

TEST_CASE("load_density validation") {
  CHECK_NOTHROW(load_density(CMat4::identity() * 0.25));

  CMat4 nh = CMat4::identity() * 0.25;
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(load_density(nh), Error);

  CMat4 neg = CMat4::diagonal(std::array<double, 4>{0.6, 0.3, 0.2, -0.1});
  CHECK_THROWS_AS(load_density(neg), Error);

  CHECK_THROWS_AS(load_density(CMat4::identity() * 0.3), Error);

  const DensityMatrix d = load_density(CMat4::identity() * (0.25 * (1.0 + 1e-10)));
  CHECK(d.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-15));

  CMat4 nan = CMat4::identity() * 0.25;
  nan(2, 2) = std::nan("");
  CHECK_THROWS_AS(load_density(nan), Error);

  try {
    load_density(nh);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_input);
    CHECK(std::string(e.what()).find("ermitian") != std::string::npos);
  }
}

TEST_CASE("concurrence agrees with the non-Hermitian product oracle") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const DensityMatrix d = load_density(bftest::random_mixture(rng, 1 + trial % 4));
    const WoottersSet ws = wootters_decomposition(d);
    const auto ref = bftest::eigen_lambdas(d.rho);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(ws.lambdas[i] - ref[i]) < 1e-7);
    CHECK(std::abs(ws.concurrence - bftest::eigen_concurrence(d.rho)) < 1e-7);
    const auto rs = r_spectrum(d);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(ws.lambdas[i] - rs[i]) < 1e-7);
    CHECK(concurrence(d) == doctest::Approx(ws.concurrence).epsilon(1e-12));
  }
}

TEST_CASE("Wootters decomposition reconstructs rho and is tilde-orthogonal") {
  std::mt19937_64 rng(29);
  for (int rank = 1; rank <= 4; ++rank)
    for (int trial = 0; trial < 100; ++trial) {
      const DensityMatrix d = load_density(bftest::random_mixture(rng, rank));
      const WoottersSet ws = wootters_decomposition(d);
      CHECK(ws.rank() == d.rank);
      CHECK(reconstruction_error(ws, d.rho) < 1e-12);
      CHECK(tilde_orthogonality_error(ws) < 1e-12);
      for (int i = 0; i + 1 < 4; ++i) CHECK(ws.lambdas[i] >= ws.lambdas[i + 1]);
      double s = 0.0;
      for (double l : ws.lambdas) s += l;
      CHECK(ws.tr_r == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("degenerate spectra") {
  const DensityMatrix w = load_density(bftest::werner(0.8));
  const WoottersSet ws = wootters_decomposition(w);
  CHECK(ws.lambdas[0] == doctest::Approx(0.85));
  CHECK(ws.lambdas[3] == doctest::Approx(0.05));
  CHECK(ws.concurrence == doctest::Approx(0.7));
  CHECK(ws.tr_r == doctest::Approx(1.0));
  CHECK(tilde_orthogonality_error(ws) < 1e-12);
  CHECK(reconstruction_error(ws, w.rho) < 1e-12);
}

TEST_CASE("classification") {
  CHECK(detect_degenerate(wootters_decomposition(load_density(CMat4::identity() * 0.25))) ==
        Classification::separable);
  const CVec4 s = bftest::bell_singlet();
  CHECK(detect_degenerate(wootters_decomposition(load_density(outer(s, s)))) == Classification::regular);
  CHECK(detect_degenerate(wootters_decomposition(load_density(bftest::werner(0.2)))) ==
        Classification::separable);

  const DensityMatrix p4zero = family_state({std::sqrt(0.5), {0.6, 0.0, 0.4, 0.0}});
  CHECK(detect_degenerate(wootters_decomposition(p4zero)) == Classification::lambda_n_zero);

  CHECK(std::string(to_string(Classification::lambda_n_zero)) == "lambda_n_zero");
}

TEST_CASE("worked instance spectrum") {
  const DensityMatrix d = family_state({std::sqrt(0.5), {0.5, 0.0, 0.375, 0.125}});
  CHECK(d.rank == 3);
  const WoottersSet ws = wootters_decomposition(d);
  CHECK(ws.lambdas[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ws.lambdas[1] == doctest::Approx(std::sqrt(3.0) / 8.0).epsilon(1e-12));
  CHECK(ws.lambdas[2] == doctest::Approx(std::sqrt(3.0) / 8.0).epsilon(1e-12));
  CHECK(ws.concurrence == doctest::Approx(0.0669872981).epsilon(1e-9));
  CHECK(ws.tr_r == doctest::Approx(0.9330127019).epsilon(1e-9));
}
