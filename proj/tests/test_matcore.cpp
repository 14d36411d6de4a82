#include <doctest.h>

#include "bellfilter/matcore.hpp"
#include "support/eigen_oracle.hpp"
#include "support/random_states.hpp"

using namespace bellfilter;

TEST_CASE("spin flip conventions") {
  const CMat4& y = spin_flip();
  CHECK(max_abs_diff(y, y.transpose()) == 0.0);
  CHECK(max_abs_diff(y * y, CMat4::identity()) < 1e-15);
  const CVec4 y00 = y * CVec4::basis(0);
  CHECK(std::abs(y00[3] + 1.0) < 1e-15);
  const CVec4 y01 = y * CVec4::basis(1);
  CHECK(std::abs(y01[2] - 1.0) < 1e-15);

  std::mt19937_64 rng(7);
  const CVec4 u = bftest::haar_vector<4>(rng), v = bftest::haar_vector<4>(rng);
  CHECK(std::abs(flip_form(u, v) - flip_form(v, u)) < 1e-15);
  CHECK(std::abs(inner(u, tilde_state(v)) - std::conj(flip_form(u, v))) < 1e-15);
  const CMat4 m = bftest::random_hermitian(rng);
  CHECK(max_abs_diff(tilde_op(tilde_op(m)), m) < 1e-14);
}

TEST_CASE("vector concurrence") {
  CHECK(vec_concurrence(bftest::bell_singlet()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(vec_concurrence(CVec4::basis(0) + CVec4::basis(1)) < 1e-15);
  CHECK_THROWS_AS(vec_concurrence(CVec4{}), Error);
}

TEST_CASE("kron and partial trace") {
  std::mt19937_64 rng(11);
  const CMat2 a = bftest::haar_unitary2(rng), b = bftest::haar_unitary2(rng);
  const CMat2 h = (a + a.adjoint()) * 0.5;
  const CMat4 k = kron(h, b);
  CHECK(max_abs_diff(partial_trace(k, Subsystem::B), h * b.trace()) < 1e-14);
  CHECK(max_abs_diff(partial_trace(k, Subsystem::A), b * h.trace()) < 1e-14);
  CHECK(max_abs_diff(a * a.adjoint(), CMat2::identity()) < 1e-14);

  Vec<2> u, v;
  u[0] = 1.0; u[1] = cplx(0.0, 2.0);
  v[0] = 3.0; v[1] = -1.0;
  const CVec4 uv = kron(u, v);
  CHECK(std::abs(uv[1] + 1.0) < 1e-15);
  CHECK(std::abs(uv[2] - cplx(0.0, 6.0)) < 1e-15);
}

TEST_CASE("Hermitian eigensolver against Eigen") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const CMat4 m = bftest::random_hermitian(rng);
    const HermEig<4> e = herm_eig(m);
    const auto ref = bftest::eigen_hermitian_values(m);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(e.values[i] - ref[i]) < 1e-12);
    CHECK(max_abs_diff(e.vectors.adjoint() * e.vectors, CMat4::identity()) < 1e-13);
    const CMat4 rec = e.vectors * CMat4::diagonal(e.values) * e.vectors.adjoint();
    CHECK(max_abs_diff(rec, m) < 1e-12);

    NumericConfig rev;
    rev.sweep = SweepOrder::reverse;
    const HermEig<4> r = herm_eig(m, rev);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(e.values[i] - r.values[i]) < 1e-12);
  }
}

TEST_CASE("eigensolver handles degenerate and diagonal input") {
  const HermEig<4> e = herm_eig(CMat4::identity());
  for (double v : e.values) CHECK(v == doctest::Approx(1.0));
  const CMat4 w = bftest::werner(0.8);
  const HermEig<4> ew = herm_eig(w);
  CHECK(ew.values[0] == doctest::Approx(0.85));
  CHECK(ew.values[3] == doctest::Approx(0.05));

  CMat4 nh = CMat4::identity();
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(herm_eig(nh), Error);
}

TEST_CASE("PSD square root") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const CMat4 rho = bftest::random_mixture(rng, 1 + trial % 4);
    const CMat4 s = psd_sqrt(rho);
    CHECK(max_abs_diff(s * s, rho) < 1e-12);
    CHECK(max_abs_diff(s, s.adjoint()) < 1e-14);
  }
  CMat4 neg = CMat4::identity();
  neg(3, 3) = -0.1;
  CHECK_THROWS_AS(psd_sqrt(neg), Error);
  neg(3, 3) = -1e-13;
  CHECK(psd_sqrt(neg)(3, 3).real() == 0.0);
}

namespace {

template <std::size_t N>
void check_takagi(const Mat<N>& s, double tol) {
  const Takagi<N> t = takagi(s);
  CHECK(max_abs_diff(t.unitary * t.unitary.adjoint(), Mat<N>::identity()) < tol);
  const Mat<N> d = t.unitary * s * t.unitary.transpose();
  std::array<double, N> vals{};
  for (std::size_t i = 0; i < N; ++i) vals[i] = t.values[i];
  CHECK(max_abs_diff(d, Mat<N>::diagonal(vals)) < tol);
  const auto sv = bftest::eigen_singular_values(s);
  for (std::size_t i = 0; i < N; ++i) {
    CHECK(t.values[i] >= 0.0);
    CHECK(std::abs(t.values[i] - sv[i]) < tol);
  }
}

}  // namespace

TEST_CASE("Takagi factorization") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    CMat4 a;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = cplx(g(rng), g(rng));
    check_takagi<4>(0.5 * (a + a.transpose()), 1e-11);
  }
  SUBCASE("degenerate") {
    check_takagi<4>(CMat4::identity(), 1e-12);
    check_takagi<4>(spin_flip(), 1e-12);
    Mat<3> s = Mat<3>::identity() * cplx(0.0, 1.0);
    check_takagi<3>(s, 1e-12);
  }
  SUBCASE("rank deficient") {
    const CVec4 v = bftest::haar_vector<4>(rng);
    CMat4 s;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s(i, j) = v[i] * v[j];
    check_takagi<4>(s, 1e-12);
    check_takagi<2>(Mat<2>{}, 1e-15);
  }
  SUBCASE("rejects non-symmetric") {
    CMat4 s;
    s(0, 1) = 1.0;
    CHECK_THROWS_AS(takagi(s), Error);
  }
}
