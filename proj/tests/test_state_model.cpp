#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qig/channels.hpp"
#include "qig/log_derivative.hpp"
#include "qig/state.hpp"

using namespace qig;
using oracle::near;

namespace {

AmplitudeMatrix random_amplitude(std::size_t d, std::size_t dp, std::uint64_t seed) {
  ComplexMatrix g = Rng(seed).ginibre(d, dp);
  g *= cplx{1.0 / g.frobenius_norm()};
  return AmplitudeMatrix(g);
}

double dist(const DensityMatrix& a, const DensityMatrix& b) {
  return (a.matrix().matrix() - b.matrix().matrix()).frobenius_norm();
}

}  // namespace

TEST_CASE("DensityMatrix invariants") {
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix{{0.6, 0.0}, {0.0, 0.6}}), InvariantViolation);
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix{{1.2, 0.0}, {0.0, -0.2}}), InvariantViolation);
  const auto n = DensityMatrix::normalized(HermitianMatrix::identity(3));
  CHECK(near(n.matrix()(1, 1).real(), 1.0 / 3, 1e-15));
  const cplx psi[] = {1.0, cplx{0, 1}};
  CHECK(DensityMatrix::pure(psi).rank() == 1);
}

TEST_CASE("FamilyPoint requires traceless tangents of matching dimension") {
  const auto rho = DensityMatrix::maximally_mixed(2);
  CHECK_THROWS_AS(FamilyPoint({0.0}, rho, {HermitianMatrix::identity(2)}), InvariantViolation);
  CHECK_THROWS_AS(FamilyPoint({0.0}, rho, {HermitianMatrix(3)}), InvalidArgument);
}

TEST_CASE("AmplitudeMatrix requires unit norm") {
  CHECK_THROWS_AS(AmplitudeMatrix(ComplexMatrix::identity(2)), InvariantViolation);
}

TEST_CASE("canonical_amplitude") {
  const auto w = canonical_amplitude(DensityMatrix::maximally_mixed(2));
  CHECK((w.matrix() - (1 / std::sqrt(2.0)) * ComplexMatrix::identity(2)).frobenius_norm() <= 1e-15);

  const double d[] = {1.0, 0.0};
  const auto wp = canonical_amplitude(DensityMatrix(HermitianMatrix::diagonal(d)));
  CHECK((wp.matrix() - ComplexMatrix::diagonal(d)).frobenius_norm() <= 1e-15);

  const auto rho = random_density(3, 11);
  const auto wr = canonical_amplitude(rho);
  CHECK(wr.ancilla_dim() == 3);
  CHECK((wr.matrix() * wr.matrix().adjoint() - rho.matrix().matrix()).frobenius_norm() <= 1e-12);
}

TEST_CASE("project on both sides") {
  const auto w = AmplitudeMatrix((1 / std::sqrt(2.0)) * ComplexMatrix::identity(2));
  CHECK(dist(project(w, Side::system), DensityMatrix::maximally_mixed(2)) <= 1e-15);

  const AmplitudeMatrix cols(ComplexMatrix{{std::sqrt(0.3), 0.0}, {0.0, std::sqrt(0.7)}});
  const auto anc = project(cols, Side::ancilla);
  CHECK(near(anc.matrix()(0, 0).real(), 0.3, 1e-15));
  CHECK(near(anc.matrix()(1, 1).real(), 0.7, 1e-15));

  const auto wr = random_amplitude(2, 4, 5);
  const auto sys = project(wr, Side::system), an = project(wr, Side::ancilla);
  CHECK(sys.dim() == 2);
  CHECK(an.dim() == 4);
  CHECK(near(sys.matrix().trace(), 1.0, 1e-12));
  CHECK(near(an.matrix().trace(), 1.0, 1e-12));
  CHECK(min_eigenvalue(sys.matrix()) >= -1e-12);
  CHECK(min_eigenvalue(an.matrix()) >= -1e-12);
}

TEST_CASE("gauge_transform examples") {
  const auto w = AmplitudeMatrix((1 / std::sqrt(2.0)) * ComplexMatrix::identity(2));
  CHECK((gauge_transform(w, ComplexMatrix::identity(2)).matrix() - w.matrix()).frobenius_norm() == 0.0);

  const ComplexMatrix wm{{0.6, 0.0}, {0.0, 0.8}};
  const AmplitudeMatrix w2(wm);
  const auto sw = gauge_transform(w2, oracle::sigma_x());
  CHECK(sw.matrix()(0, 1) == wm(0, 0));
  CHECK(sw.matrix()(1, 0) == wm(1, 1));
  CHECK(dist(project(sw, Side::system), project(w2, Side::system)) <= 1e-15);

  const auto wr = random_amplitude(2, 2, 9);
  const auto u = random_unitary(2, 9);
  CHECK(dist(project(gauge_transform(wr, u), Side::system), project(wr, Side::system)) <= 1e-13);

  CHECK_THROWS_AS(gauge_transform(w, 2.0 * ComplexMatrix::identity(2)), InvariantViolation);
  CHECK_THROWS_AS(gauge_transform(w, ComplexMatrix::identity(3)), InvalidArgument);
}

TEST_CASE("gauge invariance of the projection on 500 random pairs") {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const std::size_t d = 2 + s % 4, dp = d + s % 3, dpp = dp + s % 2;
    const auto w = random_amplitude(d, dp, child_seed(21, s));
    const auto u = random_isometry_rows(dp, dpp, child_seed(22, s));
    worst = std::max(worst, dist(project(gauge_transform(w, u), Side::system), project(w, Side::system)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("lift_tangent examples") {
  const auto rho = random_density(3, 2);
  const auto w = canonical_amplitude(rho);
  CHECK(lift_tangent(w, HermitianMatrix(3), LogDerivativeKind::rld).m.frobenius_norm() == 0.0);

  const double p[] = {0.2, 0.3, 0.5};
  const double x[] = {0.1, 0.05, -0.15};
  const DensityMatrix dr(HermitianMatrix::diagonal(p));
  const auto dw = canonical_amplitude(dr);
  for (auto kind : {LogDerivativeKind::sld, LogDerivativeKind::rld}) {
    const auto lift = lift_tangent(dw, HermitianMatrix::diagonal(x), kind);
    ComplexMatrix expect(3, 3);
    for (int i = 0; i < 3; ++i) expect(i, i) = x[i] / p[i];
    CHECK((lift.m - expect * dw.matrix()).frobenius_norm() <= 1e-14);
  }

  const auto q = random_density(2, 2);
  const auto xq = random_traceless_hermitian(2, 2);
  const auto lift = lift_tangent(canonical_amplitude(q), xq, LogDerivativeKind::rld);
  CHECK((lift.project().matrix() - xq.matrix()).frobenius_norm() <= 1e-11);
}

TEST_CASE("lift/project round trip on 500 random instances") {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const std::size_t d = 2 + s % 5;
    const auto rho = random_density(d, child_seed(31, s));
    const auto x = random_traceless_hermitian(d, child_seed(32, s));
    auto w = canonical_amplitude(rho);
    if (s % 2) w = gauge_transform(w, random_isometry_rows(d, d + 2, child_seed(33, s)));
    for (auto kind : {LogDerivativeKind::sld, LogDerivativeKind::rld}) {
      const auto lift = lift_tangent(w, x, kind);
      worst = std::max(worst, (lift.project().matrix() - x.matrix()).frobenius_norm() / x.frobenius_norm());
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("reverse_sld examples") {
  const double p[] = {0.25, 0.75};
  const double dp[] = {0.1, -0.1};
  const DensityMatrix rho(HermitianMatrix::diagonal(p));
  const auto a = reverse_sld(canonical_amplitude(rho), HermitianMatrix::diagonal(dp));
  CHECK(near(a(0, 0).real(), 0.4, 1e-14));
  CHECK(near(a(1, 1).real(), -0.1 / 0.75, 1e-14));
  CHECK(std::abs(a(0, 1)) <= 1e-15);

  CHECK(reverse_sld(canonical_amplitude(rho), HermitianMatrix(2)).frobenius_norm() == 0.0);

  const ComplexMatrix bz = 0.5 * (ComplexMatrix::identity(2) + 0.8 * oracle::sigma_z());
  const DensityMatrix b(bz);
  const HermitianMatrix x(0.5 * oracle::sigma_x());
  const auto w = canonical_amplitude(b);
  const auto ab = reverse_sld(w, x);
  const auto ris = oracle::qubit_function(bz, [](double v) { return 1 / std::sqrt(v); });
  CHECK((ab.matrix() - ris * x.matrix() * ris).frobenius_norm() <= 1e-12);
  const ComplexMatrix res = rld(b, x) * w.matrix() - w.matrix() * ab.matrix();
  CHECK(res.frobenius_norm() <= 1e-11);
}

TEST_CASE("reverse_sld on non-canonical gauges solves the defining equation") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t d = 2 + s % 4;
    const auto rho = random_density(d, child_seed(41, s));
    const auto x = random_traceless_hermitian(d, child_seed(42, s));
    const auto w = gauge_transform(canonical_amplitude(rho), random_isometry_rows(d, d + 1 + s % 3, child_seed(43, s)));
    const auto a = reverse_sld(w, x);
    const ComplexMatrix res = rld(rho, x) * w.matrix() - w.matrix() * a.matrix();
    CHECK(res.frobenius_norm() <= 1e-9);
  }
}

TEST_CASE("duality gap") {
  const auto rho = random_density(2, 4);
  const auto x = random_traceless_hermitian(2, 4);
  const auto w = canonical_amplitude(rho);
  CHECK(std::abs(duality_gap(w, x)) <= 1e-10);
  CHECK(std::abs(duality_gap(w, HermitianMatrix(2))) <= 1e-15);

  // zero-padded to two extra columns, then mixed by a random 4×4 unitary
  ComplexMatrix padded(2, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) padded(i, j) = w.matrix()(i, j);
  const auto mixed = gauge_transform(AmplitudeMatrix(padded), random_unitary(4, 4));
  CHECK(duality_gap(mixed, x) >= -1e-10);
}

TEST_CASE("duality gap is non-negative and vanishes at the canonical gauge") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const std::size_t d = 2 + s % 4;
    const auto rho = random_density(d, child_seed(51, s));
    const auto x = random_traceless_hermitian(d, child_seed(52, s));
    const auto w = canonical_amplitude(rho);
    CHECK(std::abs(duality_gap(w, x)) <= 1e-10 * std::max(1.0, x.frobenius_norm()));
    const auto wg = gauge_transform(w, random_isometry_rows(d, d + 2, child_seed(53, s)));
    CHECK(duality_gap(wg, x) >= -1e-10);
  }
}
