#include <doctest.h>

#include "oracles.hpp"
#include "qig/channels.hpp"
#include "qig/divergence.hpp"

using namespace qig;
using oracle::near;

namespace {

DensityMatrix diag_state(std::vector<double> p) { return DensityMatrix(HermitianMatrix::diagonal(p)); }

/// Umegaki and D^R for qubits from the Pauli closed form of each matrix function.
double umegaki_2x2(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const auto& r = rho.matrix().matrix();
  const auto lr = oracle::qubit_function(r, [](double x) { return std::log(x); });
  const auto ls = oracle::qubit_function(sigma.matrix().matrix(), [](double x) { return std::log(x); });
  return (r * (lr - ls)).trace().real();
}

double rld_2x2(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const auto& r = rho.matrix().matrix();
  const auto rs = oracle::qubit_function(r, [](double x) { return std::sqrt(x); });
  const ComplexMatrix inner = rs * oracle::inverse_2x2(sigma.matrix().matrix()) * rs;
  const auto l = oracle::qubit_function(HermitianMatrix::hermitian_part(inner).matrix(), [](double x) { return std::log(x); });
  return (r * l).trace().real();
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(HermitianMatrix::hermitian_part(kron(a.matrix().matrix(), b.matrix().matrix())));
}

}  // namespace

TEST_CASE("kl examples") {
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  CHECK(kl(p, p) == 0.0);
  CHECK(near(kl(p, q), 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-15));
  CHECK(near(kl(p, q), 0.143841, 1e-6));
  const std::vector<double> one{1.0, 0.0};
  CHECK(near(kl(one, p), std::log(2.0), 1e-15));
  CHECK(is_infinite(kl(p, one)));
  CHECK_THROWS_AS(kl(p, std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("umegaki examples") {
  const auto r = random_density(3, 13);
  CHECK(std::abs(umegaki(r, r)) <= 1e-13);
  const std::vector<double> p{0.2, 0.3, 0.5}, q{0.4, 0.4, 0.2};
  CHECK(near(umegaki(diag_state(p), diag_state(q)), kl(p, q), 1e-14));

  const auto a = random_density(2, 13), b = random_density(2, 1013);
  CHECK(near(umegaki(a, b), umegaki_2x2(a, b), 1e-10));

  CHECK(is_infinite(umegaki(DensityMatrix::maximally_mixed(2), diag_state({1.0, 0.0}))));
  CHECK(near(umegaki(diag_state({1.0, 0.0}), DensityMatrix::maximally_mixed(2)), std::log(2.0), 1e-14));
}

TEST_CASE("rld_divergence examples") {
  const auto r = random_density(4, 14);
  CHECK(std::abs(rld_divergence(r, r)) <= 1e-12);
  const std::vector<double> p{0.2, 0.3, 0.5}, q{0.4, 0.4, 0.2};
  CHECK(near(rld_divergence(diag_state(p), diag_state(q)), kl(p, q), 1e-14));

  const auto a = random_density(2, 14), b = random_density(2, 1014);
  const double dr = rld_divergence(a, b);
  CHECK(near(dr, rld_2x2(a, b), 1e-10));
  CHECK(dr >= umegaki(a, b) - 1e-9);
  CHECK(near(rld_divergence_integral(a, b, 4000), dr, 1e-5));

  CHECK(is_infinite(rld_divergence(DensityMatrix::maximally_mixed(2), diag_state({1.0, 0.0}))));
}

TEST_CASE("rld_divergence_integral examples") {
  const auto r = random_density(2, 16);
  CHECK(std::abs(rld_divergence_integral(r, r, 100)) <= 1e-14);
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  CHECK(near(rld_divergence_integral(diag_state(p), diag_state(q), 4000), kl(p, q), 1e-5));
  CHECK(is_infinite(rld_divergence_integral(DensityMatrix::maximally_mixed(2), diag_state({1.0, 0.0}), 100)));
  CHECK_THROWS_AS(rld_divergence_integral(r, r, 1), InvalidArgument);
}

TEST_CASE("two_point_reverse_estimate examples") {
  const auto r = random_density(3, 17);
  const auto same = two_point_reverse_estimate(r, r);
  for (std::size_t x = 0; x < same.p_rho.size(); ++x) CHECK(near(same.p_rho[x], same.p_sigma[x], 1e-12));
  CHECK(std::abs(same.kl()) <= 1e-12);

  const std::vector<double> p{0.2, 0.3, 0.5}, q{0.4, 0.4, 0.2};
  const auto c = two_point_reverse_estimate(diag_state(p), diag_state(q));
  for (std::size_t x = 0; x < 3; ++x) {
    const auto& phi = c.ensemble.states()[x];
    std::size_t i = 0;
    while (std::abs(phi[i]) < 0.5) ++i;
    CHECK(near(std::abs(phi[i]), 1.0, 1e-12));
    CHECK(near(c.p_rho[x], p[i], 1e-12));
    CHECK(near(c.p_sigma[x], q[i], 1e-12));
  }

  const auto a = random_density(2, 15), b = random_density(2, 1015);
  const auto t = two_point_reverse_estimate(a, b);
  CHECK(t.residual(a, b) <= 1e-10);
  CHECK(near(t.kl(), rld_divergence(a, b), 1e-9));
  CHECK(near(t.kl(), rld_2x2(a, b), 1e-9));

  CHECK_THROWS_AS(two_point_reverse_estimate(a, diag_state({1.0, 0.0})), RankDeficientError);
}

TEST_CASE("Umegaki <= D^R on 300 random pairs") {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const std::size_t d = 2 + s % 4;
    const auto a = random_density(d, child_seed(101, s)), b = random_density(d, child_seed(102, s));
    CHECK(umegaki(a, b) <= rld_divergence(a, b) + 1e-9);
    CHECK(umegaki(a, b) >= -1e-12);
  }
}

TEST_CASE("commuting pairs collapse the sandwich") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t d = 2 + s % 4;
    const auto u = random_unitary(d, child_seed(103, s));
    const auto pa = random_density(d, child_seed(104, s)).spectrum().eigenvalues;
    const auto pb = random_density(d, child_seed(105, s)).spectrum().eigenvalues;
    const DensityMatrix a(HermitianMatrix::hermitian_part(u * ComplexMatrix::diagonal(pa) * u.adjoint()));
    const DensityMatrix b(HermitianMatrix::hermitian_part(u * ComplexMatrix::diagonal(pb) * u.adjoint()));
    const double k = kl(pa, pb);
    CHECK(near(umegaki(a, b), k, 1e-9));
    CHECK(near(rld_divergence(a, b), k, 1e-9));
  }
}

TEST_CASE("additivity on tensor products") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto r1 = random_density(2, child_seed(106, s)), s1 = random_density(2, child_seed(107, s));
    const auto r2 = random_density(2 + s % 2, child_seed(108, s)), s2 = random_density(2 + s % 2, child_seed(109, s));
    const auto rt = tensor(r1, r2), st = tensor(s1, s2);
    CHECK(near(umegaki(rt, st), umegaki(r1, s1) + umegaki(r2, s2), 1e-9));
    CHECK(near(rld_divergence(rt, st), rld_divergence(r1, s1) + rld_divergence(r2, s2), 1e-9));
  }
}

TEST_CASE("CPT monotonicity of both divergences") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const std::size_t d = 2 + s % 3;
    const auto a = random_density(d, child_seed(110, s)), b = random_density(d, child_seed(111, s));
    const auto ch = random_kraus(d, child_seed(112, s));
    const DensityMatrix ca(HermitianMatrix::hermitian_part(ch.apply(a.matrix())));
    const DensityMatrix cb(HermitianMatrix::hermitian_part(ch.apply(b.matrix())));
    CHECK(umegaki(ca, cb) <= umegaki(a, b) + 1e-8);
    CHECK(rld_divergence(ca, cb) <= rld_divergence(a, b) + 1e-8);
  }
}

TEST_CASE("non-minimal two-point estimates bound D^R from above") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const std::size_t d = 2 + s % 4;
    const auto a = random_density(d, child_seed(113, s)), b = random_density(d, child_seed(114, s));
    const auto t = random_two_point_reverse_estimate(a, b, 1 + s % 3, child_seed(115, s));
    CHECK(t.ensemble.size() == d + 1 + s % 3);
    CHECK(t.residual(a, b) <= 1e-10);
    CHECK(t.kl() >= rld_divergence(a, b) - 1e-8);
  }
}

TEST_CASE("integral and closed form agree on random qubit pairs") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto a = random_density(2, child_seed(116, s)), b = random_density(2, child_seed(117, s));
    CHECK(near(rld_divergence_integral(a, b, 4000), rld_divergence(a, b), 1e-5));
  }
}
