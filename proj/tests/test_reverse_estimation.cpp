#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qig/channels.hpp"
#include "qig/families.hpp"
#include "qig/gaussian.hpp"
#include "qig/reverse_estimation.hpp"

using namespace qig;
using oracle::near;

namespace {

std::vector<FamilyPoint> bloch_grid(std::initializer_list<double> thetas) {
  std::vector<FamilyPoint> pts;
  for (double t : thetas) pts.push_back(fixture::bloch_point(0.8, t));
  return pts;
}

QFisherMatrix paper_gaussian_rld() {
  return QFisherMatrix(FisherKind::rld, gaussian_rld_closed_form(1.0, 1.0));
}

}  // namespace

TEST_CASE("local_reverse_estimate examples") {
  const auto z = local_reverse_estimate(fixture::sigma_z_point(0.0));
  REQUIRE(z.ensemble.size() == 2);
  for (std::size_t x = 0; x < 2; ++x) {
    CHECK(near(z.ensemble.weights()[x], 0.5, 1e-14));
    CHECK(near(std::abs(z.scores[0][x]), 1.0, 1e-14));
  }
  CHECK(near(z.scores[0][0] + z.scores[0][1], 0.0, 1e-14));
  CHECK(near(input_fisher(z).value(), 1.0, 1e-14));

  const auto b = fixture::bloch_point(0.8, 0.0);
  const auto lb = local_reverse_estimate(b);
  const double jr = (b.tangent(0).matrix() * oracle::inverse_2x2(b.rho().matrix().matrix()) * b.tangent(0).matrix()).trace().real();
  CHECK(near(input_fisher(lb).value(), jr, 1e-12));
  CHECK(near(input_fisher(lb).value(), 1.777777777777778, 1e-12));
  CHECK(input_fisher(lb).kind() == FisherKind::classical);

  const FamilyPoint still({0.0}, b.rho(), {HermitianMatrix(2)});
  const auto l0 = local_reverse_estimate(still);
  for (double v : l0.scores[0]) CHECK(v == doctest::Approx(0.0));
  CHECK(input_fisher(l0).value() == doctest::Approx(0.0));

  CHECK_THROWS_AS(local_reverse_estimate(fixture::diagonal_point({1.0, 0.0}, {{0.0, 0.0}})), RankDeficientError);
}

TEST_CASE("validate_reverse_estimate") {
  const auto b = fixture::bloch_point(0.8, 0.0);
  const auto opt = local_reverse_estimate(b);
  const auto v = validate_reverse_estimate(opt, b);
  CHECK(v.state_residual <= 1e-12);
  CHECK(v.tangent_residual <= 1e-12);
  CHECK(std::abs(v.gap) <= 1e-8);

  // duplicate the first member with an uneven 0.3/0.7 weight split; scores
  // (λ + δ, λ − 0.3δ/0.7) leave both moments unchanged
  auto weights = opt.ensemble.weights();
  auto states = opt.ensemble.states();
  auto scores = opt.scores[0];
  const double w0 = weights[0], l0 = scores[0], delta = 0.5;
  weights[0] = 0.3 * w0;
  weights.push_back(0.7 * w0);
  states.push_back(states[0]);
  scores[0] = l0 + delta;
  scores.push_back(l0 - 0.3 * delta / 0.7);
  const LocalReverseEstimate split{Ensemble(weights, states), {scores}, opt.theta0};
  const auto vs = validate_reverse_estimate(split, b);
  CHECK(vs.state_residual <= 1e-12);
  CHECK(vs.tangent_residual <= 1e-12);
  const double expected_gap = w0 * (0.3 * delta * delta + 0.7 * std::pow(0.3 * delta / 0.7, 2));
  CHECK(vs.gap > 0.0);
  CHECK(near(vs.gap, expected_gap, 1e-12));

  const LocalReverseEstimate wrong{Ensemble({0.5, 0.5}, {{1.0, 0.0}, {0.0, 1.0}}), {{0.0, 0.0}}, {0.0}};
  CHECK_THROWS_AS(validate_reverse_estimate(wrong, b), InvalidCandidateError);
  try {
    validate_reverse_estimate(wrong, b);
  } catch (const InvalidCandidateError& e) {
    CHECK(e.state_residual() > 1e-6);
  }
}

TEST_CASE("equality of the constructed estimate on 200 random families") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto pt = random_family_point(2 + s % 5, 1, child_seed(91, s));
    CHECK(near(input_fisher(local_reverse_estimate(pt)).value(), rld_fisher(pt).value(), 1e-9));
  }
}

TEST_CASE("randomized valid estimates never beat J^R") {
  double min_gap = 1e300;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto pt = random_family_point(2 + s % 5, 1, child_seed(92, s));
    const auto lre = random_local_reverse_estimate(pt, 1 + s % 3, child_seed(93, s));
    const auto v = validate_reverse_estimate(lre, pt);
    CHECK(v.state_residual <= 1e-8);
    CHECK(v.tangent_residual <= 1e-8);
    min_gap = std::min(min_gap, v.gap);
  }
  CHECK(min_gap >= -1e-8);
}

TEST_CASE("global_commutation_check examples") {
  const auto spec = parse_family_spec(nlohmann::json::parse(
      R"({"kind":"fixed_basis","base":[0.2,0.3,0.5],"directions":[[0.1,-0.05,-0.05]],"basis_seed":5,"theta_grid":[[0],[0.5],[-0.8]]})"));
  CHECK(global_commutation_check(family_grid(spec)).reverse_estimable());

  const auto diag = parse_family_spec(nlohmann::json::parse(
      R"({"kind":"classical_simplex","base":[0.2,0.3,0.5],"directions":[[0.1,-0.05,-0.05]],"theta_grid":[[0],[0.5]]})"));
  CHECK(global_commutation_check(family_grid(diag)).max_commutator <= 1e-15);

  // explicit 2×2 commutator of the RLDs at θ = 0 and θ = 0.3
  const auto pts = bloch_grid({0.0, 0.3, 0.6});
  const auto check = global_commutation_check(pts);
  const auto r0 = pts[0].tangent(0).matrix() * oracle::inverse_2x2(pts[0].rho().matrix().matrix());
  const auto r1 = pts[1].tangent(0).matrix() * oracle::inverse_2x2(pts[1].rho().matrix().matrix());
  const double c01 = (r0 * r1 - r1 * r0).frobenius_norm();
  CHECK(c01 > 0.1);
  CHECK(check.max_commutator >= c01 - 1e-12);
  CHECK_FALSE(check.reverse_estimable());

  CHECK(global_commutation_check(bloch_grid({0.0})).max_commutator <= 1e-15);
}

TEST_CASE("global_reverse_estimate examples") {
  const auto diag = parse_family_spec(nlohmann::json::parse(
      R"({"kind":"classical_simplex","base":[0.2,0.3,0.5],"directions":[[0.1,-0.05,-0.05]],"theta_grid":[[0],[0.5],[1.0]]})"));
  const auto dpts = family_grid(diag);
  const auto g = global_reverse_estimate(dpts, 0, 1);
  const auto states = g.states();
  for (std::size_t k = 0; k < dpts.size(); ++k) {
    for (std::size_t x = 0; x < 3; ++x) {
      // the ensemble member aligned with basis vector i carries ρ_θ(i, i)
      std::size_t i = 0;
      while (std::abs(states[x][i]) < 0.5) ++i;
      CHECK(near(std::abs(states[x][i]), 1.0, 1e-12));
      CHECK(near(g.p_theta[k][x], dpts[k].rho().matrix()(i, i).real(), 1e-12));
    }
  }

  const auto fixed = parse_family_spec(nlohmann::json::parse(
      R"({"kind":"fixed_basis","base":[0.2,0.3,0.5],"directions":[[0.1,-0.05,-0.05],[0.0,0.1,-0.1]],"basis_seed":5,"theta_grid":[[0,0],[0.5,0.2],[-0.8,1.0]]})"));
  const auto fpts = family_grid(fixed);
  const auto gf = global_reverse_estimate(fpts, 1, 2);
  for (std::size_t k = 0; k < fpts.size(); ++k) {
    const auto cl = gf.input_family(k);
    std::vector<double> probs = cl.probs();
    const auto rec = Ensemble(std::vector<double>(3, 1.0 / 3), gf.states()).mix(probs);
    CHECK((rec.matrix() - fpts[k].rho().matrix().matrix()).frobenius_norm() <= 1e-8);
    // sorted input distribution equals the sorted generating distribution
    const auto q = eig_hermitian(fpts[k].rho().matrix()).eigenvalues;
    std::sort(probs.begin(), probs.end());
    for (std::size_t i = 0; i < 3; ++i) CHECK(near(probs[i], q[i], 1e-10));
    const auto jr = rld_fisher(fpts[k]);
    const auto jin = classical_fisher(cl);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(near(jin.real_part()(i, j), jr.real_part()(i, j), 1e-7));
  }

  try {
    global_reverse_estimate(bloch_grid({0.0, 0.3, 0.6}), 0);
    FAIL("Bloch family accepted");
  } catch (const NotReverseEstimableError& e) {
    CHECK(e.max_commutator() > 0.0);
  }
}

TEST_CASE("multiparam_bounds examples") {
  const auto jr = paper_gaussian_rld();
  const auto b = multiparam_bounds(jr, RealMatrix::identity(2));
  CHECK(near(b.reverse, 2.0, 1e-14));
  CHECK(near(b.estimation, 1.0, 1e-14));

  const RealMatrix re{{2.0, 0.5}, {0.5, 1.0}};
  const double dg[] = {1.0, 3.0};
  const auto real_only = multiparam_bounds(QFisherMatrix(FisherKind::rld, re, RealMatrix(2, 2)), RealMatrix::diagonal(dg));
  CHECK(near(real_only.reverse, 5.0, 1e-14));
  CHECK(real_only.reverse == real_only.estimation);

  const double neg[] = {1.0, -1.0};
  CHECK_THROWS_AS(multiparam_bounds(jr, RealMatrix::diagonal(neg)), InvalidArgument);
  CHECK_THROWS_AS(multiparam_bounds(jr, RealMatrix::identity(3)), InvalidArgument);
}

TEST_CASE("reverse bound dominates the estimation bound") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto pt = random_family_point(2 + s % 3, 2, child_seed(94, s));
    const auto jr = rld_fisher(pt);
    Rng rng(s);
    RealMatrix a(2, 2);
    for (auto& v : a.data()) v = rng.normal();
    const auto b = multiparam_bounds(jr, a * a.transpose());
    CHECK(b.reverse >= b.estimation - 1e-12);
  }
  const auto b = multiparam_bounds(QFisherMatrix(FisherKind::rld, RealMatrix::identity(2), RealMatrix(2, 2)), RealMatrix::identity(2));
  CHECK(near(b.reverse, b.estimation, 1e-10));
}

TEST_CASE("min_trace_oracle examples") {
  const RealMatrix re{{2.0, 0.5}, {0.5, 1.0}};
  const double dg[] = {1.0, 3.0};
  const auto g = RealMatrix::diagonal(dg);
  const auto real_only = min_trace_oracle(QFisherMatrix(FisherKind::rld, re, RealMatrix(2, 2)), g, 1);
  CHECK(near(real_only.value, 5.0, 5e-3));
  CHECK(real_only.converged);

  const auto gauss = min_trace_oracle(paper_gaussian_rld(), RealMatrix::identity(2), 2);
  CHECK(near(gauss.value, 2.0, 2e-3));
  CHECK(gauss.converged);

  // seed 12 instance, G = diag(1, 2)
  const auto pt = random_family_point(2, 2, 12);
  const auto jr = rld_fisher(pt);
  const double dg12[] = {1.0, 2.0};
  const auto r = min_trace_oracle(jr, RealMatrix::diagonal(dg12), 12);
  const double closed = multiparam_bounds(jr, RealMatrix::diagonal(dg12)).reverse;
  CHECK(std::abs(r.value - closed) <= 1e-3 * closed);
  // the returned argmin is feasible
  const QFisherMatrix diff(FisherKind::rld, r.argmin - jr.real_part(), -1.0 * jr.imag_part());
  CHECK(diff.min_eigenvalue() >= -1e-9);

  CHECK_THROWS_AS(min_trace_oracle(QFisherMatrix(FisherKind::rld, RealMatrix::identity(4), RealMatrix(4, 4)),
                                   RealMatrix::identity(4), 0),
                  InvalidArgument);
}

TEST_CASE("bound identity on 20 random instances") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto pt = random_family_point(2 + s % 3, 2, child_seed(95, s));
    const auto jr = rld_fisher(pt);
    Rng rng(child_seed(96, s));
    RealMatrix a(2, 2);
    for (auto& v : a.data()) v = rng.normal();
    const RealMatrix g = a * a.transpose() + 0.1 * RealMatrix::identity(2);
    const double closed = multiparam_bounds(jr, g).reverse;
    const auto r = min_trace_oracle(jr, g, child_seed(97, s));
    CHECK(std::abs(r.value - closed) <= 1e-3 * closed);
  }
}
