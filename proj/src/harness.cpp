#include "qig/harness.hpp"

#include <cmath>

#include "qig/channels.hpp"
#include "qig/divergence.hpp"
#include "qig/reverse_estimation.hpp"

namespace qig {

double log_mean_inverse(double a, double b) {
  if (a == b) return 1.0 / a;
  return std::log1p((a - b) / b) / (a - b);
}

QFisherMatrix km_fisher(const FamilyPoint& point) {
  const auto& eig = point.rho().spectrum();
  if (!point.rho().full_rank()) throw RankDeficientError("km_fisher: state is rank deficient");
  const std::size_t m = point.parameter_count(), d = point.dim();
  std::vector<ComplexMatrix> xt;
  for (const auto& x : point.tangents()) xt.push_back(to_eigenbasis(eig, x.matrix()));
  RealMatrix c(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) c(i, j) = log_mean_inverse(eig.eigenvalues[i], eig.eigenvalues[j]);
  RealMatrix j(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) s += (xt[a](i, k) * std::conj(xt[b](i, k))).real() * c(i, k);
      j(a, b) = j(b, a) = s;
    }
  return QFisherMatrix(FisherKind::km, j, RealMatrix(m, m));
}

void SuiteReport::record(std::size_t trial, const std::string& quantity, double slack, double tolerance) {
  CheckStats* stats = nullptr;
  for (auto& c : checks)
    if (c.name == quantity) stats = &c;
  if (stats == nullptr) {
    checks.push_back(CheckStats{quantity, tolerance});
    stats = &checks.back();
  }
  stats->min_slack = std::min(stats->min_slack, slack);
  stats->max_slack = std::max(stats->max_slack, slack);
  ++stats->count;
  if (!(slack >= -tolerance)) violations.push_back({trial, quantity, slack});
}

const CheckStats* SuiteReport::find(const std::string& quantity) const {
  for (const auto& c : checks)
    if (c.name == quantity) return &c;
  return nullptr;
}

namespace {

std::size_t pick_dim(const std::vector<std::size_t>& dims, Rng& rng) {
  if (dims.empty()) throw InvalidArgument("suite needs at least one dimension");
  return dims[rng.index(dims.size())];
}

}  // namespace

SuiteReport monotone_metric_suite(std::size_t trials, const std::vector<std::size_t>& dims,
                                  std::uint64_t seed, const MetricSuiteOptions& options) {
  const SuiteTolerances& tol = options.tolerances;
  SuiteReport report{options.diagonal_only ? "monotone_metric (diagonal)" : "monotone_metric", seed,
                     trials, dims, {}, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = child_seed(seed, t);
    Rng rng(s);
    const std::size_t d = pick_dim(dims, rng);
    try {
      const FamilyPoint point = options.diagonal_only ? random_classical_family_point(d, 1, child_seed(s, 1))
                                                      : random_family_point(d, 1, child_seed(s, 1));
      const double js = sld_fisher(point).value();
      const double jr = rld_fisher(point).value();
      const double jk = km_fisher(point).value();
      report.record(t, "KM - SLD", jk - js, tol.metric_slack);
      report.record(t, "RLD - KM", jr - jk, tol.metric_slack);

      const POVM povm = random_povm(d, d + 1, child_seed(s, 2));
      const double jm = classical_fisher(measure(point, povm)).value();
      report.record(t, "SLD - measured", js - jm, tol.measurement);
      const double jopt = classical_fisher(measure(point, optimal_sld_povm(point))).value();
      report.record(t, "optimal POVM = SLD", -std::abs(jopt - js), tol.measurement);

      const double jin = input_fisher(local_reverse_estimate(point)).value();
      report.record(t, "LRE input = RLD", -std::abs(jin - jr), tol.lre_equality);

      const FamilyPoint out = apply_channel(point, random_kraus(d, child_seed(s, 3)));
      report.record(t, "CPT SLD", js - sld_fisher(out).value(), tol.metric_slack);
      report.record(t, "CPT RLD", jr - rld_fisher(out).value(), tol.metric_slack);
      report.record(t, "CPT KM", jk - km_fisher(out).value(), tol.metric_slack);
    } catch (const Error& e) {
      report.record(t, std::string("error: ") + e.what(), -std::numeric_limits<double>::infinity(), 0.0);
    }
  }
  return report;
}

namespace {

std::pair<DensityMatrix, DensityMatrix> make_pair(std::size_t d, PairKind kind, std::uint64_t s) {
  DensityMatrix rho = random_density(d, child_seed(s, 1));
  switch (kind) {
    case PairKind::equal:
      return {rho, rho};
    case PairKind::commuting: {
      // σ shares ρ's eigenbasis with a fresh spectrum.
      const auto spec = random_density(d, child_seed(s, 2)).spectrum().eigenvalues;
      const auto& u = rho.spectrum().eigenvectors;
      const ComplexMatrix sigma = u * to_complex(RealMatrix::diagonal(spec)) * u.adjoint();
      return {rho, DensityMatrix::normalized(HermitianMatrix::hermitian_part(sigma))};
    }
    case PairKind::random:
      break;
  }
  return {rho, random_density(d, child_seed(s, 2))};
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::normalized(HermitianMatrix::hermitian_part(kron(a.matrix(), b.matrix())));
}

}  // namespace

SuiteReport monotone_divergence_suite(std::size_t trials, const std::vector<std::size_t>& dims,
                                      std::uint64_t seed, const DivergenceSuiteOptions& options) {
  const SuiteTolerances& tol = options.tolerances;
  const char* names[] = {"monotone_divergence", "monotone_divergence (equal pairs)",
                         "monotone_divergence (commuting pairs)"};
  SuiteReport report{names[static_cast<int>(options.pairs)], seed, trials, dims, {}, {}};
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = child_seed(seed, t);
    Rng rng(s);
    const std::size_t d = pick_dim(dims, rng);
    try {
      const auto [rho, sigma] = make_pair(d, options.pairs, s);
      const double du = umegaki(rho, sigma);
      const double dr = rld_divergence(rho, sigma);
      report.record(t, "RLD - Umegaki", dr - du, tol.divergence_sandwich);
      if (options.pairs != PairKind::random) {
        report.record(t, "Umegaki = RLD (commuting)", -std::abs(dr - du), tol.divergence_sandwich);
        // Both states are diagonal in ρ's eigenbasis.
        const auto& u = rho.spectrum().eigenvectors;
        const ComplexMatrix sd = u.adjoint() * sigma.matrix().matrix() * u;
        std::vector<double> p = rho.spectrum().eigenvalues, q(d);
        for (std::size_t i = 0; i < d; ++i) q[i] = sd(i, i).real();
        report.record(t, "KL = Umegaki (commuting)", -std::abs(kl(p, q) - du), tol.divergence_sandwich);
      }

      const KrausChannel channel = random_kraus(d, child_seed(s, 3));
      const DensityMatrix rho_out = DensityMatrix::normalized(HermitianMatrix::hermitian_part(channel.apply(rho.matrix())));
      const DensityMatrix sigma_out =
          DensityMatrix::normalized(HermitianMatrix::hermitian_part(channel.apply(sigma.matrix())));
      report.record(t, "CPT Umegaki", du - umegaki(rho_out, sigma_out), tol.divergence_cpt);
      report.record(t, "CPT RLD", dr - rld_divergence(rho_out, sigma_out), tol.divergence_cpt);

      const DensityMatrix rho2 = random_density(2, child_seed(s, 4));
      const DensityMatrix sigma2 = random_density(2, child_seed(s, 5));
      const DensityMatrix rt = tensor(rho, rho2), st = tensor(sigma, sigma2);
      report.record(t, "additivity Umegaki", -std::abs(umegaki(rt, st) - du - umegaki(rho2, sigma2)),
                    tol.additivity);
      report.record(t, "additivity RLD",
                    -std::abs(rld_divergence(rt, st) - dr - rld_divergence(rho2, sigma2)), tol.additivity);

      const TwoPointReverseEstimate tp = two_point_reverse_estimate(rho, sigma);
      report.record(t, "two-point reconstruction", -tp.residual(rho, sigma), tol.reconstruction);
      report.record(t, "two-point KL = RLD", -std::abs(tp.kl() - dr), tol.two_point);
      const TwoPointReverseEstimate rnd = random_two_point_reverse_estimate(rho, sigma, 1 + rng.index(3), child_seed(s, 6));
      report.record(t, "random two-point reconstruction", -rnd.residual(rho, sigma), tol.reconstruction);
      report.record(t, "random two-point KL - RLD", rnd.kl() - dr, tol.two_point_bound);
    } catch (const Error& e) {
      report.record(t, std::string("error: ") + e.what(), -std::numeric_limits<double>::infinity(), 0.0);
    }
  }
  return report;
}

}  // namespace qig
