#include "qig/divergence.hpp"

#include <cmath>
#include <numeric>

namespace qig {

namespace {

/// ‖(I − P_σ) P_ρ‖_F within tolerance.
bool support_contained(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (sigma.full_rank()) return true;
  const ComplexMatrix outside = ComplexMatrix::identity(rho.dim()) - sigma.support_projector().matrix();
  return (outside * rho.support_projector().matrix()).frobenius_norm() <= tol::kDivergenceSupport;
}

void require_same_dim(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw InvalidArgument("divergence: ρ is " + std::to_string(rho.dim()) + "-dimensional, σ is " +
                          std::to_string(sigma.dim()) + "-dimensional");
  }
}

double sum_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TwoPointReverseEstimate from_amplitudes(const ComplexMatrix& w, const std::vector<double>& d) {
  const std::size_t n = w.cols();
  std::vector<double> ps(n), pr(n);
  std::vector<std::vector<cplx>> states;
  for (std::size_t x = 0; x < n; ++x) {
    auto col = w.column(x);
    const double norm = vector_norm(col);
    for (auto& z : col) z /= norm;
    states.push_back(std::move(col));
    ps[x] = norm * norm;
    pr[x] = std::max(0.0, d[x]) * ps[x];
  }
  const double ts = sum_of(ps), tr = sum_of(pr);
  for (auto& v : ps) v /= ts;
  for (auto& v : pr) v /= tr;
  return TwoPointReverseEstimate{Ensemble(ps, std::move(states)), pr, ps};
}

}  // namespace

double kl(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidArgument("kl: distributions differ in length");
  double d = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] < 0.0 || q[x] < 0.0) throw InvalidArgument("kl: negative probability");
    if (p[x] == 0.0) continue;
    if (q[x] == 0.0) return kInfiniteDivergence;
    d += p[x] * std::log(p[x] / q[x]);
  }
  return d;
}

double umegaki(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  if (!support_contained(rho, sigma)) return kInfiniteDivergence;
  double entropy_part = 0.0;
  const auto& er = rho.spectrum();
  for (std::size_t k = 0; k < er.dim(); ++k)
    if (er.in_support(k)) entropy_part += er.eigenvalues[k] * std::log(er.eigenvalues[k]);
  const HermitianMatrix log_sigma = matrix_function(sigma.spectrum(), MatrixFunction::log());
  return entropy_part - trace_of_product(rho.matrix(), log_sigma.matrix()).real();
}

double rld_divergence(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  if (!support_contained(rho, sigma)) return kInfiniteDivergence;
  const HermitianMatrix root = matrix_function(rho.spectrum(), MatrixFunction::sqrt());
  const HermitianMatrix inv = matrix_function(sigma.spectrum(), MatrixFunction::inverse());
  const HermitianMatrix inner =
      HermitianMatrix::hermitian_part(root.matrix() * inv.matrix() * root.matrix());
  const HermitianMatrix log_inner = matrix_function(inner, MatrixFunction::log());
  return trace_of_product(rho.matrix(), log_inner.matrix()).real();
}

double rld_divergence_integral(const DensityMatrix& rho, const DensityMatrix& sigma,
                               std::size_t steps) {
  require_same_dim(rho, sigma);
  if (steps < 2) throw InvalidArgument("rld_divergence_integral: steps must be at least 2");
  if (!support_contained(rho, sigma)) return kInfiniteDivergence;
  const ComplexMatrix delta = rho.matrix().matrix() - sigma.matrix().matrix();
  // (1 − s) Tr Δ ρ_s⁻¹ Δ, inverse on the support of ρ_s.
  auto integrand = [&](double s) {
    const HermitianMatrix mix = HermitianMatrix::hermitian_part(
        s * rho.matrix().matrix() + (1.0 - s) * sigma.matrix().matrix());
    const HermitianMatrix inv = matrix_function(mix, MatrixFunction::inverse());
    return (1.0 - s) * trace_of_product(delta * inv.matrix(), delta).real();
  };
  const double h = 1.0 / static_cast<double>(steps);
  const double eps = 0.5 * h;
  std::vector<double> f(steps + 1);
  for (std::size_t k = 1; k < steps; ++k) f[k] = integrand(static_cast<double>(k) * h);
  f[0] = 2.0 * integrand(eps) - f[1];
  f[steps] = 2.0 * integrand(1.0 - eps) - f[steps - 1];
  double total = 0.5 * (f[0] + f[steps]);
  for (std::size_t k = 1; k < steps; ++k) total += f[k];
  return total * h;
}

double TwoPointReverseEstimate::kl() const { return qig::kl(p_rho, p_sigma); }

double TwoPointReverseEstimate::residual(const DensityMatrix& rho, const DensityMatrix& sigma) const {
  const double a = (ensemble.mix(p_rho) - rho.matrix()).frobenius_norm();
  const double b = (ensemble.mix(p_sigma) - sigma.matrix()).frobenius_norm();
  return std::max(a, b);
}

TwoPointReverseEstimate two_point_reverse_estimate(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  if (!sigma.full_rank()) throw RankDeficientError("two_point_reverse_estimate: σ must be full rank");
  const HermitianMatrix root = matrix_function(sigma.spectrum(), MatrixFunction::sqrt());
  const HermitianMatrix inv_root =
      matrix_function(sigma.spectrum(), MatrixFunction::power(-0.5), tol::kRankTol, SupportMode::strict);
  const SpectralDecomposition t = eig_hermitian(
      HermitianMatrix::hermitian_part(inv_root.matrix() * rho.matrix().matrix() * inv_root.matrix()));
  return from_amplitudes(root.matrix() * t.eigenvectors, t.eigenvalues);
}

TwoPointReverseEstimate random_two_point_reverse_estimate(const DensityMatrix& rho,
                                                          const DensityMatrix& sigma,
                                                          std::size_t extra, std::uint64_t seed) {
  require_same_dim(rho, sigma);
  if (!sigma.full_rank()) {
    throw RankDeficientError("random_two_point_reverse_estimate: σ must be full rank");
  }
  const std::size_t d = rho.dim(), n = d + extra;
  const HermitianMatrix root = matrix_function(sigma.spectrum(), MatrixFunction::sqrt());
  const HermitianMatrix inv_root =
      matrix_function(sigma.spectrum(), MatrixFunction::power(-0.5), tol::kRankTol, SupportMode::strict);
  const HermitianMatrix t =
      HermitianMatrix::hermitian_part(inv_root.matrix() * rho.matrix().matrix() * inv_root.matrix());
  const HermitianMatrix t_root = matrix_function(t, MatrixFunction::sqrt());

  // B = R R† with R = [[T^{1/2}, 0], [Y]] is PSD with top-left block T, so the
  // first d rows V of its eigenvectors satisfy V diag(b) V† = T and V V† = I.
  Rng rng(seed);
  const ComplexMatrix y = rng.ginibre(extra, n) * (std::sqrt(t.trace() / static_cast<double>(d)));
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) r(i, j) = t_root(i, j);
  for (std::size_t i = 0; i < extra; ++i)
    for (std::size_t j = 0; j < n; ++j) r(d + i, j) = y(i, j);
  const SpectralDecomposition b = eig_hermitian(HermitianMatrix::hermitian_part(r * r.adjoint()));
  ComplexMatrix v(d, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t x = 0; x < n; ++x) v(i, x) = b.eigenvectors(i, x);
  return from_amplitudes(root.matrix() * v, b.eigenvalues);
}

}  // namespace qig
