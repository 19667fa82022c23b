#include "qig/channels.hpp"

#include <sstream>

namespace qig {

POVM::POVM(std::vector<HermitianMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidArgument("POVM needs at least one element");
  const std::size_t d = elements_.front().dim();
  HermitianMatrix sum(d);
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    const auto& e = elements_[k];
    if (e.dim() != d) throw InvalidArgument("POVM elements have different dimensions");
    const double lo = min_eigenvalue(e);
    if (lo < -tol::kPovmCompleteness) {
      std::ostringstream msg;
      msg << "POVM element " << k << " is not PSD (smallest eigenvalue " << lo << ")";
      throw InvariantViolation(msg.str());
    }
    sum += e;
  }
  const double residual = (sum - HermitianMatrix::identity(d)).frobenius_norm();
  if (residual > tol::kPovmCompleteness) {
    std::ostringstream msg;
    msg << "POVM elements do not sum to I (residual " << residual << ")";
    throw InvariantViolation(msg.str());
  }
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops) : ops_(std::move(kraus_ops)) {
  if (ops_.empty()) throw InvalidArgument("channel needs at least one Kraus operator");
  const std::size_t din = ops_.front().cols(), dout = ops_.front().rows();
  ComplexMatrix sum(din, din);
  for (const auto& k : ops_) {
    if (k.cols() != din || k.rows() != dout) throw InvalidArgument("Kraus operators differ in shape");
    sum += k.adjoint() * k;
  }
  const double residual = (sum - ComplexMatrix::identity(din)).frobenius_norm();
  if (residual > tol::kKrausCompleteness) {
    std::ostringstream msg;
    msg << "channel is not trace preserving: ‖Σ K†K − I‖_F = " << residual;
    throw InvariantViolation(msg.str());
  }
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& a) const {
  if (a.rows() != input_dim() || a.cols() != input_dim()) {
    throw InvalidArgument("channel input is " + a.shape() + ", expected " +
                          std::to_string(input_dim()) + "x" + std::to_string(input_dim()));
  }
  ComplexMatrix out(output_dim(), output_dim());
  for (const auto& k : ops_) out += k * a * k.adjoint();
  return out;
}

Ensemble::Ensemble(std::vector<double> weights, std::vector<std::vector<cplx>> states)
    : weights_(std::move(weights)), states_(std::move(states)) {
  if (weights_.empty() || weights_.size() != states_.size()) {
    throw InvalidArgument("ensemble needs one weight per state");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw InvariantViolation("ensemble weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > tol::kProbabilitySum) {
    std::ostringstream msg;
    msg << "ensemble weights sum to " << total;
    throw InvariantViolation(msg.str());
  }
  const std::size_t d = states_.front().size();
  for (std::size_t x = 0; x < states_.size(); ++x) {
    if (states_[x].size() != d) throw InvalidArgument("ensemble states differ in dimension");
    const double n = vector_norm(states_[x]);
    if (std::abs(n - 1.0) > tol::kEnsembleNorm) {
      std::ostringstream msg;
      msg << "ensemble state " << x << " has norm " << n;
      throw InvariantViolation(msg.str());
    }
  }
}

HermitianMatrix Ensemble::mix(std::span<const double> coefficients) const {
  if (coefficients.size() != size()) throw InvalidArgument("Ensemble::mix: coefficient count");
  ComplexMatrix r(dim(), dim());
  for (std::size_t x = 0; x < size(); ++x) {
    const auto& phi = states_[x];
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j)
        r(i, j) += coefficients[x] * phi[i] * std::conj(phi[j]);
  }
  return HermitianMatrix::hermitian_part(r);
}

ClassicalFamilyPoint measure(const FamilyPoint& point, const POVM& povm) {
  if (povm.dim() != point.dim()) throw InvalidArgument("measure: POVM and state dimensions differ");
  const std::size_t n = povm.size(), m = point.parameter_count();
  std::vector<double> probs(n);
  RealMatrix score(m, n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& e = povm.elements()[k].matrix();
    probs[k] = std::max(0.0, trace_of_product(point.rho().matrix(), e).real());
    for (std::size_t i = 0; i < m; ++i) score(i, k) = trace_of_product(point.tangent(i), e).real();
  }
  // Absorb roundoff so the simplex invariants hold exactly enough.
  double total = 0.0;
  for (double p : probs) total += p;
  for (double& p : probs) p /= total;
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += score(i, k);
    for (std::size_t k = 0; k < n; ++k) score(i, k) -= s * probs[k];
  }
  return ClassicalFamilyPoint(point.theta(), std::move(probs), std::move(score));
}

POVM optimal_sld_povm(const FamilyPoint& point) {
  if (point.parameter_count() != 1) {
    throw InvalidArgument("optimal_sld_povm needs a one-parameter family");
  }
  const HermitianMatrix l = sld(point.rho(), point.tangent(0));
  const SpectralDecomposition eig = eig_hermitian(l);
  std::vector<HermitianMatrix> projectors;
  for (std::size_t k = 0; k < eig.dim(); ++k) {
    const auto u = eig.eigenvector(k);
    projectors.push_back(HermitianMatrix::hermitian_part(outer(u, u)));
  }
  return POVM(std::move(projectors));
}

FamilyPoint apply_channel(const FamilyPoint& point, const KrausChannel& channel) {
  DensityMatrix rho(HermitianMatrix::hermitian_part(channel.apply(point.rho().matrix())));
  std::vector<HermitianMatrix> tangents;
  for (const auto& x : point.tangents()) {
    tangents.push_back(HermitianMatrix::hermitian_part(channel.apply(x)));
  }
  return FamilyPoint(point.theta(), std::move(rho), std::move(tangents));
}

FamilyPoint cq_map(const ClassicalFamilyPoint& classical, const std::vector<std::vector<cplx>>& states) {
  if (states.size() != classical.outcome_count()) {
    throw InvalidArgument("cq_map: " + std::to_string(states.size()) + " states for " +
                          std::to_string(classical.outcome_count()) + " outcomes");
  }
  const Ensemble ensemble(classical.probs(), states);
  DensityMatrix rho(ensemble.mix(classical.probs()));
  std::vector<HermitianMatrix> tangents;
  const auto& s = classical.score();
  for (std::size_t i = 0; i < classical.parameter_count(); ++i) {
    std::vector<double> row(s.cols());
    for (std::size_t x = 0; x < s.cols(); ++x) row[x] = s(i, x);
    tangents.push_back(ensemble.mix(row));
  }
  return FamilyPoint(classical.theta(), std::move(rho), std::move(tangents));
}

KrausChannel identity_channel(std::size_t dim) { return KrausChannel({ComplexMatrix::identity(dim)}); }

KrausChannel depolarizing_channel(std::size_t dim, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) throw InvalidArgument("depolarizing strength must be in [0, 1]");
  std::vector<ComplexMatrix> ops;
  if (lambda < 1.0) ops.push_back(ComplexMatrix::identity(dim) * cplx{std::sqrt(1.0 - lambda), 0.0});
  if (lambda > 0.0) {
    const double a = std::sqrt(lambda / static_cast<double>(dim));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        ComplexMatrix k(dim, dim);
        k(i, j) = a;
        ops.push_back(std::move(k));
      }
  }
  return KrausChannel(std::move(ops));
}

ComplexMatrix gram_schmidt_columns(ComplexMatrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  for (std::size_t j = 0; j < cols; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        cplx dot{};
        for (std::size_t i = 0; i < rows; ++i) dot += std::conj(m(i, k)) * m(i, j);
        for (std::size_t i = 0; i < rows; ++i) m(i, j) -= dot * m(i, k);
      }
    }
    double n = 0.0;
    for (std::size_t i = 0; i < rows; ++i) n += std::norm(m(i, j));
    n = std::sqrt(n);
    if (!(n > 1e-300)) throw ConvergenceError("gram_schmidt_columns: linearly dependent columns");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) /= n;
  }
  return m;
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return gram_schmidt_columns(rng.ginibre(dim, dim));
}

ComplexMatrix random_isometry_rows(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows > cols) throw InvalidArgument("random_isometry_rows: need rows ≤ cols");
  const ComplexMatrix u = random_unitary(cols, seed);
  ComplexMatrix r(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) r(i, j) = u(i, j);
  return r;
}

DensityMatrix random_density(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("random_density: dim must be ≥ 1");
  Rng rng(seed);
  const ComplexMatrix g = rng.ginibre(dim, dim);
  HermitianMatrix rho = HermitianMatrix::hermitian_part(g * g.adjoint());
  rho *= 1.0 / rho.trace();
  // Mixing weight ε gives eigenvalues ≥ ε/d; ε = 0.02·d puts the floor at 0.02.
  const double d = static_cast<double>(dim);
  const double eps = std::min(0.5, 0.02 * d);
  HermitianMatrix mixed = rho * (1.0 - eps) + HermitianMatrix::identity(dim) * (eps / d);
  return DensityMatrix::normalized(std::move(mixed));
}

HermitianMatrix random_traceless_hermitian(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  HermitianMatrix h = HermitianMatrix::hermitian_part(rng.ginibre(dim, dim));
  const double shift = h.trace() / static_cast<double>(dim);
  h -= HermitianMatrix::identity(dim) * shift;
  h *= 0.5 / std::sqrt(static_cast<double>(dim));
  return h;
}

FamilyPoint random_family_point(std::size_t dim, std::size_t m, std::uint64_t seed) {
  DensityMatrix rho = random_density(dim, child_seed(seed, 0));
  std::vector<HermitianMatrix> tangents;
  for (std::size_t i = 0; i < m; ++i) tangents.push_back(random_traceless_hermitian(dim, child_seed(seed, i + 1)));
  return FamilyPoint(std::vector<double>(m, 0.0), std::move(rho), std::move(tangents));
}

FamilyPoint random_classical_family_point(std::size_t dim, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> p(dim);
  double total = 0.0;
  for (auto& v : p) total += (v = 0.1 + rng.uniform());
  for (auto& v : p) v /= total;
  std::vector<HermitianMatrix> tangents;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> s(dim);
    double mean = 0.0;
    for (auto& v : s) mean += (v = rng.normal() * 0.3);
    mean /= static_cast<double>(dim);
    for (auto& v : s) v -= mean;
    tangents.push_back(HermitianMatrix::diagonal(s));
  }
  return FamilyPoint(std::vector<double>(m, 0.0), DensityMatrix(HermitianMatrix::diagonal(p)),
                     std::move(tangents));
}

KrausChannel random_kraus(std::size_t dim, std::uint64_t seed, std::size_t env_dim) {
  if (env_dim == 0) env_dim = dim;
  // Isometry V: C^dim → C^dim ⊗ C^env from the first dim columns of a unitary.
  const ComplexMatrix u = random_unitary(dim * env_dim, seed);
  std::vector<ComplexMatrix> ops;
  for (std::size_t e = 0; e < env_dim; ++e) {
    ComplexMatrix k(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) k(i, j) = u(e * dim + i, j);
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops));
}

POVM random_povm(std::size_t dim, std::size_t outcomes, std::uint64_t seed) {
  if (outcomes < 1) throw InvalidArgument("random_povm: need at least one outcome");
  Rng rng(seed);
  std::vector<HermitianMatrix> raw;
  HermitianMatrix total(dim);
  for (std::size_t k = 0; k < outcomes; ++k) {
    const ComplexMatrix g = rng.ginibre(dim, dim);
    raw.push_back(HermitianMatrix::hermitian_part(g * g.adjoint()));
    total += raw.back();
  }
  const HermitianMatrix inv_root = matrix_function(total, MatrixFunction::power(-0.5));
  std::vector<HermitianMatrix> elements;
  for (const auto& a : raw) {
    elements.push_back(HermitianMatrix::hermitian_part(inv_root.matrix() * a.matrix() * inv_root.matrix()));
  }
  return POVM(std::move(elements));
}

}  // namespace qig
