#pragma once

// Measurements (QC maps), Kraus channels, ensemble preparation (CQ maps) and
// seeded random instances.

#include <cstdint>
#include <vector>

#include "qig/log_derivative.hpp"
#include "qig/random.hpp"
#include "qig/state.hpp"

namespace qig {

class POVM {
 public:
  explicit POVM(std::vector<HermitianMatrix> elements);

  const std::vector<HermitianMatrix>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  std::size_t dim() const noexcept { return elements_.front().dim(); }

 private:
  std::vector<HermitianMatrix> elements_;
};

class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops);

  const std::vector<ComplexMatrix>& kraus_ops() const noexcept { return ops_; }
  std::size_t input_dim() const noexcept { return ops_.front().cols(); }
  std::size_t output_dim() const noexcept { return ops_.front().rows(); }

  /// Σ_j K_j A K_j† for any d_in × d_in matrix A.
  ComplexMatrix apply(const ComplexMatrix& a) const;

 private:
  std::vector<ComplexMatrix> ops_;
};

/// Weighted unit vectors {(p(x), |φ_x⟩)}.
class Ensemble {
 public:
  Ensemble(std::vector<double> weights, std::vector<std::vector<cplx>> states);

  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<std::vector<cplx>>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t dim() const noexcept { return states_.front().size(); }

  /// Σ_x c(x) |φ_x⟩⟨φ_x|.
  HermitianMatrix mix(std::span<const double> coefficients) const;

 private:
  std::vector<double> weights_;
  std::vector<std::vector<cplx>> states_;
};

ClassicalFamilyPoint measure(const FamilyPoint& point, const POVM& povm);

/// Projectors onto the eigenvectors of L^S; attains J^M = J^S for m = 1.
POVM optimal_sld_povm(const FamilyPoint& point);

FamilyPoint apply_channel(const FamilyPoint& point, const KrausChannel& channel);

/// ρ = Σ p(x)|φ_x⟩⟨φ_x|, ∂_iρ = Σ ∂_i p(x)|φ_x⟩⟨φ_x|.
FamilyPoint cq_map(const ClassicalFamilyPoint& classical, const std::vector<std::vector<cplx>>& states);

KrausChannel identity_channel(std::size_t dim);
/// ρ ↦ (1 − λ)ρ + λ I/d.
KrausChannel depolarizing_channel(std::size_t dim, double lambda);

// Seeded generators. Same seed, same instance.
ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed);
/// rows × cols with rows ≤ cols and orthonormal rows (UU† = I).
ComplexMatrix random_isometry_rows(std::size_t rows, std::size_t cols, std::uint64_t seed);
/// Full rank, smallest eigenvalue ≥ 0.02 for dim ≤ 25.
DensityMatrix random_density(std::size_t dim, std::uint64_t seed);
HermitianMatrix random_traceless_hermitian(std::size_t dim, std::uint64_t seed);
FamilyPoint random_family_point(std::size_t dim, std::size_t m, std::uint64_t seed);
/// Diagonal ρ with diagonal tangents.
FamilyPoint random_classical_family_point(std::size_t dim, std::size_t m, std::uint64_t seed);
/// Stinespring dilation of a random unitary on dim ⊗ env_dim; env_dim = 0 picks dim.
KrausChannel random_kraus(std::size_t dim, std::uint64_t seed, std::size_t env_dim = 0);
POVM random_povm(std::size_t dim, std::size_t outcomes, std::uint64_t seed);

ComplexMatrix gram_schmidt_columns(ComplexMatrix m);

}  // namespace qig
