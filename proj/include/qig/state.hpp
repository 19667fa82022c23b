#pragma once

// States, family points and amplitude matrices W with π(W) = WW†.

#include <memory>
#include <span>
#include <vector>

#include "qig/linalg.hpp"
#include "qig/matrix.hpp"

namespace qig {

/// Hermitian, PSD (up to -1e-12), unit-trace matrix with its spectrum computed once.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianMatrix rho);
  explicit DensityMatrix(const ComplexMatrix& rho) : DensityMatrix(HermitianMatrix(rho)) {}

  /// Rescales to unit trace before validating.
  static DensityMatrix normalized(HermitianMatrix rho);
  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix pure(std::span<const cplx> psi);

  std::size_t dim() const noexcept { return rho_.dim(); }
  const HermitianMatrix& matrix() const noexcept { return rho_; }
  operator const HermitianMatrix&() const noexcept { return rho_; }  // NOLINT
  const SpectralDecomposition& spectrum() const noexcept { return *spectrum_; }

  std::size_t rank(double rank_tol = tol::kRankTol) const { return spectrum_->rank(rank_tol); }
  bool full_rank(double rank_tol = tol::kRankTol) const { return rank(rank_tol) == dim(); }
  HermitianMatrix support_projector(double rank_tol = tol::kRankTol) const {
    return spectrum_->support_projector(rank_tol);
  }

 private:
  HermitianMatrix rho_;
  std::shared_ptr<const SpectralDecomposition> spectrum_;
};

/// Local data (θ, ρ_θ, ∂_iρ_θ) of an m-parameter family.
class FamilyPoint {
 public:
  FamilyPoint(std::vector<double> theta, DensityMatrix rho, std::vector<HermitianMatrix> tangents);

  const std::vector<double>& theta() const noexcept { return theta_; }
  const DensityMatrix& rho() const noexcept { return rho_; }
  const std::vector<HermitianMatrix>& tangents() const noexcept { return tangents_; }
  const HermitianMatrix& tangent(std::size_t i) const { return tangents_.at(i); }
  std::size_t parameter_count() const noexcept { return tangents_.size(); }
  std::size_t dim() const noexcept { return rho_.dim(); }

 private:
  std::vector<double> theta_;
  DensityMatrix rho_;
  std::vector<HermitianMatrix> tangents_;
};

/// d × d′ matrix W with Tr WW† = 1; columns are √p_x |φ_x⟩.
class AmplitudeMatrix {
 public:
  explicit AmplitudeMatrix(ComplexMatrix w);

  const ComplexMatrix& matrix() const noexcept { return w_; }
  std::size_t system_dim() const noexcept { return w_.rows(); }
  std::size_t ancilla_dim() const noexcept { return w_.cols(); }

 private:
  ComplexMatrix w_;
};

/// Tangent vector at W in its matrix representation M.
struct TangentLift {
  AmplitudeMatrix base;
  ComplexMatrix m;

  /// ½(W M† + M W†).
  HermitianMatrix project() const;
};

enum class Side { system, ancilla };
enum class LogDerivativeKind { sld, rld };

AmplitudeMatrix canonical_amplitude(const DensityMatrix& rho);

/// system: WW† (d×d); ancilla: W†W (d′×d′).
DensityMatrix project(const AmplitudeMatrix& w, Side side);

/// W ↦ WU for a d′×d″ matrix with UU† = I_{d′}.
AmplitudeMatrix gauge_transform(const AmplitudeMatrix& w, const ComplexMatrix& u);

TangentLift lift_tangent(const AmplitudeMatrix& w, const HermitianMatrix& x, LogDerivativeKind kind);

/// Hermitian A (d′×d′) with L^R W = W A. Returns the minimum-norm solution
/// W† ρ⁻¹ X ρ⁻¹ W, which is ρ^{-1/2} X ρ^{-1/2} at W = ρ^{1/2}.
HermitianMatrix reverse_sld(const AmplitudeMatrix& w, const HermitianMatrix& x);

/// Tr π̃(W) A A − Tr ρ L^{R†} L^R for A = reverse_sld(W, X).
double duality_gap(const AmplitudeMatrix& w, const HermitianMatrix& x);

}  // namespace qig
