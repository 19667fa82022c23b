#pragma once

// Reverse estimation: simulating a quantum family by a classical family fed
// through an ensemble-preparation (CQ) map, locally, globally, and the
// multiparameter cost bounds.

#include <cstdint>
#include <vector>

#include "qig/channels.hpp"
#include "qig/log_derivative.hpp"

namespace qig {

/// Ensemble {(p(x), |φ_x⟩)} with scores λ_{i,x}; the first-order classical
/// family is p_θ(x) = p(x) + Σ_i λ_{i,x} p(x)(θ^i − θ0^i).
struct LocalReverseEstimate {
  Ensemble ensemble;
  std::vector<std::vector<double>> scores;  // scores[i][x]
  std::vector<double> theta0;

  ClassicalFamilyPoint input_family() const;
};

LocalReverseEstimate local_reverse_estimate(const FamilyPoint& point);

/// J_ij = Σ_x λ_{i,x} λ_{j,x} p(x).
QFisherMatrix input_fisher(const LocalReverseEstimate& lre);

struct ReverseEstimateValidation {
  double state_residual = 0.0;    // ‖Σ p φφ† − ρ‖_F
  double tangent_residual = 0.0;  // max_i ‖Σ λ_i p φφ† − ∂_iρ‖_F
  QFisherMatrix input = QFisherMatrix::scalar(FisherKind::classical, 0.0);
  QFisherMatrix rld = QFisherMatrix::scalar(FisherKind::rld, 0.0);
  /// Smallest eigenvalue of J − J^R (the scalar difference for m = 1).
  double gap = 0.0;
};

/// Throws InvalidCandidateError if either residual exceeds 1e-6.
ReverseEstimateValidation validate_reverse_estimate(const LocalReverseEstimate& candidate,
                                                    const FamilyPoint& point);

/// A valid, generally non-minimal local reverse estimate: the canonical
/// amplitude ρ^{1/2} is spread over d + extra ensemble members through a
/// random isometry whose compression reproduces ρ^{-1/2} ∂ρ ρ^{-1/2}.
LocalReverseEstimate random_local_reverse_estimate(const FamilyPoint& point, std::size_t extra,
                                                   std::uint64_t seed);

struct CommutationCheck {
  double max_commutator = 0.0;  // max ‖[L^R_{θ,i}, L^R_{θ′,j}]‖_F
  double scale = 0.0;           // max ‖L^R‖_F²
  double tolerance = 0.0;       // 1e-8 · max(1, scale)
  bool reverse_estimable() const noexcept { return max_commutator <= tolerance; }
};

CommutationCheck global_commutation_check(const std::vector<FamilyPoint>& points);

struct GlobalReverseEstimate {
  AmplitudeMatrix w0;
  std::vector<std::vector<double>> theta_grid;
  std::vector<std::vector<double>> p_theta;  // p_theta[k][x]
  std::vector<RealMatrix> scores;           // scores[k](i, x) = ∂_i p_θk(x)

  /// Normalized columns of W0.
  std::vector<std::vector<cplx>> states() const;
  ClassicalFamilyPoint input_family(std::size_t k) const;
};

/// Throws NotReverseEstimableError when the commutation check fails.
GlobalReverseEstimate global_reverse_estimate(const std::vector<FamilyPoint>& points,
                                              std::size_t theta0_index, std::uint64_t seed = 0);

struct MultiparamBounds {
  double reverse = 0.0;     // Sp G ℜJ^R + Spabs G ℑJ^R
  double estimation = 0.0;  // Sp G ℜJ^R − Spabs G ℑJ^R
};

MultiparamBounds multiparam_bounds(const QFisherMatrix& jr, const RealMatrix& g);

struct MinTraceResult {
  double value = 0.0;
  RealMatrix argmin;
  bool converged = false;
};

/// min { Tr G J : J real symmetric, J − J^R ⪰ 0 } by penalized Nelder–Mead
/// with random restarts. The returned value is always attained at a feasible J.
MinTraceResult min_trace_oracle(const QFisherMatrix& jr, const RealMatrix& g, std::uint64_t seed,
                                int restarts = 32);

}  // namespace qig
