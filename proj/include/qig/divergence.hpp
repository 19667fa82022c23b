#pragma once

// Classical and quantum relative entropies, the RLD divergence in closed and
// integral form, and the two-point reverse estimation that attains it.
// A support violation returns +infinity rather than throwing.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "qig/channels.hpp"
#include "qig/state.hpp"

namespace qig {

inline constexpr double kInfiniteDivergence = std::numeric_limits<double>::infinity();
inline bool is_infinite(double d) noexcept { return d == kInfiniteDivergence; }

/// Σ p ln(p/q) with 0 ln 0 = 0.
double kl(std::span<const double> p, std::span<const double> q);

/// Tr ρ(log ρ − log σ).
double umegaki(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Tr ρ log(ρ^{1/2} σ^{-1} ρ^{1/2}), log taken on the support of ρ.
double rld_divergence(const DensityMatrix& rho, const DensityMatrix& sigma);

/// ∫₀¹ (1 − s) J^R_s ds along sρ + (1 − s)σ, composite trapezoid on `steps`
/// panels; the endpoint values are extrapolated from s = ε, 2ε with ε = 1/(2·steps).
double rld_divergence_integral(const DensityMatrix& rho, const DensityMatrix& sigma,
                               std::size_t steps = 4000);

struct TwoPointReverseEstimate {
  Ensemble ensemble;  // weights are p_sigma
  std::vector<double> p_rho;
  std::vector<double> p_sigma;

  double kl() const;
  /// max of the two reconstruction residuals ‖Σ p φφ† − target‖_F.
  double residual(const DensityMatrix& rho, const DensityMatrix& sigma) const;
};

/// Minimal construction from σ^{-1/2} ρ σ^{-1/2} = U diag(d) U†; requires full-rank σ.
TwoPointReverseEstimate two_point_reverse_estimate(const DensityMatrix& rho, const DensityMatrix& sigma);

/// A valid, generally non-minimal two-point estimate with d + extra members.
TwoPointReverseEstimate random_two_point_reverse_estimate(const DensityMatrix& rho,
                                                          const DensityMatrix& sigma,
                                                          std::size_t extra, std::uint64_t seed);

}  // namespace qig
