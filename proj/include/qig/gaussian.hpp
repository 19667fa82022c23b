#pragma once

// Fock-truncated Gaussian mixture of coherent states
//   ρ_θ = ∫ dq dp /(2πσ²) exp(−((q − θ¹)² + (p − θ²)²)/2σ²) |α⟩⟨α|,
// with α = (q − i p)/√(2ħ).

#include <string>
#include <vector>

#include "qig/harness.hpp"
#include "qig/reverse_estimation.hpp"

namespace qig {

inline constexpr const char* kCoherentConvention = "alpha = (q - i p)/sqrt(2 hbar)";
inline constexpr double kMaxLeakage = 5e-3;

enum class DerivativeMode { central_difference, analytic };

struct GaussianSpec {
  double sigma2 = 1.0;
  double hbar = 1.0;
  std::size_t truncation = 80;
  /// Gauss–Hermite nodes per axis; 0 picks max(61, truncation + 2).
  std::size_t quad_nodes = 0;
  std::vector<double> theta{0.0, 0.0};
  DerivativeMode derivative = DerivativeMode::central_difference;
  /// Central-difference step; 0 picks the library default.
  double fd_step = 0.0;

  std::size_t nodes() const { return quad_nodes > 0 ? quad_nodes : std::max<std::size_t>(61, truncation + 2); }
  void validate() const;
};

/// Nodes and weights for ∫ e^{−x²} f(x) dx.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(std::size_t n);

/// 1 − Tr of the truncated, unnormalized state at spec.theta.
double gaussian_leakage(const GaussianSpec& spec);

/// Normalized truncated state at mean θ (no leakage check).
DensityMatrix gaussian_state(const GaussianSpec& spec, const std::vector<double>& theta);

/// Normalized state and tangents at spec.theta. Throws TruncationError when
/// the leakage exceeds 5e-3.
FamilyPoint gaussian_family(const GaussianSpec& spec);

/// 1/((σ² + ħ)σ²) [[σ² + ħ/2, −iħ/2], [iħ/2, σ² + ħ/2]].
ComplexMatrix gaussian_rld_closed_form(double sigma2, double hbar);

struct GaussianReport {
  GaussianSpec spec;
  QFisherMatrix rld = QFisherMatrix::scalar(FisherKind::rld, 0.0);
  ComplexMatrix expected;
  RealMatrix relative_error;  // entrywise |J − J_expected| / |J_expected|
  double max_relative_error = 0.0;
  MultiparamBounds bounds;
  double expected_reverse = 0.0;  // 2/σ²
  double classical_input = 0.0;   // σ^{-2}, the input Fisher of the defining mixture
  double leakage = 0.0;
  std::string convention = kCoherentConvention;
  SuiteReport suite;
};

GaussianReport gaussian_check(const GaussianSpec& spec, const SuiteTolerances& tolerances = {});

}  // namespace qig
