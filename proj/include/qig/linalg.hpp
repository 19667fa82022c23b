#pragma once

// Spectral kernel: Hermitian eigendecomposition by cyclic Jacobi rotations and
// the support-restricted matrix functions built on it.

#include <cstddef>
#include <vector>

#include "qig/matrix.hpp"
#include "qig/tolerances.hpp"

namespace qig {

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  double max_eigenvalue() const { return eigenvalues.back(); }
  double min_eigenvalue() const { return eigenvalues.front(); }
  double max_abs_eigenvalue() const;
  std::vector<cplx> eigenvector(std::size_t k) const { return eigenvectors.column(k); }

  /// U Λ U†.
  HermitianMatrix reconstruct() const;
  /// Eigenvalues strictly above rank_tol * max|λ|.
  std::size_t rank(double rank_tol = tol::kRankTol) const;
  bool in_support(std::size_t k, double rank_tol = tol::kRankTol) const;
  /// Orthogonal projector onto span of the in-support eigenvectors.
  HermitianMatrix support_projector(double rank_tol = tol::kRankTol) const;
};

inline constexpr int kJacobiMaxSweeps = 100;

/// eig_tol = 1e-12 · dim · ‖H‖_F with absolute floor 1e-13.
double eig_tolerance(const HermitianMatrix& h);

SpectralDecomposition eig_hermitian(const HermitianMatrix& h);

class MatrixFunction {
 public:
  enum class Kind { sqrt, log, inverse, power };

  static MatrixFunction sqrt() { return MatrixFunction(Kind::sqrt, 0.5); }
  static MatrixFunction log() { return MatrixFunction(Kind::log, 0.0); }
  static MatrixFunction inverse() { return MatrixFunction(Kind::inverse, -1.0); }
  static MatrixFunction power(double t) { return MatrixFunction(Kind::power, t); }

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }
  /// log, inverse and negative powers only make sense on the support.
  bool needs_support() const noexcept {
    return kind_ == Kind::log || kind_ == Kind::inverse || (kind_ == Kind::power && exponent_ < 0);
  }
  double apply(double x) const;

 private:
  MatrixFunction(Kind k, double e) : kind_(k), exponent_(e) {}
  Kind kind_;
  double exponent_;
};

enum class SupportMode {
  pseudo,  // out-of-support eigenvalues map to 0
  strict,  // out-of-support eigenvalues are an error for log/inverse/negative powers
};

HermitianMatrix matrix_function(const SpectralDecomposition& eig, MatrixFunction f,
                                double rank_tol = tol::kRankTol,
                                SupportMode mode = SupportMode::pseudo);
HermitianMatrix matrix_function(const HermitianMatrix& h, MatrixFunction f,
                                double rank_tol = tol::kRankTol,
                                SupportMode mode = SupportMode::pseudo);

/// Solves ½(Lρ + ρL) = X for Hermitian L given the spectrum of a full-rank ρ.
HermitianMatrix solve_lyapunov(const SpectralDecomposition& rho_eig, const HermitianMatrix& x,
                               double rank_tol = tol::kRankTol);
HermitianMatrix solve_lyapunov(const HermitianMatrix& rho, const HermitianMatrix& x,
                               double rank_tol = tol::kRankTol);

/// U† M U for the eigenbasis U.
ComplexMatrix to_eigenbasis(const SpectralDecomposition& eig, const ComplexMatrix& m);
ComplexMatrix from_eigenbasis(const SpectralDecomposition& eig, const ComplexMatrix& m);

// Real symmetric helpers for the m×m Fisher-side matrices.
std::vector<double> symmetric_eigenvalues(const RealMatrix& s);
RealMatrix sqrt_psd(const RealMatrix& g);
double min_eigenvalue(const RealMatrix& s);
double min_eigenvalue(const HermitianMatrix& h);

/// Sum of singular values of a general real matrix.
double trace_norm(const RealMatrix& k);

/// Trace norm of √G K √G.
double spabs(const RealMatrix& g, const RealMatrix& k);

}  // namespace qig
