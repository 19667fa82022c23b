#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "qig/state.hpp"

namespace qig {

enum class FisherKind { sld, rld, km, classical, measured };

std::string_view to_string(FisherKind k);
FisherKind fisher_kind_from_string(std::string_view s);

/// Hermitian m×m Fisher matrix split into a symmetric real part and an
/// antisymmetric imaginary part.
class QFisherMatrix {
 public:
  QFisherMatrix(FisherKind kind, const RealMatrix& real_part, const RealMatrix& imag_part);
  QFisherMatrix(FisherKind kind, const ComplexMatrix& hermitian);

  static QFisherMatrix scalar(FisherKind kind, double value);

  FisherKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return re_.rows(); }
  const RealMatrix& real_part() const noexcept { return re_; }
  const RealMatrix& imag_part() const noexcept { return im_; }
  /// real_part + i·imag_part.
  HermitianMatrix hermitian() const;
  /// Entry (0,0); the value of a one-parameter Fisher information.
  double value() const { return re_(0, 0); }
  double min_eigenvalue() const;

 private:
  FisherKind kind_;
  RealMatrix re_;
  RealMatrix im_;
};

/// (θ, p_θ, ∂_i p_θ) of a classical family; score is m × outcomes.
class ClassicalFamilyPoint {
 public:
  ClassicalFamilyPoint(std::vector<double> theta, std::vector<double> probs, RealMatrix score);

  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  const RealMatrix& score() const noexcept { return score_; }
  std::size_t outcome_count() const noexcept { return probs_.size(); }
  std::size_t parameter_count() const noexcept { return score_.rows(); }

 private:
  std::vector<double> theta_;
  std::vector<double> probs_;
  RealMatrix score_;
};

/// L^S with ½(L^S ρ + ρ L^S) = X; requires full-rank ρ.
HermitianMatrix sld(const DensityMatrix& rho, const HermitianMatrix& x);

/// L^R with L^R ρ = X, computed as X ρ⁺ on the support of ρ. Throws
/// RldExistenceError when ‖(I − P)X‖_F > 1e-9·max(1, ‖X‖_F).
ComplexMatrix rld(const DensityMatrix& rho, const HermitianMatrix& x);

/// J^S_ij = ℜ Tr ρ L^S_i L^S_j.
QFisherMatrix sld_fisher(const FamilyPoint& point);

/// J^R_ij = Tr ρ L^{R†}_j L^R_i.
QFisherMatrix rld_fisher(const FamilyPoint& point);

/// J_ij = Σ_x ∂_i p(x) ∂_j p(x) / p(x).
QFisherMatrix classical_fisher(const ClassicalFamilyPoint& point);

/// Compares ℑJ^R against the commutator form. −½ Tr ρ [L^R_i, L^R_j] is
/// purely imaginary, so from_commutator holds i · (−½ Tr ρ [L^R_i, L^R_j]).
struct ImagPartDiagnostic {
  RealMatrix from_fisher;
  RealMatrix from_commutator;
  double max_discrepancy = 0.0;
  double max_real_part = 0.0;  // max |ℜ(−½ Tr ρ [L^R_i, L^R_j])|
};
ImagPartDiagnostic rld_imag_commutator_diagnostic(const FamilyPoint& point);

/// θ ↦ ρ_θ (unit trace) used for finite-difference tangents.
using FamilyEvaluator = std::function<DensityMatrix(const std::vector<double>&)>;

/// Default central-difference step h_i = 1e-5 · max(1, |θ_i|).
double default_fd_step(double theta_i);

/// Tangents by central differences (ρ_{θ+h e_i} − ρ_{θ−h e_i}) / 2h.
/// A positive `step` overrides the default for every coordinate.
FamilyPoint finite_difference_point(const FamilyEvaluator& family, const std::vector<double>& theta,
                                    double step = 0.0);

}  // namespace qig
