#include "qig/state.hpp"

#include <sstream>

#include "qig/log_derivative.hpp"

namespace qig {

DensityMatrix::DensityMatrix(HermitianMatrix rho) : rho_(std::move(rho)) {
  if (rho_.dim() == 0) throw InvalidArgument("density matrix must have dimension ≥ 1");
  if (!rho_.matrix().all_finite()) throw InvalidArgument("density matrix has non-finite entries");
  const double tr = rho_.trace();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    std::ostringstream msg;
    msg << "density matrix trace is " << tr << ", expected 1 within " << tol::kTrace;
    throw InvariantViolation(msg.str());
  }
  spectrum_ = std::make_shared<const SpectralDecomposition>(eig_hermitian(rho_));
  if (spectrum_->min_eigenvalue() < -tol::kPsdFloor) {
    std::ostringstream msg;
    msg << "density matrix is not positive semidefinite: smallest eigenvalue "
        << spectrum_->min_eigenvalue();
    throw InvariantViolation(msg.str());
  }
}

DensityMatrix DensityMatrix::normalized(HermitianMatrix rho) {
  const double tr = rho.trace();
  if (!(tr > 0.0)) throw InvalidArgument("cannot normalize a matrix with non-positive trace");
  rho *= 1.0 / tr;
  return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(HermitianMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> psi) {
  const double n = vector_norm(psi);
  if (!(n > 0.0)) throw InvalidArgument("pure state from a zero vector");
  return normalized(HermitianMatrix::hermitian_part(outer(psi, psi)));
}

FamilyPoint::FamilyPoint(std::vector<double> theta, DensityMatrix rho,
                         std::vector<HermitianMatrix> tangents)
    : theta_(std::move(theta)), rho_(std::move(rho)), tangents_(std::move(tangents)) {
  for (std::size_t i = 0; i < tangents_.size(); ++i) {
    const auto& x = tangents_[i];
    if (x.dim() != rho_.dim()) {
      throw InvalidArgument("tangent " + std::to_string(i) + " has dimension " +
                            std::to_string(x.dim()) + ", state has " + std::to_string(rho_.dim()));
    }
    const double tr = x.trace();
    if (std::abs(tr) > tol::kTraceless * std::max(1.0, x.frobenius_norm())) {
      std::ostringstream msg;
      msg << "tangent " << i << " is not traceless (trace " << tr << ")";
      throw InvariantViolation(msg.str());
    }
  }
}

AmplitudeMatrix::AmplitudeMatrix(ComplexMatrix w) : w_(std::move(w)) {
  if (w_.rows() == 0 || w_.cols() == 0) throw InvalidArgument("amplitude matrix must be non-empty");
  const double n2 = std::pow(w_.frobenius_norm(), 2);
  if (std::abs(n2 - 1.0) > tol::kTrace) {
    std::ostringstream msg;
    msg << "amplitude matrix has Tr WW† = " << n2 << ", expected 1";
    throw InvariantViolation(msg.str());
  }
}

HermitianMatrix TangentLift::project() const {
  const auto& w = base.matrix();
  return HermitianMatrix::hermitian_part(w * m.adjoint());
}

AmplitudeMatrix canonical_amplitude(const DensityMatrix& rho) {
  return AmplitudeMatrix(matrix_function(rho.spectrum(), MatrixFunction::sqrt()).matrix());
}

DensityMatrix project(const AmplitudeMatrix& w, Side side) {
  const auto& m = w.matrix();
  if (side == Side::system) return DensityMatrix(HermitianMatrix::hermitian_part(m * m.adjoint()));
  return DensityMatrix(HermitianMatrix::hermitian_part(m.adjoint() * m));
}

AmplitudeMatrix gauge_transform(const AmplitudeMatrix& w, const ComplexMatrix& u) {
  if (u.rows() != w.ancilla_dim()) {
    throw InvalidArgument("gauge_transform: U has " + std::to_string(u.rows()) +
                          " rows, W has " + std::to_string(w.ancilla_dim()) + " columns");
  }
  const double residual =
      (u * u.adjoint() - ComplexMatrix::identity(u.rows())).frobenius_norm();
  if (residual > tol::kUnitary) {
    std::ostringstream msg;
    msg << "gauge_transform: UU† ≠ I (residual " << residual << ")";
    throw InvariantViolation(msg.str());
  }
  return AmplitudeMatrix(w.matrix() * u);
}

TangentLift lift_tangent(const AmplitudeMatrix& w, const HermitianMatrix& x, LogDerivativeKind kind) {
  const DensityMatrix rho = project(w, Side::system);
  const ComplexMatrix l = kind == LogDerivativeKind::sld ? sld(rho, x).matrix() : rld(rho, x);
  return TangentLift{w, l * w.matrix()};
}

HermitianMatrix reverse_sld(const AmplitudeMatrix& w, const HermitianMatrix& x) {
  const DensityMatrix rho = project(w, Side::system);
  if (!rho.full_rank()) {
    throw RankDeficientError("reverse_sld: π(W) is rank deficient (rank " +
                             std::to_string(rho.rank()) + " of " + std::to_string(rho.dim()) + ")");
  }
  const auto& wm = w.matrix();
  const HermitianMatrix rho_inv = matrix_function(rho.spectrum(), MatrixFunction::inverse());
  const ComplexMatrix core = rho_inv.matrix() * x.matrix() * rho_inv.matrix();
  const HermitianMatrix a = HermitianMatrix::hermitian_part(wm.adjoint() * core * wm);

  const ComplexMatrix lhs = rld(rho, x) * wm;
  const double residual = (lhs - wm * a.matrix()).frobenius_norm();
  if (residual > tol::kReverseSld * std::max(1.0, lhs.frobenius_norm())) {
    std::ostringstream msg;
    msg << "reverse_sld: no Hermitian A with L^R W = W A (residual " << residual << ")";
    throw ConvergenceError(msg.str());
  }
  return a;
}

double duality_gap(const AmplitudeMatrix& w, const HermitianMatrix& x) {
  const HermitianMatrix a = reverse_sld(w, x);
  const DensityMatrix rho = project(w, Side::system);
  const ComplexMatrix l = rld(rho, x);
  const auto& wm = w.matrix();
  const double ancilla = trace_of_product(wm.adjoint() * wm, a.matrix() * a.matrix()).real();
  const double system = trace_of_product(rho.matrix(), l.adjoint() * l).real();
  return ancilla - system;
}

}  // namespace qig
