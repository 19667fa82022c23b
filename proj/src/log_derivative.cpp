#include "qig/log_derivative.hpp"

#include <sstream>

namespace qig {

std::string_view to_string(FisherKind k) {
  switch (k) {
    case FisherKind::sld:
      return "SLD";
    case FisherKind::rld:
      return "RLD";
    case FisherKind::km:
      return "KM";
    case FisherKind::classical:
      return "classical";
    case FisherKind::measured:
      return "measured";
  }
  return "?";
}

FisherKind fisher_kind_from_string(std::string_view s) {
  if (s == "SLD") return FisherKind::sld;
  if (s == "RLD") return FisherKind::rld;
  if (s == "KM") return FisherKind::km;
  if (s == "classical") return FisherKind::classical;
  if (s == "measured") return FisherKind::measured;
  throw InvalidArgument("unknown Fisher kind '" + std::string(s) + "'");
}

QFisherMatrix::QFisherMatrix(FisherKind kind, const RealMatrix& real_part, const RealMatrix& imag_part)
    : kind_(kind), re_(real_part.rows(), real_part.cols()), im_(imag_part.rows(), imag_part.cols()) {
  if (!real_part.is_square() || real_part.rows() != imag_part.rows() || !imag_part.is_square()) {
    throw InvalidArgument("Fisher matrix parts must be square and of equal size");
  }
  const std::size_t m = real_part.rows();
  const bool real_only = kind != FisherKind::rld;
  for (std::size_t i = 0; i < m; ++i) {
    re_(i, i) = real_part(i, i);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double s = 0.5 * (real_part(i, j) + real_part(j, i));
      re_(i, j) = re_(j, i) = s;
      const double a = real_only ? 0.0 : 0.5 * (imag_part(i, j) - imag_part(j, i));
      im_(i, j) = a;
      im_(j, i) = -a;
    }
  }
}

QFisherMatrix::QFisherMatrix(FisherKind kind, const ComplexMatrix& hermitian)
    : QFisherMatrix(kind, qig::real_part(hermitian), qig::imag_part(hermitian)) {}

QFisherMatrix QFisherMatrix::scalar(FisherKind kind, double value) {
  RealMatrix re(1, 1);
  re(0, 0) = value;
  return QFisherMatrix(kind, re, RealMatrix(1, 1));
}

HermitianMatrix QFisherMatrix::hermitian() const {
  ComplexMatrix h(size(), size());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) h(i, j) = cplx{re_(i, j), im_(i, j)};
  return HermitianMatrix::hermitian_part(h);
}

double QFisherMatrix::min_eigenvalue() const { return qig::min_eigenvalue(hermitian()); }

ClassicalFamilyPoint::ClassicalFamilyPoint(std::vector<double> theta, std::vector<double> probs,
                                           RealMatrix score)
    : theta_(std::move(theta)), probs_(std::move(probs)), score_(std::move(score)) {
  if (score_.cols() != probs_.size()) {
    throw InvalidArgument("score has " + std::to_string(score_.cols()) + " outcomes, probs has " +
                          std::to_string(probs_.size()));
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw InvariantViolation("probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > tol::kProbabilitySum) {
    std::ostringstream msg;
    msg << "probabilities sum to " << total << ", expected 1";
    throw InvariantViolation(msg.str());
  }
  for (std::size_t i = 0; i < score_.rows(); ++i) {
    double s = 0.0, scale = 0.0;
    for (std::size_t x = 0; x < score_.cols(); ++x) {
      s += score_(i, x);
      scale += std::abs(score_(i, x));
    }
    if (std::abs(s) > tol::kScoreSum * std::max(1.0, scale)) {
      std::ostringstream msg;
      msg << "score row " << i << " sums to " << s << ", expected 0";
      throw InvariantViolation(msg.str());
    }
  }
}

HermitianMatrix sld(const DensityMatrix& rho, const HermitianMatrix& x) {
  return solve_lyapunov(rho.spectrum(), x);
}

ComplexMatrix rld(const DensityMatrix& rho, const HermitianMatrix& x) {
  if (x.dim() != rho.dim()) throw InvalidArgument("rld: dimension mismatch");
  const auto& eig = rho.spectrum();
  const HermitianMatrix p = eig.support_projector();
  const ComplexMatrix outside = x.matrix() - p.matrix() * x.matrix();
  const double out_norm = outside.frobenius_norm();
  if (out_norm > tol::kRldSupport * std::max(1.0, x.frobenius_norm())) {
    std::ostringstream msg;
    msg << "rld: tangent leaves the support of ρ (‖(I − P)X‖_F = " << out_norm
        << "); the RLD does not exist";
    throw RldExistenceError(msg.str());
  }
  const HermitianMatrix pinv = matrix_function(eig, MatrixFunction::inverse());
  return x.matrix() * pinv.matrix();
}

QFisherMatrix sld_fisher(const FamilyPoint& point) {
  const std::size_t m = point.parameter_count();
  std::vector<ComplexMatrix> rl;  // ρ L_i
  std::vector<HermitianMatrix> ls;
  for (const auto& x : point.tangents()) ls.push_back(sld(point.rho(), x));
  for (const auto& l : ls) rl.push_back(point.rho().matrix().matrix() * l.matrix());
  RealMatrix re(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const double v = trace_of_product(rl[i], ls[j].matrix()).real();
      re(i, j) = re(j, i) = v;
    }
  return QFisherMatrix(FisherKind::sld, re, RealMatrix(m, m));
}

QFisherMatrix rld_fisher(const FamilyPoint& point) {
  const std::size_t m = point.parameter_count();
  std::vector<ComplexMatrix> ls;
  for (const auto& x : point.tangents()) ls.push_back(rld(point.rho(), x));
  const ComplexMatrix& rho = point.rho().matrix();
  ComplexMatrix j(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      // J_ab = Tr ρ L_b† L_a
      j(a, b) = trace_of_product(rho * ls[b].adjoint(), ls[a]);
    }
  return QFisherMatrix(FisherKind::rld, j);
}

QFisherMatrix classical_fisher(const ClassicalFamilyPoint& point) {
  const std::size_t m = point.parameter_count();
  const auto& p = point.probs();
  const auto& s = point.score();
  RealMatrix j(m, m);
  for (std::size_t x = 0; x < point.outcome_count(); ++x) {
    if (p[x] <= 0.0) {
      double smax = 0.0;
      for (std::size_t i = 0; i < m; ++i) smax = std::max(smax, std::abs(s(i, x)));
      if (smax > 1e-14) {
        std::ostringstream msg;
        msg << "classical_fisher: outcome " << x << " has p = 0 but score " << smax;
        throw SingularFamilyError(msg.str());
      }
      continue;
    }
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) j(a, b) += s(a, x) * s(b, x) / p[x];
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < a; ++b) j(a, b) = j(b, a);
  return QFisherMatrix(FisherKind::classical, j, RealMatrix(m, m));
}

ImagPartDiagnostic rld_imag_commutator_diagnostic(const FamilyPoint& point) {
  const std::size_t m = point.parameter_count();
  const QFisherMatrix jr = rld_fisher(point);
  std::vector<ComplexMatrix> ls;
  for (const auto& x : point.tangents()) ls.push_back(rld(point.rho(), x));
  ImagPartDiagnostic d{jr.imag_part(), RealMatrix(m, m), 0.0};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const cplx t = -0.5 * trace_of_product(point.rho().matrix(), commutator(ls[i], ls[j]));
      d.from_commutator(i, j) = -t.imag();
      d.max_real_part = std::max(d.max_real_part, std::abs(t.real()));
      d.max_discrepancy =
          std::max(d.max_discrepancy, std::abs(d.from_commutator(i, j) - d.from_fisher(i, j)));
    }
  return d;
}

double default_fd_step(double theta_i) { return 1e-5 * std::max(1.0, std::abs(theta_i)); }

FamilyPoint finite_difference_point(const FamilyEvaluator& family, const std::vector<double>& theta,
                                    double step) {
  DensityMatrix center = family(theta);
  std::vector<HermitianMatrix> tangents;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double h = step > 0.0 ? step : default_fd_step(theta[i]);
    auto plus = theta, minus = theta;
    plus[i] += h;
    minus[i] -= h;
    HermitianMatrix d = family(plus).matrix() - family(minus).matrix();
    d *= 1.0 / (2.0 * h);
    tangents.push_back(std::move(d));
  }
  return FamilyPoint(theta, std::move(center), std::move(tangents));
}

}  // namespace qig
