#include "qig/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qig {

double SpectralDecomposition::max_abs_eigenvalue() const {
  double m = 0.0;
  for (double v : eigenvalues) m = std::max(m, std::abs(v));
  return m;
}

HermitianMatrix SpectralDecomposition::reconstruct() const {
  const std::size_t n = dim();
  ComplexMatrix r(n, n);
  const auto& u = eigenvectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      cplx s{};
      for (std::size_t k = 0; k < n; ++k) s += u(i, k) * eigenvalues[k] * std::conj(u(j, k));
      r(i, j) = s;
      r(j, i) = std::conj(s);
    }
  return HermitianMatrix::hermitian_part(r);
}

bool SpectralDecomposition::in_support(std::size_t k, double rank_tol) const {
  return eigenvalues[k] > rank_tol * max_abs_eigenvalue();
}

std::size_t SpectralDecomposition::rank(double rank_tol) const {
  std::size_t r = 0;
  for (std::size_t k = 0; k < dim(); ++k) r += in_support(k, rank_tol) ? 1 : 0;
  return r;
}

HermitianMatrix SpectralDecomposition::support_projector(double rank_tol) const {
  std::vector<double> ind(dim());
  for (std::size_t k = 0; k < dim(); ++k) ind[k] = in_support(k, rank_tol) ? 1.0 : 0.0;
  SpectralDecomposition p{ind, eigenvectors};
  return p.reconstruct();
}

double eig_tolerance(const HermitianMatrix& h) {
  return std::max(1e-13, 1e-12 * static_cast<double>(h.dim()) * h.frobenius_norm());
}

SpectralDecomposition eig_hermitian(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  if (n == 0) throw InvalidArgument("eig_hermitian: empty matrix");
  if (!h.matrix().all_finite()) throw InvalidArgument("eig_hermitian: non-finite entries");

  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  // Cyclic Jacobi. Each rotation is a phase on column q that makes a(p,q)
  // real, followed by a real Givens rotation annihilating it.
  bool converged = (n == 1);
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a(p, q));
    if (off == 0.0) {
      converged = true;
      break;
    }
    const double thresh = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double g = 100.0 * mag;
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        if (mag <= thresh) continue;

        const double diff = aqq - app;
        double t;
        if (std::abs(diff) + g == std::abs(diff)) {
          t = mag / diff;
        } else {
          const double theta = 0.5 * diff / mag;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx ph = apq / mag;            // e^{iφ}
        const cplx phc = std::conj(ph);       // e^{-iφ}

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          const cplx nkp = c * akp - s * phc * akq;
          const cplx nkq = s * akp + c * phc * akq;
          a(k, p) = nkp;
          a(k, q) = nkq;
          a(p, k) = std::conj(nkp);
          a(q, k) = std::conj(nkq);
        }
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        a(p, q) = a(q, p) = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp - s * phc * vkq;
          v(k, q) = s * vkp + c * phc * vkq;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    converged = std::sqrt(off) <= 1e-15 * std::max(1.0, h.frobenius_norm());
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "eig_hermitian: Jacobi did not converge after " << kJacobiMaxSweeps
        << " sweeps (dim " << n << ", ‖H‖_F = " << h.frobenius_norm() << ")";
    throw ConvergenceError(msg.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

double MatrixFunction::apply(double x) const {
  switch (kind_) {
    case Kind::sqrt:
      return std::sqrt(std::max(0.0, x));
    case Kind::log:
      return std::log(x);
    case Kind::inverse:
      return 1.0 / x;
    case Kind::power:
      if (x <= 0.0) return 0.0;
      return std::pow(x, exponent_);
  }
  return 0.0;
}

HermitianMatrix matrix_function(const SpectralDecomposition& eig, MatrixFunction f,
                                double rank_tol, SupportMode mode) {
  const std::size_t n = eig.dim();
  std::vector<double> fx(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const bool inside = eig.in_support(k, rank_tol);
    if (f.needs_support() && !inside) {
      if (mode == SupportMode::strict) {
        std::ostringstream msg;
        msg << "matrix_function: eigenvalue " << eig.eigenvalues[k]
            << " is outside the support (cutoff " << rank_tol * eig.max_abs_eigenvalue()
            << "); the matrix is rank deficient";
        throw RankDeficientError(msg.str());
      }
      continue;
    }
    fx[k] = f.apply(eig.eigenvalues[k]);
  }
  SpectralDecomposition g{std::move(fx), eig.eigenvectors};
  return g.reconstruct();
}

HermitianMatrix matrix_function(const HermitianMatrix& h, MatrixFunction f, double rank_tol,
                                SupportMode mode) {
  return matrix_function(eig_hermitian(h), f, rank_tol, mode);
}

ComplexMatrix to_eigenbasis(const SpectralDecomposition& eig, const ComplexMatrix& m) {
  return eig.eigenvectors.adjoint() * m * eig.eigenvectors;
}

ComplexMatrix from_eigenbasis(const SpectralDecomposition& eig, const ComplexMatrix& m) {
  return eig.eigenvectors * m * eig.eigenvectors.adjoint();
}

HermitianMatrix solve_lyapunov(const SpectralDecomposition& rho_eig, const HermitianMatrix& x,
                               double rank_tol) {
  if (x.dim() != rho_eig.dim()) throw InvalidArgument("solve_lyapunov: dimension mismatch");
  if (rho_eig.rank(rank_tol) != rho_eig.dim()) {
    std::ostringstream msg;
    msg << "solve_lyapunov: state is rank deficient (rank " << rho_eig.rank(rank_tol) << " of "
        << rho_eig.dim() << ", smallest eigenvalue " << rho_eig.min_eigenvalue()
        << "); the SLD is not unique";
    throw RankDeficientError(msg.str());
  }
  ComplexMatrix xt = to_eigenbasis(rho_eig, x);
  const auto& lam = rho_eig.eigenvalues;
  for (std::size_t i = 0; i < xt.rows(); ++i)
    for (std::size_t j = 0; j < xt.cols(); ++j) xt(i, j) *= 2.0 / (lam[i] + lam[j]);
  return HermitianMatrix::hermitian_part(from_eigenbasis(rho_eig, xt));
}

HermitianMatrix solve_lyapunov(const HermitianMatrix& rho, const HermitianMatrix& x,
                               double rank_tol) {
  return solve_lyapunov(eig_hermitian(rho), x, rank_tol);
}

std::vector<double> symmetric_eigenvalues(const RealMatrix& s) {
  return eig_hermitian(HermitianMatrix::from_real(s)).eigenvalues;
}

RealMatrix sqrt_psd(const RealMatrix& g) {
  return real_part(matrix_function(HermitianMatrix::from_real(g), MatrixFunction::sqrt()).matrix());
}

double min_eigenvalue(const RealMatrix& s) { return symmetric_eigenvalues(s).front(); }

double min_eigenvalue(const HermitianMatrix& h) { return eig_hermitian(h).min_eigenvalue(); }

double trace_norm(const RealMatrix& k) {
  // Symmetric embedding [[0, K], [Kᵀ, 0]] has eigenvalues ±σ_i (plus zeros).
  const std::size_t r = k.rows(), c = k.cols();
  RealMatrix e(r + c, r + c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      e(i, r + j) = k(i, j);
      e(r + j, i) = k(i, j);
    }
  double s = 0.0;
  for (double v : symmetric_eigenvalues(e)) s += std::abs(v);
  return 0.5 * s;
}

double spabs(const RealMatrix& g, const RealMatrix& k) {
  if (!g.is_square() || !k.is_square() || g.rows() != k.rows()) {
    throw InvalidArgument("spabs: G is " + g.shape() + " but K is " + k.shape());
  }
  const RealMatrix root = sqrt_psd(g);
  return trace_norm(root * k * root);
}

}  // namespace qig
