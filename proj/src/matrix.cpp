#include "qig/matrix.hpp"

namespace qig {

RealMatrix real_part(const ComplexMatrix& m) {
  RealMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).real();
  return r;
}

RealMatrix imag_part(const ComplexMatrix& m) {
  RealMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).imag();
  return r;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return r;
}

cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw InvalidArgument("trace_of_product shape mismatch: " + a.shape() + " * " + b.shape());
  }
  cplx t{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
  return t;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix outer(std::span<const cplx> u, std::span<const cplx> v) {
  ComplexMatrix r(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r(i, j) = u[i] * std::conj(v[j]);
  return r;
}

double vector_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) throw InvalidArgument("Hermitian matrix must be square, got " + m.shape());
  if (!m.all_finite()) throw InvalidArgument("Hermitian matrix has non-finite entries");
  const double residual = (m - m.adjoint()).frobenius_norm();
  const double scale = std::max(1.0, m.frobenius_norm());
  if (residual > tol * scale) {
    throw InvariantViolation("matrix is not Hermitian: ‖M − M†‖_F = " + std::to_string(residual));
  }
  *this = hermitian_part(m);
}

HermitianMatrix HermitianMatrix::hermitian_part(const ComplexMatrix& m) {
  if (!m.is_square()) throw InvalidArgument("Hermitian part needs a square matrix, got " + m.shape());
  HermitianMatrix h(m.rows());
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    h.m_(i, i) = cplx{m(i, i).real(), 0.0};
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      h.m_(i, j) = v;
      h.m_(j, i) = std::conj(v);
    }
  }
  return h;
}

HermitianMatrix HermitianMatrix::identity(std::size_t dim) {
  HermitianMatrix h(dim);
  for (std::size_t i = 0; i < dim; ++i) h.m_(i, i) = 1.0;
  return h;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  HermitianMatrix h(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) h.m_(i, i) = d[i];
  return h;
}

HermitianMatrix HermitianMatrix::from_real(const RealMatrix& m) {
  return HermitianMatrix(to_complex(m));
}

}  // namespace qig
