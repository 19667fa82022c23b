#pragma once

// Independent reference computations for the unit tests. None of these call
// the eigensolver or the spectral matrix functions under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "qig/matrix.hpp"
#include "qig/random.hpp"

namespace oracle {

using qig::ComplexMatrix;
using qig::cplx;

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// Characteristic polynomial coefficients c_0..c_n (c_n = 1) by Faddeev–LeVerrier.
inline std::vector<double> charpoly(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  ComplexMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    ComplexMatrix next = a * m;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = next;
    c[n - k] = -(a * m).trace().real() / static_cast<double>(k);
  }
  return c;
}

/// Real roots of the characteristic polynomial of a Hermitian matrix, by a
/// sign-change scan over [−‖A‖_F, ‖A‖_F] and bisection. Assumes simple roots.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  const auto c = charpoly(a);
  auto p = [&](double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
  };
  const double r = a.frobenius_norm() + 1e-3;
  const int samples = 200000;
  std::vector<double> roots;
  double x0 = -r, p0 = p(x0);
  for (int s = 1; s <= samples; ++s) {
    const double x1 = -r + 2.0 * r * s / samples, p1 = p(x1);
    if (p0 == 0.0) roots.push_back(x0);
    else if (p0 * p1 < 0.0) {
      double lo = x0, hi = x1, plo = p0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi), pm = p(mid);
        if (pm == 0.0) { lo = hi = mid; break; }
        if (plo * pm < 0.0) hi = mid;
        else { lo = mid; plo = pm; }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    p0 = p1;
  }
  return roots;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<cplx> solve_linear(ComplexMatrix a, std::vector<cplx> b) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<cplx> x(n);
  for (std::size_t r = n; r-- > 0;) {
    cplx s = b[r];
    for (std::size_t j = r + 1; j < n; ++j) s -= a(r, j) * x[j];
    x[r] = s / a(r, r);
  }
  return x;
}

/// ½(Lρ + ρL) = X as a d²×d² linear system in the entries of L.
inline ComplexMatrix lyapunov_kron(const ComplexMatrix& rho, const ComplexMatrix& x) {
  const std::size_t d = rho.rows();
  ComplexMatrix sys(d * d, d * d);
  std::vector<cplx> rhs(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t row = i * d + j;
      rhs[row] = x(i, j);
      for (std::size_t k = 0; k < d; ++k) {
        sys(row, i * d + k) += 0.5 * rho(k, j);  // L_ik ρ_kj
        sys(row, k * d + j) += 0.5 * rho(i, k);  // ρ_ik L_kj
      }
    }
  const auto v = solve_linear(sys, rhs);
  ComplexMatrix l(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) l(i, j) = v[i * d + j];
  return l;
}

/// f(H) for a 2×2 Hermitian H = a I + b·σ via f(a ± |b|).
inline ComplexMatrix qubit_function(const ComplexMatrix& h, const std::function<double(double)>& f) {
  const double a = 0.5 * (h(0, 0) + h(1, 1)).real();
  const double bz = 0.5 * (h(0, 0) - h(1, 1)).real();
  const double bx = h(1, 0).real(), by = h(1, 0).imag();
  const double nb = std::sqrt(bx * bx + by * by + bz * bz);
  const double fp = f(a + nb), fm = f(a - nb);
  const double c0 = 0.5 * (fp + fm);
  const double c1 = nb > 0 ? 0.5 * (fp - fm) / nb : 0.0;
  return ComplexMatrix{{c0 + c1 * bz, c1 * cplx{bx, -by}}, {c1 * cplx{bx, by}, c0 - c1 * bz}};
}

inline ComplexMatrix inverse_2x2(const ComplexMatrix& m) {
  const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return ComplexMatrix{{m(1, 1) / det, -m(0, 1) / det}, {-m(1, 0) / det, m(0, 0) / det}};
}

inline ComplexMatrix random_hermitian(std::size_t d, std::uint64_t seed) {
  qig::Rng rng(seed);
  const ComplexMatrix g = rng.ginibre(d, d);
  ComplexMatrix h = g + g.adjoint();
  h *= cplx{0.5};
  return h;
}

inline const ComplexMatrix& sigma_x() {
  static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
  return m;
}
inline const ComplexMatrix& sigma_y() {
  static const ComplexMatrix m{{0.0, cplx{0, -1}}, {cplx{0, 1}, 0.0}};
  return m;
}
inline const ComplexMatrix& sigma_z() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
  return m;
}

}  // namespace oracle
