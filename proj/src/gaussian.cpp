#include "qig/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qig {

void GaussianSpec::validate() const {
  if (!(sigma2 > 0.0)) throw InvalidArgument("gaussian: sigma2 must be positive");
  if (!(hbar > 0.0)) throw InvalidArgument("gaussian: hbar must be positive");
  if (truncation < 20) throw InvalidArgument("gaussian: truncation must be at least 20");
  if (theta.size() != 2) throw InvalidArgument("gaussian: theta needs two components");
}

GaussHermite gauss_hermite(std::size_t n) {
  // Newton iteration on the orthonormal Hermite recurrence.
  const double pim4 = 0.7511255444649425;  // π^{-1/4}
  GaussHermite gh{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t m = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(nd, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * gh.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * gh.nodes[1];
    } else {
      z = 2.0 * z - gh.nodes[i - 2];
    }
    double pp = 0.0;
    int it = 0;
    for (; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * nd) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 3e-14 * std::max(1.0, std::abs(z))) break;
    }
    if (it == 100) throw ConvergenceError("gauss_hermite: Newton iteration did not converge");
    gh.nodes[i] = z;
    gh.nodes[n - 1 - i] = -z;
    gh.weights[i] = gh.weights[n - 1 - i] = 2.0 / (pp * pp);
  }
  return gh;
}

namespace {

struct Accumulated {
  ComplexMatrix rho;
  std::vector<ComplexMatrix> d_rho;  // analytic mean derivatives, empty unless requested
};

/// Unnormalized truncated state at mean θ, integrated exactly against the
/// product of the mixing Gaussian and the coherent-state envelope e^{−|α|²}.
Accumulated integrate(const GaussianSpec& spec, const std::vector<double>& theta, bool derivatives) {
  const std::size_t n = spec.truncation;
  const GaussHermite gh = gauss_hermite(spec.nodes());
  const double s2 = 1.0 / (1.0 / spec.sigma2 + 1.0 / spec.hbar);
  const double s = std::sqrt(s2);

  struct Axis {
    std::vector<double> x, w;
  };
  auto axis = [&](double mean) {
    const double c = mean * s2 / spec.sigma2;
    const double log_const = -mean * mean / (2.0 * spec.sigma2) + c * c / (2.0 * s2);
    const double scale = std::sqrt(2.0) * s * std::exp(log_const);
    Axis a;
    for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
      const double w = gh.weights[k] * scale;
      if (w < 1e-300) continue;
      a.x.push_back(c + std::sqrt(2.0) * s * gh.nodes[k]);
      a.w.push_back(w);
    }
    return a;
  };
  const Axis aq = axis(theta[0]), ap = axis(theta[1]);
  const double prefactor = 1.0 / (2.0 * std::numbers::pi * spec.sigma2);

  Accumulated acc{ComplexMatrix(n, n), {}};
  if (derivatives) acc.d_rho.assign(2, ComplexMatrix(n, n));
  std::vector<cplx> v(n);
  const double norm = 1.0 / std::sqrt(2.0 * spec.hbar);
  for (std::size_t k = 0; k < aq.x.size(); ++k) {
    for (std::size_t l = 0; l < ap.x.size(); ++l) {
      const double w = prefactor * aq.w[k] * ap.w[l];
      const cplx alpha = cplx{aq.x[k], -ap.x[l]} * norm;
      v[0] = 1.0;
      for (std::size_t j = 1; j < n; ++j) v[j] = v[j - 1] * alpha / std::sqrt(static_cast<double>(j));
      const double gq = (aq.x[k] - theta[0]) / spec.sigma2;
      const double gp = (ap.x[l] - theta[1]) / spec.sigma2;
      for (std::size_t i = 0; i < n; ++i) {
        const cplx vi = w * v[i];
        cplx* row = &acc.rho(i, 0);
        for (std::size_t j = 0; j <= i; ++j) row[j] += vi * std::conj(v[j]);
        if (derivatives) {
          cplx* r1 = &acc.d_rho[0](i, 0);
          cplx* r2 = &acc.d_rho[1](i, 0);
          for (std::size_t j = 0; j <= i; ++j) {
            const cplx t = vi * std::conj(v[j]);
            r1[j] += gq * t;
            r2[j] += gp * t;
          }
        }
      }
    }
  }
  auto fill_upper = [n](ComplexMatrix& m) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m(i, j) = std::conj(m(j, i));
  };
  fill_upper(acc.rho);
  for (auto& d : acc.d_rho) fill_upper(d);
  return acc;
}

void check_leakage(double leakage, const GaussianSpec& spec) {
  if (leakage > kMaxLeakage) {
    std::ostringstream msg;
    msg << "gaussian: Fock truncation N = " << spec.truncation << " leaks " << leakage
        << " of the trace (limit " << kMaxLeakage << "); increase the truncation";
    throw TruncationError(msg.str(), leakage);
  }
}

}  // namespace

double gaussian_leakage(const GaussianSpec& spec) {
  spec.validate();
  return 1.0 - integrate(spec, spec.theta, false).rho.trace().real();
}

DensityMatrix gaussian_state(const GaussianSpec& spec, const std::vector<double>& theta) {
  spec.validate();
  if (theta.size() != 2) throw InvalidArgument("gaussian: theta needs two components");
  return DensityMatrix::normalized(HermitianMatrix::hermitian_part(integrate(spec, theta, false).rho));
}

FamilyPoint gaussian_family(const GaussianSpec& spec) {
  spec.validate();
  if (spec.derivative == DerivativeMode::analytic) {
    Accumulated acc = integrate(spec, spec.theta, true);
    const double tr = acc.rho.trace().real();
    check_leakage(1.0 - tr, spec);
    const ComplexMatrix rho = acc.rho * cplx{1.0 / tr};
    std::vector<HermitianMatrix> tangents;
    for (const auto& d : acc.d_rho) {
      tangents.push_back(HermitianMatrix::hermitian_part((d - rho * d.trace()) * cplx{1.0 / tr}));
    }
    return FamilyPoint(spec.theta, DensityMatrix(HermitianMatrix::hermitian_part(rho)), std::move(tangents));
  }
  check_leakage(gaussian_leakage(spec), spec);
  const FamilyEvaluator family = [&spec](const std::vector<double>& theta) {
    return gaussian_state(spec, theta);
  };
  return finite_difference_point(family, spec.theta, spec.fd_step);
}

ComplexMatrix gaussian_rld_closed_form(double sigma2, double hbar) {
  const double f = 1.0 / ((sigma2 + hbar) * sigma2);
  return ComplexMatrix{{f * (sigma2 + hbar / 2), cplx{0.0, -f * hbar / 2}},
                       {cplx{0.0, f * hbar / 2}, f * (sigma2 + hbar / 2)}};
}

GaussianReport gaussian_check(const GaussianSpec& spec, const SuiteTolerances& tolerances) {
  GaussianReport r;
  r.spec = spec;
  r.leakage = gaussian_leakage(spec);
  const FamilyPoint point = gaussian_family(spec);
  r.rld = rld_fisher(point);
  r.expected = gaussian_rld_closed_form(spec.sigma2, spec.hbar);
  const HermitianMatrix got = r.rld.hermitian();
  r.relative_error = RealMatrix(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      r.relative_error(i, j) = std::abs(got(i, j) - r.expected(i, j)) / std::abs(r.expected(i, j));
      r.max_relative_error = std::max(r.max_relative_error, r.relative_error(i, j));
    }
  r.bounds = multiparam_bounds(r.rld, RealMatrix::identity(2));
  r.expected_reverse = 2.0 / spec.sigma2;
  r.classical_input = 1.0 / spec.sigma2;

  r.suite = SuiteReport{"gaussian", 0, 1, {spec.truncation}, {}, {}};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      r.suite.record(0, "J^R(" + std::to_string(i) + "," + std::to_string(j) + ") relative error",
                     -r.relative_error(i, j), tolerances.gaussian_relative);
    }
  r.suite.record(0, "reverse bound relative error",
                 -std::abs(r.bounds.reverse - r.expected_reverse) / r.expected_reverse,
                 tolerances.gaussian_relative);
  r.suite.record(0, "trace leakage", kMaxLeakage - r.leakage, 0.0);
  return r;
}

}  // namespace qig
