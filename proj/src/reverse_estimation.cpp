#include "qig/reverse_estimation.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace qig {

namespace {

std::vector<cplx> normalized(std::vector<cplx> v, double norm) {
  for (auto& z : v) z /= norm;
  return v;
}

/// ρ^{-1/2} M ρ^{-1/2} for a full-rank ρ.
struct Whitener {
  explicit Whitener(const DensityMatrix& rho)
      : root(matrix_function(rho.spectrum(), MatrixFunction::sqrt())),
        inv_root(matrix_function(rho.spectrum(), MatrixFunction::power(-0.5), tol::kRankTol,
                                 SupportMode::strict)) {}
  HermitianMatrix operator()(const HermitianMatrix& m) const {
    return HermitianMatrix::hermitian_part(inv_root.matrix() * m.matrix() * inv_root.matrix());
  }
  HermitianMatrix root;
  HermitianMatrix inv_root;
};

void require_full_rank(const DensityMatrix& rho, const char* where) {
  if (!rho.full_rank()) {
    std::ostringstream msg;
    msg << where << ": state is rank deficient (rank " << rho.rank() << " of " << rho.dim() << ")";
    throw RankDeficientError(msg.str());
  }
}

/// Builds an ensemble from the columns of W (d × n) and the matching
/// diagonal score matrices.
LocalReverseEstimate ensemble_from_columns(const ComplexMatrix& w,
                                           const std::vector<std::vector<double>>& lambdas,
                                           const std::vector<double>& theta0) {
  std::vector<double> p(w.cols());
  std::vector<std::vector<cplx>> states;
  for (std::size_t x = 0; x < w.cols(); ++x) {
    auto col = w.column(x);
    const double n = vector_norm(col);
    p[x] = n * n;
    states.push_back(normalized(std::move(col), n));
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= total;
  return LocalReverseEstimate{Ensemble(std::move(p), std::move(states)), lambdas, theta0};
}

}  // namespace

ClassicalFamilyPoint LocalReverseEstimate::input_family() const {
  const auto& p = ensemble.weights();
  RealMatrix s(scores.size(), p.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    for (std::size_t x = 0; x < p.size(); ++x) s(i, x) = scores[i][x] * p[x];
  return ClassicalFamilyPoint(theta0, p, std::move(s));
}

LocalReverseEstimate local_reverse_estimate(const FamilyPoint& point) {
  if (point.parameter_count() != 1) {
    throw InvalidArgument("local_reverse_estimate needs a one-parameter family");
  }
  require_full_rank(point.rho(), "local_reverse_estimate");
  const Whitener white(point.rho());
  const SpectralDecomposition a = eig_hermitian(white(point.tangent(0)));
  const ComplexMatrix w = white.root.matrix() * a.eigenvectors;
  return ensemble_from_columns(w, {a.eigenvalues}, point.theta());
}

QFisherMatrix input_fisher(const LocalReverseEstimate& lre) {
  const std::size_t m = lre.scores.size();
  const auto& p = lre.ensemble.weights();
  RealMatrix j(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t x = 0; x < p.size(); ++x) j(a, b) += lre.scores[a][x] * lre.scores[b][x] * p[x];
  return QFisherMatrix(FisherKind::classical, j, RealMatrix(m, m));
}

ReverseEstimateValidation validate_reverse_estimate(const LocalReverseEstimate& candidate,
                                                    const FamilyPoint& point) {
  if (candidate.ensemble.dim() != point.dim() ||
      candidate.scores.size() != point.parameter_count()) {
    throw InvalidArgument("validate_reverse_estimate: candidate does not match the family point");
  }
  ReverseEstimateValidation v;
  const auto& p = candidate.ensemble.weights();
  v.state_residual = (candidate.ensemble.mix(p) - point.rho().matrix()).frobenius_norm();
  for (std::size_t i = 0; i < point.parameter_count(); ++i) {
    std::vector<double> c(p.size());
    double trace_part = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
      c[x] = candidate.scores[i][x] * p[x];
      trace_part += c[x];
    }
    const double r = (candidate.ensemble.mix(c) - point.tangent(i)).frobenius_norm();
    v.tangent_residual = std::max({v.tangent_residual, r, std::abs(trace_part)});
  }
  if (v.state_residual > tol::kCandidateInvalid || v.tangent_residual > tol::kCandidateInvalid) {
    std::ostringstream msg;
    msg << "invalid reverse-estimation candidate: state residual " << v.state_residual
        << ", tangent residual " << v.tangent_residual;
    throw InvalidCandidateError(msg.str(), v.state_residual, v.tangent_residual);
  }
  v.input = input_fisher(candidate);
  v.rld = rld_fisher(point);
  ComplexMatrix diff = v.input.hermitian().matrix() - v.rld.hermitian().matrix();
  v.gap = min_eigenvalue(HermitianMatrix::hermitian_part(diff));
  return v;
}

LocalReverseEstimate random_local_reverse_estimate(const FamilyPoint& point, std::size_t extra,
                                                   std::uint64_t seed) {
  if (point.parameter_count() != 1) {
    throw InvalidArgument("random_local_reverse_estimate needs a one-parameter family");
  }
  require_full_rank(point.rho(), "random_local_reverse_estimate");
  const std::size_t d = point.dim(), n = d + extra;
  const Whitener white(point.rho());
  const HermitianMatrix a0 = white(point.tangent(0));

  // Any Hermitian dilation B with top-left block A0 gives V diag(λ) V† = A0
  // for V the first d rows of B's eigenvector matrix.
  Rng rng(seed);
  const double scale = std::max(1e-3, a0.frobenius_norm()) * rng.uniform(0.1, 1.0);
  ComplexMatrix b(n, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) b(i, j) = a0(i, j);
  const ComplexMatrix g = rng.ginibre(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i >= d || j >= d) b(i, j) = scale * g(i, j);
  const SpectralDecomposition eb = eig_hermitian(HermitianMatrix::hermitian_part(b));
  ComplexMatrix v(d, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t x = 0; x < n; ++x) v(i, x) = eb.eigenvectors(i, x);
  return ensemble_from_columns(white.root.matrix() * v, {eb.eigenvalues}, point.theta());
}

CommutationCheck global_commutation_check(const std::vector<FamilyPoint>& points) {
  if (points.empty()) throw InvalidArgument("global_commutation_check: empty grid");
  std::vector<ComplexMatrix> ls;
  for (const auto& pt : points) {
    if (pt.dim() != points.front().dim()) throw InvalidArgument("grid points differ in dimension");
    require_full_rank(pt.rho(), "global_commutation_check");
    for (const auto& x : pt.tangents()) ls.push_back(rld(pt.rho(), x));
  }
  CommutationCheck c;
  for (const auto& l : ls) c.scale = std::max(c.scale, std::pow(l.frobenius_norm(), 2));
  for (std::size_t a = 0; a < ls.size(); ++a)
    for (std::size_t b = a + 1; b < ls.size(); ++b)
      c.max_commutator = std::max(c.max_commutator, commutator(ls[a], ls[b]).frobenius_norm());
  c.tolerance = tol::kGlobalCommutator * std::max(1.0, c.scale);
  return c;
}

std::vector<std::vector<cplx>> GlobalReverseEstimate::states() const {
  std::vector<std::vector<cplx>> out;
  const auto& w = w0.matrix();
  for (std::size_t x = 0; x < w.cols(); ++x) {
    auto col = w.column(x);
    out.push_back(normalized(col, vector_norm(col)));
  }
  return out;
}

ClassicalFamilyPoint GlobalReverseEstimate::input_family(std::size_t k) const {
  return ClassicalFamilyPoint(theta_grid.at(k), p_theta.at(k), scores.at(k));
}

GlobalReverseEstimate global_reverse_estimate(const std::vector<FamilyPoint>& points,
                                              std::size_t theta0_index, std::uint64_t seed) {
  if (theta0_index >= points.size()) throw InvalidArgument("global_reverse_estimate: θ0 index out of range");
  const CommutationCheck check = global_commutation_check(points);
  if (!check.reverse_estimable()) {
    std::ostringstream msg;
    msg << "family is not globally reverse-estimable: max RLD commutator " << check.max_commutator
        << " exceeds " << check.tolerance;
    throw NotReverseEstimableError(msg.str(), check.max_commutator);
  }
  const Whitener white(points[theta0_index].rho());
  std::vector<HermitianMatrix> family;  // M_θ then N_{θ,i}
  for (const auto& pt : points) {
    family.push_back(white(pt.rho().matrix()));
    for (const auto& x : pt.tangents()) family.push_back(white(x));
  }

  // Simultaneous eigenbasis from a random combination, retried on failure.
  ComplexMatrix u;
  double worst = 0.0;
  bool found = false;
  for (int attempt = 0; attempt < 5 && !found; ++attempt) {
    Rng rng(child_seed(seed, static_cast<std::uint64_t>(attempt)));
    HermitianMatrix combo(points.front().dim());
    for (const auto& h : family) combo += h * rng.normal();
    u = eig_hermitian(combo).eigenvectors;
    worst = 0.0;
    for (const auto& h : family) {
      ComplexMatrix t = u.adjoint() * h.matrix() * u;
      for (std::size_t i = 0; i < t.rows(); ++i) t(i, i) = 0.0;
      worst = std::max(worst, t.frobenius_norm() / std::max(1.0, h.frobenius_norm()));
    }
    found = worst <= tol::kGlobalDiagonal;
  }
  if (!found) {
    std::ostringstream msg;
    msg << "global_reverse_estimate: no common eigenbasis found (off-diagonal residual " << worst << ")";
    throw NotReverseEstimableError(msg.str(), check.max_commutator);
  }

  const ComplexMatrix w0 = white.root.matrix() * u;
  const std::size_t n = w0.cols();
  std::vector<double> weight(n);
  for (std::size_t x = 0; x < n; ++x) weight[x] = std::pow(vector_norm(w0.column(x)), 2);

  GlobalReverseEstimate g{AmplitudeMatrix(w0), {}, {}, {}};
  std::size_t idx = 0;
  for (const auto& pt : points) {
    const ComplexMatrix mt = u.adjoint() * family[idx++].matrix() * u;
    std::vector<double> p(n);
    for (std::size_t x = 0; x < n; ++x) p[x] = std::max(0.0, mt(x, x).real()) * weight[x];
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= total;
    RealMatrix s(pt.parameter_count(), n);
    for (std::size_t i = 0; i < pt.parameter_count(); ++i) {
      const ComplexMatrix nt = u.adjoint() * family[idx++].matrix() * u;
      double sum = 0.0;
      for (std::size_t x = 0; x < n; ++x) sum += (s(i, x) = nt(x, x).real() * weight[x]);
      for (std::size_t x = 0; x < n; ++x) s(i, x) -= sum * p[x];
    }
    g.theta_grid.push_back(pt.theta());
    g.p_theta.push_back(std::move(p));
    g.scores.push_back(std::move(s));
  }
  return g;
}

MultiparamBounds multiparam_bounds(const QFisherMatrix& jr, const RealMatrix& g) {
  if (!g.is_square() || g.rows() != jr.size()) {
    throw InvalidArgument("multiparam_bounds: G is " + g.shape() + " but J^R is " +
                          std::to_string(jr.size()) + "x" + std::to_string(jr.size()));
  }
  const double gmin = min_eigenvalue(g);
  if (gmin < -tol::kPsdFloor * std::max(1.0, g.frobenius_norm())) {
    std::ostringstream msg;
    msg << "multiparam_bounds: weight matrix G is not PSD (smallest eigenvalue " << gmin << ")";
    throw InvalidArgument(msg.str());
  }
  double sp = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) sp += g(i, j) * jr.real_part()(j, i);
  const double abs_part = spabs(g, jr.imag_part());
  return {sp + abs_part, sp - abs_part};
}

namespace {

using Objective = std::function<double(const std::vector<double>&)>;

std::vector<double> nelder_mead(const Objective& f, std::vector<double> x0, double step, int max_iter) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  for (int it = 0; it < max_iter; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (std::abs(fv[worst] - fv[best]) <= 1e-14 * (std::abs(fv[best]) + 1e-14)) {
      double spread = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::abs(simplex[i][k] - simplex[best][k]));
      if (spread < 1e-12) break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
    }
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
      return p;
    };
    auto reflected = along(-1.0);
    const double fr = f(reflected);
    if (fr < fv[best]) {
      auto expanded = along(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = std::move(expanded);
        fv[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      simplex[worst] = std::move(reflected);
      fv[worst] = fr;
    } else {
      auto contracted = fr < fv[worst] ? along(-0.5) : along(0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, fv[worst])) {
        simplex[worst] = std::move(contracted);
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < n; ++k) simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
          fv[i] = f(simplex[i]);
        }
      }
    }
  }
  const auto it = std::min_element(fv.begin(), fv.end());
  return simplex[static_cast<std::size_t>(it - fv.begin())];
}

}  // namespace

MinTraceResult min_trace_oracle(const QFisherMatrix& jr, const RealMatrix& g, std::uint64_t seed,
                                int restarts) {
  const std::size_t m = jr.size();
  if (m > 3) throw InvalidArgument("min_trace_oracle supports m ≤ 3");
  if (!g.is_square() || g.rows() != m) throw InvalidArgument("min_trace_oracle: G shape mismatch");

  const RealMatrix& re = jr.real_part();
  const RealMatrix& im = jr.imag_part();
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) slots.emplace_back(i, j);

  auto shift_of = [&](const std::vector<double>& s) {
    RealMatrix out(m, m);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      out(slots[k].first, slots[k].second) = s[k];
      out(slots[k].second, slots[k].first) = s[k];
    }
    return out;
  };
  // J − J^R = S − i ℑJ^R.
  auto slack_min = [&](const RealMatrix& s) {
    ComplexMatrix h(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) h(i, j) = cplx{s(i, j), -im(i, j)};
    return min_eigenvalue(HermitianMatrix::hermitian_part(h));
  };
  auto trace_g = [&](const RealMatrix& j) {
    double t = 0.0;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) t += g(a, b) * j(b, a);
    return t;
  };
  const double scale = std::max(1e-6, jr.hermitian().frobenius_norm());
  Rng rng(seed);
  std::vector<double> finals;
  MinTraceResult best{std::numeric_limits<double>::infinity(), RealMatrix(m, m), false};
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x(slots.size());
    for (auto& v : x) v = scale * rng.normal();
    for (double mu : {1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8}) {
      const double penalty = mu / scale;
      auto f = [&](const std::vector<double>& s) {
        const RealMatrix sm = shift_of(s);
        const double v = std::max(0.0, -slack_min(sm));
        return trace_g(sm) + penalty * v * v;
      };
      x = nelder_mead(f, x, 0.1 * scale, 4000);
    }
    RealMatrix s = shift_of(x);
    const double deficit = std::max(0.0, -slack_min(s));
    for (std::size_t i = 0; i < m; ++i) s(i, i) += deficit;
    RealMatrix j = re + s;
    const double value = trace_g(j);
    finals.push_back(value);
    if (value < best.value) best = {value, j, false};
  }
  std::size_t agree = 0;
  for (double v : finals) agree += std::abs(v - best.value) <= 1e-4 * std::max(1.0, std::abs(best.value)) ? 1 : 0;
  best.converged = agree * 4 >= finals.size();
  return best;
}

}  // namespace qig
