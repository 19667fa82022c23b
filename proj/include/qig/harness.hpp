#pragma once

// Randomized verification suites for the metric and divergence sandwiches and
// the Kubo–Mori witness metric.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qig/log_derivative.hpp"

namespace qig {

/// J^{KM}_ab = ℜ Σ_ij X̃a_ij conj(X̃b_ij) c(λ_i, λ_j) with c(a, b) = (ln a − ln b)/(a − b).
QFisherMatrix km_fisher(const FamilyPoint& point);

/// (ln a − ln b)/(a − b), continuous at a = b.
double log_mean_inverse(double a, double b);

struct SuiteTolerances {
  double metric_slack = 1e-8;         // sandwich and CPT monotonicity of metrics
  double measurement = 1e-9;          // J^M ≤ J^S and the optimal POVM
  double lre_equality = 1e-9;         // constructed LRE input Fisher = J^R
  double divergence_sandwich = 1e-9;  // umegaki ≤ D^R, equality for commuting pairs
  double divergence_cpt = 1e-8;
  double additivity = 1e-9;
  double two_point = 1e-9;            // kl of the minimal two-point estimate = D^R
  double two_point_bound = 1e-8;      // kl of random two-point estimates ≥ D^R
  double reconstruction = 1e-10;
  double gaussian_relative = 1e-2;
};

struct CheckStats {
  std::string name;
  double tolerance = 0.0;
  double min_slack = std::numeric_limits<double>::infinity();
  double max_slack = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;
};

struct Violation {
  std::size_t trial = 0;
  std::string quantity;
  double slack = 0.0;
};

/// Every check records a slack that must stay ≥ −tolerance; equalities use −|difference|.
struct SuiteReport {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<std::size_t> dims;
  std::vector<CheckStats> checks;
  std::vector<Violation> violations;

  bool pass() const noexcept { return violations.empty(); }
  void record(std::size_t trial, const std::string& quantity, double slack, double tolerance);
  const CheckStats* find(const std::string& quantity) const;
};

struct MetricSuiteOptions {
  bool diagonal_only = false;
  SuiteTolerances tolerances;
};

SuiteReport monotone_metric_suite(std::size_t trials, const std::vector<std::size_t>& dims,
                                  std::uint64_t seed, const MetricSuiteOptions& options = {});

enum class PairKind { random, equal, commuting };

struct DivergenceSuiteOptions {
  PairKind pairs = PairKind::random;
  SuiteTolerances tolerances;
};

SuiteReport monotone_divergence_suite(std::size_t trials, const std::vector<std::size_t>& dims,
                                      std::uint64_t seed, const DivergenceSuiteOptions& options = {});

}  // namespace qig
