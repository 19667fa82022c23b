#pragma once

// Family specifications read from JSON: explicit points and the generator
// kinds (Bloch rotation, classical simplex, fixed basis, Gaussian).

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qig/gaussian.hpp"
#include "qig/log_derivative.hpp"

namespace qig {

enum class FamilyKind { explicit_points, bloch_rotation, classical_simplex, fixed_basis, gaussian };

std::string_view to_string(FamilyKind k);

struct ExplicitPoint {
  std::vector<double> theta;
  ComplexMatrix rho;
  std::vector<ComplexMatrix> tangents;
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::explicit_points;

  std::vector<ExplicitPoint> points;  // explicit
  double radius = 0.0;                // bloch_rotation
  std::vector<double> base;           // classical_simplex, fixed_basis
  std::vector<std::vector<double>> directions;
  std::optional<ComplexMatrix> basis;  // fixed_basis
  std::optional<std::uint64_t> basis_seed;
  GaussianSpec gaussian;

  std::vector<std::vector<double>> theta_grid;  // evaluation points; first one is the default
  bool analytic = true;
  double fd_step = 0.0;

  std::size_t parameter_count() const;
};

/// Errors name the offending field.
FamilySpec parse_family_spec(const nlohmann::json& j);
nlohmann::json to_json(const FamilySpec& spec);

FamilySpec bloch_rotation_spec(double radius, double theta);

/// State of a generator family at θ (not available for explicit specs).
DensityMatrix family_state(const FamilySpec& spec, const std::vector<double>& theta);
FamilyPoint family_point(const FamilySpec& spec, const std::vector<double>& theta);
/// One point per entry of theta_grid (explicit specs: every listed point).
std::vector<FamilyPoint> family_grid(const FamilySpec& spec);

}  // namespace qig
