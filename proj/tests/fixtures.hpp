#pragma once

// Small hand-built families shared by the unit tests.

#include <cmath>

#include "oracles.hpp"
#include "qig/state.hpp"

namespace fixture {

using namespace qig;

/// ρ_θ = ½(I + r(cos θ σx + sin θ σy)) with its θ-tangent.
inline FamilyPoint bloch_point(double r, double theta) {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const ComplexMatrix rho = 0.5 * (id + r * std::cos(theta) * oracle::sigma_x() + r * std::sin(theta) * oracle::sigma_y());
  const ComplexMatrix tan = 0.5 * r * (-std::sin(theta) * oracle::sigma_x() + std::cos(theta) * oracle::sigma_y());
  return FamilyPoint({theta}, DensityMatrix(rho), {HermitianMatrix(tan)});
}

/// ρ_θ = ½(I + θσz) with tangent ½σz.
inline FamilyPoint sigma_z_point(double theta) {
  const double d[] = {(1 + theta) / 2, (1 - theta) / 2};
  const double t[] = {0.5, -0.5};
  return FamilyPoint({theta}, DensityMatrix(HermitianMatrix::diagonal(d)), {HermitianMatrix::diagonal(t)});
}

inline FamilyPoint diagonal_point(std::vector<double> p, std::vector<std::vector<double>> tangents) {
  std::vector<HermitianMatrix> ts;
  for (const auto& t : tangents) ts.push_back(HermitianMatrix::diagonal(t));
  std::vector<double> theta(ts.size(), 0.0);
  return FamilyPoint(theta, DensityMatrix(HermitianMatrix::diagonal(p)), ts);
}

}  // namespace fixture
