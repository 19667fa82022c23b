#pragma once

// JSON encoding of matrices, states, Fisher matrices and reports. Complex
// scalars are [re, im]; matrices are row-major nested arrays.

#include <string>

#include <json.hpp>

#include "qig/channels.hpp"
#include "qig/divergence.hpp"
#include "qig/harness.hpp"
#include "qig/reverse_estimation.hpp"

namespace qig {

using nlohmann::json;

json to_json(cplx z);
json to_json(const ComplexMatrix& m);
json to_json(const RealMatrix& m);
json to_json(const QFisherMatrix& f);
json to_json(const SuiteReport& r);
json to_json(const POVM& povm);
json to_json(const KrausChannel& channel);
json to_json(const LocalReverseEstimate& lre);
json to_json(const GlobalReverseEstimate& g);
json to_json(const TwoPointReverseEstimate& t);

/// Accepts plain numbers or [re, im] pairs; `field` is used in error messages.
cplx complex_from_json(const json& j, const std::string& field);
ComplexMatrix complex_matrix_from_json(const json& j, const std::string& field);
RealMatrix real_matrix_from_json(const json& j, const std::string& field);
std::vector<double> real_vector_from_json(const json& j, const std::string& field);
QFisherMatrix fisher_from_json(const json& j);
POVM povm_from_json(const json& j);
KrausChannel kraus_from_json(const json& j);

/// A state file holds either {"rho": matrix} or a bare matrix.
DensityMatrix state_from_json(const json& j, const std::string& field);

json read_json_file(const std::string& path);

/// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string digest(const json& j);

/// Divergence report {umegaki, rld_closed, rld_integral, steps, two_point_kl}.
json divergence_report(const DensityMatrix& rho, const DensityMatrix& sigma, std::size_t steps);

/// Infinite values encode as the string "inf".
json number(double v);

}  // namespace qig
