#include "qig/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace qig {

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const RealMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const QFisherMatrix& f) {
  return {{"kind", std::string(to_string(f.kind()))},
          {"real_part", to_json(f.real_part())},
          {"imag_part", to_json(f.imag_part())}};
}

json to_json(const SuiteReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"tolerance", c.tolerance},
                      {"min_slack", number(c.min_slack)},
                      {"max_slack", number(c.max_slack)},
                      {"count", c.count}});
  }
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"trial", v.trial}, {"quantity", v.quantity}, {"slack", number(v.slack)}});
  }
  return {{"name", r.name}, {"seed", r.seed},       {"trials", r.trials},       {"dims", r.dims},
          {"checks", checks}, {"violations", violations}, {"pass", r.pass()}};
}

json to_json(const POVM& povm) {
  json els = json::array();
  for (const auto& e : povm.elements()) els.push_back(to_json(e.matrix()));
  return {{"povm", els}};
}

json to_json(const KrausChannel& channel) {
  json ops = json::array();
  for (const auto& k : channel.kraus_ops()) ops.push_back(to_json(k));
  return {{"kraus", ops}};
}

namespace {

json ensemble_json(const Ensemble& e) {
  json states = json::array();
  for (const auto& s : e.states()) {
    json v = json::array();
    for (auto z : s) v.push_back(to_json(z));
    states.push_back(std::move(v));
  }
  return {{"weights", e.weights()}, {"states", states}};
}

}  // namespace

json to_json(const LocalReverseEstimate& lre) {
  return {{"ensemble", ensemble_json(lre.ensemble)}, {"scores", lre.scores}, {"theta0", lre.theta0}};
}

json to_json(const GlobalReverseEstimate& g) {
  return {{"W0", to_json(g.w0.matrix())}, {"theta_grid", g.theta_grid}, {"p_theta", g.p_theta}};
}

json to_json(const TwoPointReverseEstimate& t) {
  return {{"ensemble", ensemble_json(t.ensemble)}, {"p_rho", t.p_rho}, {"p_sigma", t.p_sigma}};
}

cplx complex_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InvalidArgument("field '" + field + "': expected a number or [re, im], got " + j.dump());
}

ComplexMatrix complex_matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw InvalidArgument("field '" + field + "': expected a nested array (rows of entries)");
  }
  const std::size_t rows = j.size(), cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw InvalidArgument("field '" + field + "': row " + std::to_string(i) + " has the wrong length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(i, c) = complex_from_json(j[i][c], field + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

RealMatrix real_matrix_from_json(const json& j, const std::string& field) {
  const ComplexMatrix c = complex_matrix_from_json(j, field);
  for (auto z : c.data()) {
    if (z.imag() != 0.0) throw InvalidArgument("field '" + field + "': expected a real matrix");
  }
  return real_part(c);
}

std::vector<double> real_vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw InvalidArgument("field '" + field + "': expected an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) throw InvalidArgument("field '" + field + "': entries must be numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

QFisherMatrix fisher_from_json(const json& j) {
  if (!j.contains("kind") || !j.contains("real_part") || !j.contains("imag_part")) {
    throw InvalidArgument("Fisher matrix needs 'kind', 'real_part' and 'imag_part'");
  }
  return QFisherMatrix(fisher_kind_from_string(j["kind"].get<std::string>()),
                       real_matrix_from_json(j["real_part"], "real_part"),
                       real_matrix_from_json(j["imag_part"], "imag_part"));
}

POVM povm_from_json(const json& j) {
  if (!j.contains("povm")) throw InvalidArgument("missing field 'povm'");
  std::vector<HermitianMatrix> els;
  for (std::size_t k = 0; k < j["povm"].size(); ++k) {
    els.emplace_back(complex_matrix_from_json(j["povm"][k], "povm[" + std::to_string(k) + "]"));
  }
  return POVM(std::move(els));
}

KrausChannel kraus_from_json(const json& j) {
  if (!j.contains("kraus")) throw InvalidArgument("missing field 'kraus'");
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < j["kraus"].size(); ++k) {
    ops.push_back(complex_matrix_from_json(j["kraus"][k], "kraus[" + std::to_string(k) + "]"));
  }
  return KrausChannel(std::move(ops));
}

DensityMatrix state_from_json(const json& j, const std::string& field) {
  if (j.is_object()) {
    if (!j.contains("rho")) throw InvalidArgument("field '" + field + "': missing 'rho'");
    return state_from_json(j["rho"], field + ".rho");
  }
  const ComplexMatrix m = complex_matrix_from_json(j, field);
  try {
    return DensityMatrix(m);
  } catch (const Error& e) {
    throw InvalidArgument("field '" + field + "': " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string digest(const json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json divergence_report(const DensityMatrix& rho, const DensityMatrix& sigma, std::size_t steps) {
  json r = {{"umegaki", number(umegaki(rho, sigma))},
            {"rld_closed", number(rld_divergence(rho, sigma))},
            {"rld_integral", number(rld_divergence_integral(rho, sigma, steps))},
            {"steps", steps}};
  if (sigma.full_rank()) {
    r["two_point_kl"] = number(two_point_reverse_estimate(rho, sigma).kl());
  } else {
    r["two_point_kl"] = nullptr;
  }
  return r;
}

}  // namespace qig
