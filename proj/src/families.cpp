#include "qig/families.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "qig/channels.hpp"
#include "qig/io.hpp"

namespace qig {

std::string_view to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::explicit_points:
      return "explicit";
    case FamilyKind::bloch_rotation:
      return "bloch_rotation";
    case FamilyKind::classical_simplex:
      return "classical_simplex";
    case FamilyKind::fixed_basis:
      return "fixed_basis";
    case FamilyKind::gaussian:
      return "gaussian";
  }
  return "?";
}

std::size_t FamilySpec::parameter_count() const {
  switch (kind) {
    case FamilyKind::explicit_points:
      return points.empty() ? 0 : points.front().tangents.size();
    case FamilyKind::bloch_rotation:
      return 1;
    case FamilyKind::classical_simplex:
    case FamilyKind::fixed_basis:
      return directions.size();
    case FamilyKind::gaussian:
      return 2;
  }
  return 0;
}

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw InvalidArgument("family spec field '" + field + "': " + what);
}

const json& require(const json& j, const std::string& field) {
  if (!j.contains(field)) bad(field, "missing");
  return j[field];
}

double require_number(const json& j, const std::string& field) {
  const json& v = require(j, field);
  if (!v.is_number()) bad(field, "expected a number");
  return v.get<double>();
}

std::vector<double> theta_from(const json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>()};
  return real_vector_from_json(v, field);
}

ExplicitPoint explicit_point(const json& j, const std::string& prefix) {
  ExplicitPoint p;
  p.rho = complex_matrix_from_json(require(j, "rho"), prefix + "rho");
  const json& ts = require(j, "tangents");
  if (!ts.is_array()) bad(prefix + "tangents", "expected an array of matrices");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    p.tangents.push_back(complex_matrix_from_json(ts[i], prefix + "tangents[" + std::to_string(i) + "]"));
  }
  if (j.contains("theta")) p.theta = theta_from(j["theta"], prefix + "theta");
  if (p.theta.empty()) p.theta.assign(p.tangents.size(), 0.0);
  if (p.theta.size() != p.tangents.size()) bad(prefix + "theta", "length must equal the number of tangents");
  return p;
}

void parse_simplex(const json& j, FamilySpec& s) {
  s.base = real_vector_from_json(require(j, "base"), "base");
  if (s.base.size() < 2) bad("base", "needs at least two outcomes");
  double total = 0.0;
  for (double p : s.base) {
    if (!(p > 0.0)) bad("base", "entries must be strictly positive (full-rank family)");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) bad("base", "must sum to 1");
  const json& dirs = require(j, "directions");
  if (!dirs.is_array() || dirs.empty()) bad("directions", "expected a non-empty array of vectors");
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const std::string f = "directions[" + std::to_string(i) + "]";
    auto d = real_vector_from_json(dirs[i], f);
    if (d.size() != s.base.size()) bad(f, "length must match 'base'");
    double sum = 0.0, scale = 0.0;
    for (double v : d) {
      sum += v;
      scale += std::abs(v);
    }
    if (std::abs(sum) > 1e-12 * std::max(1.0, scale)) bad(f, "entries must sum to 0");
    s.directions.push_back(std::move(d));
  }
}

std::vector<double> simplex_probs(const FamilySpec& s, const std::vector<double>& theta) {
  if (theta.size() != s.directions.size()) {
    throw InvalidArgument("theta has " + std::to_string(theta.size()) + " components, family has " +
                          std::to_string(s.directions.size()) + " parameters");
  }
  std::vector<double> q = s.base;
  for (std::size_t i = 0; i < theta.size(); ++i)
    for (std::size_t x = 0; x < q.size(); ++x) q[x] += theta[i] * s.directions[i][x];
  for (double v : q) {
    if (!(v > 0.0)) {
      std::ostringstream msg;
      msg << "theta leaves the open simplex (probability " << v << ")";
      throw InvalidArgument(msg.str());
    }
  }
  return q;
}

ComplexMatrix basis_of(const FamilySpec& s) {
  if (s.basis) return *s.basis;
  return random_unitary(s.base.size(), s.basis_seed.value_or(0));
}

ComplexMatrix conjugate_diag(const ComplexMatrix& v, const std::vector<double>& d) {
  return v * to_complex(RealMatrix::diagonal(d)) * v.adjoint();
}

}  // namespace

FamilySpec parse_family_spec(const json& j) {
  if (!j.is_object()) throw InvalidArgument("family spec must be a JSON object");
  FamilySpec s;
  const json& kind = require(j, "kind");
  if (!kind.is_string()) bad("kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "explicit") {
    s.kind = FamilyKind::explicit_points;
    if (j.contains("points")) {
      const json& pts = j["points"];
      if (!pts.is_array() || pts.empty()) bad("points", "expected a non-empty array");
      for (std::size_t i = 0; i < pts.size(); ++i) {
        s.points.push_back(explicit_point(pts[i], "points[" + std::to_string(i) + "]."));
      }
    } else {
      s.points.push_back(explicit_point(j, ""));
    }
    for (const auto& p : s.points) {
      if (p.tangents.size() != s.points.front().tangents.size()) bad("points", "parameter counts differ");
      s.theta_grid.push_back(p.theta);
    }
  } else if (k == "bloch_rotation") {
    s.kind = FamilyKind::bloch_rotation;
    s.radius = require_number(j, "r");
    if (!(s.radius >= 0.0 && s.radius < 1.0)) bad("r", "must lie in [0, 1) for a full-rank family");
  } else if (k == "classical_simplex") {
    s.kind = FamilyKind::classical_simplex;
    parse_simplex(j, s);
  } else if (k == "fixed_basis") {
    s.kind = FamilyKind::fixed_basis;
    parse_simplex(j, s);
    if (j.contains("basis")) {
      s.basis = complex_matrix_from_json(j["basis"], "basis");
      const std::size_t d = s.base.size();
      if (s.basis->rows() != d || s.basis->cols() != d) bad("basis", "must be square with the size of 'base'");
      if ((*s.basis * s.basis->adjoint() - ComplexMatrix::identity(d)).frobenius_norm() > 1e-10) {
        bad("basis", "must be unitary");
      }
    } else {
      s.basis_seed = j.contains("basis_seed") ? j["basis_seed"].get<std::uint64_t>() : 0;
    }
  } else if (k == "gaussian") {
    s.kind = FamilyKind::gaussian;
    if (j.contains("sigma2")) s.gaussian.sigma2 = require_number(j, "sigma2");
    if (j.contains("hbar")) s.gaussian.hbar = require_number(j, "hbar");
    if (j.contains("truncation")) s.gaussian.truncation = j["truncation"].get<std::size_t>();
    if (j.contains("quad_nodes")) s.gaussian.quad_nodes = j["quad_nodes"].get<std::size_t>();
    try {
      s.gaussian.validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(std::string("family spec: ") + e.what());
    }
  } else {
    bad("kind", "unknown kind '" + k + "' (expected explicit, bloch_rotation, classical_simplex, "
                "fixed_basis or gaussian)");
  }

  if (j.contains("derivative")) {
    const json& d = j["derivative"];
    std::string mode;
    if (d.is_string()) {
      mode = d.get<std::string>();
    } else if (d.is_object() && d.contains("mode")) {
      mode = d["mode"].get<std::string>();
      if (d.contains("step")) s.fd_step = d["step"].get<double>();
    } else if (d.is_object() && d.contains("finite_difference")) {
      mode = "finite_difference";
      s.fd_step = d["finite_difference"].get<double>();
    } else {
      bad("derivative", "expected \"analytic\", \"finite_difference\" or {\"mode\", \"step\"}");
    }
    if (mode == "analytic") {
      s.analytic = true;
    } else if (mode == "finite_difference") {
      s.analytic = false;
    } else {
      bad("derivative", "unknown mode '" + mode + "'");
    }
    if (s.fd_step < 0.0) bad("derivative", "step must be positive");
  }

  if (s.kind != FamilyKind::explicit_points) {
    const std::size_t m = s.parameter_count();
    if (j.contains("theta_grid")) {
      const json& g = j["theta_grid"];
      if (!g.is_array() || g.empty()) bad("theta_grid", "expected a non-empty array");
      for (std::size_t i = 0; i < g.size(); ++i) s.theta_grid.push_back(theta_from(g[i], "theta_grid"));
    } else if (j.contains("theta")) {
      s.theta_grid.push_back(theta_from(j["theta"], "theta"));
    } else {
      s.theta_grid.push_back(std::vector<double>(m, 0.0));
    }
    for (const auto& t : s.theta_grid) {
      if (t.size() != m) bad("theta", "expected " + std::to_string(m) + " components");
    }
  }
  return s;
}

json to_json(const FamilySpec& s) {
  json j = {{"kind", std::string(to_string(s.kind))}};
  switch (s.kind) {
    case FamilyKind::explicit_points: {
      json pts = json::array();
      for (const auto& p : s.points) {
        json ts = json::array();
        for (const auto& t : p.tangents) ts.push_back(to_json(t));
        pts.push_back({{"theta", p.theta}, {"rho", to_json(p.rho)}, {"tangents", ts}});
      }
      j["points"] = pts;
      return j;
    }
    case FamilyKind::bloch_rotation:
      j["r"] = s.radius;
      break;
    case FamilyKind::fixed_basis:
      if (s.basis) {
        j["basis"] = to_json(*s.basis);
      } else {
        j["basis_seed"] = s.basis_seed.value_or(0);
      }
      [[fallthrough]];
    case FamilyKind::classical_simplex:
      j["base"] = s.base;
      j["directions"] = s.directions;
      break;
    case FamilyKind::gaussian:
      j["sigma2"] = s.gaussian.sigma2;
      j["hbar"] = s.gaussian.hbar;
      j["truncation"] = s.gaussian.truncation;
      j["quad_nodes"] = s.gaussian.nodes();
      break;
  }
  j["theta_grid"] = s.theta_grid;
  j["derivative"] = s.analytic ? json{{"mode", "analytic"}} : json{{"mode", "finite_difference"}, {"step", s.fd_step}};
  return j;
}

FamilySpec bloch_rotation_spec(double radius, double theta) {
  return parse_family_spec({{"kind", "bloch_rotation"}, {"r", radius}, {"theta", theta}});
}

DensityMatrix family_state(const FamilySpec& s, const std::vector<double>& theta) {
  switch (s.kind) {
    case FamilyKind::explicit_points:
      throw InvalidArgument("explicit families are only defined at their listed points");
    case FamilyKind::bloch_rotation: {
      if (theta.size() != 1) throw InvalidArgument("bloch_rotation has one parameter");
      const double c = s.radius * std::cos(theta[0]), sn = s.radius * std::sin(theta[0]);
      return DensityMatrix(ComplexMatrix{{0.5, cplx{0.5 * c, -0.5 * sn}}, {cplx{0.5 * c, 0.5 * sn}, 0.5}});
    }
    case FamilyKind::classical_simplex:
      return DensityMatrix(HermitianMatrix::diagonal(simplex_probs(s, theta)));
    case FamilyKind::fixed_basis:
      return DensityMatrix::normalized(
          HermitianMatrix::hermitian_part(conjugate_diag(basis_of(s), simplex_probs(s, theta))));
    case FamilyKind::gaussian:
      return gaussian_state(s.gaussian, theta);
  }
  throw InvalidArgument("unknown family kind");
}

FamilyPoint family_point(const FamilySpec& s, const std::vector<double>& theta) {
  if (s.kind == FamilyKind::explicit_points) {
    for (const auto& p : s.points) {
      if (p.theta == theta) {
        std::vector<HermitianMatrix> ts;
        for (const auto& t : p.tangents) ts.emplace_back(t);
        return FamilyPoint(p.theta, DensityMatrix(p.rho), std::move(ts));
      }
    }
    throw InvalidArgument("explicit family has no point at the requested theta");
  }
  if (!s.analytic) {
    return finite_difference_point([&s](const std::vector<double>& t) { return family_state(s, t); }, theta,
                                   s.fd_step);
  }
  switch (s.kind) {
    case FamilyKind::bloch_rotation: {
      const DensityMatrix rho = family_state(s, theta);
      const double c = 0.5 * s.radius * std::cos(theta[0]), sn = 0.5 * s.radius * std::sin(theta[0]);
      // ½ r (−sin θ σx + cos θ σy)
      HermitianMatrix x(ComplexMatrix{{0.0, cplx{-sn, -c}}, {cplx{-sn, c}, 0.0}});
      return FamilyPoint(theta, rho, {x});
    }
    case FamilyKind::classical_simplex:
    case FamilyKind::fixed_basis: {
      const DensityMatrix rho = family_state(s, theta);
      const ComplexMatrix v = s.kind == FamilyKind::fixed_basis ? basis_of(s) : ComplexMatrix::identity(s.base.size());
      std::vector<HermitianMatrix> ts;
      for (const auto& d : s.directions) ts.push_back(HermitianMatrix::hermitian_part(conjugate_diag(v, d)));
      return FamilyPoint(theta, rho, std::move(ts));
    }
    case FamilyKind::gaussian: {
      GaussianSpec g = s.gaussian;
      g.theta = theta;
      g.derivative = DerivativeMode::analytic;
      return gaussian_family(g);
    }
    case FamilyKind::explicit_points:
      break;
  }
  throw InvalidArgument("unknown family kind");
}

std::vector<FamilyPoint> family_grid(const FamilySpec& s) {
  std::vector<FamilyPoint> pts;
  for (const auto& t : s.theta_grid) pts.push_back(family_point(s, t));
  return pts;
}

}  // namespace qig
