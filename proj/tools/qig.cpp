// qig command-line tool: Fisher matrices, reverse estimation, divergences,
// bounds and the randomized verification suites.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qig/families.hpp"
#include "qig/gaussian.hpp"
#include "qig/io.hpp"

#ifndef QIG_VERSION
#define QIG_VERSION "0.0.0"
#endif

using namespace qig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitViolation = 2;

struct Options {
  std::string family, rho, sigma, weight, out, theta, dims = "2,3", suite = "all";
  std::size_t trials = 200, steps = 4000, truncation = 80, nodes = 0, extra = 2;
  std::uint64_t seed = 42;
  double sigma2 = 1.0, hbar = 1.0;
};

std::vector<double> parse_list(const std::string& s, const std::string& flag) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("--" + flag + ": '" + item + "' is not a number");
    }
  }
  return v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string fmt(cplx z) {
  if (z.imag() == 0.0) return fmt(z.real());
  std::ostringstream os;
  os << std::setprecision(6) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

// Display only: parts below 1e-14·‖h‖ print as zero.
void print_matrix(std::ostream& os, const std::string& label, const HermitianMatrix& h) {
  const double floor = 1e-14 * h.frobenius_norm();
  auto chop = [floor](double v) { return std::abs(v) < floor ? 0.0 : v; };
  for (std::size_t i = 0; i < h.dim(); ++i) {
    os << std::left << std::setw(14) << (i == 0 ? label : "") << "[";
    for (std::size_t j = 0; j < h.dim(); ++j) {
      os << std::right << std::setw(26) << fmt(cplx{chop(h(i, j).real()), chop(h(i, j).imag())});
    }
    os << " ]\n";
  }
}

void row(std::ostream& os, const std::string& name, const std::string& value, const std::string& extra = "") {
  os << std::left << std::setw(34) << name << std::right << std::setw(16) << value;
  if (!extra.empty()) os << "   " << extra;
  os << "\n";
}

void print_suite(std::ostream& os, const SuiteReport& r) {
  os << r.name << " (seed " << r.seed << ", " << r.trials << " trials): " << (r.pass() ? "PASS" : "FAIL") << "\n";
  os << std::left << std::setw(36) << "  check" << std::right << std::setw(14) << "min slack" << std::setw(14)
     << "max slack" << std::setw(12) << "tolerance" << "\n";
  for (const auto& c : r.checks) {
    os << "  " << std::left << std::setw(34) << c.name << std::right << std::setw(14) << fmt(c.min_slack)
       << std::setw(14) << fmt(c.max_slack) << std::setw(12) << fmt(c.tolerance) << "\n";
  }
  for (const auto& v : r.violations) {
    os << "  violation: trial " << v.trial << ", " << v.quantity << ", slack " << fmt(v.slack) << "\n";
  }
}

std::uint64_t effective_seed(std::uint64_t flag) {
  if (const char* env = std::getenv("QIG_SEED"); env != nullptr && *env != '\0') {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("QIG_SEED='") + env + "' is not an unsigned integer");
    }
  }
  return flag;
}

FamilySpec load_family(const Options& o) {
  if (o.family.empty()) throw InvalidArgument("--family is required");
  FamilySpec spec = parse_family_spec(read_json_file(o.family));
  if (!o.theta.empty()) {
    if (spec.kind == FamilyKind::explicit_points) throw InvalidArgument("--theta cannot move an explicit family");
    auto t = parse_list(o.theta, "theta");
    spec.theta_grid = {t};
  }
  return spec;
}

struct Outcome {
  json input;
  json results;
  bool pass = true;
};

Outcome run_fisher(const Options& o, std::ostream& os) {
  const FamilySpec spec = load_family(o);
  Outcome out{to_json(spec), json::array()};
  for (const auto& point : family_grid(spec)) {
    json r = {{"theta", point.theta()}};
    os << "theta = [" << fmt(point.theta()[0]);
    for (std::size_t i = 1; i < point.theta().size(); ++i) os << ", " << fmt(point.theta()[i]);
    os << "]\n";
    const QFisherMatrix jr = rld_fisher(point);
    r["RLD"] = to_json(jr);
    r["RLD"]["tolerance"] = tol::kRldSupport;
    if (point.rho().full_rank()) {
      const QFisherMatrix js = sld_fisher(point);
      const QFisherMatrix jk = km_fisher(point);
      r["SLD"] = to_json(js);
      r["SLD"]["tolerance"] = tol::kReverseSld;
      r["KM"] = to_json(jk);
      r["KM"]["tolerance"] = tol::kReverseSld;
      const double lower = qig::min_eigenvalue(HermitianMatrix::hermitian_part(jk.hermitian().matrix() - js.hermitian().matrix()));
      // metrics are real quadratic forms on tangents: compare against ℜJ^R
      const double upper = qig::min_eigenvalue(jr.real_part() - jk.real_part());
      r["sandwich"] = {{"KM_minus_SLD_min_eig", lower}, {"RLD_minus_KM_min_eig", upper}, {"tolerance", 1e-8}};
      out.pass = out.pass && lower >= -1e-8 && upper >= -1e-8;
      print_matrix(os, "J^S", js.hermitian());
      print_matrix(os, "J^KM", jk.hermitian());
    } else {
      os << "  state is rank deficient; SLD and KM metrics skipped\n";
    }
    print_matrix(os, "J^R", jr.hermitian());
    if (point.parameter_count() > 1) {
      const auto d = rld_imag_commutator_diagnostic(point);
      r["imag_commutator"] = {{"from_fisher", to_json(d.from_fisher)},
                              {"from_commutator", to_json(d.from_commutator)},
                              {"max_discrepancy", d.max_discrepancy},
                              {"max_real_part", d.max_real_part}};
      row(os, "Im J^R vs commutator", fmt(d.max_discrepancy), "diagnostic");
    }
    out.results.push_back(std::move(r));
  }
  return out;
}

Outcome run_reverse(const Options& o, std::uint64_t seed, std::ostream& os) {
  const FamilySpec spec = load_family(o);
  Outcome out{to_json(spec), json::array()};
  out.input["extra"] = o.extra;
  out.input["trials"] = o.trials;
  for (const auto& point : family_grid(spec)) {
    const LocalReverseEstimate lre = local_reverse_estimate(point);
    const ReverseEstimateValidation v = validate_reverse_estimate(lre, point);
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < o.trials; ++t) {
      const auto cand = random_local_reverse_estimate(point, 1 + t % o.extra, child_seed(seed, t));
      min_gap = std::min(min_gap, validate_reverse_estimate(cand, point).gap);
    }
    const bool ok = std::abs(v.gap) <= 1e-9 && (o.trials == 0 || min_gap >= -1e-8);
    out.pass = out.pass && ok;
    out.results.push_back({{"theta", point.theta()},
                           {"estimate", to_json(lre)},
                           {"input_fisher", v.input.value()},
                           {"rld_fisher", v.rld.value()},
                           {"gap", v.gap},
                           {"gap_tolerance", 1e-9},
                           {"state_residual", v.state_residual},
                           {"tangent_residual", v.tangent_residual},
                           {"residual_tolerance", 1e-10},
                           {"random_candidates", o.trials},
                           {"random_min_gap", number(min_gap)},
                           {"random_gap_tolerance", 1e-8}});
    row(os, "theta", fmt(point.theta()[0]));
    row(os, "ensemble size", std::to_string(lre.ensemble.size()));
    row(os, "input Fisher (constructed)", fmt(v.input.value()));
    row(os, "J^R", fmt(v.rld.value()));
    row(os, "gap", fmt(v.gap), "tol 1e-09");
    row(os, "reconstruction residual", fmt(std::max(v.state_residual, v.tangent_residual)), "tol 1e-10");
    if (o.trials > 0) row(os, "min gap over random candidates", fmt(min_gap), "tol -1e-08");
  }
  return out;
}

Outcome run_global(const Options& o, std::uint64_t seed, std::ostream& os) {
  FamilySpec spec = parse_family_spec(read_json_file(o.family.empty() ? throw InvalidArgument("--family is required") : o.family));
  if (!o.theta.empty()) {
    if (spec.parameter_count() != 1) throw InvalidArgument("--theta lists grid points only for one-parameter families");
    spec.theta_grid.clear();
    for (double t : parse_list(o.theta, "theta")) spec.theta_grid.push_back({t});
  }
  Outcome out{to_json(spec), json::object()};
  const auto points = family_grid(spec);
  const CommutationCheck check = global_commutation_check(points);
  out.results["commutation"] = {{"max_commutator", check.max_commutator},
                                {"scale", check.scale},
                                {"tolerance", check.tolerance},
                                {"reverse_estimable", check.reverse_estimable()}};
  row(os, "grid points", std::to_string(points.size()));
  row(os, "max RLD commutator", fmt(check.max_commutator), "tol " + fmt(check.tolerance));
  if (!check.reverse_estimable()) {
    row(os, "globally reverse-estimable", "no");
    return out;
  }
  row(os, "globally reverse-estimable", "yes");
  const GlobalReverseEstimate g = global_reverse_estimate(points, 0, seed);
  const auto states = g.states();
  double recon = 0.0, fisher_gap = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Ensemble e(g.p_theta[k], states);
    recon = std::max(recon, (e.mix(g.p_theta[k]) - points[k].rho().matrix()).frobenius_norm());
    const QFisherMatrix jin = classical_fisher(g.input_family(k));
    const QFisherMatrix jr = rld_fisher(points[k]);
    fisher_gap = std::max(fisher_gap, (jin.hermitian() - jr.hermitian()).frobenius_norm());
  }
  out.pass = recon <= tol::kGlobalDiagonal && fisher_gap <= 1e-7;
  out.results["estimate"] = to_json(g);
  out.results["reconstruction_residual"] = {{"value", recon}, {"tolerance", 1e-8}};
  out.results["input_fisher_minus_rld"] = {{"value", fisher_gap}, {"tolerance", 1e-7}};
  row(os, "ensemble size", std::to_string(states.size()));
  row(os, "max reconstruction residual", fmt(recon), "tol 1e-08");
  row(os, "max |J_input - J^R|", fmt(fisher_gap), "tol 1e-07");
  return out;
}

Outcome run_divergence(const Options& o, std::ostream& os) {
  if (o.rho.empty() || o.sigma.empty()) throw InvalidArgument("--rho and --sigma are required");
  const json jr = read_json_file(o.rho), js = read_json_file(o.sigma);
  const DensityMatrix rho = state_from_json(jr, "rho"), sigma = state_from_json(js, "sigma");
  Outcome out{{{"rho", to_json(rho.matrix().matrix())}, {"sigma", to_json(sigma.matrix().matrix())}, {"steps", o.steps}},
              divergence_report(rho, sigma, o.steps)};
  out.results["tolerances"] = {{"rld_integral_vs_closed", 1e-5}, {"two_point_kl_vs_closed", 1e-9}, {"sandwich", 1e-9}};
  for (const char* k : {"umegaki", "rld_closed", "rld_integral", "two_point_kl"}) {
    const json& v = out.results[k];
    row(os, k, v.is_null() ? "n/a" : v.is_string() ? v.get<std::string>() : fmt(v.get<double>()));
  }
  return out;
}

RealMatrix load_weight(const Options& o, std::size_t m) {
  if (o.weight.empty()) return RealMatrix::identity(m);
  const json j = read_json_file(o.weight);
  return real_matrix_from_json(j.is_object() ? j.at("G") : j, "weight");
}

Outcome run_bound(const Options& o, std::uint64_t seed, std::ostream& os) {
  const FamilySpec spec = load_family(o);
  const FamilyPoint point = family_point(spec, spec.theta_grid.front());
  const QFisherMatrix jr = rld_fisher(point);
  const RealMatrix g = load_weight(o, jr.size());
  Outcome out{to_json(spec), json::object()};
  out.input["weight"] = to_json(g);
  const MultiparamBounds b = multiparam_bounds(jr, g);
  out.results["RLD"] = to_json(jr);
  out.results["reverse"] = b.reverse;
  out.results["estimation"] = b.estimation;
  print_matrix(os, "J^R", jr.hermitian());
  row(os, "reverse bound", fmt(b.reverse));
  row(os, "estimation bound", fmt(b.estimation));
  if (jr.size() <= 3) {
    const MinTraceResult mt = min_trace_oracle(jr, g, seed);
    const double rel = std::abs(mt.value - b.reverse) / std::max(1e-300, std::abs(b.reverse));
    out.pass = rel <= 1e-3;
    out.results["min_trace_oracle"] = {
        {"value", mt.value}, {"converged", mt.converged}, {"relative_difference", rel}, {"tolerance", 1e-3}};
    row(os, "min-trace oracle", fmt(mt.value), std::string("rel diff ") + fmt(rel) + (mt.converged ? "" : " (not converged)"));
  }
  return out;
}

Outcome run_monotone(const Options& o, std::uint64_t seed, std::ostream& os) {
  std::vector<std::size_t> dims;
  for (double d : parse_list(o.dims, "dims")) {
    if (d < 2 || d != std::floor(d)) throw InvalidArgument("--dims entries must be integers ≥ 2");
    dims.push_back(static_cast<std::size_t>(d));
  }
  if (o.suite != "all" && o.suite != "metric" && o.suite != "divergence") {
    throw InvalidArgument("--suite must be metric, divergence or all");
  }
  Outcome out{{{"trials", o.trials}, {"dims", dims}, {"suite", o.suite}}, json::array()};
  if (o.suite != "divergence") {
    const SuiteReport r = monotone_metric_suite(o.trials, dims, seed);
    print_suite(os, r);
    out.results.push_back(to_json(r));
    out.pass = out.pass && r.pass();
  }
  if (o.suite != "metric") {
    const SuiteReport r = monotone_divergence_suite(o.trials, dims, seed);
    print_suite(os, r);
    out.results.push_back(to_json(r));
    out.pass = out.pass && r.pass();
  }
  return out;
}

Outcome run_gaussian(const Options& o, std::ostream& os) {
  GaussianSpec spec;
  spec.sigma2 = o.sigma2;
  spec.hbar = o.hbar;
  spec.truncation = o.truncation;
  spec.quad_nodes = o.nodes;
  if (!o.theta.empty()) spec.theta = parse_list(o.theta, "theta");
  spec.validate();
  const GaussianReport r = gaussian_check(spec);
  Outcome out{{{"sigma2", spec.sigma2},
               {"hbar", spec.hbar},
               {"truncation", spec.truncation},
               {"quad_nodes", spec.nodes()},
               {"theta", spec.theta}},
              json::object()};
  out.results = {{"convention", r.convention},
                 {"RLD", to_json(r.rld)},
                 {"expected_RLD", to_json(r.expected)},
                 {"relative_error", to_json(r.relative_error)},
                 {"max_relative_error", r.max_relative_error},
                 {"reverse", r.bounds.reverse},
                 {"estimation", r.bounds.estimation},
                 {"expected_reverse", r.expected_reverse},
                 {"classical_input_fisher", r.classical_input},
                 {"leakage", r.leakage},
                 {"suite", to_json(r.suite)}};
  out.pass = r.suite.pass();
  row(os, "convention", r.convention);
  print_matrix(os, "J^R", r.rld.hermitian());
  print_matrix(os, "closed form", HermitianMatrix::hermitian_part(r.expected));
  row(os, "max relative entry error", fmt(r.max_relative_error), "tol 0.01");
  row(os, "reverse bound (G = I)", fmt(r.bounds.reverse), "expected " + fmt(r.expected_reverse));
  row(os, "estimation bound (G = I)", fmt(r.bounds.estimation));
  row(os, "trace leakage", fmt(r.leakage), "limit 0.005");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Fisher information, reverse estimation and divergence toolkit"};
  app.set_version_flag("--version", QIG_VERSION);
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Master seed (QIG_SEED overrides)");
    sub->add_option("--out", o.out, "Report path (default <command>.report.json)");
  };
  auto* fisher = app.add_subcommand("fisher", "SLD, Kubo-Mori and RLD Fisher matrices of a family");
  auto* reverse = app.add_subcommand("reverse", "Optimal local reverse estimation of a one-parameter family");
  auto* global = app.add_subcommand("global", "Global reverse estimation over a theta grid");
  auto* monotone = app.add_subcommand("monotone", "Randomized metric and divergence monotonicity suites");
  auto* divergence = app.add_subcommand("divergence", "Umegaki and RLD divergences of two states");
  auto* bound = app.add_subcommand("bound", "Multiparameter reverse-estimation and estimation bounds");
  auto* gaussian = app.add_subcommand("gaussian", "Fock-truncated Gaussian coherent-state family");
  for (auto* sub : {fisher, reverse, global, bound}) {
    sub->add_option("--family", o.family, "Family spec (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--theta", o.theta, "Evaluation point, comma-separated");
    common(sub);
  }
  reverse->add_option("--trials", o.trials, "Random non-minimal candidates to validate")->default_val(0);
  reverse->add_option("--extra", o.extra, "Maximum extra ensemble members per candidate")->check(CLI::PositiveNumber);
  bound->add_option("--weight", o.weight, "Weight matrix G (JSON; default identity)")->check(CLI::ExistingFile);
  monotone->add_option("--trials", o.trials, "Trials per suite");
  monotone->add_option("--dims", o.dims, "Hilbert-space dimensions, comma-separated");
  monotone->add_option("--suite", o.suite, "metric, divergence or all");
  common(monotone);
  divergence->add_option("--rho", o.rho, "State file for rho")->required()->check(CLI::ExistingFile);
  divergence->add_option("--sigma", o.sigma, "State file for sigma")->required()->check(CLI::ExistingFile);
  divergence->add_option("--steps", o.steps, "Panels for the integral form")->check(CLI::Range(2, 100000000));
  common(divergence);
  gaussian->add_option("--sigma2", o.sigma2, "Mixing variance");
  gaussian->add_option("--hbar", o.hbar, "Planck constant");
  gaussian->add_option("--truncation", o.truncation, "Fock cutoff N");
  gaussian->add_option("--nodes", o.nodes, "Gauss-Hermite nodes per axis (0 = automatic)");
  gaussian->add_option("--theta", o.theta, "Mean (q, p), comma-separated");
  common(gaussian);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  std::string echo = "qig";
  for (int i = 1; i < argc; ++i) echo += std::string(" ") + argv[i];

  try {
    const std::uint64_t seed = effective_seed(o.seed);
    std::ostringstream table;
    Outcome result;
    if (cmd == "fisher") result = run_fisher(o, table);
    else if (cmd == "reverse") result = run_reverse(o, seed, table);
    else if (cmd == "global") result = run_global(o, seed, table);
    else if (cmd == "monotone") result = run_monotone(o, seed, table);
    else if (cmd == "divergence") result = run_divergence(o, table);
    else if (cmd == "bound") result = run_bound(o, seed, table);
    else result = run_gaussian(o, table);

    json report = {{"tool", "qig"},
                   {"version", QIG_VERSION},
                   {"command", echo},
                   {"subcommand", cmd},
                   {"seed", seed},
                   {"input", result.input},
                   {"input_digest", digest(result.input)},
                   {"results", result.results},
                   {"pass", result.pass}};
    const std::string path = o.out.empty() ? cmd + ".report.json" : o.out;
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot write report to '" + path + "'");
    f << report.dump(2) << "\n";
    std::cout << table.str();
    std::cout << (result.pass ? "pass" : "FAIL") << "; report written to " << path << "\n";
    return result.pass ? kExitOk : kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "qig " << cmd << ": " << e.what() << "\n";
    return kExitInput;
  }
}
