#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qig/families.hpp"
#include "qig/gaussian.hpp"
#include "qig/io.hpp"

namespace py = pybind11;
using namespace qig;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using RArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& a) {
  if (a.ndim() != 2) throw InvalidArgument("expected a 2-d array");
  const auto r = a.unchecked<2>();
  ComplexMatrix m(a.shape(0), a.shape(1));
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = r(i, j);
  return m;
}

RealMatrix to_real(const RArray& a) {
  if (a.ndim() != 2) throw InvalidArgument("expected a 2-d array");
  const auto r = a.unchecked<2>();
  RealMatrix m(a.shape(0), a.shape(1));
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = r(i, j);
  return m;
}

CArray to_array(const ComplexMatrix& m) {
  CArray a({m.rows(), m.cols()});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
  return a;
}

DensityMatrix state(const CArray& a) { return DensityMatrix(to_matrix(a)); }

FamilyPoint point(const CArray& rho, const std::vector<CArray>& tangents) {
  std::vector<HermitianMatrix> ts;
  for (const auto& t : tangents) ts.emplace_back(to_matrix(t));
  return FamilyPoint(std::vector<double>(ts.size(), 0.0), state(rho), std::move(ts));
}

QFisherMatrix fisher_of(const CArray& j) { return QFisherMatrix(FisherKind::rld, to_matrix(j)); }

std::string json_text(const json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum Fisher information, reverse estimation and divergences.";

  static py::exception<Error> base(m, "QigError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<RankDeficientError>(m, "RankDeficientError", base.ptr());
  py::register_exception<RldExistenceError>(m, "RldExistenceError", base.ptr());
  py::register_exception<NotReverseEstimableError>(m, "NotReverseEstimableError", base.ptr());
  py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());

  m.def("sld", [](const CArray& rho, const CArray& x) {
    return to_array(sld(state(rho), HermitianMatrix(to_matrix(x))).matrix());
  }, py::arg("rho"), py::arg("tangent"));
  m.def("rld", [](const CArray& rho, const CArray& x) {
    return to_array(rld(state(rho), HermitianMatrix(to_matrix(x))));
  }, py::arg("rho"), py::arg("tangent"));
  m.def("sld_fisher", [](const CArray& rho, const std::vector<CArray>& ts) {
    return to_array(sld_fisher(point(rho, ts)).hermitian().matrix());
  }, py::arg("rho"), py::arg("tangents"));
  m.def("rld_fisher", [](const CArray& rho, const std::vector<CArray>& ts) {
    return to_array(rld_fisher(point(rho, ts)).hermitian().matrix());
  }, py::arg("rho"), py::arg("tangents"));
  m.def("km_fisher", [](const CArray& rho, const std::vector<CArray>& ts) {
    return to_array(km_fisher(point(rho, ts)).hermitian().matrix());
  }, py::arg("rho"), py::arg("tangents"));

  m.def("local_reverse_estimate", [](const CArray& rho, const CArray& tangent) {
    const LocalReverseEstimate lre = local_reverse_estimate(point(rho, {tangent}));
    return json_text(to_json(lre));
  }, py::arg("rho"), py::arg("tangent"));
  m.def("validate_random_reverse_estimate", [](const CArray& rho, const CArray& tangent, std::size_t extra,
                                               std::uint64_t seed) {
    const FamilyPoint p = point(rho, {tangent});
    const auto v = validate_reverse_estimate(random_local_reverse_estimate(p, extra, seed), p);
    return py::make_tuple(v.input.value(), v.rld.value(), v.gap);
  }, py::arg("rho"), py::arg("tangent"), py::arg("extra"), py::arg("seed"));
  m.def("global_commutation_check", [](const std::vector<std::pair<CArray, std::vector<CArray>>>& pts) {
    std::vector<FamilyPoint> fp;
    for (const auto& [rho, ts] : pts) fp.push_back(point(rho, ts));
    const CommutationCheck c = global_commutation_check(fp);
    return py::make_tuple(c.max_commutator, c.tolerance, c.reverse_estimable());
  }, py::arg("points"));
  m.def("multiparam_bounds", [](const CArray& jr, const RArray& g) {
    const MultiparamBounds b = multiparam_bounds(fisher_of(jr), to_real(g));
    return py::make_tuple(b.reverse, b.estimation);
  }, py::arg("rld_fisher"), py::arg("weight"));
  m.def("min_trace_oracle", [](const CArray& jr, const RArray& g, std::uint64_t seed) {
    const MinTraceResult r = min_trace_oracle(fisher_of(jr), to_real(g), seed);
    return py::make_tuple(r.value, r.converged);
  }, py::arg("rld_fisher"), py::arg("weight"), py::arg("seed") = 0);

  m.def("kl", [](const std::vector<double>& p, const std::vector<double>& q) { return kl(p, q); });
  m.def("umegaki", [](const CArray& r, const CArray& s) { return umegaki(state(r), state(s)); });
  m.def("rld_divergence", [](const CArray& r, const CArray& s) { return rld_divergence(state(r), state(s)); });
  m.def("rld_divergence_integral", [](const CArray& r, const CArray& s, std::size_t steps) {
    return rld_divergence_integral(state(r), state(s), steps);
  }, py::arg("rho"), py::arg("sigma"), py::arg("steps") = 4000);
  m.def("two_point_reverse_estimate", [](const CArray& r, const CArray& s) {
    return json_text(to_json(two_point_reverse_estimate(state(r), state(s))));
  });

  m.def("random_density", [](std::size_t d, std::uint64_t seed) {
    return to_array(random_density(d, seed).matrix().matrix());
  }, py::arg("dim"), py::arg("seed"));
  m.def("random_traceless_hermitian", [](std::size_t d, std::uint64_t seed) {
    return to_array(random_traceless_hermitian(d, seed).matrix());
  }, py::arg("dim"), py::arg("seed"));

  m.def("monotone_metric_suite", [](std::size_t trials, const std::vector<std::size_t>& dims, std::uint64_t seed) {
    return json_text(to_json(monotone_metric_suite(trials, dims, seed)));
  }, py::arg("trials"), py::arg("dims"), py::arg("seed"));
  m.def("monotone_divergence_suite", [](std::size_t trials, const std::vector<std::size_t>& dims, std::uint64_t seed) {
    return json_text(to_json(monotone_divergence_suite(trials, dims, seed)));
  }, py::arg("trials"), py::arg("dims"), py::arg("seed"));
  m.def("gaussian_rld_fisher", [](double sigma2, double hbar, std::size_t truncation) {
    GaussianSpec spec;
    spec.sigma2 = sigma2;
    spec.hbar = hbar;
    spec.truncation = truncation;
    return to_array(rld_fisher(gaussian_family(spec)).hermitian().matrix());
  }, py::arg("sigma2") = 1.0, py::arg("hbar") = 1.0, py::arg("truncation") = 80);
  m.attr("coherent_convention") = kCoherentConvention;
}
