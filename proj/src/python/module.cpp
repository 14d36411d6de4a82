#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bellfilter/family.hpp"
#include "bellfilter/filtercore.hpp"
#include "bellfilter/report.hpp"
#include "bellfilter/transform.hpp"
#include "bellfilter/wootters.hpp"

namespace py = pybind11;
using namespace bellfilter;

namespace {

using carray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

template <std::size_t N>
Mat<N> to_mat(const carray& a) {
  if (a.ndim() != 2 || a.shape(0) != N || a.shape(1) != N)
    throw Error(ErrorKind::invalid_input, "expected a " + std::to_string(N) + "x" + std::to_string(N) + " matrix");
  Mat<N> m;
  auto r = a.unchecked<2>();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m(i, j) = r(i, j);
  return m;
}

template <std::size_t N>
carray from_mat(const Mat<N>& m) {
  carray out({N, N});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) w(i, j) = m(i, j);
  return out;
}

carray from_vec(const CVec4& v) {
  carray out(std::vector<py::ssize_t>{4});
  auto w = out.mutable_unchecked<1>();
  for (int i = 0; i < 4; ++i) w(i) = v[i];
  return out;
}

NumericConfig cfg_for(double tol) { return NumericConfig{}.scaled(tol); }

CompletionChoice choice_for(const std::optional<double>& tau_ratio) {
  return tau_ratio ? CompletionChoice::from_tau_ratio(*tau_ratio) : CompletionChoice::canonical();
}

std::string analyze_json(const carray& rho, const std::optional<double>& tau_ratio, double tol,
                         const std::optional<std::string>& label) {
  const NumericConfig cfg = cfg_for(tol);
  const DensityMatrix d = load_density(to_mat<4>(rho), cfg);
  const Plan p = plan(d, choice_for(tau_ratio), cfg);
  std::optional<TransformResult> tr;
  if (p.filter) tr = apply_filter(d, *p.filter, p.wootters, cfg);
  return make_report({label, &d, &p, tr ? &*tr : nullptr, &cfg}).dump();
}

py::tuple local_filter(const carray& rho, const std::optional<double>& tau_ratio, double tol) {
  const NumericConfig cfg = cfg_for(tol);
  const Plan p = plan(load_density(to_mat<4>(rho), cfg), choice_for(tau_ratio), cfg);
  if (!p.filter) throw Error(p.classification == Classification::separable ? ErrorKind::separable
                                                                            : ErrorKind::lambda_n_zero,
                             p.message);
  return py::make_tuple(from_mat(p.filter->fA), from_mat(p.filter->fB), p.p_f);
}

py::tuple apply(const carray& rho, const carray& fA, const carray& fB, double tol) {
  const NumericConfig cfg = cfg_for(tol);
  const DensityMatrix d = load_density(to_mat<4>(rho), cfg);
  const LocalFilter lf = LocalFilter::from_matrices(to_mat<2>(fA), to_mat<2>(fB), cfg);
  const TransformResult tr = apply_filter(d, lf, cfg);
  return py::make_tuple(from_mat(tr.rho_prime.rho), tr.p_f);
}

py::tuple wootters(const carray& rho, double tol) {
  const NumericConfig cfg = cfg_for(tol);
  const WoottersSet ws = wootters_decomposition(load_density(to_mat<4>(rho), cfg), cfg);
  py::list xs;
  for (const CVec4& x : ws.x) xs.append(from_vec(x));
  return py::make_tuple(std::vector<double>(ws.lambdas.begin(), ws.lambdas.end()), xs);
}

FamilyParams params(double alpha, const std::vector<double>& p) {
  if (p.size() != 4) throw Error(ErrorKind::invalid_input, "p must have four entries");
  return {alpha, {p[0], p[1], p[2], p[3]}};
}

std::string family_json(double alpha, const std::vector<double>& p, const std::optional<double>& tau_ratio) {
  const FamilyParams fp = params(alpha, p);
  const bool rank2 = fp.p[2] == 0.0 && fp.p[3] == 0.0;
  const FamilyClosedForm cf = rank2 ? family_rank2(fp, tau_ratio.value_or(1.0)) : family_closed_form(fp);
  return family_block(fp, cf, rank2 ? std::optional<double>(tau_ratio.value_or(1.0)) : std::nullopt).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Local filtering of two-qubit states to Bell-diagonal form";

  static py::exception<Error> exc(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(exc.ptr())(e.what());
      const char* kind = "internal_consistency";
      switch (e.kind()) {
        case ErrorKind::invalid_input: kind = "invalid_input"; break;
        case ErrorKind::separable: kind = "separable"; break;
        case ErrorKind::lambda_n_zero: kind = "lambda_n_zero"; break;
        case ErrorKind::degenerate_geometry: kind = "degenerate_geometry"; break;
        case ErrorKind::not_product: kind = "not_product"; break;
        case ErrorKind::vanishing_probability: kind = "vanishing_probability"; break;
        case ErrorKind::internal_consistency: break;
      }
      err.attr("kind") = kind;
      PyErr_SetObject(exc.ptr(), err.ptr());
    }
  });

  m.def("concurrence", [](const carray& rho, double tol) {
    const NumericConfig cfg = cfg_for(tol);
    return concurrence(load_density(to_mat<4>(rho), cfg), cfg);
  }, py::arg("rho"), py::arg("tol") = 1.0);
  m.def("wootters", &wootters, py::arg("rho"), py::arg("tol") = 1.0,
        "Descending lambdas and the tilde-orthogonal states.");
  m.def("local_filter", &local_filter, py::arg("rho"), py::arg("tau_ratio") = py::none(), py::arg("tol") = 1.0,
        "(fA, fB, p_f) for an entangled state.");
  m.def("apply_filter", &apply, py::arg("rho"), py::arg("fA"), py::arg("fB"), py::arg("tol") = 1.0,
        "(rho_prime, p_f).");
  m.def("analyze_json", &analyze_json, py::arg("rho"), py::arg("tau_ratio") = py::none(), py::arg("tol") = 1.0,
        py::arg("label") = py::none());
  m.def("family_state", [](double alpha, const std::vector<double>& p) {
    return from_mat(family_state(params(alpha, p)).rho);
  }, py::arg("alpha"), py::arg("p"));
  m.def("family_json", &family_json, py::arg("alpha"), py::arg("p"), py::arg("tau_ratio") = py::none());
}
