#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clf/area_integral.hpp"
#include "clf/clf_operator.hpp"
#include "clf/cz_estimates.hpp"
#include "clf/harness.hpp"
#include "clf/normal_form.hpp"

namespace py = pybind11;
using namespace clf;

namespace {

CVec to_cvec(const std::vector<cplx>& v) {
  if (v.size() != kDim) throw py::value_error("points in C^2 have two coordinates");
  return CVec(v[0], v[1]);
}

std::vector<cplx> from_cvec(const CVec& z) { return {z[0], z[1]}; }

RunConfig config_from(const py::dict& settings) {
  RunConfig cfg;
  cfg.out_dir.clear();
  for (const auto& item : settings) {
    const std::string key = py::str(item.first);
    const py::handle v = item.second;
    std::string text;
    if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
      text = "[";
      bool first = true;
      for (const auto& e : v) {
        text += (first ? "" : ", ");
        text += py::isinstance<py::str>(e) ? "\"" + std::string(py::str(e)) + "\"" : std::string(py::str(e));
        first = false;
      }
      text += "]";
    } else if (py::isinstance<py::str>(v)) {
      text = "\"" + std::string(py::str(v)) + "\"";
    } else {
      text = py::str(v);
    }
    apply_setting(cfg, key, text);
  }
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core numerics of clf-kit";
  m.attr("code_version") = kCodeVersion;

  // translators are tried newest first
  py::register_exception<Error>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<DefiningFunction>(m, "Domain")
      .def(py::init([](const std::string& spec) { return parse_domain(spec); }), py::arg("spec"))
      .def_property_readonly("tag", &DefiningFunction::tag)
      .def("rho", [](const DefiningFunction& d, const std::vector<cplx>& z) { return d.value(to_cvec(z)); })
      .def("gradient",
           [](const DefiningFunction& d, const std::vector<cplx>& z) {
             return from_cvec(d.jet(to_cvec(z)).gradient);
           })
      .def("boundary_point",
           [](const DefiningFunction& d, std::uint64_t seed, std::uint64_t index) {
             return from_cvec(random_boundary_point(d, seed, 0, index));
           },
           py::arg("seed") = 1, py::arg("index") = 0)
      .def("__repr__", [](const DefiningFunction& d) { return "Domain(" + d.tag() + ")"; });

  m.def("quasimetric",
        [](const DefiningFunction& d, const std::vector<cplx>& w, const std::vector<cplx>& z) {
          return quasimetric(d, to_cvec(w), to_cvec(z));
        });
  m.def("clf_kernel",
        [](const DefiningFunction& d, const std::vector<cplx>& xi, const std::vector<cplx>& z) {
          return clf_kernel(d, to_cvec(xi), to_cvec(z));
        });
  m.def("dS_mass",
        [](const DefiningFunction& d, int n_theta, int n_phi) {
          return build_surface_grid(d, 0.0, {n_theta, n_phi}).total_S();
        },
        py::arg("domain"), py::arg("n_theta") = 48, py::arg("n_phi") = 160);
  m.def("reproduce_monomial",
        [](const DefiningFunction& d, int a1, int a2, const std::vector<cplx>& z, int n_theta,
           int n_phi) {
          const SurfaceGrid g = build_surface_grid(d, 0.0, {n_theta, n_phi});
          return clf_apply(d, g, monomial(a1, a2), to_cvec(z));
        },
        py::arg("domain"), py::arg("a1"), py::arg("a2"), py::arg("z"), py::arg("n_theta") = 48,
        py::arg("n_phi") = 160);
  m.def("area_integral_smooth",
        [](const DefiningFunction& d, int k, const std::vector<cplx>& z, int l, double eta,
           double eps) {
          return area_integral_Il(d, smooth_function(k), to_cvec(z), l, eta, eps, area_production());
        },
        py::arg("domain"), py::arg("k"), py::arg("z"), py::arg("l") = 1, py::arg("eta") = 0.1,
        py::arg("eps") = 0.1);
  m.def("kernel_l2_norm",
        [](const DefiningFunction& d, const std::vector<cplx>& z, const std::vector<cplx>& w, int l,
           double eta, double eps) {
          return kernel_l2_norm(d, to_cvec(z), to_cvec(w), l, eta, eps);
        },
        py::arg("domain"), py::arg("z"), py::arg("w"), py::arg("l") = 1, py::arg("eta") = 0.1,
        py::arg("eps") = 0.1);

  m.def("probe_names", &probe_names);
  m.def("validate_config", [](const py::dict& settings) { validate(config_from(settings)); });
  // reports come back as JSON text; the package decodes them
  m.def("run_probe_json", [](const std::string& probe, const std::string& domain, const py::dict& settings) {
    RunConfig cfg = config_from(settings);
    cfg.domains = {domain};
    cfg.probes = {probe};
    validate(cfg);
    std::vector<std::string> out;
    {
      py::gil_scoped_release release;
      for (const auto& r : run_probe(probe, parse_domain(domain), cfg)) out.push_back(r.to_json().dump());
    }
    return out;
  });
}
