#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nl4s/config.hpp"
#include "nl4s/error.hpp"
#include "nl4s/evolution.hpp"
#include "nl4s/experiments.hpp"
#include "nl4s/exponents.hpp"
#include "nl4s/ground_state.hpp"
#include "nl4s/i_operator.hpp"
#include "nl4s/manifest.hpp"
#include "nl4s/observables.hpp"
#include "nl4s/snapshot_io.hpp"

namespace py = pybind11;
using namespace nl4s;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

PhysicalField to_field(const GridSpec& g, const CArray& a) {
  const std::size_t expect_ndim = static_cast<std::size_t>(g.dim());
  if (static_cast<std::size_t>(a.ndim()) != expect_ndim) {
    throw GridMismatch("array has " + std::to_string(a.ndim()) + " dimensions, grid has " + std::to_string(g.dim()));
  }
  for (py::ssize_t k = 0; k < a.ndim(); ++k) {
    if (static_cast<std::size_t>(a.shape(k)) != g.n()) {
      throw GridMismatch("array extent " + std::to_string(a.shape(k)) + " does not match n = " + std::to_string(g.n()));
    }
  }
  return PhysicalField(g, std::vector<Complex>(a.data(), a.data() + a.size()));
}

CArray to_array(const PhysicalField& f) {
  const auto& g = f.grid();
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(g.dim()), static_cast<py::ssize_t>(g.n()));
  CArray out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::dict series_dict(const Trajectory& tr) {
  std::vector<double> t, dt, m, e, me, h, lap, sup, tail, conc;
  for (const auto& r : tr.series) {
    t.push_back(r.time);
    dt.push_back(r.dt);
    m.push_back(r.mass);
    e.push_back(r.energy);
    me.push_back(r.modified_energy);
    h.push_back(r.hgamma);
    lap.push_back(r.laplacian);
    sup.push_back(r.sup);
    tail.push_back(r.tail);
    conc.push_back(r.concentration);
  }
  py::dict d;
  d["time"] = py::array(py::cast(t));
  d["dt"] = py::array(py::cast(dt));
  d["mass"] = py::array(py::cast(m));
  d["energy"] = py::array(py::cast(e));
  d["modified_energy"] = py::array(py::cast(me));
  d["hgamma"] = py::array(py::cast(h));
  d["laplacian"] = py::array(py::cast(lap));
  d["sup"] = py::array(py::cast(sup));
  d["tail"] = py::array(py::cast(tail));
  d["concentration"] = py::array(py::cast(conc));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral solver for the focusing fourth-order nonlinear Schrodinger equation";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<GridMismatch>(m, "GridMismatch", PyExc_ValueError);

  py::class_<GridSpec>(m, "Grid")
      .def(py::init<int, std::size_t, double>(), py::arg("dim"), py::arg("n"), py::arg("half_width"))
      .def_property_readonly("dim", &GridSpec::dim)
      .def_property_readonly("n", &GridSpec::n)
      .def_property_readonly("half_width", &GridSpec::half_width)
      .def_property_readonly("dx", &GridSpec::dx)
      .def_property_readonly("nyquist", &GridSpec::nyquist)
      .def("coordinates", [](const GridSpec& g) {
        std::vector<double> x(g.n());
        for (std::size_t j = 0; j < g.n(); ++j) x[j] = g.coordinate(j);
        return py::array(py::cast(x));
      })
      .def("__repr__", [](const GridSpec& g) {
        std::ostringstream s;
        s << "Grid(dim=" << g.dim() << ", n=" << g.n() << ", half_width=" << g.half_width() << ")";
        return s.str();
      });

  py::class_<NonlinearityParams>(m, "Params")
      .def(py::init([](double p, int mu, int epsilon) { return NonlinearityParams{p, mu, epsilon}; }),
           py::arg("p") = 8.0, py::arg("mu") = -1, py::arg("epsilon") = 0)
      .def_readwrite("p", &NonlinearityParams::p)
      .def_readwrite("mu", &NonlinearityParams::mu)
      .def_readwrite("epsilon", &NonlinearityParams::epsilon);

  m.def("mass", [](const GridSpec& g, const CArray& u) { return mass(to_field(g, u)); }, py::arg("grid"), py::arg("u"));
  m.def(
      "energy", [](const GridSpec& g, const CArray& u, const NonlinearityParams& p) { return energy(to_field(g, u), p); },
      py::arg("grid"), py::arg("u"), py::arg("params") = NonlinearityParams{});
  m.def(
      "sobolev_norm",
      [](const GridSpec& g, const CArray& u, double s, bool homogeneous) {
        return sobolev_norm(to_field(g, u), s, homogeneous ? Bracket::homogeneous : Bracket::inhomogeneous);
      },
      py::arg("grid"), py::arg("u"), py::arg("s"), py::arg("homogeneous") = false);

  m.def(
      "ground_state",
      [](const GridSpec& g, double p, double tol, int max_iter) {
        PetviashviliOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        const auto r = petviashvili_solve(g, p, gaussian_initial_guess(g), o);
        py::dict d;
        d["Q"] = to_array(r.Q);
        d["residual"] = r.residual;
        d["iterations"] = r.iterations;
        d["mass"] = r.mass;
        d["laplacian_norm"] = r.laplacian_norm;
        d["c_attained"] = r.c_attained;
        return d;
      },
      py::arg("grid"), py::arg("p") = 8.0, py::arg("tol") = 1e-10, py::arg("max_iter") = 500);

  m.def(
      "evolve",
      [](const GridSpec& g, const CArray& u0, double T_max, double dt0, const NonlinearityParams& params, double gamma,
         double snapshot_interval, std::optional<double> N) {
        EvolveConfig cfg;
        cfg.params = params;
        cfg.T_max = T_max;
        cfg.dt0 = dt0;
        cfg.gamma = gamma;
        cfg.snapshot_interval = snapshot_interval;
        if (N) cfg.i_multiplier = IMultiplier(*N, gamma);
        const auto field = to_field(g, u0);
        Trajectory tr = [&] {
          py::gil_scoped_release release;
          return strang_evolve(field, cfg);
        }();
        py::dict d;
        d["series"] = series_dict(tr);
        py::list snaps;
        for (const auto& s : tr.snapshots) snaps.append(py::make_tuple(s.time, to_array(s.field)));
        d["snapshots"] = snaps;
        d["stop"] = to_string(tr.stop);
        d["steps"] = tr.steps;
        d["untrusted"] = tr.untrusted;
        d["final"] = to_array(tr.final_state());
        return d;
      },
      py::arg("grid"), py::arg("u0"), py::arg("T_max"), py::arg("dt0") = 1e-3, py::arg("params") = NonlinearityParams{},
      py::arg("gamma") = 1.5, py::arg("snapshot_interval") = 0.0, py::arg("N") = py::none());

  m.def(
      "i_multiplier",
      [](double N, double gamma, const std::vector<double>& xi) {
        const IMultiplier im(N, gamma);
        std::vector<double> out(xi.size());
        for (std::size_t i = 0; i < xi.size(); ++i) out[i] = im(xi[i]);
        return py::array(py::cast(out));
      },
      py::arg("N"), py::arg("gamma"), py::arg("xi"));
  m.def(
      "apply_I",
      [](const GridSpec& g, const CArray& u, double N, double gamma) {
        return to_array(apply_I(to_field(g, u), IMultiplier(N, gamma)));
      },
      py::arg("grid"), py::arg("u"), py::arg("N"), py::arg("gamma"));
  m.def(
      "modified_energy",
      [](const GridSpec& g, const CArray& u, double N, double gamma, const NonlinearityParams& p) {
        return modified_energy(to_field(g, u), IMultiplier(N, gamma), p);
      },
      py::arg("grid"), py::arg("u"), py::arg("N"), py::arg("gamma"), py::arg("params") = NonlinearityParams{});

  m.def(
      "paper_exponents",
      [](int d, double gamma, double delta) {
        const auto r = compute_paper_exponents(d, gamma, delta);
        py::dict out;
        out["a_gamma"] = r.a_gamma;
        out["a_gamma_in_range"] = r.a_gamma_in_range;
        out["a_dgamma"] = r.a_dgamma;
        out["gamma_lower_conc"] = r.gamma_lower_conc;
        out["gamma_lower_gwp"] = r.gamma_lower_gwp;
        out["n_of_t_exponent"] = r.n_of_t_exponent;
        out["sobolev_growth_exponent"] = r.sobolev_growth_exponent;
        out["n_of_lambda_exponent"] = r.n_of_lambda_exponent;
        out["regularity_ok"] = r.regularity_ok;
        out["delta_in_range"] = r.delta_in_range;
        return out;
      },
      py::arg("d"), py::arg("gamma"), py::arg("delta"));
  m.def(
      "gamma_pq",
      [](const std::string& p, const std::string& q, int d) {
        const auto r = gamma_pq(parse_exponent(p), parse_exponent(q), d);
        return py::module_::import("fractions").attr("Fraction")(r.numerator(), r.denominator());
      },
      py::arg("p"), py::arg("q"), py::arg("d"));

  m.def(
      "save_snapshot",
      [](const std::string& path, const GridSpec& g, const CArray& u, double time) {
        snapshot_save(to_field(g, u), path, {time});
      },
      py::arg("path"), py::arg("grid"), py::arg("u"), py::arg("time") = 0.0);
  m.def(
      "load_snapshot",
      [](const std::string& path) {
        const auto s = snapshot_load(path);
        return py::make_tuple(s.field.grid(), to_array(s.field), s.meta.time);
      },
      py::arg("path"));

  m.def(
      "run_experiment",
      [](const py::object& config) {
        const auto c = config_from_json(from_py(config));
        RunManifest man = [&] {
          py::gil_scoped_release release;
          return run_experiment(c);
        }();
        return to_py(man.to_json());
      },
      py::arg("config"), "Runs an experiment from a config dict and returns the manifest dict.");
  m.def(
      "verify_manifest",
      [](const std::string& path) {
        const auto r = verify_manifest(path);
        return py::make_tuple(r.ok, r.checked, r.problems);
      },
      py::arg("path"));
  m.attr("__version__") = kToolVersion;
}
