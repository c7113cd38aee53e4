#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rigidity/cli.hpp"
#include "rigidity/errors.hpp"
#include "rigidity/fields.hpp"
#include "rigidity/operators.hpp"
#include "rigidity/serialize.hpp"

namespace py = pybind11;
using namespace rigidity;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

template <class T>
py::object as_dict(const T& x) {
    return to_python(to_json(x));
}

ParamSet make_params(int n, double p, double q, double lambda) { return ParamSet{n, p, q, lambda}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "p-Laplacian rigidity laboratory";

    static py::exception<Error> base(m, "RigidityError", PyExc_ValueError);
#define RL_ERROR(Name) static py::exception<Name> Name##_py(m, #Name, base.ptr());
    RL_ERROR(RangeError)
    RL_ERROR(PoleError)
    RL_ERROR(ExponentPole)
    RL_ERROR(DegenerateGamma)
    RL_ERROR(ShapeMismatch)
    RL_ERROR(DegenerateGradient)
    RL_ERROR(NonPositiveField)
    RL_ERROR(NegativeBranch)
    RL_ERROR(PositivityLoss)
    RL_ERROR(StiffnessAbort)
    RL_ERROR(SingularOperator)
    RL_ERROR(NotOnShell)
    RL_ERROR(ConfigError)
#undef RL_ERROR
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const py::object cls = py::module_::import("rigidity_lab._core").attr(e.kind());
            PyErr_SetString(cls.ptr(), e.what());
        }
    });

    py::class_<ParamSet>(m, "ParamSet")
        .def(py::init(&make_params), py::arg("n") = 3, py::arg("p") = 2.0, py::arg("q") = 4.0, py::arg("lambda_") = 0.0)
        .def_readwrite("n", &ParamSet::n)
        .def_readwrite("p", &ParamSet::p)
        .def_readwrite("q", &ParamSet::q)
        .def_readwrite("lambda_", &ParamSet::lambda)
        .def("__repr__", [](const ParamSet& ps) {
            std::ostringstream os;
            os << "ParamSet(n=" << ps.n << ", p=" << ps.p << ", q=" << ps.q << ", lambda_=" << ps.lambda << ")";
            return os.str();
        });

    m.def(
        "derive_constants",
        [](const ParamSet& ps, bool algebraic) {
            return as_dict(derive_constants(ps, algebraic ? Domain::Algebraic : Domain::Rigidity));
        },
        py::arg("params"), py::arg("algebraic") = false);
    m.def("certificate_root", &certificate_root, py::arg("n"), py::arg("p"), py::arg("q"));
    m.def(
        "cdc_certificate", [](const ParamSet& ps, double gamma) { return as_dict(cdc_certificate(ps, gamma)); },
        py::arg("params"), py::arg("gamma"));
    m.def(
        "mu_at_selection",
        [](const ParamSet& ps) {
            const MuCoefficients mc = mu_at_selection(ps);
            return py::dict(py::arg("a") = mc.a_coef, py::arg("b") = mc.b_coef, py::arg("mu") = mc.mu,
                            py::arg("discriminant") = mc.discriminant);
        },
        py::arg("params"));

    py::class_<Geometry>(m, "Geometry")
        .def(py::init([](const std::string& kind, int n, int N) { return build_geometry(manifold_from_string(kind), n, N); }),
             py::arg("kind") = "sphere", py::arg("n") = 3, py::arg("N") = 400)
        .def_property_readonly("kind", [](const Geometry& g) { return to_string(g.kind()); })
        .def_property_readonly("n", &Geometry::dim)
        .def_property_readonly("N", &Geometry::intervals)
        .def_property_readonly("size", &Geometry::size)
        .def_property_readonly("coords", &Geometry::coords)
        .def_property_readonly("cell_measure", &Geometry::cell_measure)
        .def("sample", [](const Geometry& g, const std::function<double(double)>& f) { return g.sample(f); })
        .def("integrate", [](const Geometry& g, const Field& f) { return integrate(g, f); });

    m.def("named_field_names", [](const std::string& kind) { return named_field_names(manifold_from_string(kind)); });
    m.def(
        "named_field", [](const Geometry& g, const std::string& name) { return named_field(g.kind(), name).sample(g); },
        py::arg("geometry"), py::arg("name"));

    m.def(
        "verify_unconditional",
        [](const Geometry& g, const ParamSet& ps, const Field& u, double eps) {
            return as_dict(verify_unconditional(g, ps, u, eps));
        },
        py::arg("geometry"), py::arg("params"), py::arg("u"), py::arg("eps") = -1.0);
    m.def(
        "interpolation_check",
        [](const Geometry& g, const ParamSet& ps, const Field& v, double lambda) {
            return as_dict(interpolation_check(g, ps, v, lambda));
        },
        py::arg("geometry"), py::arg("params"), py::arg("v"), py::arg("lambda_"));

    m.def(
        "solve_stationary",
        [](const Geometry& g, const ParamSet& ps, const Field& v0, const std::string& nonlinearity, double res_tol,
           int max_iter, double eps) {
            SolveOptions o;
            o.res_tol = res_tol;
            o.max_iter = max_iter;
            o.eps = eps;
            const SolveResult r = solve_stationary(g, ps, nonlinearity_from_name(nonlinearity, ps.q), v0, o);
            py::dict d = as_dict(r);
            d["field"] = r.field;
            return d;
        },
        py::arg("geometry"), py::arg("params"), py::arg("v0"), py::arg("nonlinearity") = "power",
        py::arg("res_tol") = 1e-9, py::arg("max_iter") = 200, py::arg("eps") = -1.0);

    m.def(
        "run_flow",
        [](const Geometry& g, const ParamSet& ps, const Field& u0, double t_end, double dt0, int samples) {
            FlowOptions o;
            o.dt0 = dt0;
            o.samples = samples;
            const FlowTrace tr = run_flow(g, ps, u0, t_end, o);
            py::dict d = as_dict(tr);
            d["fields"] = tr.fields;
            return d;
        },
        py::arg("geometry"), py::arg("params"), py::arg("u0"), py::arg("t_end"), py::arg("dt0") = 1e-4,
        py::arg("samples") = 40);

    m.def(
        "lambda1",
        [](const Geometry& g, const ParamSet& ps, const Field& u, double eps) {
            const Lambda1Result r = lambda1(g, ps, u, eps >= 0.0 ? eps : regularization_eps(g, u));
            py::dict d = as_dict(r);
            d["field"] = r.field;
            return d;
        },
        py::arg("geometry"), py::arg("params"), py::arg("u"), py::arg("eps") = -1.0);
    m.def(
        "lambda_star_estimate",
        [](const Geometry& g, const ParamSet& ps, int modes, int random_starts, std::uint64_t seed) {
            LambdaStarOptions o;
            o.modes = modes;
            o.random_starts = random_starts;
            o.seed = seed;
            const LambdaStarReport r = lambda_star_estimate(g, ps, o);
            py::dict d = as_dict(r);
            d["best_field"] = r.best_field;
            return d;
        },
        py::arg("geometry"), py::arg("params"), py::arg("modes") = 4, py::arg("random_starts") = 4,
        py::arg("seed") = 20240611);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
