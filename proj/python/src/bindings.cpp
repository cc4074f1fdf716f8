#include "echoloc/echo.hpp"
#include "echoloc/error.hpp"
#include "echoloc/flat_spectrum.hpp"
#include "echoloc/io.hpp"
#include "echoloc/loops.hpp"
#include "echoloc/trace.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace echoloc;

namespace {

FlatSpec flat_spec(const py::object& o)
{
    if (py::isinstance<FlatTorusSpec>(o)) return o.cast<FlatTorusSpec>();
    if (py::isinstance<FlatKleinSpec>(o)) return o.cast<FlatKleinSpec>();
    throw py::type_error("expected TorusSpec or KleinSpec");
}

Point point(const std::pair<double, double>& p) { return {p.first, p.second}; }
std::pair<double, double> pair(Point p) { return {p.x1, p.x2}; }

py::list entries(const LoopTable& t)
{
    py::list out;
    for (const auto& e : t.entries)
        out.append(py::make_tuple(e.length, e.multiplicity, e.words.empty() ? std::string() : e.words.front()));
    return out;
}

} // namespace

PYBIND11_MODULE(_echoloc, m)
{
    m.doc() = "Pointwise Weyl functions, loop tables and echolocation";
    m.attr("__version__") = "0.1.0";

    static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
    static py::exception<ContractError> contract_error(m, "ContractError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const DomainError& e) {
            py::set_error(domain_error, e.what());
        } catch (const ContractError& e) {
            py::set_error(contract_error, e.what());
        }
    });

    py::enum_<Profile>(m, "Profile").value("compact", Profile::CompactBump).value("gaussian", Profile::GaussianBump);
    py::enum_<Weight>(m, "Weight").value("none", Weight::None).value("sqrt_t", Weight::SqrtT).value("sqrt_sinh", Weight::SqrtSinh);
    py::enum_<CurvatureClass>(m, "CurvatureClass")
        .value("SpherePP", CurvatureClass::SpherePP)
        .value("FlatTorusKlein", CurvatureClass::FlatTorusKlein)
        .value("HyperbolicQuotient", CurvatureClass::HyperbolicQuotient);

    py::class_<FlatTorusSpec>(m, "TorusSpec")
        .def(py::init(&make_torus), py::arg("a"), py::arg("b"))
        .def_readonly("a", &FlatTorusSpec::a)
        .def_readonly("b", &FlatTorusSpec::b)
        .def("__repr__", [](const FlatTorusSpec& s) { return "TorusSpec(" + format_number(s.a) + ", " + format_number(s.b) + ")"; });
    py::class_<FlatKleinSpec>(m, "KleinSpec")
        .def(py::init(&make_klein), py::arg("a"), py::arg("b"))
        .def_readonly("a", &FlatKleinSpec::a)
        .def_readonly("b", &FlatKleinSpec::b)
        .def("__repr__", [](const FlatKleinSpec& s) { return "KleinSpec(" + format_number(s.a) + ", " + format_number(s.b) + ")"; });

    py::class_<HPoint>(m, "HPoint")
        .def(py::init(&make_hpoint), py::arg("re"), py::arg("im"))
        .def_readonly("re", &HPoint::re)
        .def_readonly("im", &HPoint::im)
        .def("__repr__", [](const HPoint& z) { return "HPoint(" + format_number(z.re) + ", " + format_number(z.im) + ")"; });
    py::class_<MobiusElement>(m, "Mobius")
        .def(py::init([](double a, double b, double c, double d) { return make_mobius(a, b, c, d); }))
        .def_property_readonly("matrix", [](const MobiusElement& g) { return std::vector<double>{g.a, g.b, g.c, g.d}; })
        .def_property_readonly("word", [](const MobiusElement& g) { return format_word(g.word); })
        .def("__call__", [](const MobiusElement& g, HPoint z) { return mobius_apply(g, z); })
        .def("__mul__", [](const MobiusElement& g, const MobiusElement& h) { return g * h; });
    py::class_<HyperbolicSurfaceSpec>(m, "HyperbolicSpec")
        .def(py::init(&make_hyperbolic), py::arg("generators"), py::arg("basepoint"))
        .def_readonly("generators", &HyperbolicSurfaceSpec::generators)
        .def_readonly("basepoint", &HyperbolicSurfaceSpec::basepoint_lift);

    m.def("genus2_octagon", &genus2_octagon, py::arg("basepoint") = HPoint{});
    m.def("conjugate", &conjugate);
    m.def("polar_from_i", &polar_from_i, py::arg("distance"), py::arg("angle"));
    m.def("hyperbolic_distance", &hyperbolic_distance);
    m.def("translation_length", &translation_length);
    m.def("klein_canonicalize", [](std::pair<double, double> x, const FlatKleinSpec& s) { return pair(klein_canonicalize(point(x), s)); });

    m.def("level_sum", [](const py::object& s, std::pair<double, double> x, double lam) { return level_sum(flat_spec(s), point(x), lam); });
    m.def("pointwise_weyl", [](const py::object& s, std::pair<double, double> x, double lam) { return pointwise_weyl(flat_spec(s), point(x), lam); });
    m.def("modes", [](const py::object& s, double lambda_max) {
        py::list out;
        for (const auto& e : flat_modes(flat_spec(s), lambda_max))
            out.append(py::make_tuple(std::string(to_string(e.family)), e.m, e.n, e.lambda));
        return out;
    }, "List of (family, m, n, lambda) with lambda <= lambda_max.");
    m.def("heat_trace", [](const py::object& s, std::pair<double, double> x, double t) {
        const auto v = heat_trace(flat_spec(s), point(x), t);
        return py::make_tuple(v.value.real(), v.truncation_bound);
    });
    m.def("curvature_estimate", [](const py::object& s, std::pair<double, double> x) { return curvature_estimate(flat_spec(s), point(x)); });
    m.def("classify_curvature", &classify_curvature, py::arg("k_hat"), py::arg("tol") = 1e-3);

    m.def("smoothed_wave_spectral", [](const py::object& s, std::pair<double, double> x, double lam, double r, double eps, Profile p, Weight w) {
        const auto v = smoothed_wave_spectral(flat_spec(s), point(x), lam, make_window(p, r, eps, w));
        return py::make_tuple(v.value, v.truncation_bound);
    }, py::arg("spec"), py::arg("x"), py::arg("lam"), py::arg("r"), py::arg("eps"), py::arg("profile") = Profile::CompactBump,
        py::arg("weight") = Weight::SqrtT);
    m.def("geometric_side_flat", [](const py::object& s, std::pair<double, double> x, double lam, double r, double eps, Profile p, Weight w) {
        return geometric_side_flat(deck_of(flat_spec(s)), point(x), lam, make_window(p, r, eps, w)).value;
    }, py::arg("spec"), py::arg("x"), py::arg("lam"), py::arg("r"), py::arg("eps"), py::arg("profile") = Profile::CompactBump,
        py::arg("weight") = Weight::SqrtT);
    m.def("geometric_side", [](const HyperbolicSurfaceSpec& s, HPoint x, double lam, double r, double eps, Profile p) {
        return geometric_side(s, x, lam, make_window(p, r, eps, Weight::SqrtSinh)).value;
    }, py::arg("spec"), py::arg("x"), py::arg("lam"), py::arg("r"), py::arg("eps"), py::arg("profile") = Profile::CompactBump);

    m.def("looping_times", [](const HyperbolicSurfaceSpec& s, HPoint x, double R) { return entries(looping_times(s, x, R)); },
        "List of (length, multiplicity, example word).");
    m.def("looping_times_flat", [](const py::object& s, std::pair<double, double> x, double R) {
        return entries(looping_times(deck_of(flat_spec(s)), point(x), R));
    });
    m.def("shortest_loop", [](const HyperbolicSurfaceSpec& s, HPoint x) { return shortest_loop(s, x); });
    m.def("shortest_loop_flat", [](const py::object& s, std::pair<double, double> x) { return shortest_loop(deck_of(flat_spec(s)), point(x)); });

    m.def("detect_flat", [](const py::object& s, std::pair<double, double> x, double r, double eps, std::vector<double> schedule, Profile p) {
        const FlatSpec fs = flat_spec(s);
        DetectOptions opts;
        opts.profile = p;
        const auto data = exact_spectral_data(fs, point(x), schedule, {make_window(p, r, eps, Weight::SqrtT)});
        const auto res = detect_multiplicity(data, r, eps, schedule, Weight::SqrtT, opts);
        return py::dict(py::arg("estimate") = res.estimate, py::arg("converged") = res.converged, py::arg("per_lambda") = res.per_lambda,
            py::arg("warnings") = res.warnings);
    }, py::arg("spec"), py::arg("x"), py::arg("r"), py::arg("eps"), py::arg("schedule") = std::vector<double>{100, 200, 400, 800},
        py::arg("profile") = Profile::CompactBump);
    m.def("detect_synthetic", [](const HyperbolicSurfaceSpec& s, HPoint x, double r, double eps, std::vector<double> schedule) {
        const Window w = make_window(Profile::CompactBump, r, eps, Weight::SqrtSinh);
        const auto res = detect_multiplicity(synthesize_spectral_from_geometric(s, x, schedule, {w}), r, eps, schedule, Weight::SqrtSinh);
        return py::dict(py::arg("estimate") = res.estimate, py::arg("converged") = res.converged, py::arg("per_lambda") = res.per_lambda,
            py::arg("warnings") = res.warnings);
    }, py::arg("spec"), py::arg("x"), py::arg("r"), py::arg("eps"), py::arg("schedule") = std::vector<double>{100, 200, 400, 800});

    m.def("constancy_test", [](const py::object& s, double lambda_max, const std::vector<std::pair<double, double>>& pts) {
        std::vector<Point> ps;
        for (const auto& p : pts) ps.push_back(point(p));
        const auto r = constancy_test(flat_spec(s), lambda_max, ps);
        return py::dict(py::arg("constant") = r.constant, py::arg("witness_level") = r.witness_level, py::arg("p") = pair(r.p),
            py::arg("q") = pair(r.q), py::arg("value_p") = r.value_p, py::arg("value_q") = r.value_q);
    });
    m.def("klein_echolocate", [](const FlatKleinSpec& s, double v) { return pair(klein_echolocate(s, v)); });
    m.def("klein_echolocate_at", [](const FlatKleinSpec& s, std::pair<double, double> x) {
        const FlatSpec fs = s;
        const Point p = reduce(point(x), fs);
        return pair(klein_echolocate(s, [&](double l) { return level_sum(fs, p, l); }));
    }, "Echolocate a point from its own level sums (round trip).");

    m.def("run", [](const std::string& sub, const std::filesystem::path& cfg, const std::filesystem::path& out_dir) {
        std::ostringstream out, err;
        const int code = run(sub, cfg, out_dir, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, "Run a CLI subcommand; returns (exit code, stdout, stderr).");
}
