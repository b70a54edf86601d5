#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "fracsol/errors.hpp"
#include "fracsol/numeric_oracle.hpp"
#include "fracsol/problem_io.hpp"
#include "fracsol/solver.hpp"
#include "fracsol/special_functions.hpp"
#include "fracsol/term_algebra.hpp"

namespace py = pybind11;
using namespace fracsol;

namespace {

Problem problem_from_json(const std::string& text) {
    return parse_problem(text, InputFormat::json, {});
}

std::string solve_json(const std::string& text) {
    Problem p = parse_problem(text, InputFormat::json, {});
    return serialize_solution(solve(p));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "closed-form solver for linear equations in the order-alpha derivative";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    m.def(
        "gamma", [](double x) { return fracsol::gamma(x); }, py::arg("x"),
        "gamma function (real axis, poles return nan/inf)");
    m.def(
        "mittag_leffler",
        [](double alpha, std::complex<double> z) { return mittag_leffler(alpha, z).value; },
        py::arg("alpha"), py::arg("z"), "one-parameter Mittag-Leffler function E_alpha(z)");

    py::class_<FracTerm>(m, "FracTerm")
        .def(py::init<>())
        .def_readwrite("coeff", &FracTerm::coeff)
        .def_readwrite("k", &FracTerm::k)
        .def_readwrite("a", &FracTerm::a)
        .def("__repr__", [](const FracTerm& t) {
            return "FracTerm(coeff=" + std::to_string(t.coeff.real()) + "+" +
                   std::to_string(t.coeff.imag()) + "j, k=" + std::to_string(t.k) +
                   ", a=" + std::to_string(t.a.real()) + "+" + std::to_string(t.a.imag()) + "j)";
        });

    py::class_<TermSum>(m, "TermSum")
        .def(py::init<>())
        .def_readwrite("alpha", &TermSum::alpha)
        .def_readwrite("terms", &TermSum::terms)
        .def("__len__", [](const TermSum& s) { return s.terms.size(); });

    py::class_<OperatorPoly>(m, "OperatorPoly")
        .def(py::init<>())
        .def_readwrite("alpha", &OperatorPoly::alpha)
        .def_readwrite("coeffs", &OperatorPoly::coeffs);

    py::class_<Problem>(m, "Problem")
        .def(py::init<>())
        .def_readwrite("op", &Problem::op)
        .def_readwrite("forcing", &Problem::forcing);

    py::class_<RootInfo>(m, "RootInfo")
        .def_readonly("value", &RootInfo::value)
        .def_readonly("multiplicity", &RootInfo::multiplicity);

    py::class_<RootSet>(m, "RootSet").def_readonly("roots", &RootSet::roots);

    py::class_<Solution>(m, "Solution")
        .def_readonly("alpha", &Solution::alpha)
        .def_readonly("roots", &Solution::roots)
        .def_readonly("complementary", &Solution::complementary)
        .def_readonly("particular", &Solution::particular);

    py::class_<SampledFunction>(m, "SampledFunction")
        .def(py::init<>())
        .def_readwrite("h", &SampledFunction::h)
        .def_readwrite("values", &SampledFunction::values)
        .def("__len__", [](const SampledFunction& s) { return s.values.size(); });

    py::class_<QuadratureResult>(m, "QuadratureResult")
        .def_readonly("y", &QuadratureResult::y)
        .def_readonly("self_convergence", &QuadratureResult::self_convergence);

    m.def("parse_problem_json", &problem_from_json, py::arg("text"),
          "parse a JSON problem description");
    m.def("parse_equation", &parse_equation_dsl, py::arg("text"), py::arg("alpha"),
          py::arg("bindings") = std::map<std::string, double>{},
          "parse the equation DSL, e.g. 'D^2a y - 5 D^a y + 6 y = t^2'");
    m.def("serialize_problem", &serialize_problem, py::arg("problem"));
    m.def("solve", &solve, py::arg("problem"), "closed-form solution of a parsed problem");
    m.def("solve_json", &solve_json, py::arg("text"),
          "parse a JSON problem, solve it, and return the solution as JSON text");
    m.def("serialize_solution", &serialize_solution, py::arg("solution"));
    m.def("render", &render_solution_closed_form, py::arg("solution"),
          "human-readable closed form with A_1..A_n free constants");
    m.def("residual", &residual, py::arg("problem"), py::arg("solution"), py::arg("grid"),
          "worst symbolic-solution defect over the grid");
    m.def(
        "evaluate",
        [](const TermSum& s, double t) { return evaluate(s, t); },
        py::arg("terms"), py::arg("t"), "evaluate a term sum at one point");
    m.def("d_alpha", &d_alpha, py::arg("terms"), "order-alpha derivative in the term algebra");
    m.def("integrate_alpha", &integrate_alpha, py::arg("terms"),
          "order-alpha antiderivative, zero at t = 0");
    m.def(
        "gl_jumarie_derivative",
        [](const std::function<double(double)>& f, double alpha, double t, double h,
           bool richardson) {
            OracleConfig cfg;
            cfg.h = h;
            cfg.richardson = richardson;
            GLValue v = gl_jumarie_derivative(f, alpha, t, cfg);
            return py::make_tuple(v.value, v.error_estimate);
        },
        py::arg("f"), py::arg("alpha"), py::arg("t"), py::arg("h") = 1e-4,
        py::arg("richardson") = true,
        "numeric order-alpha derivative of f - f(0); returns (value, error_estimate)");
    m.def(
        "frac_integral",
        [](const std::function<double(double)>& f, double alpha, double t, double h) {
            return frac_integral(f, alpha, t, h);
        },
        py::arg("f"), py::arg("alpha"), py::arg("t"), py::arg("h") = 1e-4,
        "numeric order-alpha integral of f from 0 to t");
    m.def(
        "solve_quadrature",
        [](double a, const SampledFunction& g, double alpha) {
            return solve_alpha_order_quadrature(a, g, alpha);
        },
        py::arg("a"), py::arg("g"), py::arg("alpha"),
        "particular solution of D^a y = a y + g from sampled forcing");
}
