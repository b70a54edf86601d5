// fracsolve: solve linear constant-coefficient equations in the order-alpha
// derivative from a JSON or DSL problem file.  Writes solution.json and
// solution.txt, optionally a sampled CSV, and reports residuals on a check
// grid.  --quadrature switches to the sampled-forcing path for degree-1
// operators.
//
// Exit codes: 0 ok, 2 parse error, 3 validation error, 4 solver failure,
// 5 residual (or quadrature self-convergence) above tolerance.  Flag misuse
// exits with CLI11's own status.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracsol/errors.hpp"
#include "fracsol/numeric_oracle.hpp"
#include "fracsol/problem_io.hpp"
#include "fracsol/solver.hpp"

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fracsol::ValidationError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw fracsol::ValidationError("cannot write '" + path + "'");
    out << content;
}

std::map<std::string, double> parse_bindings(const std::vector<std::string>& raw) {
    std::map<std::string, double> out;
    for (const std::string& s : raw) {
        size_t eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw fracsol::ValidationError("--bind expects name=value, got '" + s + "'");
        std::string name = s.substr(0, eq);
        std::string val = s.substr(eq + 1);
        try {
            size_t used = 0;
            double v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument("trailing");
            out[name] = v;
        } catch (const std::exception&) {
            throw fracsol::ValidationError("--bind " + name + ": malformed value '" + val + "'");
        }
    }
    return out;
}

int run_quadrature(const fracsol::Problem& p, const std::string& csv_path,
                   const std::string& samples_path, double tol) {
    using namespace fracsol;
    if (p.op.coeffs.size() != 2)
        throw ValidationError("quadrature mode needs a degree-1 operator (c0 + c1 D^a)");
    if (p.op.coeffs[0].imag() != 0.0 || p.op.coeffs[1].imag() != 0.0)
        throw ValidationError("quadrature mode needs real operator coefficients");
    if (!p.forcing.terms.empty())
        std::cerr << "note: forcing atoms in the problem file are ignored; "
                     "the CSV supplies the forcing\n";
    double c1 = p.op.coeffs[1].real();
    double a = -p.op.coeffs[0].real() / c1;

    std::ifstream in(csv_path);
    if (!in) throw ValidationError("cannot open forcing samples '" + csv_path + "'");
    SampledFunction g = read_samples_csv(in);
    for (double& v : g.values) v /= c1;

    QuadratureResult qr = solve_alpha_order_quadrature(a, g, p.op.alpha);

    std::ofstream out(samples_path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + samples_path + "'");
    write_samples_csv(out, qr.y);

    std::printf("quadrature: rate a = %.10g, %zu samples, step %.10g\n", a, qr.y.values.size(),
                qr.y.h);
    std::printf("self-convergence (vs half-resolution rerun): %.6e\n", qr.self_convergence);
    std::printf("wrote %s\n", samples_path.c_str());
    if (qr.self_convergence > tol) {
        std::fprintf(stderr,
                     "warning: self-convergence %.3e exceeds tolerance %.3g; "
                     "the forcing grid looks too coarse for this rate\n",
                     qr.self_convergence, tol);
        return 5;
    }
    return 0;
}

int run_solve(const fracsol::Problem& p, double tol, const std::vector<double>& grid,
              const std::string& out_dir, const std::string& samples_path, double t_max,
              int points) {
    using namespace fracsol;
    Solution sol = solve(p);

    write_file(out_dir + "/solution.json", serialize_solution(sol));
    write_file(out_dir + "/solution.txt", solution_text(sol));

    if (!samples_path.empty()) {
        SampledFunction s = sample_function(
            [&](double t) { return evaluate(sol.particular, t).real(); }, t_max, points);
        std::ofstream out(samples_path, std::ios::binary);
        if (!out) throw ValidationError("cannot write '" + samples_path + "'");
        write_samples_csv(out, s);
        std::printf("wrote %s (particular solution, free constants zero)\n",
                    samples_path.c_str());
    }

    double worst = 0.0;
    for (double t : grid) {
        double r = residual(p, sol, {t});
        worst = std::max(worst, r);
        std::printf("t = %-8.6g residual = %.6e\n", t, r);
    }
    std::printf("max residual %.6e %s tolerance %.3g\n", worst, worst <= tol ? "within" : "EXCEEDS",
                tol);
    std::printf("wrote %s/solution.json, %s/solution.txt\n", out_dir.c_str(), out_dir.c_str());
    return worst <= tol ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    // "solve" is the default subcommand; accept it explicitly and shift.
    std::vector<char*> args(argv, argv + argc);
    if (args.size() > 1 && std::string(args[1]) == "solve") args.erase(args.begin() + 1);

    CLI::App app{"closed-form solver for linear equations in the order-alpha derivative"};
    std::string problem_path = "-";
    std::string format = "json";
    std::string quadrature_csv;
    std::string samples_path;
    std::string out_dir = ".";
    std::string residual_grid_text;
    std::vector<std::string> bind_raw;
    double alpha_flag = 0.0;
    double tol = 0.0;
    double t_max = 2.0;
    int points = 401;

    app.add_option("problem", problem_path, "problem file (JSON or DSL), '-' for stdin");
    app.add_option("--format", format, "input format: json or dsl")
        ->check(CLI::IsMember({"json", "dsl"}));
    app.add_option("--alpha", alpha_flag, "derivative order (overrides the file value)");
    app.add_option("--bind", bind_raw, "DSL identifier binding name=value (repeatable)");
    app.add_option("--tol", tol, "acceptance tolerance (default 1e-8, quadrature 1e-2)");
    app.add_option("--samples", samples_path, "write sampled values to this CSV path");
    app.add_option("--t-max", t_max, "sampling grid endpoint (default 2)");
    app.add_option("--points", points, "sampling grid size (default 401)");
    app.add_option("--quadrature", quadrature_csv,
                   "sampled forcing CSV; solve the degree-1 problem by quadrature");
    app.add_option("--residual-grid", residual_grid_text,
                   "comma separated residual check points (default 0.25,0.5,1,2)");

    try {
        app.parse(static_cast<int>(args.size()), args.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    using namespace fracsol;
    try {
        bool tol_set = app.count("--tol") > 0;
        bool quad = !quadrature_csv.empty();
        if (!tol_set) tol = quad ? 1e-2 : 1e-8;
        if (points < 2) throw ValidationError("--points must be at least 2");
        if (!(t_max > 0.0)) throw ValidationError("--t-max must be positive");

        ParseOptions opts;
        if (app.count("--alpha")) opts.alpha = alpha_flag;
        opts.bindings = parse_bindings(bind_raw);

        std::string text = read_input(problem_path);
        InputFormat fmt = format == "dsl" ? InputFormat::dsl : InputFormat::json;
        if (!app.count("--format") && problem_path.size() > 4 &&
            problem_path.rfind(".dsl") == problem_path.size() - 4)
            fmt = InputFormat::dsl;
        Problem p = parse_problem(text, fmt, opts);

        if (quad) {
            std::string spath = samples_path.empty() ? out_dir + "/samples.csv" : samples_path;
            return run_quadrature(p, quadrature_csv, spath, tol);
        }

        std::vector<double> grid{0.25, 0.5, 1.0, 2.0};
        if (!residual_grid_text.empty()) grid = parse_real_list(residual_grid_text);
        return run_solve(p, tol, grid, out_dir, samples_path, t_max, points);
    } catch (const ParseError& e) {
        if (e.line > 0)
            std::fprintf(stderr, "error: %d:%d: %s\n", e.line, e.col, e.what());
        else
            std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
