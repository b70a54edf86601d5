#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracsol/numeric_oracle.hpp"
#include "fracsol/solver.hpp"

namespace fracsol {

enum class InputFormat { json, dsl };

struct ParseOptions {
    // Required for DSL input; overrides the file's alpha for JSON when set.
    std::optional<double> alpha;
    // Values for identifiers appearing in an equation string ("a" itself is
    // reserved for the order symbol and cannot be bound).
    std::map<std::string, double> bindings;
};

// JSON problems carry either operator+forcing or an equation string; DSL
// input is the bare equation.  Plain-integer exponents t^p are converted to
// the t^(k*alpha) scale only when p/alpha is an integer within 1e-9.
Problem parse_problem(const std::string& text, InputFormat fmt,
                      const ParseOptions& opts = {});

// Equation DSL entry point (also used by the JSON "equation" field).
Problem parse_equation_dsl(const std::string& text, double alpha,
                           const std::map<std::string, double>& bindings);

// Canonical JSON for a Problem (operator + raw forcing atoms); parsing it
// back reproduces the Problem exactly.
std::string serialize_problem(const Problem& p);

// Deterministic solution JSON: fixed field order, every float printed with
// 17 significant digits.
std::string serialize_solution(const Solution& sol);

// One-line closed form with symbolic free constants A_1..A_n.
std::string render_solution_closed_form(const Solution& sol);

// Multi-line human-readable report (order, roots, closed form).
std::string solution_text(const Solution& sol);

void write_samples_csv(std::ostream& out, const SampledFunction& s);

// Reads two-column CSV (t, value) with an optional header line; the grid
// must be uniform from t = 0 within 1e-9 relative.
SampledFunction read_samples_csv(std::istream& in);

// Comma-separated reals, e.g. a --residual-grid argument "0.25,0.5,1,2".
std::vector<double> parse_real_list(const std::string& text);

}  // namespace fracsol
