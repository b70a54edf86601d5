#pragma once

#include <stdexcept>
#include <string>

namespace fracsol {

// Input text could not be parsed (JSON problem files, equation DSL).
// line/col are 1-based; 0 means "not applicable" (e.g. JSON structure errors).
struct ParseError : std::runtime_error {
    int line = 0;
    int col = 0;
    ParseError(const std::string& msg, int line_ = 0, int col_ = 0)
        : std::runtime_error(msg), line(line_), col(col_) {}
};

// Structurally valid input that violates a documented precondition
// (alpha out of range, zero leading coefficient, non-integral exponent, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric machinery failed: series or root iteration did not converge,
// deflation remainder too large, degenerate operator, non-real rendering,
// or an internal consistency check tripped.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fracsol
