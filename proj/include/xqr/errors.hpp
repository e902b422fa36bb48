#pragma once

// Exception hierarchy.  Numerical failures are reported as explicit errors,
// never as quiet NaN/Inf propagation into results.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xqr {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A finite-precision operation left the representable range.
struct overflow_error : error {
    using error::error;
};

// Invalid operand: square root of a negative value, division by zero, ...
struct domain_error : error {
    using error::error;
};

// Operand shapes disagree (vector lengths, matrix dimensions).
struct dimension_error : error {
    using error::error;
};

// Rank-deficiency detected while orthogonalizing: the pivot column's norm
// fell below the working-precision threshold.  `column` is 1-based.
struct breakdown_error : error {
    std::size_t column;
    explicit breakdown_error(std::size_t col)
        : error("orthogonalization breakdown at column " + std::to_string(col)),
          column(col) {}
};

// Malformed input file.  `line` is 1-based.
struct parse_error : error {
    std::size_t line;
    parse_error(std::size_t line_no, const std::string& what_arg)
        : error("line " + std::to_string(line_no) + ": " + what_arg), line(line_no) {}
};

// Bad command-line arguments or configuration values.
struct usage_error : error {
    using error::error;
};

}  // namespace xqr
