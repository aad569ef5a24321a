#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slowbeam {

// Numerical failures (fit divergence, NaN in an integration, ...).
// The CLI maps these to exit code 2; config/usage problems map to 1.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitError : NumericError {
    FitError(const std::string& what, double residual)
        : NumericError(what), last_residual(residual) {}
    double last_residual = 0.0;
};

struct IntegrationError : NumericError {
    IntegrationError(const std::string& what, std::size_t step)
        : NumericError(what), step_index(step) {}
    std::size_t step_index = 0;
};

struct ConfigError : std::runtime_error {
    enum class Kind { MissingFile, Syntax, UnknownKey, Invariant };

    ConfigError(Kind k, const std::string& what, int line_no = 0)
        : std::runtime_error(what), kind(k), line(line_no) {}

    Kind kind;
    int line = 0;  // 1-based line number for syntax errors, 0 otherwise
};

}  // namespace slowbeam
