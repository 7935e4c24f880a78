// Exception types shared across the library.
#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace tvwf {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file. byte_offset points at the offending byte.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (byte offset " + std::to_string(offset) + ")"), byte_offset(offset) {}
    std::size_t byte_offset;
};

struct IoError : Error {
    using Error::Error;
};

// Linear solve did not reach the requested tolerance. Carries the backward
// error that was achieved so callers can decide on a damping-schedule failure.
struct SolveError : Error {
    SolveError(const std::string& what, double residual_reached)
        : Error(what + " (backward error " + format_residual(residual_reached) + ")"),
          residual(residual_reached) {}
    double residual;

  private:
    static std::string format_residual(double r) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3e", r);
        return buf;
    }
};

// Strict-mode abort of the outer evolution: the inner Newton iteration at
// `step` did not converge within its iteration cap.
struct NonConvergenceError : Error {
    NonConvergenceError(const std::string& what, int step_index)
        : Error(what + " (time step " + std::to_string(step_index) + ")"), step(step_index) {}
    int step;
};

}  // namespace tvwf
