#pragma once

#include <stdexcept>
#include <string>

namespace majorant {

/// Classification of failures, used by the CLI to pick exit codes.
enum class ErrorKind {
    invalid_input,      // malformed arguments (unsorted abscissae, bad interval, ...)
    degenerate_input,   // structurally valid but too small (fewer than 2 points, ...)
    size_limit,         // input exceeds a hard size cap (brute-force oracle)
    invalid_grid,       // grid does not satisfy a sampler precondition
    truncation_margin,  // evaluation point too close to a truncation boundary
    invalid_model,      // model parameters violate the standing assumptions
    level_range,        // level outside the open range of the target function
    window,             // rescaled evaluation point falls outside the unit interval
    validation,         // configuration failed a constraint check
    numeric             // a numerical routine failed to converge
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for errors that indicate bad inputs rather than numerical failure.
    bool is_validation() const noexcept { return kind_ != ErrorKind::numeric; }

private:
    ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) throw Error(kind, what);
}

} // namespace majorant
