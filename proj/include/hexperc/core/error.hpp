#pragma once

#include <stdexcept>
#include <string>

namespace hexperc {

// Numeric values are part of the C ABI (see hexperc.h); append only.
enum class ErrorCode : int {
    ok = 0,
    invalid_argument = 1,
    empty_discretization = 2,
    mark_collision = 3,
    outside_domain = 4,
    boundary_edge = 5,
    overlapping_traces = 6,
    too_large = 7,
    not_converged = 8,
    domain_error = 9,
    degenerate_points = 10,
    unsupported_domain = 11,
    solver_diverged = 12,
    contour_leaves_domain = 13,
    io_error = 14,
    parse_error = 15,
    not_simply_connected = 16,
    verdict_failed = 17,
    internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hexperc
