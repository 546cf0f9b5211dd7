#pragma once

#include <stdexcept>
#include <string>

namespace sflda {

enum class ErrorCode {
    invalid_grid,
    grid_mismatch,
    insufficient_data,
    non_finite,
    degenerate_curvature,
    degenerate_discriminant,
    degenerate_variance,
    domain_error,
    tuning_failed,
    oracle_failure,
    eigen_failure,
    parse_error,
    io_error,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sflda
