#include "sflda/error.hpp"

namespace sflda {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_grid: return "invalid-grid";
        case ErrorCode::grid_mismatch: return "grid-mismatch";
        case ErrorCode::insufficient_data: return "insufficient-data";
        case ErrorCode::non_finite: return "non-finite";
        case ErrorCode::degenerate_curvature: return "degenerate-curvature";
        case ErrorCode::degenerate_discriminant: return "degenerate-discriminant";
        case ErrorCode::degenerate_variance: return "degenerate-variance";
        case ErrorCode::domain_error: return "domain-error";
        case ErrorCode::tuning_failed: return "tuning-failed";
        case ErrorCode::oracle_failure: return "oracle-failure";
        case ErrorCode::eigen_failure: return "eigen-failure";
        case ErrorCode::parse_error: return "parse-error";
        case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

}  // namespace sflda
