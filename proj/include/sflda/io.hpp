#pragma once

#include "sflda/classifier.hpp"
#include "sflda/estimation.hpp"
#include "sflda/solver.hpp"
#include "sflda/tuning.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sflda::io {

/**
 * Curve CSV: the header holds the grid points, optionally preceded by a
 * `label` column; every following row is one curve. The header must be
 * strictly increasing and equispaced to 1e-9 relative.
 */
struct CurveFile {
    Grid grid;
    Matrix curves;
    std::optional<std::vector<int>> labels;

    CurveSet to_curve_set() const;  // throws parse_error without labels
};

CurveFile parse_curves(const std::string& text);
CurveFile read_curves(const std::filesystem::path& path,
                      const std::optional<std::filesystem::path>& labels_path = std::nullopt);
std::string format_curves(const CurveSet& data);
void write_curves(const std::filesystem::path& path, const CurveSet& data);

/// Fitted discriminant plus the diagnostics stored alongside it.
struct ModelFile {
    Discriminant discriminant;
    std::size_t iterations = 0;
    double kkt_residual = 0.0;
    double final_objective = 0.0;
    std::size_t active_set_size = 0;
    bool converged = false;
    std::vector<ZeroRegion> zero_regions{};
};

ModelFile make_model_file(const FitResult& fitted);
std::string format_model(const ModelFile& model);
ModelFile parse_model(const std::string& text);
void write_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile read_model(const std::filesystem::path& path);

/// Two-column CSV `t,<name>` for plotting one or more grid functions.
std::string format_functions(const Grid& grid, const std::vector<std::string>& names,
                             const std::vector<const Vector*>& columns);

/// Long-format CV matrix: lambda,eta,cv_error,failed.
std::string format_cv_matrix(const CvResult& cv);
std::string format_cv_summary(const CvResult& cv);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace sflda::io
