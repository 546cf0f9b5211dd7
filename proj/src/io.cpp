#include "sflda/io.hpp"

#include "sflda/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>

namespace sflda::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_double(std::string_view cell, std::size_t line_no) {
    double v = 0.0;
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line_no) + ": cannot parse '" + std::string(cell) + "' as a number");
    }
    return v;
}

int parse_label(std::string_view cell, std::size_t line_no) {
    const double v = parse_double(cell, line_no);
    if (v != 0.0 && v != 1.0) {
        throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": label must be 0 or 1");
    }
    return static_cast<int>(v);
}

Grid grid_from_points(const std::vector<double>& points) {
    if (points.size() < 2) throw Error(ErrorCode::invalid_grid, "curve file needs at least 2 grid points");
    Grid grid(points.front(), points.back(), points.size());
    const double span = grid.b() - grid.a();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0 && !(points[i] > points[i - 1])) {
            throw Error(ErrorCode::invalid_grid, "grid points must be strictly increasing");
        }
        if (std::abs(points[i] - grid.point(i)) > 1e-9 * span) {
            throw Error(ErrorCode::invalid_grid, "grid points are not equispaced");
        }
    }
    return grid;
}

}  // namespace

CurveSet CurveFile::to_curve_set() const {
    if (!labels) throw Error(ErrorCode::parse_error, "curve file has no labels");
    return CurveSet(grid, curves, *labels);
}

CurveFile parse_curves(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string_view> header;
    std::string header_line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header_line = line;
            break;
        }
    }
    if (header_line.empty()) throw Error(ErrorCode::parse_error, "curve file is empty");
    header = split(header_line);
    const bool labelled = !header.empty() && header.front() == "label";
    const std::size_t offset = labelled ? 1 : 0;
    std::vector<double> points;
    for (std::size_t c = offset; c < header.size(); ++c) points.push_back(parse_double(header[c], line_no));
    Grid grid = grid_from_points(points);

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": expected " +
                                                    std::to_string(header.size()) + " fields, found " +
                                                    std::to_string(cells.size()));
        }
        if (labelled) labels.push_back(parse_label(cells[0], line_no));
        std::vector<double> row;
        row.reserve(points.size());
        for (std::size_t c = offset; c < cells.size(); ++c) row.push_back(parse_double(cells[c], line_no));
        rows.push_back(std::move(row));
    }
    Matrix curves(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(points.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < points.size(); ++c) {
            curves(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    if (!curves.allFinite()) throw Error(ErrorCode::non_finite, "curve file contains non-finite values");
    CurveFile file{std::move(grid), std::move(curves), std::nullopt};
    if (labelled) file.labels = std::move(labels);
    return file;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

CurveFile read_curves(const std::filesystem::path& path, const std::optional<std::filesystem::path>& labels_path) {
    CurveFile file = parse_curves(read_text(path));
    if (labels_path) {
        std::istringstream in(read_text(*labels_path));
        std::string line;
        std::vector<int> labels;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            labels.push_back(parse_label(trim(line), line_no));
        }
        if (labels.size() != static_cast<std::size_t>(file.curves.rows())) {
            throw Error(ErrorCode::parse_error, "label file has " + std::to_string(labels.size()) +
                                                    " entries for " + std::to_string(file.curves.rows()) + " curves");
        }
        file.labels = std::move(labels);
    }
    return file;
}

std::string format_curves(const CurveSet& data) {
    std::ostringstream os;
    os << std::setprecision(17) << "label";
    for (Eigen::Index i = 0; i < data.grid().points().size(); ++i) os << ',' << data.grid().points()[i];
    os << '\n';
    for (std::size_t r = 0; r < data.size(); ++r) {
        os << data.labels()[r];
        for (Eigen::Index c = 0; c < data.curves().cols(); ++c) {
            os << ',' << data.curves()(static_cast<Eigen::Index>(r), c);
        }
        os << '\n';
    }
    return os.str();
}

void write_curves(const std::filesystem::path& path, const CurveSet& data) { write_text(path, format_curves(data)); }

ModelFile make_model_file(const FitResult& fitted) {
    ModelFile m{fitted.discriminant};
    m.iterations = fitted.report.iterations;
    m.kkt_residual = fitted.report.kkt_residual;
    m.final_objective = fitted.report.objective_trace.empty() ? 0.0 : fitted.report.objective_trace.back();
    m.active_set_size = fitted.report.active_set_size;
    m.converged = fitted.report.converged;
    m.zero_regions = zero_regions(fitted.discriminant);
    return m;
}

namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string format_model(const ModelFile& model) {
    const Discriminant& d = model.discriminant;
    ordered_json j;
    j["grid"] = {{"a", d.grid().a()}, {"b", d.grid().b()}, {"T", d.grid().size()}};
    j["beta"] = to_std(d.beta());
    j["mu_mid"] = to_std(d.mu_mid());
    j["proj_delta"] = d.proj_delta();
    j["lambda"] = d.params().lambda;
    j["eta"] = d.params().eta;
    j["diagnostics"] = {{"iterations", model.iterations},
                        {"kkt_residual", model.kkt_residual},
                        {"final_objective", model.final_objective},
                        {"active_set_size", model.active_set_size},
                        {"converged", model.converged}};
    ordered_json regions = ordered_json::array();
    for (const ZeroRegion& r : model.zero_regions) {
        regions.push_back({{"t_start", r.t_start},
                           {"t_end", r.t_end},
                           {"index_start", r.index_start},
                           {"index_end", r.index_end}});
    }
    j["zero_regions"] = std::move(regions);
    return j.dump(2) + "\n";
}

ModelFile parse_model(const std::string& text) {
    try {
        const json j = json::parse(text);
        const auto& g = j.at("grid");
        Grid grid(g.at("a").get<double>(), g.at("b").get<double>(), g.at("T").get<std::size_t>());
        PenaltyParams params{j.at("lambda").get<double>(), j.at("eta").get<double>()};
        Discriminant disc(grid, to_eigen(j.at("beta").get<std::vector<double>>()),
                          to_eigen(j.at("mu_mid").get<std::vector<double>>()), j.at("proj_delta").get<double>(),
                          params);
        ModelFile m{std::move(disc)};
        const auto& diag = j.at("diagnostics");
        m.iterations = diag.at("iterations").get<std::size_t>();
        m.kkt_residual = diag.at("kkt_residual").get<double>();
        m.final_objective = diag.at("final_objective").get<double>();
        m.active_set_size = diag.at("active_set_size").get<std::size_t>();
        m.converged = diag.at("converged").get<bool>();
        for (const auto& r : j.at("zero_regions")) {
            m.zero_regions.push_back(ZeroRegion{r.at("t_start").get<double>(), r.at("t_end").get<double>(),
                                                r.at("index_start").get<std::size_t>(),
                                                r.at("index_end").get<std::size_t>()});
        }
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("invalid model file: ") + e.what());
    }
}

void write_model(const std::filesystem::path& path, const ModelFile& model) { write_text(path, format_model(model)); }

ModelFile read_model(const std::filesystem::path& path) { return parse_model(read_text(path)); }

std::string format_functions(const Grid& grid, const std::vector<std::string>& names,
                             const std::vector<const Vector*>& columns) {
    std::ostringstream os;
    os << std::setprecision(17) << 't';
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (Eigen::Index i = 0; i < grid.points().size(); ++i) {
        os << grid.points()[i];
        for (const Vector* c : columns) os << ',' << (*c)[i];
        os << '\n';
    }
    return os.str();
}

std::string format_cv_matrix(const CvResult& cv) {
    std::ostringstream os;
    os << std::setprecision(17) << "lambda,eta,cv_error,failed\n";
    for (std::size_t i = 0; i < cv.lambda_grid.size(); ++i) {
        for (std::size_t j = 0; j < cv.eta_grid.size(); ++j) {
            os << cv.lambda_grid[i] << ',' << cv.eta_grid[j] << ','
               << cv.cv_error(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) << ','
               << (cv.cell_failed(i, j) ? 1 : 0) << '\n';
        }
    }
    return os.str();
}

std::string format_cv_summary(const CvResult& cv) {
    ordered_json j;
    j["k"] = cv.k;
    j["seed"] = cv.seed;
    j["lambda_grid"] = cv.lambda_grid;
    j["eta_grid"] = cv.eta_grid;
    j["best_lambda"] = cv.best_lambda;
    j["best_eta"] = cv.best_eta;
    j["best_lambda_index"] = cv.best_lambda_index;
    j["best_eta_index"] = cv.best_eta_index;
    j["best_cv_error"] = cv.cv_error(static_cast<Eigen::Index>(cv.best_lambda_index),
                                     static_cast<Eigen::Index>(cv.best_eta_index));
    return j.dump(2) + "\n";
}

}  // namespace sflda::io
