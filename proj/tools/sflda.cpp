// Command-line front end: simulate, fit, cv, predict, experiment.

#include "sflda/classifier.hpp"
#include "sflda/error.hpp"
#include "sflda/io.hpp"
#include "sflda/oracle.hpp"
#include "sflda/parallel.hpp"
#include "sflda/simulation.hpp"
#include "sflda/solver.hpp"
#include "sflda/tuning.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace sflda;

namespace {

enum Exit : int { ok = 0, usage = 2, data = 3, solver = 4, tuning = 5 };

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_grid:
        case ErrorCode::grid_mismatch:
        case ErrorCode::insufficient_data:
        case ErrorCode::non_finite:
        case ErrorCode::parse_error:
        case ErrorCode::io_error:
            return data;
        case ErrorCode::degenerate_curvature:
        case ErrorCode::degenerate_discriminant:
        case ErrorCode::degenerate_variance:
        case ErrorCode::oracle_failure:
        case ErrorCode::eigen_failure:
            return solver;
        case ErrorCode::tuning_failed:
            return tuning;
        case ErrorCode::domain_error:
            return usage;
    }
    return data;
}

struct SimulateArgs {
    int setting = 1;
    std::size_t n = 100;
    std::uint64_t seed = 1;
    std::size_t grid_size = 100;
    std::string out;
    std::string beta_out;
};

struct FitArgs {
    std::string train;
    std::string labels;
    double lambda = 0.0;
    double eta = 0.0;
    std::string out;
    std::string beta_csv;
    std::size_t max_iter = 10000;
    double tol = 1e-8;
    bool verify = false;
};

struct CvArgs {
    std::string train;
    std::string labels;
    std::size_t k = 5;
    std::uint64_t seed = 1;
    std::vector<double> lambdas;
    std::vector<double> lambda_factors;
    std::vector<double> etas;
    std::string out;
    std::string cv_csv;
    std::string summary;
    std::size_t threads = 1;
};

struct PredictArgs {
    std::string model;
    std::string test;
    std::string labels;
    std::string out;
};

struct ExperimentArgs {
    int setting = 1;
    std::size_t reps = 100;
    std::uint64_t seed = 1;
    std::string out;
    std::string method = "sflda";
    std::size_t n_train = 100;
    std::size_t n_test = 300;
    std::size_t grid_size = 100;
    std::size_t folds = 5;
    std::vector<double> etas;
    std::size_t threads = 1;
};

std::optional<fs::path> optional_path(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return fs::path(s);
}

CurveSet load_training(const std::string& path, const std::string& labels) {
    return io::read_curves(path, optional_path(labels)).to_curve_set();
}

void print_fit(const FitResult& fitted, double lam_max) {
    const FitReport& r = fitted.report;
    std::cout << std::setprecision(10) << "lambda_max " << lam_max << "\n"
              << "iterations " << r.iterations << "\n"
              << "converged " << (r.converged ? "true" : "false") << "\n"
              << "objective " << (r.objective_trace.empty() ? 0.0 : r.objective_trace.back()) << "\n"
              << "kkt_residual " << r.kkt_residual << "\n"
              << "active_set_size " << r.active_set_size << "\n";
}

std::string beta_csv_text(const Discriminant& disc) {
    const auto regions = zero_regions(disc);
    Vector in_zero = Vector::Zero(disc.beta().size());
    for (const ZeroRegion& z : regions) {
        for (std::size_t i = z.index_start; i <= z.index_end; ++i) in_zero[static_cast<Eigen::Index>(i)] = 1.0;
    }
    return io::format_functions(disc.grid(), {"beta", "zero_region"}, {&disc.beta(), &in_zero});
}

int run_simulate(const SimulateArgs& a) {
    const SettingSpec spec = build_setting(a.setting, make_grid(0.0, 1.0, a.grid_size));
    const CurveSet train = gen_dataset(spec, a.n, a.seed);
    io::write_curves(a.out, train);
    std::cout << std::setprecision(10) << "lambda_max " << lambda_max(spec.population_model()) << "\n";
    if (spec.has_truth()) {
        fs::path beta_path = a.beta_out;
        if (beta_path.empty()) {
            beta_path = fs::path(a.out);
            beta_path.replace_extension(".beta.csv");
        }
        io::write_text(beta_path, io::format_functions(spec.grid, {"beta_true", "beta_target"},
                                                       {&*spec.beta_true, &*spec.beta_target}));
        std::cout << "beta_true " << beta_path.string() << "\n";
    }
    return ok;
}

int run_fit(const FitArgs& a) {
    const CurveSet train = load_training(a.train, a.labels);
    const DiscretizedModel model = pooled_estimators(train);
    SolverOptions opts;
    opts.max_iter = a.max_iter;
    opts.tol = a.tol;
    const PenaltyParams params{a.lambda, a.eta};
    const FitResult fitted = fit(model, params, opts);
    const double lam_max = lambda_max(model);
    if (fitted.report.active_set_size == 0) {
        std::cerr << "warning: beta is identically zero (lambda " << a.lambda << " >= lambda_max " << lam_max
                  << " or penalty too strong); the classifier is degenerate\n";
    }
    io::write_model(a.out, io::make_model_file(fitted));
    if (!a.beta_csv.empty()) io::write_text(a.beta_csv, beta_csv_text(fitted.discriminant));
    print_fit(fitted, lam_max);

    if (a.verify) {
        const std::size_t T = model.grid().size();
        const OracleSolution reference = T <= kMaxEnumerationSize ? oracle_sign_enumeration(model, params)
                                                                  : oracle_proximal_descent(model, params, 100000);
        const double gap = (fitted.discriminant.beta() - reference.beta).lpNorm<Eigen::Infinity>();
        const double obj_gap =
            std::abs(fitted.report.objective_trace.back() - reference.objective) / (1.0 + std::abs(reference.objective));
        std::cout << "oracle " << (reference.method == OracleMethod::sign_enumeration ? "sign_enumeration" : "proximal")
                  << " max_abs_diff " << gap << " relative_objective_gap " << obj_gap << "\n";
    }
    return fitted.report.converged ? ok : solver;
}

int run_cv(const CvArgs& a) {
    const CurveSet train = load_training(a.train, a.labels);
    const DiscretizedModel full = pooled_estimators(train);
    std::vector<double> lambdas = a.lambdas;
    if (!a.lambda_factors.empty()) {
        const double lam_max = lambda_max(full);
        lambdas.clear();
        for (double f : a.lambda_factors) lambdas.push_back(f * lam_max);
    }
    if (lambdas.empty()) lambdas = default_lambda_grid(full);
    const std::vector<double> etas = a.etas.empty() ? default_eta_grid(train.grid()) : a.etas;

    const CvResult cv = cv_select(train, lambdas, etas, a.k, a.seed, {}, a.threads);
    if (!a.cv_csv.empty()) io::write_text(a.cv_csv, io::format_cv_matrix(cv));
    if (!a.summary.empty()) io::write_text(a.summary, io::format_cv_summary(cv));

    const FitResult best = fit(full, PenaltyParams{cv.best_lambda, cv.best_eta});
    io::write_model(a.out, io::make_model_file(best));
    std::cout << std::setprecision(10) << "best_lambda " << cv.best_lambda << "\n"
              << "best_eta " << cv.best_eta << "\n"
              << "cv_error "
              << cv.cv_error(static_cast<Eigen::Index>(cv.best_lambda_index),
                             static_cast<Eigen::Index>(cv.best_eta_index))
              << "\n";
    print_fit(best, lambda_max(full));
    return best.report.converged ? ok : solver;
}

int run_predict(const PredictArgs& a) {
    const io::ModelFile model = io::read_model(a.model);
    const io::CurveFile test = io::read_curves(a.test, optional_path(a.labels));
    require_same_grid(test.grid, model.discriminant.grid());
    const Vector scores = score_rows(test.curves, model.discriminant);

    std::ostringstream os;
    os << std::setprecision(17) << "label,score\n";
    std::size_t wrong = 0;
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        const int label = scores[i] > 0.0 ? 1 : 0;
        os << label << ',' << scores[i] << '\n';
        if (test.labels && label != (*test.labels)[static_cast<std::size_t>(i)]) ++wrong;
    }
    if (a.out.empty()) {
        std::cout << os.str();
    } else {
        io::write_text(a.out, os.str());
    }
    if (test.labels) {
        const double rate = scores.size() == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(scores.size());
        (a.out.empty() ? std::cerr : std::cout) << std::setprecision(10) << "error_rate " << rate << "\n";
    }
    return ok;
}

int run_experiment_cmd(const ExperimentArgs& a) {
    ExperimentConfig config;
    config.setting = a.setting;
    config.reps = a.reps;
    config.seed = a.seed;
    config.method = a.method == "flda" ? Method::flda : Method::sflda;
    config.n_train_per_class = a.n_train;
    config.n_test_per_class = a.n_test;
    config.grid_size = a.grid_size;
    config.folds = a.folds;
    config.threads = a.threads;
    if (!a.etas.empty()) config.eta_grid = a.etas;
    const ExperimentResult result = run_experiment(config);
    const fs::path dir = a.out;
    io::write_text(dir / "per_rep.csv", experiment_csv(result));
    io::write_text(dir / "summary.json", experiment_json(result));
    std::cout << experiment_json(result);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smooth sparse functional linear discriminant analysis"};
    app.require_subcommand(1);
    const std::size_t default_threads = default_thread_count();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Draw a labelled training sample from a simulation setting");
    simulate->add_option("--setting", sim.setting, "Setting id 1-6")->required()->check(CLI::Range(1, 6));
    simulate->add_option("--n", sim.n, "Curves per class")->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
    simulate->add_option("--grid-size", sim.grid_size, "Grid points T on [0,1]")->capture_default_str()->check(CLI::Range(2, 100000));
    simulate->add_option("--out", sim.out, "Output curve CSV")->required();
    simulate->add_option("--beta-out", sim.beta_out, "True beta CSV (default: <out>.beta.csv)");

    FitArgs fa;
    auto* fitcmd = app.add_subcommand("fit", "Fit the penalized discriminant at fixed (lambda, eta)");
    fitcmd->add_option("--train", fa.train, "Training curve CSV")->required();
    fitcmd->add_option("--labels", fa.labels, "Companion label file, one 0/1 per line");
    fitcmd->add_option("--lambda", fa.lambda, "Sparsity penalty")->required()->check(CLI::NonNegativeNumber);
    fitcmd->add_option("--eta", fa.eta, "Smoothness penalty")->required()->check(CLI::NonNegativeNumber);
    fitcmd->add_option("--out", fa.out, "Output model JSON")->required();
    fitcmd->add_option("--beta-csv", fa.beta_csv, "Write t,beta,zero_region CSV");
    fitcmd->add_option("--max-iter", fa.max_iter, "Maximum sweeps")->capture_default_str()->check(CLI::PositiveNumber);
    fitcmd->add_option("--tol", fa.tol, "Relative objective tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    fitcmd->add_flag("--verify", fa.verify, "Compare against a brute-force oracle");

    CvArgs ca;
    ca.threads = default_threads;
    auto* cvcmd = app.add_subcommand("cv", "Select (lambda, eta) by stratified K-fold cross-validation");
    cvcmd->add_option("--train", ca.train, "Training curve CSV")->required();
    cvcmd->add_option("--labels", ca.labels, "Companion label file");
    cvcmd->add_option("--k", ca.k, "Folds")->capture_default_str()->check(CLI::Range(2, 1000));
    cvcmd->add_option("--seed", ca.seed, "Fold assignment seed")->capture_default_str();
    auto* lam_opt = cvcmd->add_option("--lambdas", ca.lambdas, "Descending lambda grid")->delimiter(',');
    cvcmd->add_option("--lambda-factors", ca.lambda_factors, "Descending multiples of lambda_max")
        ->delimiter(',')
        ->excludes(lam_opt);
    cvcmd->add_option("--etas", ca.etas, "Descending eta grid")->delimiter(',');
    cvcmd->add_option("--out", ca.out, "Best model JSON")->required();
    cvcmd->add_option("--cv-csv", ca.cv_csv, "Full cv_error matrix CSV");
    cvcmd->add_option("--summary", ca.summary, "Selection summary JSON");
    cvcmd->add_option("--threads", ca.threads, "Worker threads (default SFLDA_THREADS or 1)")->check(CLI::PositiveNumber);

    PredictArgs pa;
    auto* predict = app.add_subcommand("predict", "Score and classify curves with a saved model");
    predict->add_option("--model", pa.model, "Model JSON")->required();
    predict->add_option("--test", pa.test, "Curve CSV")->required();
    predict->add_option("--labels", pa.labels, "Companion label file");
    predict->add_option("--out", pa.out, "Write label,score CSV here instead of stdout");

    ExperimentArgs ea;
    ea.threads = default_threads;
    auto* experiment = app.add_subcommand("experiment", "Repeat the simulate/tune/test protocol");
    experiment->add_option("--setting", ea.setting, "Setting id 1-6")->required()->check(CLI::Range(1, 6));
    experiment->add_option("--reps", ea.reps, "Repetitions")->capture_default_str()->check(CLI::PositiveNumber);
    experiment->add_option("--seed", ea.seed, "Master seed")->capture_default_str();
    experiment->add_option("--out", ea.out, "Output directory")->required();
    experiment->add_option("--method", ea.method, "sflda or flda")->capture_default_str()->check(CLI::IsMember({"sflda", "flda"}));
    experiment->add_option("--n-train", ea.n_train, "Training curves per class")->capture_default_str()->check(CLI::Range(2, 1000000));
    experiment->add_option("--n-test", ea.n_test, "Test curves per class")->capture_default_str()->check(CLI::PositiveNumber);
    experiment->add_option("--grid-size", ea.grid_size, "Grid points T")->capture_default_str()->check(CLI::Range(2, 100000));
    experiment->add_option("--folds", ea.folds, "CV folds")->capture_default_str()->check(CLI::Range(2, 1000));
    experiment->add_option("--etas", ea.etas, "Descending eta grid (default dt^2 * 2^-1..2^-10)")->delimiter(',');
    experiment->add_option("--threads", ea.threads, "Worker threads (default SFLDA_THREADS or 1)")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*fitcmd) return run_fit(fa);
        if (*cvcmd) return run_cv(ca);
        if (*predict) return run_predict(pa);
        if (*experiment) return run_experiment_cmd(ea);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return data;
    }
    return usage;
}
