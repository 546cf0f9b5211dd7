#include <doctest.h>

#include "sflda/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const fs::path capture = fs::temp_directory_path() / ("sflda_cli_out_" + std::to_string(::getpid()));
    const std::string cmd = std::string(SFLDA_CLI) + " " + args + " > " + capture.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(capture);
    std::ostringstream os;
    os << in.rdbuf();
    fs::remove(capture);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, os.str()};
}

struct Workdir {
    fs::path path;
    Workdir() : path(fs::temp_directory_path() / ("sflda_cli_" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~Workdir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) { return sflda::io::read_text(p); }

}  // namespace

TEST_CASE("cli simulate") {
    Workdir w;
    auto r = run("simulate --setting 1 --n 100 --seed 7 --out " + (w / "a.csv"));
    REQUIRE(r.code == 0);
    CHECK(r.out.find("lambda_max") != std::string::npos);
    const auto file = sflda::io::read_curves(w / "a.csv");
    CHECK(file.curves.rows() == 200);
    CHECK(file.grid.size() == 100);
    CHECK(fs::exists(w / "a.beta.csv"));
    REQUIRE(run("simulate --setting 1 --n 100 --seed 7 --out " + (w / "b.csv")).code == 0);
    CHECK(slurp(w / "a.csv") == slurp(w / "b.csv"));

    CHECK(run("simulate --setting 9 --out " + (w / "c.csv")).code == 2);
    CHECK(run("simulate --setting 6 --n 3 --out " + (w / "s6.csv")).code == 0);
    CHECK_FALSE(fs::exists(w / "s6.beta.csv"));
    CHECK(run("bogus").code == 2);
}

TEST_CASE("cli fit, predict and round trip") {
    Workdir w;
    REQUIRE(run("simulate --setting 5 --n 50 --seed 3 --out " + (w / "train.csv")).code == 0);
    REQUIRE(run("simulate --setting 5 --n 50 --seed 4 --out " + (w / "test.csv")).code == 0);

    auto dense = run("fit --train " + (w / "train.csv") + " --lambda 0 --eta 0.03125 --out " + (w / "dense.json"));
    CHECK(dense.code == 0);
    const auto dj = nlohmann::json::parse(slurp(w / "dense.json"));
    CHECK(dj["zero_regions"].empty());
    CHECK(dj["diagnostics"]["converged"] == true);

    auto zero = run("fit --train " + (w / "train.csv") + " --lambda 1000 --eta 0 --out " + (w / "zero.json"));
    CHECK(zero.code == 0);
    CHECK(zero.out.find("warning") != std::string::npos);
    const auto zj = nlohmann::json::parse(slurp(w / "zero.json"));
    for (const auto& b : zj["beta"]) CHECK(b.get<double>() == 0.0);
    CHECK(zj["zero_regions"].size() == 1);

    const std::string fit_args = "fit --train " + (w / "train.csv") + " --lambda 0.01 --eta 1e-5 --beta-csv " +
                                 (w / "beta.csv") + " --out ";
    REQUIRE(run(fit_args + (w / "m1.json")).code == 0);
    REQUIRE(run(fit_args + (w / "m2.json")).code == 0);
    CHECK(slurp(w / "m1.json") == slurp(w / "m2.json"));
    CHECK(slurp(w / "beta.csv").rfind("t,beta,zero_region\n", 0) == 0);

    auto pred = run("predict --model " + (w / "m1.json") + " --test " + (w / "test.csv") + " --out " + (w / "p.csv"));
    CHECK(pred.code == 0);
    CHECK(pred.out.find("error_rate") != std::string::npos);

    // loaded model predicts exactly as the in-memory pipeline
    const auto train = sflda::io::read_curves(w / "train.csv").to_curve_set();
    const auto fitted = sflda::fit(sflda::pooled_estimators(train), {0.01, 1e-5});
    const auto test = sflda::io::read_curves(w / "test.csv");
    const sflda::Vector scores = sflda::score_rows(test.curves, fitted.discriminant);
    std::istringstream lines(slurp(w / "p.csv"));
    std::string line;
    std::getline(lines, line);
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        REQUIRE(std::getline(lines, line));
        const double s = std::stod(line.substr(line.find(',') + 1));
        CHECK(s == scores[i]);
        CHECK(line[0] == (scores[i] > 0.0 ? '1' : '0'));
    }

    auto in_sample = run("predict --model " + (w / "m1.json") + " --test " + (w / "train.csv"));
    CHECK(in_sample.code == 0);
    CHECK(in_sample.out.find("error_rate") != std::string::npos);

    CHECK(run("predict --model " + (w / "missing.json") + " --test " + (w / "test.csv")).code == 3);
    CHECK(run("fit --train " + (w / "missing.csv") + " --lambda 0 --eta 0 --out " + (w / "x.json")).code == 3);
    CHECK(run("fit --train " + (w / "train.csv") + " --lambda -1 --eta 0 --out " + (w / "x.json")).code == 2);

    auto not_converged =
        run("fit --train " + (w / "train.csv") + " --lambda 0.001 --eta 0 --max-iter 1 --out " + (w / "nc.json"));
    CHECK(not_converged.code == 4);
    CHECK(fs::exists(w / "nc.json"));
}

TEST_CASE("cli fit --verify on a small grid") {
    Workdir w;
    REQUIRE(run("simulate --setting 1 --n 20 --grid-size 8 --seed 2 --out " + (w / "t.csv")).code == 0);
    auto r = run("fit --train " + (w / "t.csv") + " --lambda 0.05 --eta 0.001 --verify --out " + (w / "m.json"));
    CHECK(r.code == 0);
    CHECK(r.out.find("oracle sign_enumeration") != std::string::npos);
}

TEST_CASE("cli cv") {
    Workdir w;
    REQUIRE(run("simulate --setting 3 --n 30 --grid-size 40 --seed 5 --out " + (w / "t.csv")).code == 0);
    const std::string args = "cv --train " + (w / "t.csv") + " --k 5 --seed 1 --cv-csv " + (w / "cv.csv") +
                             " --summary " + (w / "cv.json") + " --out ";
    REQUIRE(run(args + (w / "best1.json")).code == 0);
    const auto summary = nlohmann::json::parse(slurp(w / "cv.json"));
    const double lam = summary["best_lambda"];
    const double eta = summary["best_eta"];
    CHECK(std::isfinite(lam));
    CHECK(std::isfinite(eta));
    bool in_lambda = false;
    for (const auto& v : summary["lambda_grid"]) in_lambda |= v.get<double>() == lam;
    bool in_eta = false;
    for (const auto& v : summary["eta_grid"]) in_eta |= v.get<double>() == eta;
    CHECK(in_lambda);
    CHECK(in_eta);
    std::istringstream cv(slurp(w / "cv.csv"));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(cv, line)) ++rows;
    CHECK(rows == 1 + 11 * 10);

    const std::string first = slurp(w / "cv.json");
    REQUIRE(run(args + (w / "best2.json")).code == 0);
    CHECK(slurp(w / "cv.json") == first);
    CHECK(slurp(w / "best1.json") == slurp(w / "best2.json"));

    CHECK(run("cv --train " + (w / "t.csv") + " --lambda-factors 1 --out " + (w / "f.json")).code == 5);
}

TEST_CASE("cli experiment") {
    Workdir w;
    const std::string base = "experiment --setting 1 --reps 2 --seed 3 --n-train 15 --n-test 20 --grid-size 20 --folds 3";
    REQUIRE(run(base + " --threads 1 --out " + (w / "serial")).code == 0);
    REQUIRE(run(base + " --threads 2 --out " + (w / "parallel")).code == 0);
    CHECK(slurp(w / "serial/summary.json") == slurp(w / "parallel/summary.json"));
    CHECK(slurp(w / "serial/per_rep.csv") == slurp(w / "parallel/per_rep.csv"));
    const auto j = nlohmann::json::parse(slurp(w / "serial/summary.json"));
    CHECK(j["mean_error"].is_number());
    CHECK(j["se_error"].is_number());

    REQUIRE(run("experiment --setting 1 --reps 1 --n-train 15 --n-test 20 --grid-size 20 --folds 3 --out " +
                (w / "one"))
                .code == 0);
    CHECK(nlohmann::json::parse(slurp(w / "one/summary.json"))["se_error"].is_null());
    CHECK(run("experiment --setting 1 --method lasso --out " + (w / "x")).code == 2);
}
