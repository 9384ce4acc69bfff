#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "doctest.h"

#include "dafnn/errors.hpp"
#include "dafnn/experiment.hpp"

using namespace dafnn;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() /
                 ("dafnn-unit-" + std::to_string(::getpid()) + "-" + tag);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) {
        if (c == '\n') ++n;
    }
    return n;
}

} // namespace

TEST_CASE("case and method names round-trip") {
    CHECK(parse_case(case_name(CaseId::Sine)) == CaseId::Sine);
    CHECK(parse_case(case_name(CaseId::MexicanHat)) == CaseId::MexicanHat);
    CHECK(parse_case("mexican_hat") == CaseId::MexicanHat);
    CHECK_THROWS_AS(parse_case("cosine"), ConfigError);
    for (Method m : {Method::Gd, Method::Enkf, Method::Esmda}) {
        CHECK(parse_method(method_name(m)) == m);
    }
    CHECK_THROWS_AS(parse_method("adam"), ConfigError);
}

TEST_CASE("build_case returns the two benchmark datasets") {
    CasePair sine = build_case(CaseId::Sine, Placement::Grid);
    CHECK(sine.train.size() == 201);
    CHECK(sine.validation.size() == 21);
    CasePair mh = build_case(CaseId::MexicanHat, Placement::Grid);
    CHECK(mh.train.size() == 200);
    CHECK(mh.validation.size() == 30);
}

TEST_CASE("a gd run keeps the full loss history") {
    RunConfig config;
    config.method = Method::Gd;
    config.seeds = {1};
    RunReport report = run_experiment(config);
    REQUIRE(report.seeds.size() == 1);
    CHECK(report.seeds[0].loss_history.size() == 10000);
    CHECK(report.seeds[0].val_curve.size() == 21);
    CHECK(report.seeds[0].val_curve.band_min == report.seeds[0].val_curve.y_mean);
    CHECK(report.seeds[0].val_curve.band_max == report.seeds[0].val_curve.y_mean);
    CHECK(report.seeds[0].final_params.size() == 30);
}

TEST_CASE("an esmda run reports one entry per iteration") {
    RunConfig config;
    config.method = Method::Esmda;
    config.seeds = {1, 2, 3};
    config.esmda.n_e = 15;
    RunReport report = run_experiment(config);
    for (const auto& sr : report.seeds) {
        CHECK(sr.iterations.size() == 3);
    }
    CHECK(iteration_median_rmse_val(report, 3) == report.median.rmse_val);
    CHECK_THROWS_AS(iteration_median_rmse_val(report, 4), DimensionError);
}

TEST_CASE("an enkf run records one trace entry per step and pass") {
    RunConfig config;
    config.method = Method::Enkf;
    config.seeds = {1};
    config.enkf.n_e = 12;
    config.enkf.passes = 2;
    RunReport report = run_experiment(config);
    CHECK(report.seeds[0].trace.size() == 2 * 201);
}

TEST_CASE("identical configs produce identical reports") {
    RunConfig config;
    config.method = Method::Enkf;
    config.seeds = {1, 2};
    config.enkf.n_e = 15;
    RunReport a = run_experiment(config);
    RunReport b = run_experiment(config);
    CHECK(a.median.rmse_val == b.median.rmse_val);
    CHECK(a.median.r2_train == b.median.r2_train);
    for (std::size_t i = 0; i < a.seeds.size(); ++i) {
        CHECK(a.seeds[i].val_curve.y_mean == b.seeds[i].val_curve.y_mean);
        CHECK(a.seeds[i].final_params == b.seeds[i].final_params);
    }
}

TEST_CASE("medians are order-invariant in the seed list") {
    RunConfig config;
    config.method = Method::Enkf;
    config.seeds = {1, 2, 3};
    config.enkf.n_e = 10;
    RunReport a = run_experiment(config);
    config.seeds = {3, 1, 2};
    RunReport b = run_experiment(config);
    CHECK(a.median.rmse_val == b.median.rmse_val);
    CHECK(a.median.r2_val == b.median.r2_val);
}

TEST_CASE("artifacts have the documented shapes and are byte-stable") {
    RunConfig config;
    config.method = Method::Enkf;
    config.seeds = {1, 2, 3};
    config.enkf.n_e = 10;
    fs::path dir = fresh_dir("artifacts");
    config.out_dir = dir.string();
    run_experiment(config);

    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "timing.txt"));
    const std::string predictions = slurp(dir / "predictions.csv");
    CHECK(count_lines(predictions) == 21 + 1);
    const std::string metrics = slurp(dir / "metrics.csv");
    CHECK(count_lines(metrics) == 3 + 2);  // header + seeds + median
    CHECK(metrics.rfind("median,") != std::string::npos);
    const std::string trace = slurp(dir / "params_trace.csv");
    CHECK(count_lines(trace) == 201 * 20 + 1);

    run_experiment(config);
    CHECK(slurp(dir / "predictions.csv") == predictions);
    CHECK(slurp(dir / "metrics.csv") == metrics);
    CHECK(slurp(dir / "params_trace.csv") == trace);
    fs::remove_all(dir);
}

TEST_CASE("gd artifacts carry equal band columns") {
    RunConfig config;
    config.method = Method::Gd;
    config.seeds = {1};
    config.gd.epochs = 300;
    fs::path dir = fresh_dir("gd-band");
    config.out_dir = dir.string();
    run_experiment(config);
    std::istringstream in(slurp(dir / "predictions.csv"));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::stringstream row(line);
        std::string x, y_true, y_mean, band_min, band_max;
        std::getline(row, x, ',');
        std::getline(row, y_true, ',');
        std::getline(row, y_mean, ',');
        std::getline(row, band_min, ',');
        std::getline(row, band_max, ',');
        CHECK(band_min == y_mean);
        CHECK(band_max == y_mean);
    }
    fs::remove_all(dir);
}

TEST_CASE("config files override method settings") {
    fs::path file = fresh_dir("config-file");
    fs::create_directories(file);
    fs::path cfg = file / "run.cfg";
    {
        std::ofstream out(cfg);
        out << "# overrides\n";
        out << "gd.learning_rate = 0.05\n";
        out << "enkf.n_e = 30\n";
        out << "enkf.trainable = all\n";
        out << "esmda.alpha = 4,4,4,4\n";
        out << "esmda.update_mode = simultaneous\n";
        out << "mh_placement = random\n";
    }
    RunConfig config;
    apply_config_file(config, cfg.string());
    CHECK(config.gd.learning_rate == 0.05);
    CHECK(config.enkf.n_e == 30);
    CHECK(config.enkf.trainable == MaskKind::All);
    CHECK(config.esmda.n_i == 4);
    CHECK(config.esmda.alpha == std::vector<double>{4.0, 4.0, 4.0, 4.0});
    CHECK(config.esmda.update_mode == UpdateMode::Simultaneous);
    CHECK(config.mh_placement == Placement::Random);

    {
        std::ofstream out(cfg);
        out << "esmda.n_i = 5\n";
    }
    apply_config_file(config, cfg.string());
    CHECK(config.esmda.alpha == make_alpha_schedule(5));

    {
        std::ofstream out(cfg);
        out << "unknown.key = 1\n";
    }
    CHECK_THROWS_AS(apply_config_file(config, cfg.string()), ConfigError);
    {
        std::ofstream out(cfg);
        out << "gd.learning_rate = fast\n";
    }
    CHECK_THROWS_AS(apply_config_file(config, cfg.string()), ConfigError);
    CHECK_THROWS_AS(apply_config_file(config, (file / "missing.cfg").string()), IoError);
    fs::remove_all(file);
}

TEST_CASE("run_experiment validates its configuration") {
    RunConfig config;
    config.seeds.clear();
    CHECK_THROWS_AS(run_experiment(config), ConfigError);
    config.seeds = {1};
    config.method = Method::Esmda;
    config.esmda.alpha = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(run_experiment(config), ConfigError);
}
