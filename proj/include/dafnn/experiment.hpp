#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dafnn/dataset.hpp"
#include "dafnn/enkf.hpp"
#include "dafnn/esmda.hpp"
#include "dafnn/gd.hpp"
#include "dafnn/network.hpp"

namespace dafnn {

enum class CaseId { Sine, MexicanHat };
enum class Method { Gd, Enkf, Esmda };

std::string case_name(CaseId c);
std::string method_name(Method m);
CaseId parse_case(const std::string& s);
Method parse_method(const std::string& s);

struct RunConfig {
    CaseId case_id = CaseId::Sine;
    Method method = Method::Gd;
    GdConfig gd;
    EnkfConfig enkf;
    EsmdaConfig esmda;
    std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string out_dir;  // empty disables artifact writing
    Placement mh_placement = Placement::Grid;

    void validate() const;
};

struct SeedResult {
    uint64_t seed = 0;
    double rmse_train = 0.0;
    double r2_train = 0.0;
    double rmse_val = 0.0;
    double r2_val = 0.0;
    double wall_ms = 0.0;
    std::vector<double> loss_history;         // gd only
    AssimilationTrace trace;                  // gd: thinned parameter snapshots
    std::vector<IterationReport> iterations;  // esmda only
    OnlineCurve val_curve;
    ParameterVector final_params;  // gd: trained params; ensemble mean otherwise
};

struct MedianMetrics {
    double rmse_train = 0.0;
    double r2_train = 0.0;
    double rmse_val = 0.0;
    double r2_val = 0.0;
};

struct RunReport {
    RunConfig config;
    std::vector<SeedResult> seeds;
    MedianMetrics median;
};

// Median of one per-iteration field across seeds (esmda runs only).
double iteration_median_rmse_val(const RunReport& report, int iteration);

CasePair build_case(CaseId case_id, Placement mh_placement);

// Runs the configured method once per seed and aggregates medians. Writes
// artifacts into config.out_dir when it is nonempty.
RunReport run_experiment(const RunConfig& config);

// Writes report.json, predictions.csv, params_trace.csv, metrics.csv and
// timing.txt into dir. Everything except timing.txt is byte-deterministic for
// a fixed config.
void emit_artifacts(const RunReport& report, const std::string& dir);

// Runs all six case/method cells with the defaults, writing artifacts under
// out_root/<case>-<method> and returning a printable summary table.
std::string reproduce_paper(const std::string& out_root);

// Applies flat `section.key = value` overrides from a config file.
void apply_config_file(RunConfig& config, const std::string& path);

} // namespace dafnn
