#include "dafnn/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "dafnn/errors.hpp"
#include "dafnn/metrics.hpp"

namespace dafnn {

namespace fs = std::filesystem;
using nlohmann::json;

std::string case_name(CaseId c) {
    return c == CaseId::Sine ? "sine" : "mexican-hat";
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Gd: return "gd";
        case Method::Enkf: return "enkf";
        case Method::Esmda: return "esmda";
    }
    throw ConfigError("unknown method");
}

CaseId parse_case(const std::string& s) {
    if (s == "sine") return CaseId::Sine;
    if (s == "mexican-hat" || s == "mexican_hat") return CaseId::MexicanHat;
    throw ConfigError("unknown case: " + s + " (expected sine or mexican-hat)");
}

Method parse_method(const std::string& s) {
    if (s == "gd") return Method::Gd;
    if (s == "enkf") return Method::Enkf;
    if (s == "esmda") return Method::Esmda;
    throw ConfigError("unknown method: " + s + " (expected gd, enkf or esmda)");
}

void RunConfig::validate() const {
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    switch (method) {
        case Method::Gd: gd.validate(); break;
        case Method::Enkf: enkf.validate(); break;
        case Method::Esmda: esmda.validate(); break;
    }
}

CasePair build_case(CaseId case_id, Placement mh_placement) {
    if (case_id == CaseId::Sine) return gen_sine();
    return gen_mexican_hat(mh_placement, 0);
}

namespace {

std::vector<double> predict_curve(const NetworkSpec& spec, const ParameterVector& params,
                                  const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) out[k] = forward1(spec, params, xs[k]);
    return out;
}

SeedResult run_seed(const NetworkSpec& spec, const RunConfig& config, const CasePair& data,
                    uint64_t seed) {
    SeedResult sr;
    sr.seed = seed;
    double init_std = 0.0;
    switch (config.method) {
        case Method::Gd: init_std = config.gd.init_std; break;
        case Method::Enkf: init_std = config.enkf.init_std; break;
        case Method::Esmda: init_std = config.esmda.init_std; break;
    }
    Rng rng(seed, Stream::ParamInit);
    const ParameterVector base = random_params(spec, init_std, rng);

    const auto t0 = std::chrono::steady_clock::now();
    switch (config.method) {
        case Method::Gd: {
            GdResult res = train_gd(spec, base, data.train, config.gd);
            sr.wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
            const std::vector<double> train_pred =
                predict_curve(spec, res.params, data.train.xs);
            const std::vector<double> val_pred =
                predict_curve(spec, res.params, data.validation.xs);
            sr.rmse_train = rmse(train_pred, data.train.ys);
            sr.r2_train = r_squared(train_pred, data.train.ys);
            sr.rmse_val = rmse(val_pred, data.validation.ys);
            sr.r2_val = r_squared(val_pred, data.validation.ys);
            sr.loss_history = std::move(res.loss_history);
            sr.val_curve.xs = data.validation.xs;
            sr.val_curve.y_true = data.validation.ys;
            sr.val_curve.y_mean = val_pred;
            sr.val_curve.band_min = val_pred;
            sr.val_curve.band_max = val_pred;
            for (const auto& [epoch, params] : res.snapshots) {
                TraceRecord rec;
                rec.step = static_cast<int>(epoch);
                rec.x = 0.0;
                rec.y_obs = sr.loss_history[epoch];
                rec.param_mean = params;
                rec.param_std.assign(params.size(), 0.0);
                sr.trace.push_back(std::move(rec));
            }
            sr.final_params = std::move(res.params);
            break;
        }
        case Method::Enkf: {
            EnkfResult res =
                train_enkf(spec, base, data.train, data.validation, config.enkf, seed);
            sr.wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
            sr.rmse_train = rmse(res.train_curve.y_mean, res.train_curve.y_true);
            sr.r2_train = r_squared(res.train_curve.y_mean, res.train_curve.y_true);
            sr.rmse_val = rmse(res.val_curve.y_mean, res.val_curve.y_true);
            sr.r2_val = r_squared(res.val_curve.y_mean, res.val_curve.y_true);
            sr.trace = std::move(res.trace);
            sr.val_curve = std::move(res.val_curve);
            sr.final_params = ensemble_mean(res.ensemble);
            break;
        }
        case Method::Esmda: {
            EsmdaResult res =
                train_esmda(spec, base, data.train, data.validation, config.esmda, seed);
            sr.wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
            const IterationReport& last = res.iterations.back();
            sr.rmse_train = last.rmse_train;
            sr.r2_train = last.r2_train;
            sr.rmse_val = last.rmse_val;
            sr.r2_val = last.r2_val;
            sr.val_curve = last.val_curve;
            sr.trace = std::move(res.trace);
            sr.iterations = std::move(res.iterations);
            sr.final_params = ensemble_mean(res.ensemble);
            break;
        }
    }
    return sr;
}

} // namespace

RunReport run_experiment(const RunConfig& config) {
    config.validate();
    const CasePair data = build_case(config.case_id, config.mh_placement);
    const NetworkSpec spec;

    RunReport report;
    report.config = config;
    std::vector<double> rt, r2t, rv, r2v;
    for (uint64_t seed : config.seeds) {
        SeedResult sr = run_seed(spec, config, data, seed);
        rt.push_back(sr.rmse_train);
        r2t.push_back(sr.r2_train);
        rv.push_back(sr.rmse_val);
        r2v.push_back(sr.r2_val);
        report.seeds.push_back(std::move(sr));
    }
    report.median.rmse_train = median(rt);
    report.median.r2_train = median(r2t);
    report.median.rmse_val = median(rv);
    report.median.r2_val = median(r2v);

    if (!config.out_dir.empty()) emit_artifacts(report, config.out_dir);
    return report;
}

double iteration_median_rmse_val(const RunReport& report, int iteration) {
    std::vector<double> values;
    for (const auto& sr : report.seeds) {
        if (iteration < 1 || iteration > static_cast<int>(sr.iterations.size())) {
            throw DimensionError("iteration index out of range");
        }
        values.push_back(sr.iterations[iteration - 1].rmse_val);
    }
    return median(values);
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json curve_to_json(const OnlineCurve& c) {
    return json{{"xs", c.xs},
                {"y_true", c.y_true},
                {"y_mean", c.y_mean},
                {"band_min", c.band_min},
                {"band_max", c.band_max}};
}

json trace_to_json(const AssimilationTrace& trace) {
    json arr = json::array();
    for (const auto& rec : trace) {
        arr.push_back(json{{"step", rec.step},
                           {"x", rec.x},
                           {"y_obs", rec.y_obs},
                           {"param_mean", rec.param_mean},
                           {"param_std", rec.param_std}});
    }
    return arr;
}

std::string mask_name(MaskKind kind) {
    switch (kind) {
        case MaskKind::B2: return "b2";
        case MaskKind::W2B2: return "w2b2";
        case MaskKind::All: return "all";
    }
    return "unknown";
}

json method_config_to_json(const RunConfig& config) {
    switch (config.method) {
        case Method::Gd:
            return json{{"learning_rate", config.gd.learning_rate},
                        {"epochs", config.gd.epochs},
                        {"init_std", config.gd.init_std},
                        {"trainable", mask_name(config.gd.trainable)}};
        case Method::Enkf:
            return json{{"n_e", config.enkf.n_e},
                        {"prior_std", config.enkf.prior_std},
                        {"obs_var", config.enkf.obs_var},
                        {"process_noise_var", config.enkf.process_noise_var},
                        {"passes", config.enkf.passes},
                        {"init_std", config.enkf.init_std},
                        {"trainable", mask_name(config.enkf.trainable)}};
        case Method::Esmda:
            return json{{"n_i", config.esmda.n_i},
                        {"n_e", config.esmda.n_e},
                        {"alpha", config.esmda.alpha},
                        {"prior_std", config.esmda.prior_std},
                        {"obs_var", config.esmda.obs_var},
                        {"process_noise_var", config.esmda.process_noise_var},
                        {"init_std", config.esmda.init_std},
                        {"trainable", mask_name(config.esmda.trainable)},
                        {"update_mode",
                         config.esmda.update_mode == UpdateMode::Sequential ? "sequential"
                                                                            : "simultaneous"},
                        {"gain_noise_scaling",
                         config.esmda.gain_noise_scaling == GainNoiseScaling::Alpha
                             ? "alpha"
                             : "sqrt_alpha"}};
    }
    throw ConfigError("unknown method");
}

// The seed whose validation RMSE sits closest to the median; drives the
// single-curve CSV artifacts.
std::size_t representative_seed_index(const RunReport& report) {
    std::size_t best = 0;
    double best_d = std::abs(report.seeds[0].rmse_val - report.median.rmse_val);
    for (std::size_t i = 1; i < report.seeds.size(); ++i) {
        double d = std::abs(report.seeds[i].rmse_val - report.median.rmse_val);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace

void emit_artifacts(const RunReport& report, const std::string& dir) {
    if (report.seeds.empty()) throw ConfigError("cannot emit artifacts for an empty report");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());

    json j;
    j["config"] = json{{"case", case_name(report.config.case_id)},
                       {"method", method_name(report.config.method)},
                       {"seeds", report.config.seeds},
                       {"mh_placement",
                        report.config.mh_placement == Placement::Grid ? "grid" : "random"},
                       {"method_config", method_config_to_json(report.config)}};
    j["median"] = json{{"rmse_train", report.median.rmse_train},
                       {"r2_train", report.median.r2_train},
                       {"rmse_val", report.median.rmse_val},
                       {"r2_val", report.median.r2_val}};
    json seeds = json::array();
    for (const auto& sr : report.seeds) {
        json s{{"seed", sr.seed},
               {"rmse_train", sr.rmse_train},
               {"r2_train", sr.r2_train},
               {"rmse_val", sr.rmse_val},
               {"r2_val", sr.r2_val},
               {"val_curve", curve_to_json(sr.val_curve)},
               {"final_params", sr.final_params}};
        if (!sr.loss_history.empty()) s["loss_history"] = sr.loss_history;
        if (!sr.trace.empty()) s["trace"] = trace_to_json(sr.trace);
        if (!sr.iterations.empty()) {
            json iters = json::array();
            for (const auto& it : sr.iterations) {
                iters.push_back(json{{"iteration", it.iteration},
                                     {"rmse_train", it.rmse_train},
                                     {"r2_train", it.r2_train},
                                     {"rmse_val", it.rmse_val},
                                     {"r2_val", it.r2_val},
                                     {"static_val_rmse", it.static_val_rmse},
                                     {"static_val_r2", it.static_val_r2},
                                     {"param_mean", it.param_mean},
                                     {"param_std", it.param_std},
                                     {"val_curve", curve_to_json(it.val_curve)},
                                     {"member_val_curves", it.member_val_curves}});
            }
            s["iterations"] = iters;
        }
        seeds.push_back(std::move(s));
    }
    j["seeds"] = std::move(seeds);
    write_file(fs::path(dir) / "report.json", j.dump(1) + "\n");

    const SeedResult& rep = report.seeds[representative_seed_index(report)];
    {
        std::ostringstream csv;
        csv << "x,y_true,y_mean,band_min,band_max\n";
        for (std::size_t k = 0; k < rep.val_curve.size(); ++k) {
            csv << fmt(rep.val_curve.xs[k]) << ',' << fmt(rep.val_curve.y_true[k]) << ','
                << fmt(rep.val_curve.y_mean[k]) << ',' << fmt(rep.val_curve.band_min[k]) << ','
                << fmt(rep.val_curve.band_max[k]) << '\n';
        }
        write_file(fs::path(dir) / "predictions.csv", csv.str());
    }
    {
        std::ostringstream csv;
        csv << "step,param_index,mean,std\n";
        for (const auto& rec : rep.trace) {
            for (std::size_t i = 0; i < rec.param_mean.size(); ++i) {
                csv << rec.step << ',' << i << ',' << fmt(rec.param_mean[i]) << ','
                    << fmt(rec.param_std[i]) << '\n';
            }
        }
        write_file(fs::path(dir) / "params_trace.csv", csv.str());
    }
    {
        std::ostringstream csv;
        csv << "seed,rmse_train,r2_train,rmse_val,r2_val\n";
        for (const auto& sr : report.seeds) {
            csv << sr.seed << ',' << fmt(sr.rmse_train) << ',' << fmt(sr.r2_train) << ','
                << fmt(sr.rmse_val) << ',' << fmt(sr.r2_val) << '\n';
        }
        csv << "median," << fmt(report.median.rmse_train) << ',' << fmt(report.median.r2_train)
            << ',' << fmt(report.median.rmse_val) << ',' << fmt(report.median.r2_val) << '\n';
        write_file(fs::path(dir) / "metrics.csv", csv.str());
    }
    {
        std::ostringstream txt;
        double total = 0.0;
        for (const auto& sr : report.seeds) {
            txt << "seed " << sr.seed << ' ' << sr.wall_ms << " ms\n";
            total += sr.wall_ms;
        }
        txt << "total " << total << " ms\n";
        write_file(fs::path(dir) / "timing.txt", txt.str());
    }
}

std::string reproduce_paper(const std::string& out_root) {
    std::ostringstream summary;
    char line[160];
    std::snprintf(line, sizeof line, "%-13s %-7s %-12s %10s %10s\n", "case", "method",
                  "iteration", "rmse_val", "r2_val");
    summary << line;
    for (CaseId case_id : {CaseId::Sine, CaseId::MexicanHat}) {
        for (Method method : {Method::Gd, Method::Enkf, Method::Esmda}) {
            RunConfig config;
            config.case_id = case_id;
            config.method = method;
            config.out_dir =
                out_root + "/" + case_name(case_id) + "-" + method_name(method);
            const RunReport report = run_experiment(config);
            if (method == Method::Esmda) {
                for (int it = 1; it <= config.esmda.n_i; ++it) {
                    std::vector<double> r2s;
                    for (const auto& sr : report.seeds) {
                        r2s.push_back(sr.iterations[it - 1].r2_val);
                    }
                    std::snprintf(line, sizeof line, "%-13s %-7s %-12d %10.4f %10.4f\n",
                                  case_name(case_id).c_str(), method_name(method).c_str(), it,
                                  iteration_median_rmse_val(report, it), median(r2s));
                    summary << line;
                }
            } else {
                std::snprintf(line, sizeof line, "%-13s %-7s %-12s %10.4f %10.4f\n",
                              case_name(case_id).c_str(), method_name(method).c_str(), "-",
                              report.median.rmse_val, report.median.r2_val);
                summary << line;
            }
        }
    }
    write_file(fs::path(out_root) / "summary.txt", summary.str());
    return summary.str();
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value for " + key + ": " + value);
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer value for " + key + ": " + value);
    }
}

MaskKind parse_mask(const std::string& key, const std::string& value) {
    if (value == "b2") return MaskKind::B2;
    if (value == "w2b2") return MaskKind::W2B2;
    if (value == "all") return MaskKind::All;
    throw ConfigError("invalid mask for " + key + ": " + value + " (expected b2, w2b2 or all)");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("malformed config line " + std::to_string(lineno) + ": " + stripped);
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key == "gd.learning_rate") {
            config.gd.learning_rate = parse_double(key, value);
        } else if (key == "gd.epochs") {
            config.gd.epochs = parse_long(key, value);
        } else if (key == "gd.init_std") {
            config.gd.init_std = parse_double(key, value);
        } else if (key == "gd.trainable") {
            config.gd.trainable = parse_mask(key, value);
        } else if (key == "enkf.n_e") {
            config.enkf.n_e = static_cast<int>(parse_long(key, value));
        } else if (key == "enkf.prior_std") {
            config.enkf.prior_std = parse_double(key, value);
        } else if (key == "enkf.obs_var") {
            config.enkf.obs_var = parse_double(key, value);
        } else if (key == "enkf.process_noise_var") {
            config.enkf.process_noise_var = parse_double(key, value);
        } else if (key == "enkf.passes") {
            config.enkf.passes = static_cast<int>(parse_long(key, value));
        } else if (key == "enkf.init_std") {
            config.enkf.init_std = parse_double(key, value);
        } else if (key == "enkf.trainable") {
            config.enkf.trainable = parse_mask(key, value);
        } else if (key == "esmda.n_i") {
            config.esmda.n_i = static_cast<int>(parse_long(key, value));
            if (static_cast<int>(config.esmda.alpha.size()) != config.esmda.n_i) {
                config.esmda.alpha = make_alpha_schedule(config.esmda.n_i);
            }
        } else if (key == "esmda.n_e") {
            config.esmda.n_e = static_cast<int>(parse_long(key, value));
        } else if (key == "esmda.alpha") {
            config.esmda.alpha = parse_double_list(key, value);
            config.esmda.n_i = static_cast<int>(config.esmda.alpha.size());
        } else if (key == "esmda.prior_std") {
            config.esmda.prior_std = parse_double(key, value);
        } else if (key == "esmda.obs_var") {
            config.esmda.obs_var = parse_double(key, value);
        } else if (key == "esmda.process_noise_var") {
            config.esmda.process_noise_var = parse_double(key, value);
        } else if (key == "esmda.init_std") {
            config.esmda.init_std = parse_double(key, value);
        } else if (key == "esmda.trainable") {
            config.esmda.trainable = parse_mask(key, value);
        } else if (key == "esmda.update_mode") {
            if (value == "sequential") {
                config.esmda.update_mode = UpdateMode::Sequential;
            } else if (value == "simultaneous") {
                config.esmda.update_mode = UpdateMode::Simultaneous;
            } else {
                throw ConfigError("invalid update_mode: " + value);
            }
        } else if (key == "esmda.gain_noise_scaling") {
            if (value == "alpha") {
                config.esmda.gain_noise_scaling = GainNoiseScaling::Alpha;
            } else if (value == "sqrt_alpha") {
                config.esmda.gain_noise_scaling = GainNoiseScaling::SqrtAlpha;
            } else {
                throw ConfigError("invalid gain_noise_scaling: " + value);
            }
        } else if (key == "mh_placement") {
            if (value == "grid") {
                config.mh_placement = Placement::Grid;
            } else if (value == "random") {
                config.mh_placement = Placement::Random;
            } else {
                throw ConfigError("invalid mh_placement: " + value);
            }
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
}

} // namespace dafnn
