#include "dafnn/esmda.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dafnn/errors.hpp"
#include "dafnn/metrics.hpp"

namespace dafnn {

std::vector<double> make_alpha_schedule(int n_i) {
    if (n_i < 1) throw ConfigError("n_i must be at least 1");
    return std::vector<double>(n_i, static_cast<double>(n_i));
}

void EsmdaConfig::validate() const {
    if (n_i < 1) throw ConfigError("n_i must be at least 1");
    if (n_e < 2) throw ConfigError("n_e must be at least 2");
    if (obs_var <= 0.0) throw ConfigError("obs_var must be positive");
    if (process_noise_var < 0.0) throw ConfigError("process_noise_var must be nonnegative");
    if (prior_std < 0.0) throw ConfigError("prior_std must be nonnegative");
    if (init_std < 0.0) throw ConfigError("init_std must be nonnegative");
    if (static_cast<int>(alpha.size()) != n_i) {
        throw ConfigError("alpha schedule length must equal n_i");
    }
    double inv_sum = 0.0;
    for (double a : alpha) {
        if (a <= 0.0) throw ConfigError("alpha coefficients must be positive");
        inv_sum += 1.0 / a;
    }
    if (std::abs(inv_sum - 1.0) > 1e-12) {
        throw ConfigError("alpha schedule must satisfy sum(1/alpha) = 1, got " +
                          std::to_string(inv_sum));
    }
}

namespace {

struct CurveStats {
    double mean;
    double min;
    double max;
};

CurveStats member_stats(const std::vector<double>& values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    double mean = 0.0;
    for (double v : values) mean += v;
    return {mean / static_cast<double>(values.size()), *lo, *hi};
}

} // namespace

EsmdaResult train_esmda(const NetworkSpec& spec, const ParameterVector& base,
                        const Dataset& train, const Dataset& validation,
                        const EsmdaConfig& config, uint64_t seed) {
    config.validate();
    train.validate();
    validation.validate();
    const TrainableMask mask = make_mask(spec, config.trainable);
    const std::vector<int> idx = mask.indices();

    Rng rng_init(seed, Stream::EnsembleInit);
    Rng rng_obs(seed, Stream::ObsPerturb);
    Rng rng_noise(seed, Stream::ProcessNoise);

    EsmdaResult result;
    result.ensemble = init_ensemble(spec, base, config.n_e, config.prior_std, mask, rng_init);
    Ensemble& e = result.ensemble;

    std::vector<std::vector<std::size_t>> slot_points(train.size());
    for (std::size_t k = 0; k < validation.size(); ++k) {
        slot_points[nearest_index(train.xs, validation.xs[k])].push_back(k);
    }

    int step = 0;
    for (int it = 0; it < config.n_i; ++it) {
        const double alpha = config.alpha[it];
        const double pert_var = alpha * config.obs_var;
        const double inflation =
            config.gain_noise_scaling == GainNoiseScaling::Alpha ? alpha : std::sqrt(alpha);

        IterationReport report;
        report.iteration = it + 1;

        if (config.update_mode == UpdateMode::Sequential) {
            OnlineCurve train_curve;
            OnlineCurve val_curve;
            for (std::size_t t = 0; t < train.size(); ++t, ++step) {
                add_process_noise(e, config.process_noise_var, idx, rng_noise);
                const std::vector<double> f = ensemble_predict(spec, e, train.xs[t]);
                const std::vector<double> d =
                    perturb_observation(train.ys[t], pert_var, config.n_e, rng_obs);
                analysis_update_scalar(e, f, d, config.obs_var, inflation);

                TraceRecord rec;
                rec.step = step;
                rec.x = train.xs[t];
                rec.y_obs = train.ys[t];
                const ParameterVector mean = ensemble_mean(e);
                const ParameterVector sd = ensemble_std(e);
                for (int i : idx) {
                    rec.param_mean.push_back(mean[i]);
                    rec.param_std.push_back(sd[i]);
                }
                result.trace.push_back(std::move(rec));

                const CurveStats post = member_stats(ensemble_predict(spec, e, train.xs[t]));
                train_curve.xs.push_back(train.xs[t]);
                train_curve.y_true.push_back(train.ys[t]);
                train_curve.y_mean.push_back(post.mean);
                train_curve.band_min.push_back(post.min);
                train_curve.band_max.push_back(post.max);
                for (std::size_t k : slot_points[t]) {
                    const CurveStats vp = member_stats(ensemble_predict(spec, e, validation.xs[k]));
                    val_curve.xs.push_back(validation.xs[k]);
                    val_curve.y_true.push_back(validation.ys[k]);
                    val_curve.y_mean.push_back(vp.mean);
                    val_curve.band_min.push_back(vp.min);
                    val_curve.band_max.push_back(vp.max);
                }
            }
            report.rmse_train = rmse(train_curve.y_mean, train_curve.y_true);
            report.r2_train = r_squared(train_curve.y_mean, train_curve.y_true);
            report.rmse_val = rmse(val_curve.y_mean, val_curve.y_true);
            report.r2_val = r_squared(val_curve.y_mean, val_curve.y_true);
            report.val_curve = std::move(val_curve);
        } else {
            add_process_noise(e, config.process_noise_var, idx, rng_noise);
            const std::vector<std::vector<double>> preds =
                ensemble_predict_curve(spec, e, train.xs);
            const double sd = std::sqrt(pert_var);
            std::vector<std::vector<double>> perturbed(config.n_e);
            for (int i = 0; i < config.n_e; ++i) {
                perturbed[i].reserve(train.size());
                for (std::size_t k = 0; k < train.size(); ++k) {
                    perturbed[i].push_back(train.ys[k] + sd * rng_obs.normal());
                }
            }
            analysis_update(e, preds, perturbed, config.obs_var, inflation);
            ++step;

            TraceRecord rec;
            rec.step = it;
            const ParameterVector mean = ensemble_mean(e);
            const ParameterVector stdv = ensemble_std(e);
            for (int i : idx) {
                rec.param_mean.push_back(mean[i]);
                rec.param_std.push_back(stdv[i]);
            }
            result.trace.push_back(std::move(rec));
        }

        // Post-sweep static evaluation over the validation grid.
        const std::vector<std::vector<double>> curves =
            ensemble_predict_curve(spec, e, validation.xs);
        std::vector<double> mean_curve(validation.size(), 0.0);
        for (const auto& row : curves) {
            for (std::size_t k = 0; k < validation.size(); ++k) mean_curve[k] += row[k];
        }
        for (auto& v : mean_curve) v /= static_cast<double>(config.n_e);
        report.static_val_rmse = rmse(mean_curve, validation.ys);
        report.static_val_r2 = r_squared(mean_curve, validation.ys);
        report.member_val_curves = curves;

        if (config.update_mode == UpdateMode::Simultaneous) {
            OnlineCurve vc;
            vc.xs = validation.xs;
            vc.y_true = validation.ys;
            vc.y_mean = mean_curve;
            vc.band_min.assign(validation.size(), 0.0);
            vc.band_max.assign(validation.size(), 0.0);
            for (std::size_t k = 0; k < validation.size(); ++k) {
                double lo = curves.front()[k];
                double hi = curves.front()[k];
                for (const auto& row : curves) {
                    lo = std::min(lo, row[k]);
                    hi = std::max(hi, row[k]);
                }
                vc.band_min[k] = lo;
                vc.band_max[k] = hi;
            }
            report.val_curve = std::move(vc);
            report.rmse_val = report.static_val_rmse;
            report.r2_val = report.static_val_r2;
            // Training metrics come from the static mean over the training grid.
            const std::vector<std::vector<double>> tcurves =
                ensemble_predict_curve(spec, e, train.xs);
            std::vector<double> tmean(train.size(), 0.0);
            for (const auto& row : tcurves) {
                for (std::size_t k = 0; k < train.size(); ++k) tmean[k] += row[k];
            }
            for (auto& v : tmean) v /= static_cast<double>(config.n_e);
            report.rmse_train = rmse(tmean, train.ys);
            report.r2_train = r_squared(tmean, train.ys);
        }

        const ParameterVector mean = ensemble_mean(e);
        const ParameterVector stdv = ensemble_std(e);
        for (int i : idx) {
            report.param_mean.push_back(mean[i]);
            report.param_std.push_back(stdv[i]);
        }
        result.iterations.push_back(std::move(report));
    }
    return result;
}

} // namespace dafnn
