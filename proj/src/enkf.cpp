#include "dafnn/enkf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "dafnn/errors.hpp"

namespace dafnn {

void EnkfConfig::validate() const {
    if (n_e < 2) throw ConfigError("n_e must be at least 2");
    if (obs_var <= 0.0) throw ConfigError("obs_var must be positive");
    if (process_noise_var < 0.0) throw ConfigError("process_noise_var must be nonnegative");
    if (passes < 1) throw ConfigError("passes must be at least 1");
    if (prior_std < 0.0) throw ConfigError("prior_std must be nonnegative");
    if (init_std < 0.0) throw ConfigError("init_std must be nonnegative");
}

std::vector<double> perturb_observation(double y, double obs_var, int n_e, Rng& rng) {
    if (obs_var <= 0.0) throw ConfigError("obs_var must be positive");
    if (n_e < 1) throw ConfigError("n_e must be positive");
    const double sd = std::sqrt(obs_var);
    std::vector<double> out(n_e);
    for (auto& v : out) v = y + sd * rng.normal();
    return out;
}

namespace {

bool all_equal(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

} // namespace

void analysis_update_scalar(Ensemble& e, const std::vector<double>& predictions,
                            const std::vector<double>& perturbed_obs, double obs_var,
                            double inflation) {
    e.validate();
    const int n_e = e.size();
    if (static_cast<int>(predictions.size()) != n_e ||
        static_cast<int>(perturbed_obs.size()) != n_e) {
        throw DimensionError("predictions and perturbed observations must match ensemble size");
    }
    if (obs_var <= 0.0 || inflation <= 0.0) {
        throw ConfigError("obs_var and inflation must be positive");
    }
    // Constant predictions mean zero prediction variance, hence exactly zero
    // gain; skip so the identity holds bit-for-bit.
    if (all_equal(predictions)) return;

    double fbar = 0.0;
    for (double f : predictions) fbar += f;
    fbar /= n_e;
    std::vector<double> fdev(n_e);
    double cyy = 0.0;
    for (int i = 0; i < n_e; ++i) {
        fdev[i] = predictions[i] - fbar;
        cyy += fdev[i] * fdev[i];
    }
    cyy /= n_e - 1;
    const double denom = cyy + inflation * obs_var;

    const std::size_t p = e.members.front().size();
    const ParameterVector mean = ensemble_mean(e);
    ParameterVector gain(p, 0.0);
    for (std::size_t c = 0; c < p; ++c) {
        double cxy = 0.0;
        for (int i = 0; i < n_e; ++i) {
            cxy += (e.members[i][c] - mean[c]) * fdev[i];
        }
        gain[c] = cxy / (n_e - 1) / denom;
    }
    for (int i = 0; i < n_e; ++i) {
        const double innovation = perturbed_obs[i] - predictions[i];
        for (std::size_t c = 0; c < p; ++c) {
            e.members[i][c] += gain[c] * innovation;
        }
    }
}

void analysis_update(Ensemble& e, const std::vector<std::vector<double>>& predictions,
                     const std::vector<std::vector<double>>& perturbed_obs, double obs_var,
                     double inflation) {
    e.validate();
    const int n_e = e.size();
    if (static_cast<int>(predictions.size()) != n_e ||
        static_cast<int>(perturbed_obs.size()) != n_e) {
        throw DimensionError("predictions and perturbed observations must match ensemble size");
    }
    const std::size_t n_obs = predictions.front().size();
    if (n_obs == 0) throw DimensionError("empty observation vector");
    for (int i = 0; i < n_e; ++i) {
        if (predictions[i].size() != n_obs || perturbed_obs[i].size() != n_obs) {
            throw DimensionError("ragged prediction or observation vectors");
        }
    }
    if (obs_var <= 0.0 || inflation <= 0.0) {
        throw ConfigError("obs_var and inflation must be positive");
    }
    bool degenerate = true;
    for (int i = 1; i < n_e && degenerate; ++i) {
        degenerate = predictions[i] == predictions.front();
    }
    if (degenerate) return;

    const std::size_t p = e.members.front().size();
    Eigen::MatrixXd a(p, n_e);   // parameter deviations
    Eigen::MatrixXd y(n_obs, n_e);  // prediction deviations
    Eigen::MatrixXd d(n_obs, n_e);  // innovations
    ParameterVector mean = ensemble_mean(e);
    std::vector<double> fbar(n_obs, 0.0);
    for (int i = 0; i < n_e; ++i) {
        for (std::size_t k = 0; k < n_obs; ++k) fbar[k] += predictions[i][k];
    }
    for (auto& v : fbar) v /= n_e;
    for (int i = 0; i < n_e; ++i) {
        for (std::size_t c = 0; c < p; ++c) a(c, i) = e.members[i][c] - mean[c];
        for (std::size_t k = 0; k < n_obs; ++k) {
            y(k, i) = predictions[i][k] - fbar[k];
            d(k, i) = perturbed_obs[i][k] - predictions[i][k];
        }
    }
    Eigen::MatrixXd cyy = (y * y.transpose()) / static_cast<double>(n_e - 1);
    cyy.diagonal().array() += inflation * obs_var;
    Eigen::LLT<Eigen::MatrixXd> llt(cyy);
    if (llt.info() != Eigen::Success) {
        throw SolverError("Cholesky factorization of the innovation covariance failed");
    }
    Eigen::MatrixXd z = llt.solve(d);
    Eigen::MatrixXd w = (y.transpose() * z) / static_cast<double>(n_e - 1);
    Eigen::MatrixXd delta = a * w;
    for (int i = 0; i < n_e; ++i) {
        for (std::size_t c = 0; c < p; ++c) e.members[i][c] += delta(c, i);
    }
}

EnkfResult train_enkf(const NetworkSpec& spec, const ParameterVector& base,
                      const Dataset& train, const Dataset& validation,
                      const EnkfConfig& config, uint64_t seed) {
    config.validate();
    train.validate();
    validation.validate();
    const TrainableMask mask = make_mask(spec, config.trainable);
    const std::vector<int> idx = mask.indices();

    Rng rng_init(seed, Stream::EnsembleInit);
    Rng rng_obs(seed, Stream::ObsPerturb);
    Rng rng_noise(seed, Stream::ProcessNoise);

    EnkfResult result;
    result.ensemble = init_ensemble(spec, base, config.n_e, config.prior_std, mask, rng_init);
    Ensemble& e = result.ensemble;

    // Validation points are scored online at the step whose training input is
    // nearest; slots are grouped so each step records its own points.
    std::vector<std::vector<std::size_t>> slot_points(train.size());
    for (std::size_t k = 0; k < validation.size(); ++k) {
        slot_points[nearest_index(train.xs, validation.xs[k])].push_back(k);
    }

    int step = 0;
    for (int pass = 0; pass < config.passes; ++pass) {
        const bool record_curves = pass == config.passes - 1;
        for (std::size_t t = 0; t < train.size(); ++t, ++step) {
            add_process_noise(e, config.process_noise_var, idx, rng_noise);
            const std::vector<double> f = ensemble_predict(spec, e, train.xs[t]);
            const std::vector<double> d =
                perturb_observation(train.ys[t], config.obs_var, config.n_e, rng_obs);
            analysis_update_scalar(e, f, d, config.obs_var);

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

            if (!record_curves) continue;
            const std::vector<double> post = ensemble_predict(spec, e, train.xs[t]);
            const auto [pmin, pmax] = std::minmax_element(post.begin(), post.end());
            double pmean = 0.0;
            for (double v : post) pmean += v;
            result.train_curve.xs.push_back(train.xs[t]);
            result.train_curve.y_true.push_back(train.ys[t]);
            result.train_curve.y_mean.push_back(pmean / config.n_e);
            result.train_curve.band_min.push_back(*pmin);
            result.train_curve.band_max.push_back(*pmax);
            for (std::size_t k : slot_points[t]) {
                const std::vector<double> vp = ensemble_predict(spec, e, validation.xs[k]);
                const auto [vmin, vmax] = std::minmax_element(vp.begin(), vp.end());
                double vmean = 0.0;
                for (double v : vp) vmean += v;
                result.val_curve.xs.push_back(validation.xs[k]);
                result.val_curve.y_true.push_back(validation.ys[k]);
                result.val_curve.y_mean.push_back(vmean / config.n_e);
                result.val_curve.band_min.push_back(*vmin);
                result.val_curve.band_max.push_back(*vmax);
            }
        }
    }
    return result;
}

} // namespace dafnn
