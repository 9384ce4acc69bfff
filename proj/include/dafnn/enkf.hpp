#pragma once

#include <vector>

#include "dafnn/dataset.hpp"
#include "dafnn/ensemble.hpp"
#include "dafnn/network.hpp"
#include "dafnn/rng.hpp"

namespace dafnn {

struct EnkfConfig {
    int n_e = 50;
    double prior_std = 0.31622776601683794;  // sqrt(0.1)
    double obs_var = 0.005;
    double process_noise_var = 1e-3;
    int passes = 1;
    double init_std = 0.5;
    MaskKind trainable = MaskKind::W2B2;

    void validate() const;
};

// One analysis step: which observation was assimilated and the parameter
// statistics right after the update (trainable coordinates only).
struct TraceRecord {
    int step = 0;
    double x = 0.0;
    double y_obs = 0.0;
    std::vector<double> param_mean;
    std::vector<double> param_std;
};

using AssimilationTrace = std::vector<TraceRecord>;

// Predictions recorded online, each at the step where its x was assimilated.
struct OnlineCurve {
    std::vector<double> xs;
    std::vector<double> y_true;
    std::vector<double> y_mean;
    std::vector<double> band_min;
    std::vector<double> band_max;

    std::size_t size() const { return xs.size(); }
};

struct EnkfResult {
    Ensemble ensemble;
    AssimilationTrace trace;
    OnlineCurve train_curve;
    OnlineCurve val_curve;
};

// n_e draws of y + N(0, obs_var).
std::vector<double> perturb_observation(double y, double obs_var, int n_e, Rng& rng);

// Scalar-observation analysis: K = C_py / (C_yy + inflation * obs_var) with
// 1/(n_e - 1) covariance normalization, applied to every parameter coordinate.
void analysis_update_scalar(Ensemble& e, const std::vector<double>& predictions,
                            const std::vector<double>& perturbed_obs, double obs_var,
                            double inflation = 1.0);

// Multi-observation analysis. predictions[i] holds member i's predicted vector,
// perturbed_obs[i] the matching perturbed data vector. Solves the
// (C_yy + inflation * obs_var * I) system with a Cholesky factorization.
void analysis_update(Ensemble& e, const std::vector<std::vector<double>>& predictions,
                     const std::vector<std::vector<double>>& perturbed_obs, double obs_var,
                     double inflation = 1.0);

// Online training: one forecast/analysis cycle per observation in order.
// Validation predictions are recorded at the step whose training x is nearest.
EnkfResult train_enkf(const NetworkSpec& spec, const ParameterVector& base,
                      const Dataset& train, const Dataset& validation,
                      const EnkfConfig& config, uint64_t seed);

} // namespace dafnn
