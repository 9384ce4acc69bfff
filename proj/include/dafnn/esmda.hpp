#pragma once

#include <vector>

#include "dafnn/dataset.hpp"
#include "dafnn/enkf.hpp"
#include "dafnn/ensemble.hpp"
#include "dafnn/network.hpp"
#include "dafnn/rng.hpp"

namespace dafnn {

// Sequential sweeps assimilate one observation at a time in dataset order;
// Simultaneous stacks the whole batch into one update per iteration.
enum class UpdateMode { Sequential, Simultaneous };

// How the inflation enters the gain denominator. Alpha uses alpha*R, which is
// exact for linear-Gaussian chains; SqrtAlpha uses sqrt(alpha)*R and is kept
// for comparison. Perturbed observations carry noise of variance alpha*R in
// both modes.
enum class GainNoiseScaling { Alpha, SqrtAlpha };

struct EsmdaConfig {
    int n_i = 3;
    int n_e = 50;
    std::vector<double> alpha = {3.0, 3.0, 3.0};
    double prior_std = 0.31622776601683794;  // sqrt(0.1)
    double obs_var = 0.004;
    double process_noise_var = 1e-3;
    double init_std = 1.5;
    MaskKind trainable = MaskKind::W2B2;
    UpdateMode update_mode = UpdateMode::Sequential;
    GainNoiseScaling gain_noise_scaling = GainNoiseScaling::Alpha;

    // Requires n_i == alpha.size(), every alpha > 0, and sum(1/alpha) == 1
    // within 1e-12. Throws ConfigError otherwise.
    void validate() const;
};

// n_i equal coefficients alpha_i = n_i, so sum(1/alpha_i) = 1 exactly.
std::vector<double> make_alpha_schedule(int n_i);

// Metrics for one assimilation iteration. rmse_train/rmse_val come from the
// online record (each point scored where it was assimilated during the sweep);
// static_val_* re-evaluate the post-sweep ensemble over the validation grid.
struct IterationReport {
    int iteration = 0;
    double rmse_train = 0.0;
    double r2_train = 0.0;
    double rmse_val = 0.0;
    double r2_val = 0.0;
    double static_val_rmse = 0.0;
    double static_val_r2 = 0.0;
    std::vector<double> param_mean;
    std::vector<double> param_std;
    OnlineCurve val_curve;
    std::vector<std::vector<double>> member_val_curves;
};

struct EsmdaResult {
    Ensemble ensemble;
    std::vector<IterationReport> iterations;
    AssimilationTrace trace;
};

EsmdaResult train_esmda(const NetworkSpec& spec, const ParameterVector& base,
                        const Dataset& train, const Dataset& validation,
                        const EsmdaConfig& config, uint64_t seed);

} // namespace dafnn
