#pragma once

#include <vector>

#include "dafnn/network.hpp"
#include "dafnn/rng.hpp"

namespace dafnn {

struct Ensemble {
    std::vector<ParameterVector> members;

    int size() const { return static_cast<int>(members.size()); }
    void validate() const;  // >= 2 members, equal lengths
};

// Each member = base + N(0, prior_std^2) on trainable coordinates only.
Ensemble init_ensemble(const NetworkSpec& spec, const ParameterVector& base, int n_e,
                       double prior_std, const TrainableMask& mask, Rng& rng);

ParameterVector ensemble_mean(const Ensemble& e);
ParameterVector ensemble_std(const Ensemble& e);

// Forecast step for parameter persistence: adds N(0, var) to the listed
// coordinates of every member. var = 0 is the identity.
void add_process_noise(Ensemble& e, double var, const std::vector<int>& indices, Rng& rng);

// Per-member prediction at one input. The parallel kernel writes one slot per
// member and takes no locks, so it is bit-identical to the serial reference.
std::vector<double> ensemble_predict(const NetworkSpec& spec, const Ensemble& e, double x);
std::vector<double> ensemble_predict_serial(const NetworkSpec& spec, const Ensemble& e, double x);

// Per-member curves over a grid; result[i][k] = member i at xs[k].
std::vector<std::vector<double>> ensemble_predict_curve(const NetworkSpec& spec,
                                                        const Ensemble& e,
                                                        const std::vector<double>& xs);
std::vector<std::vector<double>> ensemble_predict_curve_serial(const NetworkSpec& spec,
                                                               const Ensemble& e,
                                                               const std::vector<double>& xs);

} // namespace dafnn
