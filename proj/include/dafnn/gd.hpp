#pragma once

#include <utility>
#include <vector>

#include "dafnn/dataset.hpp"
#include "dafnn/network.hpp"

namespace dafnn {

struct GdConfig {
    double learning_rate = 0.12;
    long epochs = 10000;
    double init_std = 0.5;
    MaskKind trainable = MaskKind::All;

    void validate() const;  // learning_rate > 0, epochs >= 1
};

struct GdResult {
    ParameterVector params;
    std::vector<double> loss_history;  // one entry per epoch, pre-update loss
    // Post-update parameter snapshots every 100 epochs plus the final epoch.
    std::vector<std::pair<long, ParameterVector>> snapshots;
};

// Mean squared error over aligned prediction/target lists.
double mse_loss(const std::vector<std::vector<double>>& predictions,
                const std::vector<std::vector<double>>& targets);

// Full-batch MSE gradient via backpropagation, in parameter layout order.
ParameterVector grad_mse(const NetworkSpec& spec, const ParameterVector& params,
                         const Dataset& data);

// Full-batch gradient descent. Only masked parameters move. Throws
// DivergenceError with the epoch index if the loss becomes non-finite.
GdResult train_gd(const NetworkSpec& spec, const ParameterVector& init,
                  const Dataset& data, const GdConfig& config);

} // namespace dafnn
