#include "dafnn/gd.hpp"

#include <cmath>
#include <string>

#include "dafnn/errors.hpp"

namespace dafnn {

void GdConfig::validate() const {
    if (learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
    if (epochs < 1) throw ConfigError("epochs must be at least 1");
    if (init_std < 0.0) throw ConfigError("init_std must be nonnegative");
}

double mse_loss(const std::vector<std::vector<double>>& predictions,
                const std::vector<std::vector<double>>& targets) {
    if (predictions.empty() || predictions.size() != targets.size()) {
        throw DimensionError("mse_loss: lists must be nonempty and equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i].size() != targets[i].size()) {
            throw DimensionError("mse_loss: output dimension mismatch at sample " + std::to_string(i));
        }
        for (std::size_t k = 0; k < predictions[i].size(); ++k) {
            double d = predictions[i][k] - targets[i][k];
            sum += d * d;
        }
    }
    return sum / static_cast<double>(predictions.size());
}

namespace {

// Fused forward/backward over the whole dataset; returns the MSE loss and
// writes the gradient into grad (already sized and zeroed).
double loss_and_grad(const NetworkSpec& spec, const ParameterVector& params,
                     const Dataset& data, ParameterVector& grad) {
    const int nh = spec.n_hidden;
    const double* w1 = params.data() + spec.w1_offset();
    const double* w2 = params.data() + spec.w2_offset();
    const double* b2 = params.data() + spec.b2_offset();
    double* gw1 = grad.data() + spec.w1_offset();
    double* gw2 = grad.data() + spec.w2_offset();
    double* gb2 = grad.data() + spec.b2_offset();

    const double n = static_cast<double>(data.size());
    std::vector<double> h(nh);
    double loss = 0.0;
    for (std::size_t s = 0; s < data.size(); ++s) {
        const double x = data.xs[s];
        for (int j = 0; j < nh; ++j) {
            h[j] = activate(spec.hidden_activation, w1[j] * x + b2[j]);
        }
        double z = 0.0;
        for (int j = 0; j < nh; ++j) z += w2[j] * h[j];
        const double y = activate(spec.output_activation, z);
        const double e = y - data.ys[s];
        loss += e * e;

        const double dz = (2.0 / n) * e * activate_derivative(spec.output_activation, y);
        for (int j = 0; j < nh; ++j) {
            gw2[j] += dz * h[j];
            const double da = dz * w2[j] * activate_derivative(spec.hidden_activation, h[j]);
            gb2[j] += da;
            gw1[j] += da * x;
        }
    }
    return loss / n;
}

} // namespace

ParameterVector grad_mse(const NetworkSpec& spec, const ParameterVector& params,
                         const Dataset& data) {
    if (spec.n_input != 1 || spec.n_output != 1) {
        throw DimensionError("grad_mse requires a scalar-in scalar-out network");
    }
    if (static_cast<int>(params.size()) != spec.param_count()) {
        throw DimensionError("parameter vector size mismatch");
    }
    data.validate();
    ParameterVector grad(spec.param_count(), 0.0);
    loss_and_grad(spec, params, data, grad);
    return grad;
}

GdResult train_gd(const NetworkSpec& spec, const ParameterVector& init,
                  const Dataset& data, const GdConfig& config) {
    config.validate();
    data.validate();
    if (spec.n_input != 1 || spec.n_output != 1) {
        throw DimensionError("train_gd requires a scalar-in scalar-out network");
    }
    if (static_cast<int>(init.size()) != spec.param_count()) {
        throw DimensionError("initial parameter vector size mismatch");
    }
    const TrainableMask mask = make_mask(spec, config.trainable);
    const std::vector<int> idx = mask.indices();

    GdResult result;
    result.params = init;
    result.loss_history.reserve(config.epochs);
    ParameterVector grad(spec.param_count());
    for (long epoch = 0; epoch < config.epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        const double loss = loss_and_grad(spec, result.params, data, grad);
        if (!std::isfinite(loss)) {
            throw DivergenceError("training loss became non-finite at epoch " + std::to_string(epoch),
                                  epoch);
        }
        result.loss_history.push_back(loss);
        for (int i : idx) result.params[i] -= config.learning_rate * grad[i];
        if (epoch % 100 == 0 || epoch == config.epochs - 1) {
            result.snapshots.emplace_back(epoch, result.params);
        }
    }
    return result;
}

} // namespace dafnn
