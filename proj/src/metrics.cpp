#include "dafnn/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "dafnn/errors.hpp"

namespace dafnn {

double rmse(const std::vector<double>& model, const std::vector<double>& obs) {
    if (model.empty() || model.size() != obs.size()) {
        throw DimensionError("rmse: inputs must be nonempty and equal length");
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        double d = model[i] - obs[i];
        sse += d * d;
    }
    return std::sqrt(sse / static_cast<double>(model.size()));
}

double r_squared(const std::vector<double>& model, const std::vector<double>& obs) {
    if (model.empty() || model.size() != obs.size()) {
        throw DimensionError("r_squared: inputs must be nonempty and equal length");
    }
    double mean = 0.0;
    for (double o : obs) mean += o;
    mean /= static_cast<double>(obs.size());
    double sse = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        double r = obs[i] - model[i];
        double d = obs[i] - mean;
        sse += r * r;
        ss_tot += d * d;
    }
    if (ss_tot == 0.0) {
        throw Error("r_squared: observations are constant, denominator is zero");
    }
    return 1.0 - sse / ss_tot;
}

double median(std::vector<double> values) {
    if (values.empty()) throw DimensionError("median: empty input");
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace dafnn
