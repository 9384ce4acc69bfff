#include "dafnn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dafnn/errors.hpp"
#include "dafnn/rng.hpp"

namespace dafnn {

void Dataset::validate() const {
    if (xs.empty() || xs.size() != ys.size()) {
        throw DimensionError("dataset " + name + ": inputs and targets must be nonempty and aligned");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) {
            throw ConfigError("dataset " + name + ": inputs must be strictly increasing");
        }
    }
}

double ricker(double t) {
    static const double c = 2.0 / (std::sqrt(3.0) * std::pow(std::numbers::pi, 0.25));
    return c * (1.0 - t * t) * std::exp(-0.5 * t * t);
}

CasePair gen_sine() {
    CasePair cp;
    cp.train.name = "sine-train";
    const double h_train = 0.01 * std::numbers::pi;
    for (int k = 0; k <= 200; ++k) {
        double x = h_train * k;
        cp.train.xs.push_back(x);
        cp.train.ys.push_back(std::sin(x));
    }
    cp.validation.name = "sine-validation";
    const double h_val = 0.1 * std::numbers::pi;
    for (int k = 0; k <= 20; ++k) {
        double x = h_val * k;
        cp.validation.xs.push_back(x);
        cp.validation.ys.push_back(std::sin(x));
    }
    cp.train.validate();
    cp.validation.validate();
    return cp;
}

CasePair gen_mexican_hat(Placement placement, std::uint64_t seed) {
    CasePair cp;
    cp.train.name = "mexican-hat-train";
    if (placement == Placement::Grid) {
        const double step = 10.0 / 199.0;
        for (int k = 0; k < 200; ++k) {
            cp.train.xs.push_back(k == 199 ? 5.0 : -5.0 + step * k);
        }
    } else {
        Rng rng(seed, Stream::DataSampling);
        for (int k = 0; k < 200; ++k) {
            cp.train.xs.push_back(-5.0 + 10.0 * rng.uniform());
        }
        std::sort(cp.train.xs.begin(), cp.train.xs.end());
    }
    for (double x : cp.train.xs) cp.train.ys.push_back(ricker(x));

    cp.validation.name = "mexican-hat-validation";
    const double step = 10.0 / 29.0;
    for (int k = 0; k < 30; ++k) {
        double x = k == 29 ? 5.0 : -5.0 + step * k;
        cp.validation.xs.push_back(x);
        cp.validation.ys.push_back(ricker(x));
    }
    cp.train.validate();
    cp.validation.validate();
    return cp;
}

std::size_t nearest_index(const std::vector<double>& grid, double x) {
    if (grid.empty()) throw DimensionError("nearest_index: empty grid");
    std::size_t best = 0;
    double best_d = std::abs(grid[0] - x);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double d = std::abs(grid[i] - x);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

} // namespace dafnn
