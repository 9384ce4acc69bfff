#include "dafnn/ensemble.hpp"

#include <cmath>

#include "dafnn/errors.hpp"

namespace dafnn {

void Ensemble::validate() const {
    if (members.size() < 2) {
        throw ConfigError("ensemble needs at least 2 members");
    }
    for (const auto& m : members) {
        if (m.size() != members.front().size()) {
            throw DimensionError("ensemble members must share one parameter layout");
        }
    }
}

Ensemble init_ensemble(const NetworkSpec& spec, const ParameterVector& base, int n_e,
                       double prior_std, const TrainableMask& mask, Rng& rng) {
    if (n_e < 2) throw ConfigError("ensemble size must be at least 2");
    if (prior_std < 0.0) throw ConfigError("prior_std must be nonnegative");
    if (static_cast<int>(base.size()) != spec.param_count()) {
        throw DimensionError("base parameter vector size mismatch");
    }
    mask.validate(spec);
    const std::vector<int> idx = mask.indices();
    Ensemble e;
    e.members.assign(n_e, base);
    for (auto& member : e.members) {
        for (int i : idx) member[i] += prior_std * rng.normal();
    }
    return e;
}

ParameterVector ensemble_mean(const Ensemble& e) {
    e.validate();
    const std::size_t p = e.members.front().size();
    ParameterVector mean(p, 0.0);
    for (const auto& m : e.members) {
        for (std::size_t c = 0; c < p; ++c) mean[c] += m[c];
    }
    for (auto& v : mean) v /= static_cast<double>(e.size());
    return mean;
}

ParameterVector ensemble_std(const Ensemble& e) {
    e.validate();
    const ParameterVector mean = ensemble_mean(e);
    const std::size_t p = mean.size();
    ParameterVector var(p, 0.0);
    for (const auto& m : e.members) {
        for (std::size_t c = 0; c < p; ++c) {
            double d = m[c] - mean[c];
            var[c] += d * d;
        }
    }
    ParameterVector sd(p);
    for (std::size_t c = 0; c < p; ++c) {
        sd[c] = std::sqrt(var[c] / static_cast<double>(e.size() - 1));
    }
    return sd;
}

void add_process_noise(Ensemble& e, double var, const std::vector<int>& indices, Rng& rng) {
    if (var < 0.0) throw ConfigError("process noise variance must be nonnegative");
    if (var == 0.0) return;
    const double sd = std::sqrt(var);
    for (auto& member : e.members) {
        for (int i : indices) member[i] += sd * rng.normal();
    }
}

std::vector<double> ensemble_predict(const NetworkSpec& spec, const Ensemble& e, double x) {
    const int n_e = e.size();
    std::vector<double> out(n_e);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n_e; ++i) {
        out[i] = forward1(spec, e.members[i], x);
    }
    return out;
}

std::vector<double> ensemble_predict_serial(const NetworkSpec& spec, const Ensemble& e, double x) {
    const int n_e = e.size();
    std::vector<double> out(n_e);
    for (int i = 0; i < n_e; ++i) {
        out[i] = forward1(spec, e.members[i], x);
    }
    return out;
}

std::vector<std::vector<double>> ensemble_predict_curve(const NetworkSpec& spec,
                                                        const Ensemble& e,
                                                        const std::vector<double>& xs) {
    const int n_e = e.size();
    std::vector<std::vector<double>> out(n_e);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n_e; ++i) {
        std::vector<double> row(xs.size());
        for (std::size_t k = 0; k < xs.size(); ++k) {
            row[k] = forward1(spec, e.members[i], xs[k]);
        }
        out[i] = std::move(row);
    }
    return out;
}

std::vector<std::vector<double>> ensemble_predict_curve_serial(const NetworkSpec& spec,
                                                               const Ensemble& e,
                                                               const std::vector<double>& xs) {
    const int n_e = e.size();
    std::vector<std::vector<double>> out(n_e);
    for (int i = 0; i < n_e; ++i) {
        std::vector<double> row(xs.size());
        for (std::size_t k = 0; k < xs.size(); ++k) {
            row[k] = forward1(spec, e.members[i], xs[k]);
        }
        out[i] = std::move(row);
    }
    return out;
}

} // namespace dafnn
