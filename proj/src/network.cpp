#include "dafnn/network.hpp"

#include <cmath>
#include <string>

#include "dafnn/errors.hpp"

namespace dafnn {

double activate(Activation a, double v) {
    switch (a) {
        case Activation::Tanh: return std::tanh(v);
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-v));
        case Activation::Identity: return v;
    }
    throw ConfigError("unknown activation");
}

double activate_derivative(Activation a, double activated) {
    switch (a) {
        case Activation::Tanh: return 1.0 - activated * activated;
        case Activation::Sigmoid: return activated * (1.0 - activated);
        case Activation::Identity: return 1.0;
    }
    throw ConfigError("unknown activation");
}

void NetworkSpec::validate() const {
    if (n_input < 1 || n_hidden < 1 || n_output < 1) {
        throw ConfigError("network dimensions must be positive");
    }
}

ParameterVector pack(const NetworkSpec& spec, const Segments& segments) {
    if (static_cast<int>(segments.w1.size()) != spec.w1_size() ||
        static_cast<int>(segments.w2.size()) != spec.w2_size() ||
        static_cast<int>(segments.b2.size()) != spec.b2_size()) {
        throw DimensionError("segment sizes do not match network spec");
    }
    ParameterVector params;
    params.reserve(spec.param_count());
    params.insert(params.end(), segments.w1.begin(), segments.w1.end());
    params.insert(params.end(), segments.w2.begin(), segments.w2.end());
    params.insert(params.end(), segments.b2.begin(), segments.b2.end());
    return params;
}

Segments unpack(const NetworkSpec& spec, const ParameterVector& params) {
    if (static_cast<int>(params.size()) != spec.param_count()) {
        throw DimensionError("parameter vector has " + std::to_string(params.size()) +
                             " entries, spec needs " + std::to_string(spec.param_count()));
    }
    Segments s;
    auto it = params.begin();
    s.w1.assign(it, it + spec.w1_size());
    it += spec.w1_size();
    s.w2.assign(it, it + spec.w2_size());
    it += spec.w2_size();
    s.b2.assign(it, it + spec.b2_size());
    return s;
}

std::vector<double> forward(const NetworkSpec& spec, const ParameterVector& params,
                            const std::vector<double>& x) {
    if (static_cast<int>(params.size()) != spec.param_count()) {
        throw DimensionError("parameter vector size mismatch");
    }
    if (static_cast<int>(x.size()) != spec.n_input) {
        throw DimensionError("input size mismatch");
    }
    const double* w1 = params.data() + spec.w1_offset();
    const double* w2 = params.data() + spec.w2_offset();
    const double* b2 = params.data() + spec.b2_offset();

    std::vector<double> h(spec.n_hidden);
    for (int j = 0; j < spec.n_hidden; ++j) {
        double a = b2[j];
        for (int i = 0; i < spec.n_input; ++i) {
            a += w1[j * spec.n_input + i] * x[i];
        }
        h[j] = activate(spec.hidden_activation, a);
    }
    std::vector<double> y(spec.n_output);
    for (int k = 0; k < spec.n_output; ++k) {
        double z = 0.0;
        for (int j = 0; j < spec.n_hidden; ++j) {
            z += w2[k * spec.n_hidden + j] * h[j];
        }
        y[k] = activate(spec.output_activation, z);
    }
    return y;
}

std::vector<std::vector<double>> forward_batch(const NetworkSpec& spec,
                                               const ParameterVector& params,
                                               const std::vector<std::vector<double>>& xs) {
    std::vector<std::vector<double>> out;
    out.reserve(xs.size());
    for (const auto& x : xs) {
        out.push_back(forward(spec, params, x));
    }
    return out;
}

double forward1(const NetworkSpec& spec, const ParameterVector& params, double x) {
    if (spec.n_input != 1 || spec.n_output != 1) {
        throw DimensionError("forward1 requires a scalar-in scalar-out network");
    }
    if (static_cast<int>(params.size()) != spec.param_count()) {
        throw DimensionError("parameter vector size mismatch");
    }
    const double* w1 = params.data() + spec.w1_offset();
    const double* w2 = params.data() + spec.w2_offset();
    const double* b2 = params.data() + spec.b2_offset();
    double z = 0.0;
    for (int j = 0; j < spec.n_hidden; ++j) {
        z += w2[j] * activate(spec.hidden_activation, w1[j] * x + b2[j]);
    }
    return activate(spec.output_activation, z);
}

TrainableMask TrainableMask::b2_only(const NetworkSpec& spec) {
    TrainableMask m;
    m.flags.assign(spec.param_count(), 0);
    for (int i = spec.b2_offset(); i < spec.param_count(); ++i) m.flags[i] = 1;
    return m;
}

TrainableMask TrainableMask::w2_b2(const NetworkSpec& spec) {
    TrainableMask m;
    m.flags.assign(spec.param_count(), 0);
    for (int i = spec.w2_offset(); i < spec.param_count(); ++i) m.flags[i] = 1;
    return m;
}

TrainableMask TrainableMask::all(const NetworkSpec& spec) {
    TrainableMask m;
    m.flags.assign(spec.param_count(), 1);
    return m;
}

std::vector<int> TrainableMask::indices() const {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(flags.size()); ++i) {
        if (flags[i]) idx.push_back(i);
    }
    return idx;
}

int TrainableMask::count() const {
    int n = 0;
    for (auto f : flags) n += f ? 1 : 0;
    return n;
}

void TrainableMask::validate(const NetworkSpec& spec) const {
    if (static_cast<int>(flags.size()) != spec.param_count()) {
        throw DimensionError("mask length does not match parameter count");
    }
    if (count() == 0) {
        throw ConfigError("mask selects no trainable parameters");
    }
}

TrainableMask make_mask(const NetworkSpec& spec, MaskKind kind) {
    switch (kind) {
        case MaskKind::B2: return TrainableMask::b2_only(spec);
        case MaskKind::W2B2: return TrainableMask::w2_b2(spec);
        case MaskKind::All: return TrainableMask::all(spec);
    }
    throw ConfigError("unknown mask kind");
}

ParameterVector random_params(const NetworkSpec& spec, double init_std, Rng& rng) {
    spec.validate();
    ParameterVector p(spec.param_count());
    for (auto& v : p) v = init_std * rng.normal();
    return p;
}

} // namespace dafnn
