#pragma once

#include <cstdint>
#include <vector>

#include "dafnn/rng.hpp"

namespace dafnn {

enum class Activation { Tanh, Sigmoid, Identity };

double activate(Activation a, double v);
double activate_derivative(Activation a, double activated);  // takes f(v), not v

// Fully connected 1-hidden-layer regression network:
//   h_j = f1(sum_i w1[j,i] * x_i + b[j])
//   y_k = f2(sum_j w2[k,j] * h_j)
// Biases live in the hidden layer; the flat parameter layout is (W1, W2, B2).
struct NetworkSpec {
    int n_input = 1;
    int n_hidden = 10;
    int n_output = 1;
    Activation hidden_activation = Activation::Tanh;
    Activation output_activation = Activation::Identity;

    int w1_size() const { return n_hidden * n_input; }
    int w2_size() const { return n_output * n_hidden; }
    int b2_size() const { return n_hidden; }
    int param_count() const { return w1_size() + w2_size() + b2_size(); }
    int w1_offset() const { return 0; }
    int w2_offset() const { return w1_size(); }
    int b2_offset() const { return w1_size() + w2_size(); }

    void validate() const;
};

using ParameterVector = std::vector<double>;

struct Segments {
    std::vector<double> w1, w2, b2;
};

ParameterVector pack(const NetworkSpec& spec, const Segments& segments);
Segments unpack(const NetworkSpec& spec, const ParameterVector& params);

std::vector<double> forward(const NetworkSpec& spec, const ParameterVector& params,
                            const std::vector<double>& x);
std::vector<std::vector<double>> forward_batch(const NetworkSpec& spec,
                                               const ParameterVector& params,
                                               const std::vector<std::vector<double>>& xs);
// Scalar fast path for the 1-d regression cases (n_input == n_output == 1).
double forward1(const NetworkSpec& spec, const ParameterVector& params, double x);

enum class MaskKind { B2, W2B2, All };

struct TrainableMask {
    std::vector<std::uint8_t> flags;

    static TrainableMask b2_only(const NetworkSpec& spec);
    static TrainableMask w2_b2(const NetworkSpec& spec);
    static TrainableMask all(const NetworkSpec& spec);

    std::vector<int> indices() const;
    int count() const;
    void validate(const NetworkSpec& spec) const;
};

TrainableMask make_mask(const NetworkSpec& spec, MaskKind kind);

ParameterVector random_params(const NetworkSpec& spec, double init_std, Rng& rng);

} // namespace dafnn
