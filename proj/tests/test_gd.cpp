#include <cmath>

#include "doctest.h"

#include "dafnn/dataset.hpp"
#include "dafnn/errors.hpp"
#include "dafnn/gd.hpp"
#include "dafnn/rng.hpp"

using namespace dafnn;

TEST_CASE("mse_loss basics") {
    std::vector<std::vector<double>> p{{1.0}, {2.0}};
    CHECK(mse_loss(p, p) == 0.0);
    CHECK(mse_loss({{1.0}, {2.0}}, {{0.0}, {2.0}}) == 0.5);
    CHECK_THROWS_AS(mse_loss({{1.0}}, {{1.0}, {2.0}}), DimensionError);
    CHECK_THROWS_AS(mse_loss({{1.0, 2.0}}, {{1.0}}), DimensionError);
}

TEST_CASE("gradient is zero when predictions already match zero targets") {
    NetworkSpec spec;
    ParameterVector p(spec.param_count(), 0.0);
    Dataset d;
    d.name = "zeros";
    d.xs = {-1.0, 0.0, 1.0};
    d.ys = {0.0, 0.0, 0.0};
    ParameterVector g = grad_mse(spec, p, d);
    for (int i = spec.w2_offset(); i < spec.param_count(); ++i) {
        CHECK(g[i] == 0.0);
    }
}

TEST_CASE("1-1-1 gradient matches the hand-derived chain rule") {
    NetworkSpec spec;
    spec.n_hidden = 1;
    ParameterVector p = pack(spec, Segments{{0.4}, {0.9}, {-0.2}});
    Dataset d;
    d.name = "single";
    d.xs = {0.7};
    d.ys = {0.3};
    CHECK(forward1(spec, p, 0.7) == doctest::Approx(0.07184679220001819).epsilon(1e-14));
    ParameterVector g = grad_mse(spec, p, d);
    CHECK(g[0] == doctest::Approx(-0.28564103591635426).epsilon(1e-13));
    CHECK(g[1] == doctest::Approx(-0.036426835801273025).epsilon(1e-13));
    CHECK(g[2] == doctest::Approx(-0.408058622737649).epsilon(1e-13));
}

TEST_CASE("backprop agrees with central finite differences") {
    NetworkSpec spec;
    Rng rng(17, Stream::ParamInit);
    ParameterVector p = random_params(spec, 0.5, rng);
    Dataset d;
    d.name = "fd";
    d.xs = {-1.0, -0.5, 0.0, 0.5, 1.0};
    d.ys = {0.2, -0.1, 0.4, 0.9, -0.3};
    ParameterVector g = grad_mse(spec, p, d);

    const double h = 1e-6;
    double num = 0.0, den = 0.0;
    for (int c = 0; c < spec.param_count(); ++c) {
        ParameterVector lo = p, hi = p;
        lo[c] -= h;
        hi[c] += h;
        auto loss_of = [&](const ParameterVector& q) {
            std::vector<std::vector<double>> preds, targets;
            for (std::size_t i = 0; i < d.size(); ++i) {
                preds.push_back({forward1(spec, q, d.xs[i])});
                targets.push_back({d.ys[i]});
            }
            return mse_loss(preds, targets);
        };
        double fd = (loss_of(hi) - loss_of(lo)) / (2.0 * h);
        num += (g[c] - fd) * (g[c] - fd);
        den += fd * fd;
    }
    CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("zero learning rate is rejected and epochs=1 with tiny rate barely moves") {
    NetworkSpec spec;
    GdConfig bad;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.learning_rate = 0.1;
    bad.epochs = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    Dataset d;
    d.name = "one";
    d.xs = {0.3};
    d.ys = {0.4};
    Rng rng(2, Stream::ParamInit);
    ParameterVector init = random_params(spec, 0.5, rng);
    GdConfig tiny;
    tiny.learning_rate = 1e-300;
    tiny.epochs = 1;
    GdResult res = train_gd(spec, init, d, tiny);
    CHECK(res.params == init);
    CHECK(res.loss_history.size() == 1);
}

TEST_CASE("affine toy converges to the product optimum with monotone loss") {
    NetworkSpec spec;
    spec.n_hidden = 1;
    spec.hidden_activation = Activation::Identity;
    ParameterVector init = pack(spec, Segments{{0.5}, {0.5}, {0.0}});
    Dataset d;
    d.name = "affine";
    d.xs = {-1.0, -0.5, 0.0, 0.5, 1.0};
    for (double x : d.xs) d.ys.push_back(2.0 * x);
    GdConfig config;
    config.learning_rate = 0.1;
    config.epochs = 5000;
    GdResult res = train_gd(spec, init, d, config);
    CHECK(std::abs(res.params[0] * res.params[1] - 2.0) < 1e-3);
    for (std::size_t i = 1; i < res.loss_history.size(); ++i) {
        CHECK(res.loss_history[i] <= res.loss_history[i - 1] + 1e-12);
    }
}

TEST_CASE("diverging runs raise a divergence error carrying the epoch") {
    NetworkSpec spec;
    CasePair cp = gen_sine();
    Rng rng(4, Stream::ParamInit);
    ParameterVector init = random_params(spec, 0.5, rng);
    GdConfig config;
    config.learning_rate = 50.0;
    try {
        train_gd(spec, init, cp.train, config);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.epoch >= 0);
        CHECK(e.epoch < config.epochs);
    }
}

TEST_CASE("loss history length equals the epoch count and snapshots are thinned") {
    NetworkSpec spec;
    Dataset d;
    d.name = "short";
    d.xs = {-0.5, 0.5};
    d.ys = {0.1, 0.2};
    Rng rng(6, Stream::ParamInit);
    ParameterVector init = random_params(spec, 0.5, rng);
    GdConfig config;
    config.learning_rate = 0.01;
    config.epochs = 250;
    GdResult res = train_gd(spec, init, d, config);
    CHECK(res.loss_history.size() == 250);
    CHECK(res.snapshots.size() == 4);  // epochs 0, 100, 200, 249
    CHECK(res.snapshots.front().first == 0);
    CHECK(res.snapshots.back().first == 249);
    CHECK(res.snapshots.back().second == res.params);
}
