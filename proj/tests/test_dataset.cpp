#include <cmath>
#include <numbers>

#include "doctest.h"

#include "dafnn/dataset.hpp"
#include "dafnn/errors.hpp"

using namespace dafnn;

TEST_CASE("sine case has the specified sample counts and anchors") {
    CasePair cp = gen_sine();
    CHECK(cp.train.size() == 201);
    CHECK(cp.validation.size() == 21);
    CHECK(cp.train.xs[0] == 0.0);
    CHECK(cp.train.ys[0] == 0.0);
    // 200 * (0.01*pi) in double arithmetic, one ulp above the closest double to 2*pi.
    CHECK(cp.train.xs[200] == 6.283185307179587);
    CHECK(cp.train.ys[50] == 1.0);  // x = pi/2
    CHECK(cp.train.ys[37] == doctest::Approx(0.9177546256839811).epsilon(1e-15));
    for (double y : cp.train.ys) {
        CHECK(y >= -1.0);
        CHECK(y <= 1.0);
    }
}

TEST_CASE("sine training grid has exact 0.01*pi spacing") {
    CasePair cp = gen_sine();
    const double h = 0.01 * std::numbers::pi;
    for (std::size_t k = 1; k < cp.train.size(); ++k) {
        CHECK(cp.train.xs[k] - cp.train.xs[k - 1] == doctest::Approx(h).epsilon(1e-12));
    }
}

TEST_CASE("sine validation points land on every tenth training point") {
    CasePair cp = gen_sine();
    for (std::size_t k = 0; k < cp.validation.size(); ++k) {
        CHECK(nearest_index(cp.train.xs, cp.validation.xs[k]) == 10 * k);
    }
}

TEST_CASE("ricker wavelet matches the frozen closed-form values") {
    CHECK(ricker(0.0) == doctest::Approx(0.8673250705840776).epsilon(1e-15));
    CHECK(ricker(1.0) == 0.0);
    CHECK(ricker(-1.0) == 0.0);
    CHECK(ricker(std::sqrt(3.0)) == doctest::Approx(-0.38705276380034687).epsilon(1e-14));
    CHECK(ricker(2.0) == doctest::Approx(-0.35213905225713377).epsilon(1e-14));
    CHECK(ricker(0.5) == doctest::Approx(0.5740587662433106).epsilon(1e-14));
}

TEST_CASE("ricker is even") {
    for (double t : {0.3, 1.1, 2.7, 4.9}) {
        CHECK(ricker(t) == ricker(-t));
    }
}

TEST_CASE("mexican hat grids have the specified counts and range") {
    CasePair cp = gen_mexican_hat();
    CHECK(cp.train.size() == 200);
    CHECK(cp.validation.size() == 30);
    CHECK(cp.train.xs.front() == -5.0);
    CHECK(cp.train.xs.back() == 5.0);
    CHECK(cp.validation.xs.front() == -5.0);
    CHECK(cp.validation.xs.back() == 5.0);
    CHECK(cp.train.xs[17] == -4.1457286432160805);
    CHECK(cp.train.ys[17] == doctest::Approx(-0.0026015134697093).epsilon(1e-12));
}

TEST_CASE("generators are pure") {
    CasePair a = gen_sine();
    CasePair b = gen_sine();
    CHECK(a.train.xs == b.train.xs);
    CHECK(a.train.ys == b.train.ys);
    CHECK(a.validation.xs == b.validation.xs);
    CasePair c = gen_mexican_hat(Placement::Random, 7);
    CasePair d = gen_mexican_hat(Placement::Random, 7);
    CHECK(c.train.xs == d.train.xs);
    CasePair e = gen_mexican_hat(Placement::Random, 8);
    CHECK(c.train.xs != e.train.xs);
}

TEST_CASE("random placement keeps sorted training points in range") {
    CasePair cp = gen_mexican_hat(Placement::Random, 3);
    CHECK(cp.train.size() == 200);
    CHECK(cp.validation.size() == 30);  // validation stays gridded
    for (std::size_t i = 0; i < cp.train.size(); ++i) {
        CHECK(cp.train.xs[i] >= -5.0);
        CHECK(cp.train.xs[i] <= 5.0);
        if (i > 0) CHECK(cp.train.xs[i] > cp.train.xs[i - 1]);
    }
}

TEST_CASE("nearest_index prefers the lower index on ties") {
    std::vector<double> grid{0.0, 1.0, 2.0};
    CHECK(nearest_index(grid, 0.5) == 0);
    CHECK(nearest_index(grid, 0.6) == 1);
    CHECK(nearest_index(grid, -9.0) == 0);
    CHECK(nearest_index(grid, 9.0) == 2);
}

TEST_CASE("dataset validation rejects misaligned or unsorted data") {
    Dataset d;
    d.name = "bad";
    d.xs = {0.0, 1.0};
    d.ys = {0.0};
    CHECK_THROWS_AS(d.validate(), DimensionError);
    d.ys = {0.0, 1.0};
    CHECK_NOTHROW(d.validate());
    d.xs = {1.0, 1.0};
    CHECK_THROWS_AS(d.validate(), ConfigError);
}
