#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "actinet/errors.hpp"
#include "actinet/mlp.hpp"
#include "actinet/rng.hpp"

using namespace actinet;

TEST_CASE("tansig fixed points and saturation") {
    CHECK(tansig(0.0) == 0.0);
    CHECK(tansig(20.0) > 1.0 - 1e-15);
    CHECK(tansig(20.0) < 1.0);
    CHECK(tansig(-20.0) < -(1.0 - 1e-15));
    // matches the defining formula on moderate inputs
    for (double n : {-3.0, -0.7, 0.31, 1.9}) {
        const double direct = 2.0 / (1.0 + std::exp(-2.0 * n)) - 1.0;
        CHECK(tansig(n) == doctest::Approx(direct).epsilon(1e-15));
    }
}

TEST_CASE("tansig is exactly odd") {
    SplitMix64 rng(61);
    for (int i = 0; i < 200; ++i) {
        const double n = rng.uniform(-30.0, 30.0);
        CHECK(tansig(-n) == -tansig(n)); // bitwise by construction
    }
}

TEST_CASE("tansig derivative identity") {
    SplitMix64 rng(62);
    for (int i = 0; i < 50; ++i) {
        const double n = rng.uniform(-3.0, 3.0);
        const double h = 1e-6;
        const double fd = (tansig(n + h) - tansig(n - h)) / (2.0 * h);
        CHECK(tansig_derivative_from_output(tansig(n)) ==
              doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("topology bookkeeping") {
    Topology t;
    t.n_inputs = 22;
    t.hidden_sizes = {7, 7};
    t.n_outputs = 1;
    CHECK(t.layer_count() == 3);
    CHECK(t.fan_in(0) == 22);
    CHECK(t.fan_out(0) == 7);
    CHECK(t.fan_in(2) == 7);
    CHECK(t.fan_out(2) == 1);
    CHECK(t.transfer(0) == Transfer::Tansig);
    CHECK(t.transfer(2) == Transfer::Purelin);
    CHECK(t.parameter_count() == 7 * 23 + 7 * 8 + 1 * 8);

    Topology bad;
    bad.hidden_sizes = {0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("nguyen-widrow init is deterministic per seed") {
    Topology t;
    const MlpParams a = init_nguyen_widrow(t, 99);
    const MlpParams b = init_nguyen_widrow(t, 99);
    const MlpParams c = init_nguyen_widrow(t, 100);
    CHECK(a.flatten() == b.flatten());
    CHECK(a.flatten() != c.flatten());
}

TEST_CASE("nguyen-widrow hidden row norms hit the prescribed magnitude") {
    Topology t;
    t.n_inputs = 22;
    t.hidden_sizes = {7};
    const MlpParams p = init_nguyen_widrow(t, 7);
    const double want = 0.7 * std::pow(7.0, 1.0 / 22.0);
    for (std::size_t r = 0; r < 7; ++r) {
        double norm = 0.0;
        for (std::size_t c = 0; c < 22; ++c)
            norm += p.layers[0].weights(r, c) * p.layers[0].weights(r, c);
        norm = std::sqrt(norm);
        CHECK(std::abs(norm - want) < 1e-9);
        // bias magnitude stays within the active region spread
        CHECK(std::abs(p.layers[0].bias[r]) <= want + 1e-12);
    }
    // output layer uniform in [-0.5, 0.5]
    for (std::size_t c = 0; c < 7; ++c) {
        CHECK(p.layers[1].weights(0, c) >= -0.5);
        CHECK(p.layers[1].weights(0, c) <= 0.5);
    }
}

TEST_CASE("uniform init covers the requested range") {
    Topology t;
    const MlpParams p = init_uniform(t, 5, -10.0, 10.0);
    double lo = 1e9, hi = -1e9;
    for (const double v : p.flatten()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        CHECK(v >= -10.0);
        CHECK(v <= 10.0);
    }
    CHECK(lo < -6.0); // spread sanity
    CHECK(hi > 6.0);
    CHECK(init_uniform(t, 5, -10, 10).flatten() == p.flatten());
}

TEST_CASE("forward of the zero network is zero") {
    Topology t;
    MlpParams p = init_nguyen_widrow(t, 1);
    for (auto& l : p.layers) {
        l.weights.fill(0.0);
        std::fill(l.bias.begin(), l.bias.end(), 0.0);
    }
    std::vector<double> x(22, 0.37);
    CHECK(forward(p, x).output() == 0.0);
}

TEST_CASE("forward of a single purelin layer") {
    Topology t;
    t.n_inputs = 1;
    t.hidden_sizes = {};
    MlpParams p = init_nguyen_widrow(t, 1);
    p.layers[0].weights(0, 0) = 2.0;
    p.layers[0].bias[0] = 1.0;
    const std::vector<double> x{3.0};
    CHECK(forward(p, x).output() == doctest::Approx(7.0));
}

TEST_CASE("forward rejects dimension mismatch") {
    Topology t;
    const MlpParams p = init_nguyen_widrow(t, 1);
    std::vector<double> x(21, 0.0);
    CHECK_THROWS_AS(forward(p, x), ConfigError);
}

TEST_CASE("permuting hidden units leaves the output unchanged") {
    Topology t;
    t.n_inputs = 4;
    t.hidden_sizes = {5};
    MlpParams p = init_nguyen_widrow(t, 8);

    MlpParams q = p;
    // swap hidden units 1 and 3 along with their in/out weights
    for (std::size_t c = 0; c < 4; ++c)
        std::swap(q.layers[0].weights(1, c), q.layers[0].weights(3, c));
    std::swap(q.layers[0].bias[1], q.layers[0].bias[3]);
    std::swap(q.layers[1].weights(0, 1), q.layers[1].weights(0, 3));

    SplitMix64 rng(63);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> x(4);
        for (double& v : x) v = rng.uniform(-2, 2);
        CHECK(forward(p, x).output() ==
              doctest::Approx(forward(q, x).output()).epsilon(1e-12));
    }
}

TEST_CASE("flatten and from_flat round-trip") {
    Topology t;
    t.n_inputs = 3;
    t.hidden_sizes = {4, 2};
    const MlpParams p = init_nguyen_widrow(t, 17);
    const std::vector<double> theta = p.flatten();
    CHECK(theta.size() == t.parameter_count());
    const MlpParams q = MlpParams::from_flat(t, theta);
    CHECK(q.flatten() == theta);

    std::vector<double> short_theta(theta.begin(), theta.end() - 1);
    CHECK_THROWS_AS(MlpParams::from_flat(t, short_theta), ConfigError);
}
