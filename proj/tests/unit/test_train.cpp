#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "actinet/errors.hpp"
#include "actinet/rng.hpp"
#include "actinet/train.hpp"

using namespace actinet;

namespace {

TrainDataset dataset_from(const std::vector<std::vector<double>>& xs,
                          const std::vector<double>& ts) {
    TrainDataset d;
    d.features = Matrix(xs.size(), xs[0].size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs[i].size(); ++j)
            d.features(i, j) = xs[i][j];
    d.targets = ts;
    return d;
}

TrainDataset random_dataset(std::uint64_t seed, std::size_t n,
                            std::size_t width) {
    SplitMix64 rng(seed);
    TrainDataset d;
    d.features = Matrix(n, width);
    d.targets.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < width; ++j)
            d.features(i, j) = rng.uniform(-1.5, 1.5);
        d.targets[i] = static_cast<double>(i % 3);
    }
    return d;
}

// Central finite differences of the residuals with respect to one parameter.
std::vector<double> fd_jacobian_column(const MlpParams& params,
                                       const TrainDataset& data,
                                       std::size_t p, double step) {
    std::vector<double> theta = params.flatten();
    auto residuals = [&](const std::vector<double>& th) {
        const MlpParams m = MlpParams::from_flat(params.topology, th);
        std::vector<double> e(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto t = forward(m, std::span<const double>(
                                          data.features.row(i),
                                          data.features.cols()));
            e[i] = data.targets[i] - t.output();
        }
        return e;
    };
    auto plus = theta, minus = theta;
    plus[p] += step;
    minus[p] -= step;
    const auto ep = residuals(plus);
    const auto em = residuals(minus);
    std::vector<double> col(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        col[i] = (ep[i] - em[i]) / (2.0 * step);
    return col;
}

} // namespace

TEST_CASE("mse basics") {
    Topology t;
    t.n_inputs = 1;
    t.hidden_sizes = {};
    MlpParams p = init_nguyen_widrow(t, 1);
    p.layers[0].weights(0, 0) = 2.0;
    p.layers[0].bias[0] = 0.0;

    // perfect predictions
    CHECK(mse(p, dataset_from({{1}, {2}}, {2, 4})) == 0.0);
    // residuals [1, -1] -> 1.0
    CHECK(mse(p, dataset_from({{1}, {2}}, {3, 3})) == doctest::Approx(1.0));
    // residuals [3] -> 9.0
    CHECK(mse(p, dataset_from({{1}}, {5})) == doctest::Approx(9.0));
    CHECK_THROWS_AS(mse(p, TrainDataset{}), DataError);
}

TEST_CASE("jacobian of a single linear neuron") {
    Topology t;
    t.n_inputs = 1;
    t.hidden_sizes = {};
    MlpParams p = init_nguyen_widrow(t, 2);
    const TrainDataset d = dataset_from({{3.0}}, {1.0});

    Matrix j;
    std::vector<double> e;
    jacobian(p, d, j, e);
    REQUIRE(j.rows() == 1);
    REQUIRE(j.cols() == 2);
    CHECK(j(0, 0) == doctest::Approx(-3.0)); // de/dw = -x
    CHECK(j(0, 1) == doctest::Approx(-1.0)); // de/db
    CHECK(e[0] == doctest::Approx(1.0 - forward(p, std::vector<double>{3.0})
                                            .output()));
}

TEST_CASE("jacobian of a 1-1-1 net matches the hand chain product") {
    Topology t;
    t.n_inputs = 1;
    t.hidden_sizes = {1};
    MlpParams p = init_nguyen_widrow(t, 3);
    const double w1 = 0.5, b1 = 0.1, w2 = 2.0, b2 = 0.3, x = 1.5;
    p.layers[0].weights(0, 0) = w1;
    p.layers[0].bias[0] = b1;
    p.layers[1].weights(0, 0) = w2;
    p.layers[1].bias[0] = b2;

    Matrix j;
    std::vector<double> e;
    jacobian(p, dataset_from({{x}}, {0.0}), j, e);

    const double a = tansig(w1 * x + b1);
    const double da = 1.0 - a * a;
    // parameter order: w1, b1, w2, b2; J = -d(output)/dp
    CHECK(j(0, 0) == doctest::Approx(-(w2 * da * x)).epsilon(1e-12));
    CHECK(j(0, 1) == doctest::Approx(-(w2 * da)).epsilon(1e-12));
    CHECK(j(0, 2) == doctest::Approx(-a).epsilon(1e-12));
    CHECK(j(0, 3) == doctest::Approx(-1.0));

    SUBCASE("zero weights leave only the output bias column") {
        for (auto& l : p.layers) {
            l.weights.fill(0.0);
            std::fill(l.bias.begin(), l.bias.end(), 0.0);
        }
        jacobian(p, dataset_from({{x}}, {0.0}), j, e);
        CHECK(j(0, 0) == 0.0); // tansig(0) = 0 kills the w2 path
        CHECK(j(0, 1) == 0.0);
        CHECK(j(0, 2) == 0.0); // a = 0
        CHECK(j(0, 3) == -1.0);
    }
}

TEST_CASE("jacobian matches central finite differences on a 22-7-7-1 net") {
    Topology t;
    t.n_inputs = 22;
    t.hidden_sizes = {7, 7};
    const MlpParams p = init_nguyen_widrow(t, 12345);
    const TrainDataset d = random_dataset(777, 10, 22);

    Matrix j;
    std::vector<double> e;
    jacobian(p, d, j, e);

    for (std::size_t col = 0; col < t.parameter_count(); ++col) {
        const auto fd = fd_jacobian_column(p, d, col, 1e-6);
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double denom = std::max(std::abs(fd[i]), 1e-9);
            INFO("param ", col, " sample ", i);
            CHECK(std::abs(j(i, col) - fd[i]) / denom < 1e-6);
        }
    }
}

TEST_CASE("LM recovers the exact linear solution") {
    Topology t;
    t.n_inputs = 1;
    t.hidden_sizes = {};
    const MlpParams init = init_nguyen_widrow(t, 5);
    const TrainDataset d = dataset_from({{1}, {2}, {3}}, {2, 4, 6});

    TrainConfig cfg;
    cfg.goal = 0.0; // run to the gradient floor
    cfg.epochs = 50;
    cfg.show = 0;
    const TrainResult r = train_lm(init, d, cfg);

    CHECK(std::abs(r.params.layers[0].weights(0, 0) - 2.0) < 1e-8);
    CHECK(std::abs(r.params.layers[0].bias[0]) < 1e-8);
    CHECK((r.log.stop_reason == StopReason::Goal ||
           r.log.stop_reason == StopReason::MinGrad));
    // convergence to 1e-8 happens within the first few epochs
    std::size_t epochs_to_converge = r.log.epochs.size();
    for (std::size_t i = 0; i < r.log.epochs.size(); ++i) {
        if (r.log.epochs[i].mse_after < 1e-18) {
            epochs_to_converge = i + 1;
            break;
        }
    }
    CHECK(epochs_to_converge <= 5);
}

TEST_CASE("LM stops immediately when the goal is already met") {
    Topology t;
    t.n_inputs = 1;
    t.hidden_sizes = {};
    MlpParams p = init_nguyen_widrow(t, 6);
    p.layers[0].weights(0, 0) = 2.0;
    p.layers[0].bias[0] = 0.0;
    TrainConfig cfg;
    cfg.show = 0;
    const TrainResult r =
        train_lm(p, dataset_from({{1}, {2}}, {2.0, 4.05}), cfg);
    CHECK(r.log.stop_reason == StopReason::Goal);
    CHECK(r.log.epochs.empty());
    CHECK(r.log.epochs_run == 0);
}

TEST_CASE("LM hits mu_max when no step can improve") {
    // Start exactly at the least-squares optimum with the gradient floor
    // disabled: every damped step reproduces the optimum, never strictly
    // improving, so mu climbs to the cap.
    Topology t;
    t.n_inputs = 1;
    t.hidden_sizes = {};
    MlpParams p = init_nguyen_widrow(t, 7);
    p.layers[0].weights(0, 0) = 0.0;
    p.layers[0].bias[0] = 0.5;
    TrainConfig cfg;
    cfg.goal = 0.0;
    cfg.min_grad = 0.0;
    cfg.show = 0;
    const TrainResult r =
        train_lm(p, dataset_from({{1}, {1}}, {0.0, 1.0}), cfg);
    CHECK(r.log.stop_reason == StopReason::MuMax);
    REQUIRE(r.log.mu_trace.size() >= 2);
    CHECK(r.log.mu_trace.back() > cfg.mu_max);
}

TEST_CASE("mu trajectory moves by exactly the configured factors") {
    Topology t;
    t.n_inputs = 4;
    t.hidden_sizes = {3};
    const TrainDataset d = random_dataset(42, 12, 4);
    TrainConfig cfg;
    cfg.epochs = 40;
    cfg.goal = 1e-9;
    cfg.show = 0;
    const TrainResult r = train_lm(init_nguyen_widrow(t, 8), d, cfg);

    const auto& mu = r.log.mu_trace;
    REQUIRE(mu.size() >= 2);
    CHECK(mu.front() == cfg.mu);
    for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
        const bool dec = mu[i + 1] == mu[i] * cfg.mu_dec;
        const bool inc = mu[i + 1] == mu[i] * cfg.mu_inc;
        INFO("transition ", i);
        CHECK((dec || inc));
    }
    // only a final escalation may exceed mu_max
    for (std::size_t i = 0; i + 1 < mu.size(); ++i)
        CHECK(mu[i] <= cfg.mu_max);
}

TEST_CASE("accepted-step MSE decreases strictly") {
    Topology t;
    t.n_inputs = 6;
    t.hidden_sizes = {5, 3};
    const TrainDataset d = random_dataset(43, 18, 6);
    TrainConfig cfg;
    cfg.epochs = 60;
    cfg.goal = 1e-12;
    cfg.show = 0;
    const TrainResult r = train_lm(init_nguyen_widrow(t, 9), d, cfg);

    double last = std::numeric_limits<double>::infinity();
    std::size_t accepted = 0;
    for (const EpochRecord& rec : r.log.epochs) {
        if (!rec.accepted) continue;
        CHECK(rec.mse_after < last);
        last = rec.mse_after;
        ++accepted;
    }
    CHECK(accepted > 0);
}

TEST_CASE("large damping turns the step into scaled gradient descent") {
    Topology t;
    t.n_inputs = 5;
    t.hidden_sizes = {4};
    const MlpParams p = init_nguyen_widrow(t, 10);
    const TrainDataset d = random_dataset(44, 15, 5);

    Matrix j;
    std::vector<double> e;
    jacobian(p, d, j, e);
    const std::size_t n = t.parameter_count();
    std::vector<double> g(n, 0.0);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = 0; i < d.size(); ++i) g[c] += j(i, c) * e[i];

    Matrix a(n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t cc = 0; cc < n; ++cc)
                a(c, cc) += j(i, c) * j(i, cc);
    const double mu = 1e8;
    for (std::size_t c = 0; c < n; ++c) a(c, c) += mu;
    std::vector<double> delta = g;
    REQUIRE(cholesky_solve_in_place(a, delta));

    // The applied update is params - delta; the descent direction is -g.
    // Equivalently delta must align with g to under a degree.
    double dot = 0.0, ng = 0.0, nd = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        dot += delta[c] * g[c];
        ng += g[c] * g[c];
        nd += delta[c] * delta[c];
    }
    const double angle =
        std::acos(dot / std::sqrt(ng * nd)) * 180.0 / 3.14159265358979323846;
    CHECK(angle < 1.0);
}

TEST_CASE("training is deterministic for identical inputs") {
    Topology t;
    t.n_inputs = 8;
    t.hidden_sizes = {5};
    const TrainDataset d = random_dataset(45, 21, 8);
    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.show = 0;
    const TrainResult a = train_lm(init_nguyen_widrow(t, 11), d, cfg);
    const TrainResult b = train_lm(init_nguyen_widrow(t, 11), d, cfg);

    CHECK(a.params.flatten() == b.params.flatten());
    CHECK(a.log.mu_trace == b.log.mu_trace);
    REQUIRE(a.log.epochs.size() == b.log.epochs.size());
    for (std::size_t i = 0; i < a.log.epochs.size(); ++i) {
        CHECK(a.log.epochs[i].mse_after == b.log.epochs[i].mse_after);
        CHECK(a.log.epochs[i].grad_max == b.log.epochs[i].grad_max);
        CHECK(a.log.epochs[i].attempts == b.log.epochs[i].attempts);
    }
}

TEST_CASE("validation failures stop training and restore the best net") {
    // Validation targets are the negation of the training targets: every
    // step toward the training fit pushes validation error up.
    Topology t;
    t.n_inputs = 3;
    t.hidden_sizes = {4};
    TrainDataset train = random_dataset(46, 12, 3);
    TrainDataset val = train;
    for (double& x : val.targets) x = -x;

    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.goal = 0.0;
    cfg.min_grad = 0.0;
    cfg.show = 0;
    const TrainResult r = train_lm(init_nguyen_widrow(t, 13), train, cfg, &val);
    if (r.log.stop_reason == StopReason::MaxFail) {
        double best = std::numeric_limits<double>::infinity();
        for (const EpochRecord& rec : r.log.epochs)
            if (rec.accepted && std::isfinite(rec.validation_mse))
                best = std::min(best, rec.validation_mse);
        CHECK(mse(r.params, val) == doctest::Approx(best).epsilon(1e-12));
    } else {
        // the optimizer may die at mu_max first; both are legal stops here
        CHECK(r.log.stop_reason == StopReason::MuMax);
    }
}

TEST_CASE("non-finite error surfaces abort with a diagnostic") {
    Topology t;
    t.n_inputs = 1;
    t.hidden_sizes = {};
    MlpParams p = init_nguyen_widrow(t, 14);
    p.layers[0].weights(0, 0) = 1e308;
    TrainConfig cfg;
    cfg.show = 0;
    CHECK_THROWS_AS(
        train_lm(p, dataset_from({{1e308}}, {0.0}), cfg),
        TrainingError);
}

TEST_CASE("config validation") {
    TrainConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.mu_dec = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = TrainConfig{};
    cfg.mu = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = TrainConfig{};
    cfg.epochs = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
