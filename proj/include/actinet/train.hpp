#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "actinet/linalg.hpp"
#include "actinet/mlp.hpp"

namespace actinet {

// Regression dataset for the trainer: one row of features per target value.
struct TrainDataset {
    Matrix features;             // n x topology.n_inputs
    std::vector<double> targets; // n

    std::size_t size() const { return targets.size(); }
};

// Levenberg-Marquardt hyperparameters. Defaults mirror the classic toolbox
// configuration this project reproduces; mem_reduc is accepted for config
// compatibility but ignored (the full Jacobian is always held).
struct TrainConfig {
    std::uint64_t epochs = 7500;
    double goal = 0.01;
    int max_fail = 5;
    int mem_reduc = 1;
    double min_grad = 1e-10;
    double mu = 1e-4;
    double mu_dec = 0.1;
    double mu_inc = 10.0;
    double mu_max = 1e10;
    int show = 25; // <= 0 disables progress display
    double time_limit_s = std::numeric_limits<double>::infinity();

    void validate() const; // throws ConfigError
};

enum class StopReason { Goal, Epochs, MuMax, MinGrad, Time, MaxFail };

const char* to_string(StopReason r);

struct EpochRecord {
    std::uint64_t epoch = 0;
    double mse_before = 0.0;
    double mse_after = 0.0; // equals mse_before when the epoch was rejected
    double mu_after = 0.0;
    double grad_max = 0.0; // max-abs of J^T e at epoch start
    bool accepted = false;
    int attempts = 0;
    double validation_mse = std::numeric_limits<double>::quiet_NaN();
};

struct TrainLog {
    std::vector<EpochRecord> epochs;
    std::vector<double> mu_trace; // every damping value in order
    StopReason stop_reason = StopReason::Epochs;
    double final_mse = 0.0;
    std::uint64_t epochs_run = 0;
};

struct TrainResult {
    MlpParams params;
    TrainLog log;
};

// Mean squared error of the network over the dataset.
double mse(const MlpParams& params, const TrainDataset& data);

// Residuals e_i = target_i - output_i and the Jacobian J[i][p] = de_i/dp,
// assembled by per-sample backpropagation through retained activations.
// Column order matches MlpParams::flatten().
void jacobian(const MlpParams& params, const TrainDataset& data, Matrix& j,
              std::vector<double>& e);

// Levenberg-Marquardt training. Each epoch builds J and e once, then damped
// Gauss-Newton attempts solve (J^T J + mu I) delta = J^T e and try
// params - delta until the MSE strictly improves or mu exceeds mu_max.
// A failed Cholesky factorization counts as a rejected attempt. When a
// validation set is supplied, max_fail consecutive validation increases stop
// training and the best-validation parameters are returned.
// Throws TrainingError if the error surface turns non-finite.
TrainResult train_lm(MlpParams params, const TrainDataset& data,
                     const TrainConfig& config,
                     const TrainDataset* validation = nullptr);

} // namespace actinet
