#include "actinet/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "actinet/errors.hpp"
#include "actinet/kernels.hpp"

namespace actinet {

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (!(mu > 0.0) || !(mu < mu_max))
        throw ConfigError("initial mu must satisfy 0 < mu < mu_max");
    if (!(mu_dec > 0.0 && mu_dec < 1.0))
        throw ConfigError("mu_dec must lie in (0, 1)");
    if (!(mu_inc > 1.0)) throw ConfigError("mu_inc must exceed 1");
    if (!(goal >= 0.0)) throw ConfigError("goal must be non-negative");
    if (max_fail < 1) throw ConfigError("max_fail must be >= 1");
}

const char* to_string(StopReason r) {
    switch (r) {
    case StopReason::Goal: return "goal";
    case StopReason::Epochs: return "epochs";
    case StopReason::MuMax: return "mu_max";
    case StopReason::MinGrad: return "min_grad";
    case StopReason::Time: return "time";
    case StopReason::MaxFail: return "max_fail";
    }
    return "?";
}

double mse(const MlpParams& params, const TrainDataset& data) {
    if (data.size() == 0) throw DataError("mse over an empty dataset");
    double acc = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const ForwardTrace t = forward(
            params, std::span<const double>(data.features.row(i),
                                            data.features.cols()));
        const double e = data.targets[i] - t.output();
        acc += e * e;
    }
    return acc / static_cast<double>(data.size());
}

void jacobian(const MlpParams& params, const TrainDataset& data, Matrix& j,
              std::vector<double>& e) {
    if (data.size() == 0) throw DataError("jacobian over an empty dataset");
    const Topology& topo = params.topology;
    const std::size_t n = data.size();
    const std::size_t n_params = topo.parameter_count();
    const std::size_t n_layers = topo.layer_count();

    j = Matrix(n, n_params);
    e.assign(n, 0.0);

    std::vector<std::vector<double>> delta(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l)
        delta[l].assign(topo.fan_out(l), 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const ForwardTrace trace = forward(
            params, std::span<const double>(data.features.row(i),
                                            data.features.cols()));
        e[i] = data.targets[i] - trace.output();

        // d(output)/d(pre-activation), output layer first. The single
        // purelin output makes the seed derivative 1.
        delta[n_layers - 1][0] = 1.0;
        for (std::size_t l = n_layers - 1; l-- > 0;) {
            const LayerParams& next = params.layers[l + 1];
            const std::vector<double>& act = trace.activations[l + 1];
            for (std::size_t u = 0; u < delta[l].size(); ++u) {
                double acc = 0.0;
                for (std::size_t v = 0; v < delta[l + 1].size(); ++v)
                    acc += next.weights(v, u) * delta[l + 1][v];
                delta[l][u] = acc * tansig_derivative_from_output(act[u]);
            }
        }

        // J[i][p] = de_i/dp = -d(output)/dp, laid out as flatten().
        double* row = j.row(i);
        std::size_t off = 0;
        for (std::size_t l = 0; l < n_layers; ++l) {
            const std::vector<double>& in = trace.activations[l];
            for (std::size_t u = 0; u < delta[l].size(); ++u) {
                const double d = delta[l][u];
                for (std::size_t v = 0; v < in.size(); ++v)
                    row[off++] = -d * in[v];
            }
            for (std::size_t u = 0; u < delta[l].size(); ++u)
                row[off++] = -delta[l][u];
        }
    }
}

TrainResult train_lm(MlpParams params, const TrainDataset& data,
                     const TrainConfig& config, const TrainDataset* validation) {
    config.validate();
    params.topology.validate();
    if (data.size() == 0) throw DataError("training dataset is empty");
    if (data.features.cols() != params.topology.n_inputs)
        throw ConfigError("dataset width does not match topology inputs");

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed_s = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t_start)
            .count();
    };

    const std::size_t n_params = params.topology.parameter_count();
    TrainLog log;
    double mu = config.mu;
    log.mu_trace.push_back(mu);

    std::vector<double> theta = params.flatten();
    Matrix j;
    std::vector<double> e;
    Matrix jtj(n_params, n_params);
    Matrix system(n_params, n_params);
    std::vector<double> grad(n_params), rhs(n_params);

    // Validation early-stopping bookkeeping.
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<double> best_theta = theta;
    int fail_count = 0;

    double current_mse = mse(params, data);
    log.final_mse = current_mse;

    for (std::uint64_t epoch = 1; epoch <= config.epochs; ++epoch) {
        if (!std::isfinite(current_mse))
            throw TrainingError("training aborted: non-finite mse at epoch " +
                                std::to_string(epoch));
        if (current_mse <= config.goal) {
            log.stop_reason = StopReason::Goal;
            break;
        }
        if (elapsed_s() > config.time_limit_s) {
            log.stop_reason = StopReason::Time;
            break;
        }

        jacobian(params, data, j, e);
        for (std::size_t p = 0; p < n_params; ++p) {
            double acc = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) acc += j(i, p) * e[i];
            grad[p] = acc;
        }
        double grad_max = 0.0;
        for (double g : grad) grad_max = std::max(grad_max, std::abs(g));
        if (grad_max < config.min_grad) {
            log.stop_reason = StopReason::MinGrad;
            break;
        }

        // Gauss-Newton normal matrix, accumulated sample-major so results
        // are identical regardless of kernel backend.
        jtj.fill(0.0);
        for (std::size_t i = 0; i < data.size(); ++i)
            kernels::sym_outer_acc(jtj.data().data(), j.row(i), n_params);
        for (std::size_t r = 1; r < n_params; ++r)
            for (std::size_t c = 0; c < r; ++c) jtj(r, c) = jtj(c, r);

        EpochRecord rec;
        rec.epoch = epoch;
        rec.mse_before = current_mse;
        rec.grad_max = grad_max;

        bool accepted = false;
        MlpParams candidate;
        double candidate_mse = 0.0;
        while (true) {
            ++rec.attempts;
            system.data() = jtj.data();
            for (std::size_t d = 0; d < n_params; ++d) system(d, d) += mu;
            rhs = grad;

            bool solved = cholesky_solve_in_place(system, rhs);
            if (solved) {
                std::vector<double> cand_theta = theta;
                for (std::size_t p = 0; p < n_params; ++p)
                    cand_theta[p] -= rhs[p];
                candidate = MlpParams::from_flat(params.topology, cand_theta);
                candidate_mse = mse(candidate, data);
                if (!std::isfinite(candidate_mse))
                    throw TrainingError(
                        "training aborted: non-finite candidate mse at epoch " +
                        std::to_string(epoch));
                if (candidate_mse < current_mse) {
                    accepted = true;
                    theta = std::move(cand_theta);
                    params = std::move(candidate);
                    current_mse = candidate_mse;
                    mu *= config.mu_dec;
                    log.mu_trace.push_back(mu);
                    break;
                }
            }
            // Rejected attempt (worse candidate or failed factorization).
            mu *= config.mu_inc;
            log.mu_trace.push_back(mu);
            if (mu > config.mu_max) break;
        }

        rec.accepted = accepted;
        rec.mse_after = current_mse;
        rec.mu_after = mu;

        if (validation && accepted) {
            rec.validation_mse = mse(params, *validation);
            if (rec.validation_mse < best_val) {
                best_val = rec.validation_mse;
                best_theta = theta;
                fail_count = 0;
            } else {
                ++fail_count;
            }
        }

        log.epochs.push_back(rec);
        log.epochs_run = epoch;
        log.final_mse = current_mse;

        if (config.show > 0 && epoch % static_cast<std::uint64_t>(config.show) == 0)
            std::fprintf(stderr, "epoch %llu  mse %.6g  mu %.3g\n",
                         static_cast<unsigned long long>(epoch), current_mse, mu);

        if (!accepted) {
            log.stop_reason = StopReason::MuMax;
            break;
        }
        if (validation && fail_count >= config.max_fail) {
            log.stop_reason = StopReason::MaxFail;
            params = MlpParams::from_flat(params.topology, best_theta);
            current_mse = mse(params, data);
            break;
        }
        if (epoch == config.epochs) log.stop_reason = StopReason::Epochs;
    }

    log.final_mse = current_mse;
    return TrainResult{std::move(params), std::move(log)};
}

} // namespace actinet
