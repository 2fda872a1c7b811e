#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "actinet/linalg.hpp"

namespace actinet {

enum class Transfer { Tansig, Purelin };

const char* to_string(Transfer t);

// Feed-forward topology: n_inputs -> hidden_sizes... -> n_outputs.
// Hidden layers use tansig, the output layer purelin. hidden_sizes may be
// empty (a single linear layer), which the trainer tests rely on.
struct Topology {
    std::size_t n_inputs = 22;
    std::vector<std::size_t> hidden_sizes{7, 7};
    std::size_t n_outputs = 1;

    std::size_t layer_count() const { return hidden_sizes.size() + 1; }
    std::size_t fan_in(std::size_t layer) const;
    std::size_t fan_out(std::size_t layer) const;
    Transfer transfer(std::size_t layer) const {
        return layer + 1 == layer_count() ? Transfer::Purelin : Transfer::Tansig;
    }
    // Total weight + bias count, the dimension LM optimizes over.
    std::size_t parameter_count() const;

    void validate() const; // throws ConfigError
    bool operator==(const Topology&) const = default;
};

struct LayerParams {
    Matrix weights; // fan_out x fan_in
    std::vector<double> bias;
};

// Parameter order used everywhere a flat view is needed (LM steps, the
// Jacobian columns, serialization): layer-major; within a layer the weight
// matrix row-major, then the biases.
struct MlpParams {
    Topology topology;
    std::vector<LayerParams> layers;

    std::vector<double> flatten() const;
    static MlpParams from_flat(const Topology& topo,
                               const std::vector<double>& theta);
};

// 2/(1+e^(-2n)) - 1, computed in an exactly odd-symmetric form.
double tansig(double n);
// Derivative in terms of the activation value: 1 - a^2.
inline double tansig_derivative_from_output(double a) { return 1.0 - a * a; }

// Nguyen-Widrow initialization: hidden rows are random directions scaled to
// 0.7 * H^(1/fan_in), biases spread linearly across the active region with
// the sign of the row's first weight; the output layer is uniform in
// [-0.5, 0.5]. Deterministic for a given seed.
MlpParams init_nguyen_widrow(const Topology& topology, std::uint64_t seed);

// All weights and biases uniform in [lo, hi]. Large ranges are the
// pathological regime where training can stall at a constant output.
MlpParams init_uniform(const Topology& topology, std::uint64_t seed, double lo,
                       double hi);

// Post-activation values per layer, retained for Jacobian assembly.
// activations[0] is the input, activations[k] the output of layer k-1.
struct ForwardTrace {
    std::vector<std::vector<double>> activations;
    double output() const { return activations.back()[0]; }
};

ForwardTrace forward(const MlpParams& params, std::span<const double> input);

} // namespace actinet
