#include "actinet/mlp.hpp"

#include <cmath>

#include "actinet/errors.hpp"
#include "actinet/rng.hpp"

namespace actinet {

const char* to_string(Transfer t) {
    return t == Transfer::Tansig ? "tansig" : "purelin";
}

std::size_t Topology::fan_in(std::size_t layer) const {
    return layer == 0 ? n_inputs : hidden_sizes[layer - 1];
}

std::size_t Topology::fan_out(std::size_t layer) const {
    return layer == hidden_sizes.size() ? n_outputs : hidden_sizes[layer];
}

std::size_t Topology::parameter_count() const {
    std::size_t total = 0;
    for (std::size_t l = 0; l < layer_count(); ++l)
        total += fan_out(l) * (fan_in(l) + 1);
    return total;
}

void Topology::validate() const {
    if (n_inputs == 0 || n_outputs == 0)
        throw ConfigError("topology needs at least one input and one output");
    for (std::size_t h : hidden_sizes)
        if (h == 0) throw ConfigError("hidden layer sizes must be >= 1");
}

std::vector<double> MlpParams::flatten() const {
    std::vector<double> theta;
    theta.reserve(topology.parameter_count());
    for (const LayerParams& l : layers) {
        theta.insert(theta.end(), l.weights.data().begin(),
                     l.weights.data().end());
        theta.insert(theta.end(), l.bias.begin(), l.bias.end());
    }
    return theta;
}

MlpParams MlpParams::from_flat(const Topology& topo,
                               const std::vector<double>& theta) {
    if (theta.size() != topo.parameter_count())
        throw ConfigError("flat parameter vector does not match topology");
    MlpParams p;
    p.topology = topo;
    std::size_t off = 0;
    for (std::size_t l = 0; l < topo.layer_count(); ++l) {
        LayerParams lp;
        const std::size_t fo = topo.fan_out(l), fi = topo.fan_in(l);
        lp.weights = Matrix(fo, fi);
        std::copy(theta.begin() + off, theta.begin() + off + fo * fi,
                  lp.weights.data().begin());
        off += fo * fi;
        lp.bias.assign(theta.begin() + off, theta.begin() + off + fo);
        off += fo;
        p.layers.push_back(std::move(lp));
    }
    return p;
}

double tansig(double n) {
    // (1 - e^(-2|n|)) / (1 + e^(-2|n|)) with the sign restored afterwards,
    // so tansig(-n) == -tansig(n) bit for bit and large |n| saturates
    // cleanly instead of overflowing the exponential.
    const double t = std::exp(-2.0 * std::abs(n));
    const double v = (1.0 - t) / (1.0 + t);
    return n < 0.0 ? -v : v;
}

namespace {

MlpParams empty_params(const Topology& topo) {
    topo.validate();
    MlpParams p;
    p.topology = topo;
    for (std::size_t l = 0; l < topo.layer_count(); ++l) {
        LayerParams lp;
        lp.weights = Matrix(topo.fan_out(l), topo.fan_in(l));
        lp.bias.assign(topo.fan_out(l), 0.0);
        p.layers.push_back(std::move(lp));
    }
    return p;
}

} // namespace

MlpParams init_nguyen_widrow(const Topology& topology, std::uint64_t seed) {
    MlpParams p = empty_params(topology);
    SplitMix64 rng(seed);
    for (std::size_t l = 0; l < topology.layer_count(); ++l) {
        LayerParams& lp = p.layers[l];
        const std::size_t fo = topology.fan_out(l);
        const std::size_t fi = topology.fan_in(l);
        if (topology.transfer(l) == Transfer::Purelin) {
            for (std::size_t i = 0; i < fo; ++i) {
                for (std::size_t j = 0; j < fi; ++j)
                    lp.weights(i, j) = rng.uniform(-0.5, 0.5);
                lp.bias[i] = rng.uniform(-0.5, 0.5);
            }
            continue;
        }
        const double beta =
            0.7 * std::pow(static_cast<double>(fo),
                           1.0 / static_cast<double>(fi));
        for (std::size_t i = 0; i < fo; ++i) {
            double norm = 0.0;
            do {
                norm = 0.0;
                for (std::size_t j = 0; j < fi; ++j) {
                    lp.weights(i, j) = rng.uniform(-1.0, 1.0);
                    norm += lp.weights(i, j) * lp.weights(i, j);
                }
                norm = std::sqrt(norm);
            } while (norm == 0.0);
            for (std::size_t j = 0; j < fi; ++j)
                lp.weights(i, j) *= beta / norm;
            const double spread =
                fo > 1 ? -1.0 + 2.0 * static_cast<double>(i) /
                                    static_cast<double>(fo - 1)
                       : 0.0;
            const double sign = lp.weights(i, 0) < 0.0 ? -1.0 : 1.0;
            lp.bias[i] = beta * spread * sign;
        }
    }
    return p;
}

MlpParams init_uniform(const Topology& topology, std::uint64_t seed, double lo,
                       double hi) {
    MlpParams p = empty_params(topology);
    SplitMix64 rng(seed);
    for (LayerParams& lp : p.layers) {
        for (double& w : lp.weights.data()) w = rng.uniform(lo, hi);
        for (double& b : lp.bias) b = rng.uniform(lo, hi);
    }
    return p;
}

ForwardTrace forward(const MlpParams& params, std::span<const double> input) {
    const Topology& topo = params.topology;
    if (input.size() != topo.n_inputs)
        throw ConfigError("input dimension does not match topology");

    ForwardTrace trace;
    trace.activations.reserve(topo.layer_count() + 1);
    trace.activations.emplace_back(input.begin(), input.end());

    for (std::size_t l = 0; l < topo.layer_count(); ++l) {
        const LayerParams& lp = params.layers[l];
        const std::vector<double>& in = trace.activations.back();
        std::vector<double> out(topo.fan_out(l));
        for (std::size_t i = 0; i < out.size(); ++i) {
            double acc = 0.0;
            const double* row = lp.weights.row(i);
            for (std::size_t j = 0; j < in.size(); ++j) acc += row[j] * in[j];
            acc += lp.bias[i];
            out[i] = topo.transfer(l) == Transfer::Tansig ? tansig(acc) : acc;
        }
        trace.activations.push_back(std::move(out));
    }
    return trace;
}

} // namespace actinet
