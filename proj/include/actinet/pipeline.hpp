#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "actinet/features.hpp"
#include "actinet/iir.hpp"
#include "actinet/signal.hpp"
#include "actinet/train.hpp"

namespace actinet {

// Everything needed to reproduce a feature extraction or a training run.
struct PipelineConfig {
    double sample_rate_hz = 50.0;
    int smoothing_window = 3;

    int filter_order = 4;
    double filter_edge_hz = 0.8;
    double filter_ripple_db = 0.5;
    double filter_atten_db = 40.0;

    std::size_t window_hop = 128;

    std::vector<std::size_t> hidden_sizes{7, 7};
    TrainConfig train;
    std::uint64_t seed = 0;

    double baseline_rest_threshold = 1.2;

    void validate() const;
    IirFilter design_filter() const;
};

// calibrate -> smooth -> high-pass per axis -> magnitude -> window ->
// FFT -> first 22 bins. Normalization is not applied here; it belongs to
// training and prediction with stored statistics. A trace shorter than one
// window yields an empty list.
std::vector<FeatureVector> run_pipeline(const RawTrace& raw,
                                        const CalibrationParams& cal,
                                        const PipelineConfig& config,
                                        std::optional<Activity> label = {});

// Desk-scale labeled dataset: one synthetic trace per class pushed through
// the pipeline. Each trace carries one extra leading window that is dropped
// so the high-pass settling transient does not contaminate the dataset.
struct SynthDatasetOptions {
    std::size_t windows_per_class = 30;
    double noise_std_g = 0.05;
    std::uint64_t seed = 0;
};

std::vector<FeatureVector> make_synth_dataset(const SynthDatasetOptions& options,
                                              const PipelineConfig& config);

} // namespace actinet
