#include "actinet/pipeline.hpp"

#include "actinet/errors.hpp"
#include "actinet/rng.hpp"
#include "actinet/synth.hpp"

namespace actinet {

void PipelineConfig::validate() const {
    if (!(sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");
    if (smoothing_window < 1 || smoothing_window % 2 == 0)
        throw ConfigError("smoothing window must be odd and positive");
    if (window_hop == 0) throw ConfigError("window hop must be positive");
    train.validate();
}

IirFilter PipelineConfig::design_filter() const {
    return design_highpass_elliptic(filter_order, filter_edge_hz,
                                    filter_ripple_db, filter_atten_db,
                                    sample_rate_hz);
}

std::vector<FeatureVector> run_pipeline(const RawTrace& raw,
                                        const CalibrationParams& cal,
                                        const PipelineConfig& config,
                                        std::optional<Activity> label) {
    config.validate();
    const CalibratedTrace calibrated = calibrate(raw, cal);
    if (calibrated.samples.size() < kWindowLen) return {}; // too short
    const IirFilter filter = config.design_filter();

    auto axes = split_axes(calibrated);
    CalibratedTrace body;
    body.sample_rate_hz = calibrated.sample_rate_hz;
    body.samples.resize(calibrated.samples.size());
    for (int a = 0; a < 3; ++a) {
        const std::vector<double> smoothed =
            moving_average(axes[static_cast<std::size_t>(a)],
                           config.smoothing_window);
        const std::vector<double> filtered = filter_apply(filter, smoothed);
        for (std::size_t i = 0; i < filtered.size(); ++i) {
            GSample& s = body.samples[i];
            (a == 0 ? s.x : a == 1 ? s.y : s.z) = filtered[i];
        }
    }

    const MagnitudeTrace mag = magnitude(body);
    std::vector<FeatureVector> out;
    for (const Window& w : make_windows(mag, config.window_hop, label)) {
        FeatureVector fv;
        fv.features = select_features(fft_magnitudes(w));
        fv.label = w.label;
        fv.start_index = w.start_index;
        out.push_back(fv);
    }
    return out;
}

std::vector<FeatureVector> make_synth_dataset(const SynthDatasetOptions& options,
                                              const PipelineConfig& config) {
    if (options.windows_per_class == 0)
        throw ConfigError("need at least one window per class");

    // One extra window per trace absorbs the high-pass settling transient.
    // Starts land at 0, hop, ..., so (windows_per_class + 1) windows need
    // exactly windows_per_class * hop + window_len samples.
    const std::size_t samples_needed =
        options.windows_per_class * config.window_hop + kWindowLen;
    const double duration =
        static_cast<double>(samples_needed) / config.sample_rate_hz;

    const CalibrationParams cal; // nominal sensor constants
    SplitMix64 seeder(options.seed);

    std::vector<FeatureVector> rows;
    for (Activity activity : {Activity::Rest, Activity::Walk, Activity::Run}) {
        const SynthSpec spec = SynthSpec::for_activity(
            activity, duration, seeder.next_u64(), options.noise_std_g);
        const SynthResult synth =
            synth_trace(spec, cal, config.sample_rate_hz);
        std::vector<FeatureVector> features =
            run_pipeline(synth.trace, cal, config, activity);
        if (features.size() != options.windows_per_class + 1)
            throw DataError("synthetic trace produced an unexpected window count");
        rows.insert(rows.end(), features.begin() + 1, features.end());
    }
    return rows;
}

} // namespace actinet
