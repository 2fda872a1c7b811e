#include "actinet/stream.hpp"

#include <cmath>

#include "actinet/errors.hpp"

namespace actinet {

StreamClassifier::StreamClassifier(const PipelineConfig& config,
                                   const CalibrationParams& cal,
                                   MlpParams model, NormStats stats)
    : config_(config), cal_(cal), model_(std::move(model)),
      stats_(std::move(stats)), filter_(config.design_filter()) {
    config_.validate();
    half_ = config_.smoothing_window / 2;
    for (int a = 0; a < 3; ++a) filter_states_.emplace_back(filter_);
}

// Smoothed value at `index`, summed in ascending order over the same shrunk
// window the offline kernel uses. Only callable while the history deques
// still cover [index - half, min(index + half, received - 1)].
double StreamClassifier::finalize_index(std::size_t index) {
    const std::size_t lo = index >= static_cast<std::size_t>(half_)
                               ? index - static_cast<std::size_t>(half_)
                               : 0;
    const std::size_t hi =
        std::min(index + static_cast<std::size_t>(half_), received_ - 1);
    // history_[a] holds samples [received_ - history.size(), received_ - 1].
    const std::size_t base = received_ - history_[0].size();

    double filtered[3];
    for (int a = 0; a < 3; ++a) {
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j)
            acc += history_[static_cast<std::size_t>(a)][j - base];
        const double smoothed = acc / static_cast<double>(hi - lo + 1);
        filtered[a] = filter_states_[static_cast<std::size_t>(a)].step(smoothed);
    }
    // Same operation order as the rms3 kernel.
    double s = filtered[0] * filtered[0] + filtered[1] * filtered[1];
    s += filtered[2] * filtered[2];
    return std::sqrt(s);
}

void StreamClassifier::emit_magnitude(double value,
                                      std::vector<LabelEvent>& out) {
    window_buf_.push_back(value);
    ++mature_;

    while (mature_ >= next_start_ + kWindowLen) {
        Window w;
        w.start_index = next_start_;
        const std::size_t off = next_start_ - buf_base_;
        for (std::size_t i = 0; i < kWindowLen; ++i)
            w.values[i] = window_buf_[off + i];

        FeatureVector fv;
        fv.features = select_features(fft_magnitudes(w));
        const FeatureVector norm = apply_normalizer(stats_, fv);
        LabelEvent ev;
        ev.window_start = next_start_;
        ev.time_s = static_cast<double>(next_start_) / config_.sample_rate_hz;
        ev.class_code = decode_class(forward(model_, norm.features).output());
        out.push_back(ev);

        next_start_ += config_.window_hop;
        // Drop buffered magnitudes no window can still need.
        if (next_start_ > buf_base_) {
            const std::size_t drop =
                std::min(next_start_ - buf_base_, window_buf_.size());
            window_buf_.erase(window_buf_.begin(),
                              window_buf_.begin() +
                                  static_cast<std::ptrdiff_t>(drop));
            buf_base_ += drop;
        }
    }
}

std::vector<LabelEvent> StreamClassifier::push(const RawSample& sample) {
    if (finished_) throw DataError("stream already finished");
    std::vector<LabelEvent> out;

    if (!std::isfinite(sample.x_mv) || !std::isfinite(sample.y_mv) ||
        !std::isfinite(sample.z_mv)) {
        ++skipped_;
        return out;
    }

    const double g[3] = {
        (sample.x_mv - cal_.offset_mv[0]) / cal_.sensitivity_mv_per_g[0],
        (sample.y_mv - cal_.offset_mv[1]) / cal_.sensitivity_mv_per_g[1],
        (sample.z_mv - cal_.offset_mv[2]) / cal_.sensitivity_mv_per_g[2],
    };
    const std::size_t keep = 2 * static_cast<std::size_t>(half_) + 1;
    for (int a = 0; a < 3; ++a) {
        auto& h = history_[static_cast<std::size_t>(a)];
        h.push_back(g[a]);
        if (h.size() > keep) h.pop_front();
    }
    ++received_;

    // Sample (received_ - 1) completes the smoothing window of
    // index received_ - 1 - half.
    if (received_ >= static_cast<std::size_t>(half_) + 1)
        emit_magnitude(
            finalize_index(received_ - 1 - static_cast<std::size_t>(half_)),
            out);
    return out;
}

std::vector<LabelEvent> StreamClassifier::finish() {
    std::vector<LabelEvent> out;
    if (finished_) return out;
    finished_ = true;
    if (received_ == 0) return out;

    // Indices whose centered window ran past the end of input: their
    // windows shrink, exactly like the offline boundary handling.
    const std::size_t done =
        received_ >= static_cast<std::size_t>(half_)
            ? received_ - static_cast<std::size_t>(half_)
            : 0;
    for (std::size_t i = done; i < received_; ++i)
        emit_magnitude(finalize_index(i), out);
    return out;
}

} // namespace actinet
