#pragma once

#include <deque>
#include <vector>

#include "actinet/evaluate.hpp"
#include "actinet/pipeline.hpp"

namespace actinet {

struct LabelEvent {
    std::size_t window_start = 0; // index into the magnitude trace
    double time_s = 0.0;          // window_start / sample_rate
    int class_code = 0;
};

// Causal, sample-at-a-time version of run_pipeline + predict. The centered
// smoothing window imposes a small latency: a sample's smoothed value is
// final once `half` later samples have arrived; finish() resolves the
// remaining tail with the same shrunk boundary windows the offline path
// uses. Labels therefore match the offline pipeline bit for bit on the same
// sample sequence.
class StreamClassifier {
public:
    StreamClassifier(const PipelineConfig& config, const CalibrationParams& cal,
                     MlpParams model, NormStats stats);

    // Feeds one raw sample; returns labels for any windows completed by it.
    // Non-finite samples are skipped and counted.
    std::vector<LabelEvent> push(const RawSample& sample);

    // Flushes the smoothing tail at end of input.
    std::vector<LabelEvent> finish();

    std::size_t skipped_samples() const { return skipped_; }
    std::size_t samples_seen() const { return received_; }

private:
    void emit_magnitude(double value, std::vector<LabelEvent>& out);
    double finalize_index(std::size_t index);

    PipelineConfig config_;
    CalibrationParams cal_;
    MlpParams model_;
    NormStats stats_;
    IirFilter filter_;
    std::vector<FilterState> filter_states_; // one per axis

    int half_ = 1;
    std::array<std::deque<double>, 3> history_; // calibrated g, last 2*half+1
    std::size_t received_ = 0;                  // finite samples accepted
    std::size_t skipped_ = 0;

    std::vector<double> window_buf_; // recent magnitudes
    std::size_t buf_base_ = 0;       // absolute index of window_buf_[0]
    std::size_t mature_ = 0;         // magnitudes produced so far
    std::size_t next_start_ = 0;     // next window start index
    bool finished_ = false;
};

} // namespace actinet
