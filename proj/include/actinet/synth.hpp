#pragma once

#include <cstdint>

#include "actinet/activity.hpp"
#include "actinet/signal.hpp"

namespace actinet {

// Two-harmonic sinusoid plus white noise, standing in for subject
// recordings. Body acceleration is split 20/20/60 across x/y/z to mimic a
// chest-worn unit's vertical dominance; gravity contributes +1 g on z.
struct SynthSpec {
    Activity activity = Activity::Walk;
    double duration_s = 10.0;
    double fundamental_hz = 2.0;  // walk default; run default is 3.5
    double body_amp_g = 0.4;      // walk default; run default is 1.2
    double harmonic_ratio = 0.3;
    double noise_std_g = 0.05;
    std::uint64_t seed = 0;

    static SynthSpec for_activity(Activity a, double duration_s,
                                  std::uint64_t seed,
                                  double noise_std_g = 0.05);

    void validate() const; // throws ConfigError when outside the activity band
};

struct SynthResult {
    RawTrace trace;
    Activity label;
};

// Generates the raw-mV trace by building the g-domain signal and inverting
// the calibration. Deterministic for a given spec and seed.
SynthResult synth_trace(const SynthSpec& spec, const CalibrationParams& cal,
                        double sample_rate_hz = 50.0);

} // namespace actinet
