#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace actinet {

// One three-axis accelerometer sample, raw sensor units (mV).
struct RawSample {
    double x_mv = 0.0, y_mv = 0.0, z_mv = 0.0;
};

struct RawTrace {
    double sample_rate_hz = 50.0;
    std::vector<RawSample> samples;
};

// Per-axis linear map from raw counts to g-units:
// g = (mv - offset) / sensitivity.
struct CalibrationParams {
    std::array<double, 3> offset_mv{1650.0, 1650.0, 1650.0};
    std::array<double, 3> sensitivity_mv_per_g{200.0, 200.0, 200.0};
};

struct GSample {
    double x = 0.0, y = 0.0, z = 0.0;
};

struct CalibratedTrace {
    double sample_rate_hz = 50.0;
    std::vector<GSample> samples;
    // Count of samples outside the sensor's +-6 g range. Out-of-range values
    // are kept (the map is still linear); callers may warn.
    std::size_t out_of_range = 0;
};

struct MagnitudeTrace {
    double sample_rate_hz = 50.0;
    std::vector<double> values;
};

// Two-posture calibration: the sensor reports (0g, 0g, +1g) worn upright and
// (0g, 0g, -1g) inverted, which pins offset and sensitivity on z. x and y see
// 0 g in both postures, so their sensitivities fall back to the datasheet
// nominal. Throws ConfigError when the two z means coincide.
CalibrationParams derive_calibration(const std::array<double, 3>& upright_mean_mv,
                                     const std::array<double, 3>& inverted_mean_mv,
                                     double nominal_sensitivity_mv_per_g);

CalibratedTrace calibrate(const RawTrace& raw, const CalibrationParams& cal);

// Centered moving average, window length odd; boundary windows shrink to the
// available samples. window_len == 1 is the identity.
std::vector<double> moving_average(const std::vector<double>& series,
                                   int window_len);

// Per-sample Euclidean norm of the three axes.
MagnitudeTrace magnitude(const CalibratedTrace& trace);

// Column views used by the per-axis stages.
std::array<std::vector<double>, 3> split_axes(const CalibratedTrace& trace);

} // namespace actinet
