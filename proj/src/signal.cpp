#include "actinet/signal.hpp"

#include <cmath>

#include "actinet/errors.hpp"
#include "actinet/kernels.hpp"

namespace actinet {

CalibrationParams derive_calibration(const std::array<double, 3>& up,
                                     const std::array<double, 3>& down,
                                     double nominal_sensitivity_mv_per_g) {
    if (up[2] == down[2])
        throw ConfigError(
            "degenerate calibration: upright and inverted z means are equal");
    if (nominal_sensitivity_mv_per_g == 0.0 ||
        !std::isfinite(nominal_sensitivity_mv_per_g))
        throw ConfigError("nominal sensitivity must be finite and nonzero");

    CalibrationParams cal;
    cal.offset_mv = {up[0], up[1], (up[2] + down[2]) / 2.0};
    cal.sensitivity_mv_per_g = {nominal_sensitivity_mv_per_g,
                                nominal_sensitivity_mv_per_g,
                                (up[2] - down[2]) / 2.0};
    return cal;
}

CalibratedTrace calibrate(const RawTrace& raw, const CalibrationParams& cal) {
    for (double s : cal.sensitivity_mv_per_g)
        if (s == 0.0 || !std::isfinite(s))
            throw ConfigError("calibration sensitivity must be finite and nonzero");

    CalibratedTrace out;
    out.sample_rate_hz = raw.sample_rate_hz;
    out.samples.reserve(raw.samples.size());
    for (const RawSample& s : raw.samples) {
        GSample g;
        g.x = (s.x_mv - cal.offset_mv[0]) / cal.sensitivity_mv_per_g[0];
        g.y = (s.y_mv - cal.offset_mv[1]) / cal.sensitivity_mv_per_g[1];
        g.z = (s.z_mv - cal.offset_mv[2]) / cal.sensitivity_mv_per_g[2];
        if (std::abs(g.x) > 6.0 || std::abs(g.y) > 6.0 || std::abs(g.z) > 6.0)
            ++out.out_of_range;
        out.samples.push_back(g);
    }
    return out;
}

std::vector<double> moving_average(const std::vector<double>& series,
                                   int window_len) {
    if (window_len < 1 || window_len % 2 == 0)
        throw ConfigError("moving average window must be odd and positive");
    if (static_cast<std::size_t>(window_len) > series.size())
        throw ConfigError("moving average window exceeds series length");

    std::vector<double> out(series.size());
    kernels::moving_average(series, window_len / 2, out);
    return out;
}

MagnitudeTrace magnitude(const CalibratedTrace& trace) {
    auto axes = split_axes(trace);
    MagnitudeTrace out;
    out.sample_rate_hz = trace.sample_rate_hz;
    out.values.resize(trace.samples.size());
    kernels::rms3(axes[0], axes[1], axes[2], out.values);
    return out;
}

std::array<std::vector<double>, 3> split_axes(const CalibratedTrace& trace) {
    std::array<std::vector<double>, 3> axes;
    for (auto& a : axes) a.reserve(trace.samples.size());
    for (const GSample& s : trace.samples) {
        axes[0].push_back(s.x);
        axes[1].push_back(s.y);
        axes[2].push_back(s.z);
    }
    return axes;
}

} // namespace actinet
