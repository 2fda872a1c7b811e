#pragma once

#include <array>
#include <complex>
#include <vector>

namespace actinet {

// One second-order section, direct form II transposed.
// y = b0*x + s1; s1 = b1*x - a1*y + s2; s2 = b2*x - a2*y
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

struct FilterDesignMeta {
    int order = 0;
    double passband_edge_hz = 0.0;
    double passband_ripple_db = 0.0;
    double stopband_atten_db = 0.0;
    double sample_rate_hz = 0.0;
};

struct IirFilter {
    std::vector<Biquad> sections;
    FilterDesignMeta meta;
};

// Running state for one cascade, used by the streaming classifier.
class FilterState {
public:
    explicit FilterState(const IirFilter& filter);
    double step(double x);
    const IirFilter& filter() const { return *filter_; }

private:
    const IirFilter* filter_;
    std::vector<std::array<double, 2>> state_; // (s1, s2) per section
};

// Designs a digital high-pass elliptic filter: analog low-pass prototype
// (equiripple passband and stopband), low-pass to high-pass transformation
// at the prewarped edge, bilinear transform, then pairing into biquads.
// The attained stopband attenuation is nudged to be >= the request so the
// DC gain never exceeds 10^(-atten/20).
//
// order must be even and positive; ripple > 0; atten > ripple;
// 0 < passband_edge < sample_rate/2. Violations throw ConfigError.
IirFilter design_highpass_elliptic(int order, double passband_edge_hz,
                                   double passband_ripple_db,
                                   double stopband_atten_db,
                                   double sample_rate_hz);

// Causal single-pass evaluation with zero initial state.
std::vector<double> filter_apply(const IirFilter& filter,
                                 const std::vector<double>& series);

// Complex gain of the cascade at frequency f (Hz).
std::complex<double> frequency_response(const IirFilter& filter, double f_hz);

// Pole magnitudes of every section (two per biquad).
std::vector<double> pole_magnitudes(const IirFilter& filter);

// True when every pole lies strictly inside the unit circle.
bool is_stable(const IirFilter& filter);

} // namespace actinet
