#include "actinet/features.hpp"

#include <cmath>

#include "actinet/errors.hpp"
#include "actinet/kernels.hpp"

namespace actinet {

std::optional<Activity> activity_from_string(const std::string& s) {
    if (s == "rest") return Activity::Rest;
    if (s == "walk") return Activity::Walk;
    if (s == "run") return Activity::Run;
    return std::nullopt;
}

std::vector<Window> make_windows(const MagnitudeTrace& trace, std::size_t hop,
                                 std::optional<Activity> label) {
    if (hop == 0) throw ConfigError("window hop must be positive");
    std::vector<Window> out;
    const std::size_t n = trace.values.size();
    for (std::size_t start = 0; start + kWindowLen <= n; start += hop) {
        Window w;
        w.label = label;
        w.start_index = start;
        for (std::size_t i = 0; i < kWindowLen; ++i)
            w.values[i] = trace.values[start + i];
        out.push_back(w);
    }
    return out;
}

std::array<double, kSpectrumBins> fft_magnitudes(const Window& window) {
    static const kernels::FftTables tables(kWindowLen);
    std::array<double, kWindowLen> re{};
    std::array<double, kWindowLen> im{};
    for (std::size_t i = 0; i < kWindowLen; ++i) re[i] = window.values[i];
    kernels::fft_inplace(tables, re.data(), im.data());

    std::array<double, kSpectrumBins> mags{};
    kernels::complex_magnitudes(std::span<const double>(re.data(), kSpectrumBins),
                                std::span<const double>(im.data(), kSpectrumBins),
                                mags);
    return mags;
}

std::array<double, kFeatureCount> select_features(
    const std::array<double, kSpectrumBins>& magnitudes) {
    std::array<double, kFeatureCount> out{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) out[i] = magnitudes[i];
    return out;
}

NormStats fit_normalizer(const std::vector<FeatureVector>& rows) {
    const std::size_t n = rows.size();
    if (n < 2) throw DataError("normalizer needs at least two feature rows");

    NormStats stats;
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        double mean = 0.0;
        for (const FeatureVector& r : rows) mean += r.features[c];
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (const FeatureVector& r : rows) {
            const double d = r.features[c] - mean;
            ss += d * d;
        }
        double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd == 0.0) sd = 1.0;
        stats.mean[c] = mean;
        stats.stddev[c] = sd;
    }
    return stats;
}

FeatureVector apply_normalizer(const NormStats& stats, const FeatureVector& v) {
    FeatureVector out = v;
    kernels::normalize(v.features, stats.mean, stats.stddev, out.features);
    return out;
}

} // namespace actinet
