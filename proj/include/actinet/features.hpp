#pragma once

#include <array>
#include <optional>
#include <vector>

#include "actinet/activity.hpp"
#include "actinet/signal.hpp"

namespace actinet {

inline constexpr std::size_t kWindowLen = 128;
inline constexpr std::size_t kFeatureCount = 22;
inline constexpr std::size_t kSpectrumBins = kWindowLen / 2 + 1; // 65

struct Window {
    std::array<double, kWindowLen> values{};
    std::optional<Activity> label;
    std::size_t start_index = 0; // position in the source magnitude trace
};

struct FeatureVector {
    std::array<double, kFeatureCount> features{};
    std::optional<Activity> label;
    std::size_t start_index = 0;
};

// Slices the magnitude trace into 128-sample windows starting at
// 0, hop, 2*hop, ...; a trailing partial window is discarded. A trace
// shorter than one window yields an empty list.
std::vector<Window> make_windows(const MagnitudeTrace& trace, std::size_t hop,
                                 std::optional<Activity> label = {});

// |X[k]| for k = 0..64 of the 128-point DFT (real-input symmetry makes the
// upper half redundant). No taper, no scaling.
std::array<double, kSpectrumBins> fft_magnitudes(const Window& window);

// Bins 0..21; bin 21 corresponds to 21*fs/128 (about 8.2 Hz at 50 Hz).
std::array<double, kFeatureCount> select_features(
    const std::array<double, kSpectrumBins>& magnitudes);

// Column-wise z-score statistics fit on training data only.
struct NormStats {
    std::array<double, kFeatureCount> mean{};
    std::array<double, kFeatureCount> stddev{};
};

// Column mean and sample standard deviation (divisor n-1). Zero-variance
// columns get stddev 1 so they normalize to 0 instead of blowing up.
// Throws DataError for fewer than two rows.
NormStats fit_normalizer(const std::vector<FeatureVector>& rows);

FeatureVector apply_normalizer(const NormStats& stats, const FeatureVector& v);

} // namespace actinet
