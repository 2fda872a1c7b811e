#include "actinet/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "actinet/errors.hpp"
#include "vtable.hpp"

namespace actinet::kernels {
namespace detail {
namespace {

constexpr double kPi = 3.14159265358979323846;

void rms3_scalar(const double* x, const double* y, const double* z,
                 double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i] * x[i] + y[i] * y[i];
        s += z[i] * z[i];
        out[i] = std::sqrt(s);
    }
}

void moving_average_scalar(const double* x, std::size_t n, int half,
                           double* out) {
    const std::ptrdiff_t h = half;
    const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
        const std::ptrdiff_t lo = i - h < 0 ? 0 : i - h;
        const std::ptrdiff_t hi = i + h >= sn ? sn - 1 : i + h;
        double acc = 0.0;
        for (std::ptrdiff_t j = lo; j <= hi; ++j) acc += x[j];
        out[i] = acc / static_cast<double>(hi - lo + 1);
    }
}

void normalize_scalar(const double* v, const double* mean,
                      const double* stddev, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (v[i] - mean[i]) / stddev[i];
}

void sym_outer_acc_scalar(double* a, const double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double vi = v[i];
        double* row = a + i * n;
        for (std::size_t j = i; j < n; ++j) row[j] += vi * v[j];
    }
}

void complex_magnitudes_scalar(const double* re, const double* im, double* out,
                               std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
}

void fft_stages_scalar(const FftTables& t, double* re, double* im) {
    const std::size_t n = t.size();
    std::size_t stage = 0;
    for (std::size_t len = 2; len <= n; len <<= 1, ++stage) {
        const std::size_t half = len >> 1;
        const double* wr = t.tw_re.data() + t.stage_offset[stage];
        const double* wi = t.tw_im.data() + t.stage_offset[stage];
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const std::size_t a = start + j;
                const std::size_t b = a + half;
                const double tr = wr[j] * re[b] - wi[j] * im[b];
                const double ti = wr[j] * im[b] + wi[j] * re[b];
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
            }
        }
    }
}

const Vtable kScalar = {
    rms3_scalar,          moving_average_scalar,    normalize_scalar,
    sym_outer_acc_scalar, complex_magnitudes_scalar, fft_stages_scalar,
};

} // namespace

const Vtable* scalar_vtable() { return &kScalar; }

namespace {

const Vtable* pick_initial() {
#if defined(ACTINET_HAVE_AVX2)
    if (const char* env = std::getenv("ACTINET_BACKEND")) {
        if (std::strcmp(env, "scalar") == 0) return scalar_vtable();
        if (std::strcmp(env, "avx2") == 0 && avx2_supported())
            return avx2_vtable();
    }
    if (avx2_supported()) return avx2_vtable();
#else
    if (const char* env = std::getenv("ACTINET_BACKEND")) (void)env;
#endif
    return scalar_vtable();
}

std::atomic<const Vtable*>& active_vtable() {
    static std::atomic<const Vtable*> v{pick_initial()};
    return v;
}

} // namespace
} // namespace detail

bool avx2_supported() {
#if defined(ACTINET_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const char* backend_name(Backend b) {
    switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    }
    return "?";
}

Backend active_backend() {
    const detail::Vtable* v = detail::active_vtable().load();
    return v == detail::scalar_vtable() ? Backend::Scalar : Backend::Avx2;
}

bool set_backend(Backend b) {
    if (b == Backend::Scalar) {
        detail::active_vtable().store(detail::scalar_vtable());
        return true;
    }
#if defined(ACTINET_HAVE_AVX2)
    if (avx2_supported()) {
        detail::active_vtable().store(detail::avx2_vtable());
        return true;
    }
#endif
    return false;
}

void rms3(std::span<const double> x, std::span<const double> y,
          std::span<const double> z, std::span<double> out) {
    detail::active_vtable().load()->rms3(x.data(), y.data(), z.data(),
                                         out.data(), out.size());
}

void moving_average(std::span<const double> x, int half,
                    std::span<double> out) {
    detail::active_vtable().load()->moving_average(x.data(), x.size(), half,
                                                   out.data());
}

void normalize(std::span<const double> v, std::span<const double> mean,
               std::span<const double> stddev, std::span<double> out) {
    detail::active_vtable().load()->normalize(v.data(), mean.data(),
                                              stddev.data(), out.data(),
                                              out.size());
}

void sym_outer_acc(double* a, const double* v, std::size_t n) {
    detail::active_vtable().load()->sym_outer_acc(a, v, n);
}

void complex_magnitudes(std::span<const double> re, std::span<const double> im,
                        std::span<double> out) {
    detail::active_vtable().load()->complex_magnitudes(re.data(), im.data(),
                                                       out.data(), out.size());
}

FftTables::FftTables(std::size_t n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw ConfigError("FFT size must be a power of two >= 2");
    bit_reverse.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        bit_reverse[i] = r;
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        stage_offset.push_back(tw_re.size());
        for (std::size_t j = 0; j < half; ++j) {
            const double ang = -2.0 * detail::kPi * static_cast<double>(j) /
                               static_cast<double>(len);
            tw_re.push_back(std::cos(ang));
            tw_im.push_back(std::sin(ang));
        }
    }
}

void fft_inplace(const FftTables& tables, double* re, double* im) {
    const std::size_t n = tables.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = tables.bit_reverse[i];
        if (j > i) {
            std::swap(re[i], re[j]);
            std::swap(im[i], im[j]);
        }
    }
    detail::active_vtable().load()->fft_stages(tables, re, im);
}

} // namespace actinet::kernels
