// AVX2 kernel variants. Compiled with -mavx2; only reached after the
// dispatcher has confirmed CPU support. Each loop performs the same
// per-element operation sequence as the scalar reference (no FMA, no
// cross-lane reduction), so outputs are bit-identical to the scalar backend.

#include <immintrin.h>

#include <cmath>

#include "vtable.hpp"

namespace actinet::kernels::detail {
namespace {

void rms3_avx2(const double* x, const double* y, const double* z, double* out,
               std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vz = _mm256_loadu_pd(z + i);
        __m256d s = _mm256_add_pd(_mm256_mul_pd(vx, vx), _mm256_mul_pd(vy, vy));
        s = _mm256_add_pd(s, _mm256_mul_pd(vz, vz));
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
    }
    for (; i < n; ++i) {
        double s = x[i] * x[i] + y[i] * y[i];
        s += z[i] * z[i];
        out[i] = std::sqrt(s);
    }
}

void moving_average_avx2(const double* x, std::size_t n, int half,
                         double* out) {
    const std::ptrdiff_t h = half;
    const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);

    auto scalar_at = [&](std::ptrdiff_t i) {
        const std::ptrdiff_t lo = i - h < 0 ? 0 : i - h;
        const std::ptrdiff_t hi = i + h >= sn ? sn - 1 : i + h;
        double acc = 0.0;
        for (std::ptrdiff_t j = lo; j <= hi; ++j) acc += x[j];
        out[i] = acc / static_cast<double>(hi - lo + 1);
    };

    std::ptrdiff_t i = 0;
    for (; i < h && i < sn; ++i) scalar_at(i);
    const __m256d count = _mm256_set1_pd(static_cast<double>(2 * h + 1));
    for (; i + 4 <= sn - h; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::ptrdiff_t off = -h; off <= h; ++off)
            acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i + off));
        _mm256_storeu_pd(out + i, _mm256_div_pd(acc, count));
    }
    for (; i < sn; ++i) scalar_at(i);
}

void normalize_avx2(const double* v, const double* mean, const double* stddev,
                    double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(mean + i));
        _mm256_storeu_pd(out + i, _mm256_div_pd(d, _mm256_loadu_pd(stddev + i)));
    }
    for (; i < n; ++i) out[i] = (v[i] - mean[i]) / stddev[i];
}

void sym_outer_acc_avx2(double* a, const double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double vi = v[i];
        const __m256d bvi = _mm256_set1_pd(vi);
        double* row = a + i * n;
        std::size_t j = i;
        for (; j + 4 <= n; j += 4) {
            const __m256d prod = _mm256_mul_pd(bvi, _mm256_loadu_pd(v + j));
            _mm256_storeu_pd(row + j,
                             _mm256_add_pd(_mm256_loadu_pd(row + j), prod));
        }
        for (; j < n; ++j) row[j] += vi * v[j];
    }
}

void complex_magnitudes_avx2(const double* re, const double* im, double* out,
                             std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_loadu_pd(re + i);
        const __m256d m = _mm256_loadu_pd(im + i);
        const __m256d s = _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(m, m));
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
    }
    for (; i < n; ++i) out[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
}

void fft_stages_avx2(const FftTables& t, double* re, double* im) {
    const std::size_t n = t.size();
    std::size_t stage = 0;
    for (std::size_t len = 2; len <= n; len <<= 1, ++stage) {
        const std::size_t half = len >> 1;
        const double* wr = t.tw_re.data() + t.stage_offset[stage];
        const double* wi = t.tw_im.data() + t.stage_offset[stage];
        for (std::size_t start = 0; start < n; start += len) {
            std::size_t j = 0;
            for (; j + 4 <= half; j += 4) {
                const std::size_t a = start + j;
                const std::size_t b = a + half;
                const __m256d vwr = _mm256_loadu_pd(wr + j);
                const __m256d vwi = _mm256_loadu_pd(wi + j);
                const __m256d rb = _mm256_loadu_pd(re + b);
                const __m256d ib = _mm256_loadu_pd(im + b);
                const __m256d ra = _mm256_loadu_pd(re + a);
                const __m256d ia = _mm256_loadu_pd(im + a);
                const __m256d tr =
                    _mm256_sub_pd(_mm256_mul_pd(vwr, rb), _mm256_mul_pd(vwi, ib));
                const __m256d ti =
                    _mm256_add_pd(_mm256_mul_pd(vwr, ib), _mm256_mul_pd(vwi, rb));
                _mm256_storeu_pd(re + b, _mm256_sub_pd(ra, tr));
                _mm256_storeu_pd(im + b, _mm256_sub_pd(ia, ti));
                _mm256_storeu_pd(re + a, _mm256_add_pd(ra, tr));
                _mm256_storeu_pd(im + a, _mm256_add_pd(ia, ti));
            }
            for (; j < half; ++j) {
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

const Vtable kAvx2 = {
    rms3_avx2,          moving_average_avx2,    normalize_avx2,
    sym_outer_acc_avx2, complex_magnitudes_avx2, fft_stages_avx2,
};

} // namespace

const Vtable* avx2_vtable() { return &kAvx2; }

} // namespace actinet::kernels::detail
