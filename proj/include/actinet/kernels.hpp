#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Numeric inner loops used by the signal pipeline and the trainer.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. All kernels are lane-independent: each output
// element is produced by the same sequence of IEEE operations in both
// backends, so scalar and SIMD results are bit-identical (the build disables
// FP contraction). That keeps classification and training runs reproducible
// no matter which backend the dispatcher picks.

namespace actinet::kernels {

enum class Backend { Scalar, Avx2 };

const char* backend_name(Backend b);

// True if this host can execute the AVX2 variants.
bool avx2_supported();

// Backend currently in use. The first query selects the best supported
// backend; the ACTINET_BACKEND environment variable ("scalar"/"avx2")
// overrides the automatic choice.
Backend active_backend();

// Forces a backend, primarily for equivalence tests. Returns false (and
// leaves the selection unchanged) if the backend is not usable on this host.
bool set_backend(Backend b);

// out[i] = sqrt(x[i]^2 + y[i]^2 + z[i]^2)
void rms3(std::span<const double> x, std::span<const double> y,
          std::span<const double> z, std::span<double> out);

// Centered moving average with window 2*half+1; windows shrink to the
// available samples at both ends. Accumulation runs in ascending index
// order in every backend.
void moving_average(std::span<const double> x, int half,
                    std::span<double> out);

// out[i] = (v[i] - mean[i]) / stddev[i]
void normalize(std::span<const double> v, std::span<const double> mean,
               std::span<const double> stddev, std::span<double> out);

// Rank-1 symmetric update of the upper triangle of the row-major n x n
// matrix a: a[i][j] += v[i]*v[j] for j >= i.
void sym_outer_acc(double* a, const double* v, std::size_t n);

// out[i] = sqrt(re[i]^2 + im[i]^2)
void complex_magnitudes(std::span<const double> re, std::span<const double> im,
                        std::span<double> out);

// Precomputed tables for a radix-2 FFT of size n (a power of two).
// Twiddles are stored per stage, contiguously, so both backends index the
// identical values.
struct FftTables {
    explicit FftTables(std::size_t n);
    std::size_t size() const { return n_; }

    std::size_t n_ = 0;
    std::vector<std::size_t> bit_reverse;  // permutation indices
    std::vector<std::size_t> stage_offset; // offset into tw_* per stage
    std::vector<double> tw_re, tw_im;      // exp(-2*pi*i*j/len) per stage
};

// In-place forward DFT (decimation in time) on split re/im arrays of
// length tables.size().
void fft_inplace(const FftTables& tables, double* re, double* im);

} // namespace actinet::kernels
