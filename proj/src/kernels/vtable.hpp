#pragma once

#include "actinet/kernels.hpp"

namespace actinet::kernels::detail {

struct Vtable {
    void (*rms3)(const double* x, const double* y, const double* z,
                 double* out, std::size_t n);
    void (*moving_average)(const double* x, std::size_t n, int half,
                           double* out);
    void (*normalize)(const double* v, const double* mean,
                      const double* stddev, double* out, std::size_t n);
    void (*sym_outer_acc)(double* a, const double* v, std::size_t n);
    void (*complex_magnitudes)(const double* re, const double* im, double* out,
                               std::size_t n);
    // Butterfly stages only; the bit-reversal permutation is shared.
    void (*fft_stages)(const FftTables& tables, double* re, double* im);
};

const Vtable* scalar_vtable();

#if defined(ACTINET_HAVE_AVX2)
const Vtable* avx2_vtable();
#endif

} // namespace actinet::kernels::detail
