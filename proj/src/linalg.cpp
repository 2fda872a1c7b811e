#include "actinet/linalg.hpp"

#include <cassert>
#include <cmath>

namespace actinet {

bool cholesky_solve_in_place(Matrix& a, std::span<double> b) {
    const std::size_t n = a.rows();
    assert(a.cols() == n && b.size() == n);

    // Factor A = L L^T, storing L in the lower triangle.
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            const double* ri = a.row(i);
            const double* rj = a.row(j);
            for (std::size_t k = 0; k < j; ++k) s -= ri[k] * rj[k];
            a(i, j) = s / ljj;
        }
    }

    // Forward substitution L y = b.
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        const double* ri = a.row(i);
        for (std::size_t k = 0; k < i; ++k) s -= ri[k] * b[k];
        b[i] = s / ri[i];
    }
    // Back substitution L^T x = y.
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a(k, ii) * b[k];
        b[ii] = s / a(ii, ii);
    }
    return true;
}

} // namespace actinet
