#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "actinet/kernels.hpp"
#include "actinet/rng.hpp"

using namespace actinet;
namespace k = actinet::kernels;

namespace {

std::vector<double> random_vec(SplitMix64& rng, std::size_t n, double lo = -2.0,
                               double hi = 2.0) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Runs fn under both backends and requires bit-identical outputs.
template <typename Fn>
void check_backend_exact(Fn&& fn) {
    if (!k::avx2_supported()) return; // single-backend host, nothing to compare
    REQUIRE(k::set_backend(k::Backend::Scalar));
    const std::vector<double> scalar = fn();
    REQUIRE(k::set_backend(k::Backend::Avx2));
    const std::vector<double> simd = fn();
    REQUIRE(scalar.size() == simd.size());
    for (std::size_t i = 0; i < scalar.size(); ++i) {
        INFO("index ", i);
        CHECK(scalar[i] == simd[i]); // bit-exact by design
    }
    k::set_backend(k::Backend::Avx2);
}

} // namespace

TEST_CASE("rms3 matches the naive formula") {
    SplitMix64 rng(1);
    const auto x = random_vec(rng, 37), y = random_vec(rng, 37),
               z = random_vec(rng, 37);
    std::vector<double> out(37);
    k::rms3(x, y, z, out);
    for (std::size_t i = 0; i < out.size(); ++i)
        CHECK(out[i] ==
              doctest::Approx(std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]))
                  .epsilon(1e-15));
}

TEST_CASE("rms3 backends agree bit for bit") {
    check_backend_exact([] {
        SplitMix64 rng(2);
        const auto x = random_vec(rng, 1001), y = random_vec(rng, 1001),
                   z = random_vec(rng, 1001);
        std::vector<double> out(1001);
        k::rms3(x, y, z, out);
        return out;
    });
}

TEST_CASE("moving_average shrinks windows at both ends") {
    const std::vector<double> x{1, 1, 1, 10, 1, 1, 1};
    std::vector<double> out(x.size());
    k::moving_average(x, 1, out);
    const std::vector<double> want{1, 1, 4, 4, 4, 1, 1};
    for (std::size_t i = 0; i < out.size(); ++i)
        CHECK(out[i] == doctest::Approx(want[i]));

    k::moving_average(x, 0, out); // identity
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == x[i]);
}

TEST_CASE("moving_average backends agree bit for bit") {
    for (int half : {1, 2, 5}) {
        check_backend_exact([half] {
            SplitMix64 rng(3);
            const auto x = random_vec(rng, 517);
            std::vector<double> out(x.size());
            k::moving_average(x, half, out);
            return out;
        });
    }
}

TEST_CASE("normalize computes (v - mean) / std") {
    SplitMix64 rng(4);
    const auto v = random_vec(rng, 22), m = random_vec(rng, 22);
    auto s = random_vec(rng, 22, 0.5, 2.0);
    std::vector<double> out(22);
    k::normalize(v, m, s, out);
    for (std::size_t i = 0; i < 22; ++i) CHECK(out[i] == (v[i] - m[i]) / s[i]);
    check_backend_exact([&] {
        std::vector<double> o(22);
        k::normalize(v, m, s, o);
        return o;
    });
}

TEST_CASE("sym_outer_acc accumulates the upper triangle") {
    SplitMix64 rng(5);
    const std::size_t n = 23;
    const auto v = random_vec(rng, n);
    std::vector<double> a(n * n, 0.0), want(n * n, 0.0);
    k::sym_outer_acc(a.data(), v.data(), n);
    k::sym_outer_acc(a.data(), v.data(), n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) want[i * n + j] = 2.0 * v[i] * v[j];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            INFO(i, " ", j);
            if (j >= i)
                CHECK(a[i * n + j] == doctest::Approx(want[i * n + j]));
            else
                CHECK(a[i * n + j] == 0.0); // lower triangle untouched
        }

    check_backend_exact([&] {
        std::vector<double> acc(n * n, 0.0);
        k::sym_outer_acc(acc.data(), v.data(), n);
        return acc;
    });
}

TEST_CASE("complex_magnitudes backends agree bit for bit") {
    check_backend_exact([] {
        SplitMix64 rng(6);
        const auto re = random_vec(rng, 65), im = random_vec(rng, 65);
        std::vector<double> out(65);
        k::complex_magnitudes(re, im, out);
        return out;
    });
}

TEST_CASE("fft_inplace handles impulse and DC") {
    k::FftTables tables(8);
    std::vector<double> re(8, 0.0), im(8, 0.0);
    re[0] = 1.0; // impulse -> flat spectrum
    k::fft_inplace(tables, re.data(), im.data());
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(re[i] == doctest::Approx(1.0));
        CHECK(im[i] == doctest::Approx(0.0));
    }

    std::fill(re.begin(), re.end(), 1.0);
    std::fill(im.begin(), im.end(), 0.0);
    k::fft_inplace(tables, re.data(), im.data());
    CHECK(re[0] == doctest::Approx(8.0));
    for (std::size_t i = 1; i < 8; ++i)
        CHECK(std::abs(re[i]) + std::abs(im[i]) < 1e-12);
}

TEST_CASE("fft tables reject non-power-of-two sizes") {
    CHECK_THROWS(k::FftTables(0));
    CHECK_THROWS(k::FftTables(1));
    CHECK_THROWS(k::FftTables(96));
}

TEST_CASE("fft backends agree bit for bit") {
    if (!k::avx2_supported()) return;
    k::FftTables tables(128);
    SplitMix64 rng(7);
    std::vector<double> re0(128), im0(128, 0.0);
    for (double& x : re0) x = rng.uniform(-1.0, 1.0);

    REQUIRE(k::set_backend(k::Backend::Scalar));
    auto re_s = re0, im_s = im0;
    k::fft_inplace(tables, re_s.data(), im_s.data());
    REQUIRE(k::set_backend(k::Backend::Avx2));
    auto re_v = re0, im_v = im0;
    k::fft_inplace(tables, re_v.data(), im_v.data());
    for (std::size_t i = 0; i < 128; ++i) {
        CHECK(re_s[i] == re_v[i]);
        CHECK(im_s[i] == im_v[i]);
    }
}

TEST_CASE("backend selection reports and forces") {
    const k::Backend original = k::active_backend();
    CHECK(k::set_backend(k::Backend::Scalar));
    CHECK(k::active_backend() == k::Backend::Scalar);
    if (k::avx2_supported()) {
        CHECK(k::set_backend(k::Backend::Avx2));
        CHECK(k::active_backend() == k::Backend::Avx2);
    } else {
        CHECK_FALSE(k::set_backend(k::Backend::Avx2));
        CHECK(k::active_backend() == k::Backend::Scalar);
    }
    k::set_backend(original);
}
