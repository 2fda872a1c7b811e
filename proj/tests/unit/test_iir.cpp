#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "actinet/errors.hpp"
#include "actinet/iir.hpp"
#include "actinet/rng.hpp"

using namespace actinet;

namespace {

IirFilter default_design() {
    return design_highpass_elliptic(4, 0.8, 0.5, 40.0, 50.0);
}

IirFilter identity_filter() {
    IirFilter f;
    f.sections.push_back(Biquad{1, 0, 0, 0, 0});
    f.meta.sample_rate_hz = 50.0;
    return f;
}

} // namespace

TEST_CASE("default design rejects DC at the requested attenuation") {
    const IirFilter f = default_design();
    CHECK(std::abs(frequency_response(f, 0.0)) <= std::pow(10.0, -40.0 / 20.0));
    CHECK(std::abs(frequency_response(f, 0.01)) <= 0.012);
}

TEST_CASE("default design passband response") {
    const IirFilter f = default_design();
    // 10^(-0.5/20) = 0.9441 at the ripple floor.
    const double h10 = std::abs(frequency_response(f, 10.0));
    CHECK(h10 >= 0.9441);
    CHECK(h10 <= 1.0);
    CHECK(std::abs(frequency_response(f, 0.8)) ==
          doctest::Approx(std::pow(10.0, -0.5 / 20.0)).epsilon(1e-9));
}

TEST_CASE("default design equiripple bounds on the passband grid") {
    const IirFilter f = default_design();
    const double floor = std::pow(10.0, -0.5 / 20.0) * (1.0 - 1e-6);
    // 0.1 Hz steps over [edge + 0.2, nyquist - 0.5]
    for (int i = 0; i <= static_cast<int>((24.5 - 1.0) / 0.1 + 0.5); ++i) {
        const double fr = 1.0 + 0.1 * i;
        const double h = std::abs(frequency_response(f, fr));
        INFO("f = ", fr);
        CHECK(h >= floor);
        CHECK(h <= 1.0 + 1e-6);
    }
}

TEST_CASE("all design poles are strictly inside the unit circle") {
    for (int order : {2, 4, 6, 8}) {
        const IirFilter f = design_highpass_elliptic(order, 0.8, 0.5, 40.0, 50.0);
        for (double m : pole_magnitudes(f)) {
            INFO("order ", order);
            CHECK(m < 1.0);
        }
        CHECK(is_stable(f));
    }
}

TEST_CASE("design covers other parameter points") {
    // Sharper spec: deeper stopband, narrower ripple, other rates.
    const IirFilter f = design_highpass_elliptic(6, 1.5, 0.2, 60.0, 100.0);
    CHECK(std::abs(frequency_response(f, 0.0)) <= std::pow(10.0, -60.0 / 20.0));
    const double floor = std::pow(10.0, -0.2 / 20.0) * (1.0 - 1e-6);
    for (double fr = 2.5; fr < 49.0; fr += 0.5) {
        const double h = std::abs(frequency_response(f, fr));
        CHECK(h >= floor);
        CHECK(h <= 1.0 + 1e-6);
    }
}

TEST_CASE("design validates its parameters") {
    CHECK_THROWS_AS(design_highpass_elliptic(3, 0.8, 0.5, 40, 50), ConfigError);
    CHECK_THROWS_AS(design_highpass_elliptic(0, 0.8, 0.5, 40, 50), ConfigError);
    CHECK_THROWS_AS(design_highpass_elliptic(4, 30.0, 0.5, 40, 50), ConfigError);
    CHECK_THROWS_AS(design_highpass_elliptic(4, 0.8, 0.0, 40, 50), ConfigError);
    CHECK_THROWS_AS(design_highpass_elliptic(4, 0.8, 0.5, 0.4, 50), ConfigError);
    CHECK_THROWS_AS(design_highpass_elliptic(4, 0.8, 0.5, 40, -1), ConfigError);
}

TEST_CASE("filter_apply identity section is exact") {
    const IirFilter f = identity_filter();
    SplitMix64 rng(41);
    std::vector<double> x(257);
    for (double& v : x) v = rng.uniform(-2, 2);
    CHECK(filter_apply(f, x) == x);
}

TEST_CASE("filter_apply of a constant decays to zero") {
    const IirFilter f = default_design();
    const std::vector<double> x(500, 1.0); // 10 s at 50 Hz
    const std::vector<double> y = filter_apply(f, x);
    for (std::size_t i = 375; i < 500; ++i) { // final 25 %
        INFO("i = ", i);
        CHECK(std::abs(y[i]) < 1e-3);
    }
}

TEST_CASE("filter_apply matches the direct biquad recurrence") {
    // One biquad, impulse input, checked against the difference equation
    // y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2].
    const Biquad s{0.9, -1.7, 0.8, -1.6, 0.72};
    IirFilter f;
    f.sections.push_back(s);
    f.meta.sample_rate_hz = 50.0;

    std::vector<double> x(64, 0.0);
    x[0] = 1.0;
    const std::vector<double> y = filter_apply(f, x);

    std::vector<double> want(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        double v = s.b0 * x[n];
        if (n >= 1) v += s.b1 * x[n - 1] - s.a1 * want[n - 1];
        if (n >= 2) v += s.b2 * x[n - 2] - s.a2 * want[n - 2];
        want[n] = v;
    }
    for (std::size_t n = 0; n < x.size(); ++n)
        CHECK(y[n] == doctest::Approx(want[n]).epsilon(1e-12));
}

TEST_CASE("filter_apply is linear") {
    const IirFilter f = default_design();
    SplitMix64 rng(43);
    std::vector<double> u(300), v(300);
    for (double& a : u) a = rng.uniform(-1, 1);
    for (double& a : v) a = rng.uniform(-1, 1);
    const double alpha = 1.7, beta = -0.6;

    std::vector<double> mix(300);
    for (std::size_t i = 0; i < mix.size(); ++i)
        mix[i] = alpha * u[i] + beta * v[i];

    const std::vector<double> lhs = filter_apply(f, mix);
    const std::vector<double> yu = filter_apply(f, u);
    const std::vector<double> yv = filter_apply(f, v);
    for (std::size_t i = 0; i < mix.size(); ++i)
        CHECK(std::abs(lhs[i] - (alpha * yu[i] + beta * yv[i])) < 1e-9);
}

TEST_CASE("FilterState matches batch filtering sample by sample") {
    const IirFilter f = default_design();
    SplitMix64 rng(44);
    std::vector<double> x(200);
    for (double& v : x) v = rng.uniform(-1, 1);
    const std::vector<double> batch = filter_apply(f, x);
    FilterState state(f);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(state.step(x[i]) == batch[i]);
}
