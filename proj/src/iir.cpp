#include "actinet/iir.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "actinet/errors.hpp"

namespace actinet {
namespace {

constexpr double kPi = 3.14159265358979323846;

using Complex = std::complex<double>;

struct Zpk {
    std::vector<Complex> zeros, poles;
    double gain = 1.0;
};

double real_prod_neg(const std::vector<Complex>& v) {
    Complex p(1.0, 0.0);
    for (const Complex& c : v) p *= -c;
    return p.real();
}

// Analog elliptic low-pass prototype with the passband edge at omega = 1.
// Poles and zeros follow the Landen-transformation construction of
// Orchard & Willson ("Elliptic Functions for Filter Design", IEEE TCAS 1997):
// a descending modulus ladder turns the Jacobi elliptic evaluations into a
// few algebraic recurrences, and a secant iteration picks the modulus that
// hits the requested stopband attenuation.
Zpk elliptic_lowpass_prototype(int order, double ripple_db, double atten_db) {
    const double eps0 = std::sqrt(std::pow(10.0, ripple_db / 10.0) - 1.0);

    struct Ladder {
        std::vector<double> k, g;
        double attained_db = 0.0;
    };

    auto build = [&](double k0) {
        Ladder lad;
        lad.k.push_back(k0);
        while (lad.k.back() > 1e-14) {
            const double kk = lad.k.back();
            const double next = std::pow(kk / (1.0 + std::sqrt(1.0 - kk * kk)), 2.0);
            lad.k.push_back(next);
            if (lad.k.size() > 64) break;
        }
        lad.g.assign(lad.k.size(), 0.0);
        lad.g.back() =
            4.0 * std::pow(lad.k.back() / 4.0, static_cast<double>(order));
        for (std::size_t i = lad.k.size() - 1; i > 0; --i)
            lad.g[i - 1] = 2.0 * std::sqrt(lad.g[i]) / (1.0 + lad.g[i]);
        const double g0 = std::max(lad.g[0], 1e-300);
        lad.attained_db = 10.0 * std::log10(1.0 + (eps0 / g0) * (eps0 / g0));
        return lad;
    };

    // Secant iteration on the modulus. Smaller modulus -> wider transition
    // band -> more attenuation.
    double k0 = std::clamp((order - 2) * 0.1605 + 0.016, 0.01, 0.7);
    Ladder lad = build(k0);
    double err = atten_db - lad.attained_db;
    double dk = err > 0 ? 0.005 : -0.005;
    double prev_err = err;
    for (int it = 0; it < 200 && std::abs(err) > 1e-11; ++it) {
        if (it > 0) {
            const double deriv = (prev_err - err) / dk;
            prev_err = err;
            if (deriv == 0.0) break;
            dk = std::clamp(err / deriv, -0.1, 0.1);
        }
        k0 = std::clamp(k0 - dk, 1e-9, 0.999);
        lad = build(k0);
        err = atten_db - lad.attained_db;
    }
    // Bias toward extra attenuation so the stopband bound holds exactly.
    for (int guard = 0; lad.attained_db < atten_db && guard < 64; ++guard) {
        k0 *= 1.0 - 1e-12;
        lad = build(k0);
    }
    if (lad.attained_db < atten_db - 0.5)
        throw ConfigError("elliptic design failed to reach the requested "
                          "stopband attenuation");

    // Ripple ladder (eq. 37) and pole/zero recurrences (eqs. 19-22, 36).
    const std::size_t last = lad.k.size() - 1;
    std::vector<double> eps(lad.k.size());
    eps[0] = eps0;
    for (std::size_t j = 1; j <= last; ++j) {
        const double a = (1.0 + lad.g[j]) * eps[j - 1] / 2.0;
        eps[j] = a + std::sqrt(a * a + lad.g[j]);
    }

    const double v =
        std::log((1.0 + std::sqrt(1.0 + eps[last] * eps[last])) / eps[last]) /
        static_cast<double>(order);

    Zpk out;
    for (int j = 1; j <= order / 2; ++j) {
        const double u =
            (2 * j - 1) * kPi / 2.0 / static_cast<double>(order);
        Complex c = Complex(0.0, -1.0) / std::cos(Complex(-u, v));
        double d = 1.0 / std::cos(u);
        for (std::size_t m = last; m >= 1; --m) {
            c = (c - lad.k[m] / c) / (1.0 + lad.k[m]);
            d = (d + lad.k[m] / d) / (1.0 + lad.k[m]);
        }
        const Complex pole = 1.0 / c;
        const Complex zero(0.0, d / lad.k[0]);
        out.poles.push_back(pole);
        out.poles.push_back(std::conj(pole));
        out.zeros.push_back(zero);
        out.zeros.push_back(std::conj(zero));
    }

    // Gain pins |H(j0)|: even-order equiripple passbands sit at the ripple
    // floor at DC.
    out.gain = real_prod_neg(out.poles) / real_prod_neg(out.zeros);
    out.gain *= std::pow(10.0, -ripple_db / 20.0);
    return out;
}

Zpk lowpass_to_highpass(const Zpk& lp, double omega0) {
    Zpk hp;
    for (const Complex& z : lp.zeros) hp.zeros.push_back(omega0 / z);
    for (const Complex& p : lp.poles) hp.poles.push_back(omega0 / p);
    const std::size_t degree = lp.poles.size() - lp.zeros.size();
    for (std::size_t i = 0; i < degree; ++i) hp.zeros.emplace_back(0.0, 0.0);
    hp.gain = lp.gain * (real_prod_neg(lp.zeros) / real_prod_neg(lp.poles));
    return hp;
}

Zpk bilinear(const Zpk& analog, double sample_rate_hz) {
    const double fs2 = 2.0 * sample_rate_hz;
    auto warp = [fs2](const Complex& s) { return (fs2 + s) / (fs2 - s); };

    Zpk digital;
    Complex num(1.0, 0.0), den(1.0, 0.0);
    for (const Complex& z : analog.zeros) {
        digital.zeros.push_back(warp(z));
        num *= fs2 - z;
    }
    for (const Complex& p : analog.poles) {
        digital.poles.push_back(warp(p));
        den *= fs2 - p;
    }
    const std::size_t degree = analog.poles.size() - analog.zeros.size();
    for (std::size_t i = 0; i < degree; ++i)
        digital.zeros.emplace_back(-1.0, 0.0);
    digital.gain = analog.gain * (num / den).real();
    return digital;
}

// Pairs conjugate pole pairs with their nearest conjugate zero pairs and
// expands each pair into real biquad coefficients. The cascade gain is
// folded into the first section.
std::vector<Biquad> to_sections(const Zpk& zpk) {
    auto upper_half = [](const std::vector<Complex>& v) {
        std::vector<Complex> reps;
        for (const Complex& c : v)
            if (c.imag() > 0.0) reps.push_back(c);
        return reps;
    };
    std::vector<Complex> pole_reps = upper_half(zpk.poles);
    std::vector<Complex> zero_reps = upper_half(zpk.zeros);
    if (pole_reps.size() * 2 != zpk.poles.size() ||
        zero_reps.size() * 2 != zpk.zeros.size() ||
        pole_reps.size() != zero_reps.size())
        throw ConfigError("filter design produced unpaired real roots");

    // Poles closest to the unit circle first.
    std::sort(pole_reps.begin(), pole_reps.end(),
              [](const Complex& a, const Complex& b) {
                  return std::abs(a) > std::abs(b);
              });

    std::vector<Biquad> sections;
    std::vector<bool> used(zero_reps.size(), false);
    for (const Complex& p : pole_reps) {
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < zero_reps.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(zero_reps[i] - p);
            if (d < best_dist) {
                best_dist = d;
                best = i;
            }
        }
        used[best] = true;
        const Complex z = zero_reps[best];
        Biquad s;
        s.b0 = 1.0;
        s.b1 = -2.0 * z.real();
        s.b2 = std::norm(z);
        s.a1 = -2.0 * p.real();
        s.a2 = std::norm(p);
        sections.push_back(s);
    }
    if (!sections.empty()) {
        sections.front().b0 *= zpk.gain;
        sections.front().b1 *= zpk.gain;
        sections.front().b2 *= zpk.gain;
    }
    return sections;
}

} // namespace

IirFilter design_highpass_elliptic(int order, double passband_edge_hz,
                                   double passband_ripple_db,
                                   double stopband_atten_db,
                                   double sample_rate_hz) {
    if (order < 2 || order % 2 != 0)
        throw ConfigError("filter order must be even and positive");
    if (!(sample_rate_hz > 0.0))
        throw ConfigError("sample rate must be positive");
    if (!(passband_edge_hz > 0.0) || passband_edge_hz >= sample_rate_hz / 2.0)
        throw ConfigError("passband edge must lie in (0, sample_rate/2)");
    if (!(passband_ripple_db > 0.0))
        throw ConfigError("passband ripple must be positive");
    if (!(stopband_atten_db > passband_ripple_db))
        throw ConfigError("stopband attenuation must exceed passband ripple");

    const Zpk lp = elliptic_lowpass_prototype(order, passband_ripple_db,
                                              stopband_atten_db);
    const double warped =
        2.0 * sample_rate_hz * std::tan(kPi * passband_edge_hz / sample_rate_hz);
    const Zpk digital = bilinear(lowpass_to_highpass(lp, warped), sample_rate_hz);

    IirFilter filter;
    filter.sections = to_sections(digital);
    filter.meta = {order, passband_edge_hz, passband_ripple_db,
                   stopband_atten_db, sample_rate_hz};
    if (!is_stable(filter))
        throw ConfigError("filter design produced an unstable cascade");
    return filter;
}

FilterState::FilterState(const IirFilter& filter)
    : filter_(&filter), state_(filter.sections.size(), {0.0, 0.0}) {}

double FilterState::step(double x) {
    double v = x;
    for (std::size_t i = 0; i < state_.size(); ++i) {
        const Biquad& s = filter_->sections[i];
        auto& st = state_[i];
        const double y = s.b0 * v + st[0];
        st[0] = s.b1 * v - s.a1 * y + st[1];
        st[1] = s.b2 * v - s.a2 * y;
        v = y;
    }
    return v;
}

std::vector<double> filter_apply(const IirFilter& filter,
                                 const std::vector<double>& series) {
    std::vector<double> out(series.size());
    FilterState state(filter);
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = state.step(series[i]);
    return out;
}

std::complex<double> frequency_response(const IirFilter& filter, double f_hz) {
    const double w = 2.0 * kPi * f_hz / filter.meta.sample_rate_hz;
    const Complex zinv = std::polar(1.0, -w);
    const Complex zinv2 = zinv * zinv;
    Complex h(1.0, 0.0);
    for (const Biquad& s : filter.sections) {
        h *= (s.b0 + s.b1 * zinv + s.b2 * zinv2) /
             (1.0 + s.a1 * zinv + s.a2 * zinv2);
    }
    return h;
}

std::vector<double> pole_magnitudes(const IirFilter& filter) {
    std::vector<double> mags;
    for (const Biquad& s : filter.sections) {
        // Roots of z^2 + a1 z + a2.
        const Complex disc = std::sqrt(Complex(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
        mags.push_back(std::abs((-s.a1 + disc) / 2.0));
        mags.push_back(std::abs((-s.a1 - disc) / 2.0));
    }
    return mags;
}

bool is_stable(const IirFilter& filter) {
    for (double m : pole_magnitudes(filter))
        if (!(m < 1.0)) return false;
    return true;
}

} // namespace actinet
