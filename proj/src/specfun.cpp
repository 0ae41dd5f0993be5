#include "casimir/specfun.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/quadrature.hpp"

namespace casimir {

namespace {

void check_nu(int nu) {
    if (nu < 0 || nu > default_nu_cap())
        throw std::domain_error("specfun: order outside [0, nu_cap]");
}

// i^p as (re,im) in {-1,0,1}
void quarter_phase(int p, int& re, int& im) {
    switch (((p % 4) + 4) % 4) {
        case 0: re = 1; im = 0; break;
        case 1: re = 0; im = 1; break;
        case 2: re = -1; im = 0; break;
        default: re = 0; im = -1; break;
    }
}

// find t_hi > t0 with logf(t_hi) < target by doubling then bisection
template <class F>
double bracket_decay_above(const F& logf, double t0, double step, double target) {
    double hi = t0 + step;
    for (int it = 0; it < 200 && logf(hi) > target; ++it) hi = t0 + (hi - t0) * 2.0;
    double lo = t0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (logf(mid) > target) lo = mid; else hi = mid;
    }
    return hi;
}

template <class F>
double bracket_decay_below(const F& logf, double t0, double floor_t, double target) {
    if (logf(floor_t) > target) return floor_t;
    double lo = floor_t, hi = t0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (logf(mid) > target) hi = mid; else lo = mid;
    }
    return lo;
}

// log of int_0^inf t^n exp(-t^2/2 - x t) dt
double log_neg_order_integral(int n, double x) {
    auto logf = [n, x](double t) {
        if (t <= 0.0) return (n == 0) ? (-0.5 * t * t - x * t) : -1e308;
        return n * std::log(t) - 0.5 * t * t - x * t;
    };
    double tpk = (n == 0) ? 0.0 : 0.5 * (-x + std::sqrt(x * x + 4.0 * n));
    double fpk = (n == 0) ? 0.0 : logf(tpk);
    double scale = (tpk > 0.0) ? 1.0 / std::sqrt(n / (tpk * tpk) + 1.0)
                               : 1.0 / std::max(1.0, x);
    double thi = bracket_decay_above(logf, tpk, scale, fpk - 45.0);
    double tlo = (n == 0) ? 0.0 : bracket_decay_below(logf, tpk, 0.0, fpk - 45.0);
    return integrate_gl_log(logf, tlo, thi, 160);
}

}  // namespace

double erfcx(double t) {
    if (t < 0.0) throw std::domain_error("erfcx: negative argument");
    if (t < 1.0) return std::erfc(t) * std::exp(t * t);
    // Lentz continued fraction: sqrt(pi) e^{t^2} erfc(t) = 1/(t+ (1/2)/(t+ 1/(t+ ...)))
    const double tiny = 1e-300;
    double f = tiny, C = f, D = 0.0;
    for (int k = 0; k < 400; ++k) {
        double a = (k == 0) ? 1.0 : 0.5 * k;
        double b = t;
        D = b + a * D;
        if (D == 0.0) D = tiny;
        C = b + a / C;
        if (C == 0.0) C = tiny;
        D = 1.0 / D;
        double delta = C * D;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return f / std::sqrt(M_PI);
}

ScaledComplex pcf_d_nonneg(int nu, const PcfArgument& arg) {
    check_nu(nu);
    if (!std::isfinite(arg.magnitude))
        throw std::domain_error("pcf_d_nonneg: non-finite argument");
    double y = arg.magnitude / std::sqrt(2.0);  // Hermite variable
    // polynomial part by forward recurrence, renormalized into log scale.
    // Real axis:      H_n(y),   H_{n+1} = 2y H_n - 2n H_{n-1}
    // Imaginary axis: H_n(iy) = i^n G_n(y), G_{n+1} = 2y G_n + 2n G_{n-1}
    double h0 = 1.0, h1 = 2.0 * y, lg = 0.0;
    const double rs = (arg.axis == Axis::Imaginary) ? 1.0 : -1.0;
    double h = (nu == 0) ? h0 : h1;
    for (int n = 1; n < nu; ++n) {
        double h2 = 2.0 * y * h1 + rs * 2.0 * n * h0;
        h0 = h1;
        h1 = h2;
        double a = std::max(std::fabs(h0), std::fabs(h1));
        if (a > 1e100) {
            double f = std::exp(-230.0);
            h0 *= f;
            h1 *= f;
            lg += 230.0;
        }
        h = h1;
    }
    double gauss = (arg.axis == Axis::Imaginary) ? +0.25 * arg.magnitude * arg.magnitude
                                                 : -0.25 * arg.magnitude * arg.magnitude;
    ScaledValue mag(h, lg + gauss - 0.5 * nu * std::log(2.0));
    // phases: i^nu on the imaginary axis; (-1)^nu for a negative-sign argument
    if (arg.sign < 0 && (nu % 2)) mag = -mag;
    ScaledComplex out;
    if (arg.axis == Axis::Real) {
        out.re = mag;
    } else {
        int pr, pi;
        quarter_phase(nu, pr, pi);
        out.re = mag * double(pr);
        out.im = mag * double(pi);
    }
    return out;
}

std::vector<ScaledValue> pcf_d_neg_seq(int nu_max, double x) {
    check_nu(nu_max);
    if (x < 0.0) throw std::domain_error("pcf_d_neg: negative argument");
    std::vector<ScaledValue> d(nu_max + 2);
    // d[k] holds D_{-k-1}(x); one extra slot for the derivative ladder
    double gauss = -0.25 * x * x;
    d[0] = ScaledValue::from_log(0.5 * std::log(M_PI / 2.0) + gauss +
                                 std::log(erfcx(x / std::sqrt(2.0))));
    ScaledValue dm0 = ScaledValue::from_log(gauss);  // D_0
    std::vector<double> rel(nu_max + 2, 1e-15);
    bool integral_mode = false;
    for (int n = 0; n <= nu_max; ++n) {
        // D_{-n-2} = (D_{-n} - x D_{-n-1}) / (n+1)
        if (!integral_mode) {
            ScaledValue next = (dm0 - x * d[n]) * (1.0 / (n + 1.0));
            double amp = (std::exp(dm0.log_abs() - next.log_abs()) +
                          ((x > 0) ? std::exp(d[n].log_abs() + std::log(x) - next.log_abs()) : 0.0)) /
                         (n + 1.0);
            rel[n + 1] = amp * std::max(rel[n], (n > 0) ? rel[n - 1] : 1e-15);
            if (next.sign() <= 0 || rel[n + 1] > 1e-11) {
                integral_mode = true;
            } else {
                d[n + 1] = next;
            }
        }
        if (integral_mode) {
            int m = n + 1;  // computing D_{-m-1}
            d[m] = ScaledValue::from_log(gauss - std::lgamma(m + 1.0) +
                                         log_neg_order_integral(m, x));
            rel[m] = 1e-12;
        }
        dm0 = d[n];
    }
    d.resize(nu_max + 1);
    return d;
}

ScaledValue pcf_d_neg(int nu, double x) { return pcf_d_neg_seq(nu, x)[nu]; }

std::vector<ScaledValue> pcf_d_neg_deriv_seq(int nu_max, double x) {
    // D'_{-n-1}(x) = -(x/2) D_{-n-1}(x) - (n+1) D_{-n-2}(x): all terms negative
    std::vector<ScaledValue> d = pcf_d_neg_seq(nu_max + 1, x);
    std::vector<ScaledValue> out(nu_max + 1);
    for (int n = 0; n <= nu_max; ++n)
        out[n] = -(0.5 * x) * d[n] - (n + 1.0) * d[n + 1];
    return out;
}

ScaledValue pcf_d_neg_deriv(int nu, double x) { return pcf_d_neg_deriv_seq(nu, x)[nu]; }

ScaledComplex pcf_d_deriv(int nu, const PcfArgument& arg) {
    if (nu < 0) {
        if (arg.axis != Axis::Real || arg.sign < 0)
            throw std::domain_error("pcf_d_deriv: negative order needs x >= 0 real");
        ScaledComplex out;
        out.re = pcf_d_neg_deriv(-nu - 1, arg.magnitude);
        return out;
    }
    if (arg.axis == Axis::Real) {
        // D'_nu(z) = (z/2) D_nu(z) - D_{nu+1}(z)
        double z = arg.sign * arg.magnitude;
        ScaledComplex a = pcf_d_nonneg(nu, arg);
        ScaledComplex b = pcf_d_nonneg(nu + 1, arg);
        ScaledComplex out;
        out.re = (0.5 * z) * a.re - b.re;
        return out;
    }
    // imaginary axis, cancellation-free mate: D'_nu(z) = -(z/2)D_nu + nu D_{nu-1}
    // with z = i m:  D'_nu(im) = i^{nu-1} [ (m/2) M_nu + nu M_{nu-1} ]
    double m = arg.magnitude;
    // strip the i^nu phase to get the positive magnitude M_nu
    int pr, pi;
    quarter_phase(nu, pr, pi);
    ScaledComplex cur = pcf_d_nonneg(nu, PcfArgument{m, Axis::Imaginary, +1});
    ScaledValue mag_n = (pr != 0) ? cur.re * double(pr) : cur.im * double(pi);
    ScaledValue mag_nm1;
    if (nu > 0) {
        int qr, qi;
        quarter_phase(nu - 1, qr, qi);
        ScaledComplex prev = pcf_d_nonneg(nu - 1, PcfArgument{m, Axis::Imaginary, +1});
        mag_nm1 = (qr != 0) ? prev.re * double(qr) : prev.im * double(qi);
    }
    ScaledValue mag = (0.5 * m) * mag_n + double(nu) * mag_nm1;
    int sr, si;
    quarter_phase(nu - 1, sr, si);
    ScaledComplex out;
    out.re = mag * double(sr);
    out.im = mag * double(si);
    if (arg.sign < 0 && (nu % 2 == 0)) {  // D'_nu odd under z -> -z for even nu
        out.re = -out.re;
        out.im = -out.im;
    }
    return out;
}

ScaledValue bateman_k_scaled(int n, double x) {
    if (x <= 0.0) throw std::domain_error("bateman_k: x must be > 0");
    if (n < 0) throw std::domain_error("bateman_k: n must be >= 0");
    // k_{-2n-1}(x) = (4/pi)(-1)^n e^{-x} int_0^inf s^{2n} (2+s^2)^{-n-3/2} e^{-s^2 x} ds
    auto logf = [n, x](double s) {
        if (s <= 0.0) return (n == 0) ? (-(n + 1.5) * std::log(2.0) - s * s * x) : -1e308;
        return 2.0 * n * std::log(s) - (n + 1.5) * std::log(2.0 + s * s) - s * s * x;
    };
    double spk2 = (n == 0) ? 0.0
                           : (-(3.0 + 4.0 * x) +
                              std::sqrt((3.0 + 4.0 * x) * (3.0 + 4.0 * x) + 32.0 * x * n)) /
                                 (4.0 * x);
    double spk = std::sqrt(std::max(spk2, 0.0));
    double fpk = logf(std::max(spk, 1e-30));
    double step = (spk > 0.0) ? 0.5 * spk + 1.0 / std::sqrt(x) : 1.0 / std::sqrt(x);
    double shi = bracket_decay_above(logf, spk, step, fpk - 45.0);
    double slo = (n == 0) ? 0.0 : bracket_decay_below(logf, spk, 0.0, fpk - 45.0);
    double li = integrate_gl_log(logf, slo, shi, 160);
    return ScaledValue::from_log(std::log(4.0 / M_PI) - x + li, (n % 2) ? -1 : +1);
}

double bateman_k(int n, double x) { return bateman_k_scaled(n, x).to_real(); }

std::vector<ScaledValue> bessel_i_seq(int ell_max, double x) {
    if (x <= 0.0) throw std::domain_error("bessel_modified: x must be > 0");
    int top = std::max(ell_max, int(x));
    int start = top + int(2.0 * std::sqrt(40.0 + double(top))) + 30;
    // Miller downward recurrence, normalized by 1 = I0~ + 2 sum I_k~;
    // a common rescale factor cancels in the normalization
    std::vector<double> p(start + 2, 0.0);
    p[start] = 1e-280;
    for (int l = start; l >= 1; --l) {
        p[l - 1] = p[l + 1] + (2.0 * l / x) * p[l];
        if (std::fabs(p[l - 1]) > 1e100)
            for (int k = 0; k <= start + 1; ++k) p[k] *= 1e-200;
    }
    double norm = p[0];
    for (int k = 1; k <= start; ++k) norm += 2.0 * p[k];
    std::vector<ScaledValue> out(ell_max + 1);
    for (int l = 0; l <= ell_max; ++l)
        out[l] = ScaledValue::from_real(p[l] / norm);
    return out;
}

std::vector<ScaledValue> bessel_k_seq(int ell_max, double x) {
    if (x <= 0.0) throw std::domain_error("bessel_modified: x must be > 0");
    ScaledValue k0, k1;
    if (x <= 500.0) {
        k0 = ScaledValue::from_log(std::log(std::cyl_bessel_k(0.0, x)) + x);
        k1 = ScaledValue::from_log(std::log(std::cyl_bessel_k(1.0, x)) + x);
    } else {
        // K_l(x) e^x = int_0^inf e^{-x(cosh t - 1)} cosh(l t) dt
        for (int l = 0; l <= 1; ++l) {
            auto logf = [l, x](double t) {
                double c = std::cosh(t);
                double lc = (l == 0) ? 0.0 : std::log(std::cosh(l * t));
                return -x * (c - 1.0) + lc;
            };
            double thi = std::acosh(1.0 + 60.0 / x);
            ScaledValue v = ScaledValue::from_log(integrate_gl_log(logf, 0.0, thi, 160));
            if (l == 0) k0 = v; else k1 = v;
        }
    }
    std::vector<ScaledValue> out(ell_max + 1);
    out[0] = k0;
    if (ell_max >= 1) out[1] = k1;
    for (int l = 1; l < ell_max; ++l)
        out[l + 1] = out[l - 1] + (2.0 * l / x) * out[l];
    return out;
}

ScaledValue bessel_modified(int ell, double x, BesselKind kind, bool deriv) {
    int l = std::abs(ell);
    if (l > default_ell_cap() + 1)
        throw std::domain_error("bessel_modified: order above ell_cap");
    if (!deriv) {
        if (kind == BesselKind::I) return bessel_i_seq(l, x)[l];
        return bessel_k_seq(l, x)[l];
    }
    if (kind == BesselKind::I) {
        std::vector<ScaledValue> seq = bessel_i_seq(l + 1, x);
        ScaledValue below = (l >= 1) ? seq[l - 1] : seq[1];  // I_{-1} = I_1
        return 0.5 * (below + seq[l + 1]);
    }
    std::vector<ScaledValue> seq = bessel_k_seq(l + 1, x);
    ScaledValue below = (l >= 1) ? seq[l - 1] : seq[1];  // K_{-1} = K_1
    return -0.5 * (below + seq[l + 1]);
}

}  // namespace casimir
