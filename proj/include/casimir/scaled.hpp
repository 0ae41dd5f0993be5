#pragma once

// Scaled floating point value m * exp(s), used wherever parabolic cylinder
// function products would overflow double (e.g. factors exp(mu^2/4) with
// mu^2/4 > 700).  Mantissa is kept in [0.1,10] in magnitude.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace casimir {

struct ScaledValue {
    double mantissa = 0.0;   // in [-10,-0.1] U {0} U [0.1,10] after normalize()
    double log_scale = 0.0;  // natural log units

    ScaledValue() = default;
    ScaledValue(double m, double s) : mantissa(m), log_scale(s) { normalize(); }

    static ScaledValue from_real(double x) {
        if (x == 0.0) return ScaledValue();
        return ScaledValue(x, 0.0);
    }
    // value = sign * exp(log_mag)
    static ScaledValue from_log(double log_mag, int sign = 1) {
        ScaledValue v;
        v.mantissa = (sign >= 0) ? 1.0 : -1.0;
        v.log_scale = log_mag;
        return v;
    }

    void normalize() {
        if (mantissa == 0.0) { log_scale = 0.0; return; }
        if (!std::isfinite(mantissa))
            throw std::domain_error("ScaledValue: non-finite mantissa");
        double a = std::fabs(mantissa);
        if (a < 0.1 || a > 10.0) {
            double sh = std::log(a);
            log_scale += sh;
            mantissa = (mantissa > 0) ? 1.0 : -1.0;
        }
    }

    bool is_zero() const { return mantissa == 0.0; }
    int sign() const { return mantissa > 0 ? 1 : (mantissa < 0 ? -1 : 0); }
    double log_abs() const {
        if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
        return log_scale + std::log(std::fabs(mantissa));
    }
    double to_real() const {
        if (mantissa == 0.0) return 0.0;
        return mantissa * std::exp(log_scale);
    }

    ScaledValue operator-() const {
        ScaledValue v = *this;
        v.mantissa = -v.mantissa;
        return v;
    }
};

inline ScaledValue operator*(const ScaledValue& a, const ScaledValue& b) {
    if (a.is_zero() || b.is_zero()) return ScaledValue();
    return ScaledValue(a.mantissa * b.mantissa, a.log_scale + b.log_scale);
}

inline ScaledValue operator*(const ScaledValue& a, double b) {
    if (a.is_zero() || b == 0.0) return ScaledValue();
    return ScaledValue(a.mantissa * b, a.log_scale);
}
inline ScaledValue operator*(double a, const ScaledValue& b) { return b * a; }

inline ScaledValue operator/(const ScaledValue& a, const ScaledValue& b) {
    if (b.is_zero()) throw std::domain_error("ScaledValue: divide by zero");
    if (a.is_zero()) return ScaledValue();
    return ScaledValue(a.mantissa / b.mantissa, a.log_scale - b.log_scale);
}

inline ScaledValue operator+(const ScaledValue& a, const ScaledValue& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // align to the larger scale
    const ScaledValue& hi = (a.log_scale >= b.log_scale) ? a : b;
    const ScaledValue& lo = (a.log_scale >= b.log_scale) ? b : a;
    double shift = lo.log_scale - hi.log_scale;
    if (shift < -745.0) return hi;  // lo underflows entirely
    return ScaledValue(hi.mantissa + lo.mantissa * std::exp(shift), hi.log_scale);
}

inline ScaledValue operator-(const ScaledValue& a, const ScaledValue& b) {
    return a + (-b);
}

// relative difference |a-b| / max(|a|,|b|) in ordinary arithmetic on logs
inline double rel_diff(const ScaledValue& a, const ScaledValue& b) {
    if (a.is_zero() && b.is_zero()) return 0.0;
    ScaledValue d = a - b;
    double la = a.is_zero() ? -1e308 : a.log_abs();
    double lb = b.is_zero() ? -1e308 : b.log_abs();
    double lm = (la > lb) ? la : lb;
    if (d.is_zero()) return 0.0;
    return std::exp(d.log_abs() - lm);
}

}  // namespace casimir
