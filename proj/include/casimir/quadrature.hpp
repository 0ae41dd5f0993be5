#pragma once

// Gauss-Legendre nodes/weights and small helpers shared by the translation
// and energy modules.  Nodes are computed by Newton iteration on the
// Legendre recurrence and cached per order.

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace casimir {

struct QuadRule {
    std::vector<double> x;  // nodes on (-1,1)
    std::vector<double> w;
};

inline QuadRule gauss_legendre_compute(int n) {
    if (n < 1) throw std::domain_error("gauss_legendre: order must be >= 1");
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi-style initial guess, then Newton
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

inline const QuadRule& gauss_legendre(int n) {
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre_compute(n)).first;
    return it->second;
}

// integrate f on [a,b] with an n-point rule
template <class F>
double integrate_gl(const F& f, double a, double b, int n) {
    const QuadRule& r = gauss_legendre(n);
    const double c = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.w[i] * f(m + c * r.x[i]);
    return c * s;
}

// log of integral of exp(logf) on [a,b]; stable for sharply peaked logf
template <class F>
double integrate_gl_log(const F& logf, double a, double b, int n) {
    const QuadRule& r = gauss_legendre(n);
    const double c = 0.5 * (b - a), m = 0.5 * (a + b);
    std::vector<double> lf(n);
    double mx = -1e308;
    for (int i = 0; i < n; ++i) {
        lf[i] = logf(m + c * r.x[i]);
        if (lf[i] > mx) mx = lf[i];
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.w[i] * std::exp(lf[i] - mx);
    return mx + std::log(c * s);
}

}  // namespace casimir
