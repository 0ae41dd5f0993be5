#include "casimir/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/quadrature.hpp"

namespace casimir {

double pfa_parabolic_plane(const PfaInput& inp) {
    if (inp.H <= 0.0) throw std::domain_error("pfa: H must be > 0");
    if (inp.R < 0.0) throw std::domain_error("pfa: R must be >= 0");
    if (inp.R == 0.0) return 0.0;  // PFA vanishes for the knife edge
    double pre = std::pow(M_PI, 3) / (960.0 * std::sqrt(2.0));
    return -pre * std::sqrt(inp.R / std::pow(inp.H, 5));
}

double pfa_parabolic_plane_alt(double mu0, double d) {
    double g = 2.0 * d - mu0 * mu0;
    if (g <= 0.0) throw std::domain_error("pfa: 2d - mu0^2 must be > 0");
    return -std::pow(M_PI, 3) / 240.0 * mu0 / std::pow(g, 2.5);
}

double parallel_plate(double H) {
    if (H <= 0.0) throw std::domain_error("parallel_plate: H must be > 0");
    return -M_PI * M_PI / (720.0 * H * H * H);
}

double edge_pfa_disk(const PfaInput& inp, double C_perp) {
    if (inp.r_disk <= 0.0 || inp.H <= 0.0)
        throw std::domain_error("edge_pfa_disk: r and H must be > 0");
    double r = inp.r_disk, H = inp.H;
    // substitute x = r sin(u): integrand (H + r(1 - cos u))^{-2} r cos(u) du,
    // smooth on [-pi/2, pi/2]; refine by node doubling
    auto eval = [&](int n) {
        const QuadRule& q = gauss_legendre(n);
        double s = 0.0;
        for (size_t i = 0; i < q.x.size(); ++i) {
            double u = 0.5 * M_PI * q.x[i];
            double w = 0.5 * M_PI * q.w[i];
            double den = H + r * (1.0 - std::cos(u));
            s += w * r * std::cos(u) / (den * den);
        }
        return s;
    };
    int n = 64;
    double v = eval(n);
    for (int it = 0; it < 8; ++it) {
        double v2 = eval(2 * n);
        if (std::fabs(v2 - v) <= 1e-12 * std::fabs(v2)) { v = v2; break; }
        v = v2;
        n *= 2;
    }
    return -C_perp * v;
}

double edge_pfa_disk_asymptote(const PfaInput& inp, double C_perp) {
    return -C_perp * M_PI * std::sqrt(inp.r_disk / (2.0 * std::pow(inp.H, 3)));
}

double interior_wire_expansion(double mu0, double wire_radius, double r0,
                               double theta0) {
    if (mu0 <= 0.0 || wire_radius <= 0.0)
        throw std::domain_error("interior_wire_expansion: mu0 and radius must be > 0");
    double ratio = wire_radius / (mu0 * mu0);
    if (ratio >= 1e-2)
        throw std::domain_error("interior_wire_expansion: wire too thick for the log regime");
    double lg = std::log(ratio);  // < 0 here, so the leading term is negative
    double m4 = std::pow(mu0, 4), m6 = std::pow(mu0, 6), m8 = std::pow(mu0, 8);
    return 3.0 / (32.0 * m4 * lg) - 5.0 * r0 * std::sin(theta0) / (16.0 * m6 * lg) +
           15.0 * r0 * r0 * (9.0 - 5.0 * std::cos(2.0 * theta0)) / (256.0 * m8 * lg);
}

}  // namespace casimir
