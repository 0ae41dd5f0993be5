#include "casimir/tmatrix.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/specfun.hpp"

namespace casimir {

namespace {

// positive magnitude M_nu with D_nu(i m) = i^nu M_nu(m)
ScaledValue pcf_imag_magnitude(int nu, double m) {
    ScaledComplex v = pcf_d_nonneg(nu, PcfArgument{m, Axis::Imaginary, +1});
    switch (((nu % 4) + 4) % 4) {
        case 0: return v.re;
        case 1: return v.im;
        case 2: return -v.re;
        default: return -v.im;
    }
}

// positive magnitude P_nu with D_nu'(i m) = i^{nu-1} P_nu(m),
// P_nu = (m/2) M_nu + nu M_{nu-1}
ScaledValue pcf_imag_deriv_magnitude(int nu, double m) {
    ScaledValue p = (0.5 * m) * pcf_imag_magnitude(nu, m);
    if (nu > 0) p = p + double(nu) * pcf_imag_magnitude(nu - 1, m);
    return p;
}

}  // namespace

double tmat_knife_edge(int nu) {
    if (nu < 0) throw std::domain_error("tmat_knife_edge: nu must be >= 0");
    return -std::sqrt(2.0 / M_PI) * std::exp(std::lgamma(nu + 1.0));
}

std::vector<ScaledValue> tmat_parabolic_seq(int nu_max, const ParabolicBody& body,
                                            BoundaryKind bc, double Q) {
    if (Q <= 0.0) throw std::domain_error("tmat_parabolic: Q must be > 0");
    if (body.mu0 < 0.0) throw std::domain_error("tmat_parabolic: mu0 must be >= 0");
    std::vector<ScaledValue> out(nu_max + 1);
    double mt = body.mu0 * std::sqrt(2.0 * Q);
    if (mt == 0.0) {
        // removable knife-edge limit; parity selects the channel
        for (int nu = 0; nu <= nu_max; ++nu) {
            bool active = (bc == BoundaryKind::Dirichlet) ? (nu % 2 == 0) : (nu % 2 == 1);
            if (active)
                out[nu] = ScaledValue::from_log(
                    0.5 * std::log(2.0 / M_PI) + std::lgamma(nu + 1.0), -1);
        }
        return out;
    }
    if (bc == BoundaryKind::Dirichlet) {
        std::vector<ScaledValue> dn = pcf_d_neg_seq(nu_max, mt);
        for (int nu = 0; nu <= nu_max; ++nu) {
            // -i^nu D_nu(i mt)/D_{-nu-1}(mt) = -(-1)^nu M_nu/D_{-nu-1}
            ScaledValue v = pcf_imag_magnitude(nu, mt) / dn[nu];
            out[nu] = (nu % 2 == 0) ? -v : v;
        }
    } else {
        std::vector<ScaledValue> dnp = pcf_d_neg_deriv_seq(nu_max, mt);
        for (int nu = 0; nu <= nu_max; ++nu) {
            // -i^{nu+1} D_nu'(i mt)/D_{-nu-1}'(mt) = (-1)^nu P_nu/|D_{-nu-1}'|
            ScaledValue v = pcf_imag_deriv_magnitude(nu, mt) / (-dnp[nu]);
            out[nu] = (nu % 2 == 0) ? v : -v;
        }
    }
    return out;
}

std::complex<double> tmat_parabolic(int nu, const ParabolicBody& body, BoundaryKind bc,
                                    double Q) {
    return {tmat_parabolic_seq(nu, body, bc, Q)[nu].to_real(), 0.0};
}

std::vector<ScaledValue> tmat_ordinary_seq(int ell_max, const CircularBody& body,
                                           BoundaryKind bc, double Q) {
    if (Q <= 0.0 || body.radius <= 0.0)
        throw std::domain_error("tmat_ordinary: Q and radius must be > 0");
    double x = body.radius * Q;
    std::vector<ScaledValue> out(ell_max + 1);
    if (bc == BoundaryKind::Dirichlet) {
        std::vector<ScaledValue> is = bessel_i_seq(ell_max, x);
        std::vector<ScaledValue> ks = bessel_k_seq(ell_max, x);
        for (int l = 0; l <= ell_max; ++l) {
            ScaledValue r = is[l] / ks[l];  // = (I_l/K_l) e^{-2x}
            out[l] = -(M_PI / 2.0) * ScaledValue(r.mantissa, r.log_scale + 2.0 * x);
        }
    } else {
        std::vector<ScaledValue> is = bessel_i_seq(ell_max + 1, x);
        std::vector<ScaledValue> ks = bessel_k_seq(ell_max + 1, x);
        for (int l = 0; l <= ell_max; ++l) {
            ScaledValue ip = 0.5 * (((l >= 1) ? is[l - 1] : is[1]) + is[l + 1]);
            ScaledValue kp = -0.5 * (((l >= 1) ? ks[l - 1] : ks[1]) + ks[l + 1]);
            ScaledValue r = ip / kp;
            out[l] = -(M_PI / 2.0) * ScaledValue(r.mantissa, r.log_scale + 2.0 * x);
        }
    }
    return out;
}

double tmat_ordinary(int ell, const CircularBody& body, BoundaryKind bc, double Q) {
    int l = std::abs(ell);  // integer-order Bessel symmetry
    return tmat_ordinary_seq(l, body, bc, Q)[l].to_real();
}

double tmat_plane(BoundaryKind bc) { return bc == BoundaryKind::Dirichlet ? -1.0 : 1.0; }

}  // namespace casimir
