#pragma once

// Special functions for the scattering formalism: parabolic cylinder
// functions D_nu of integer order (non-negative and negative, on the real
// and imaginary axes), the Bateman k-function, and scaled modified Bessel
// functions.  Everything that can overflow carries a log scale.

#include <utility>
#include <vector>

#include "casimir/scaled.hpp"

namespace casimir {

enum class Axis { Real, Imaginary };

// the tilde-variables lambda~ = lambda*sqrt(2Q), mu~ = mu0*sqrt(2Q)
struct PcfArgument {
    double magnitude = 0.0;  // >= 0
    Axis axis = Axis::Real;
    int sign = +1;           // argument is sign*magnitude (or i*sign*magnitude)
};

struct ScaledComplex {
    ScaledValue re, im;
};

inline int default_nu_cap() { return 200; }
inline int default_ell_cap() { return 120; }

// exp(t^2) * erfc(t) for t >= 0, no overflow
double erfcx(double t);

// D_nu(z) for nu >= 0 via the Hermite representation
// D_nu(z) = 2^{-nu/2} e^{-z^2/4} H_nu(z/sqrt(2)).
ScaledComplex pcf_d_nonneg(int nu, const PcfArgument& arg);

// D_{-nu-1}(x) for x >= 0 (positive, decreasing in x)
ScaledValue pcf_d_neg(int nu, double x);

// batch forms used in the hot path: element n holds order nu = n
std::vector<ScaledValue> pcf_d_neg_seq(int nu_max, double x);

// dD_nu/dz at z = arg, via the ladder D_nu' = (z/2)D_nu - D_{nu+1}
// (real axis) or the cancellation-free mate -(z/2)D_nu + nu D_{nu-1}
// (imaginary axis).  Negative nu means the order -|nu|-1 family is meant:
// pcf_d_deriv(-n-1, x) = d/dx D_{-n-1}(x), real axis only.
ScaledComplex pcf_d_deriv(int nu, const PcfArgument& arg);

// derivative of the negative-order family, d/dx D_{-nu-1}(x)
ScaledValue pcf_d_neg_deriv(int nu, double x);
std::vector<ScaledValue> pcf_d_neg_deriv_seq(int nu_max, double x);

// Bateman k_{-2n-1}(x) = (1/pi)(-1)^n e^{-x} Gamma(n+1/2) U(n+1/2,0,2x);
// computed from the integral form.  Sign is (-1)^n.
double bateman_k(int n, double x);
ScaledValue bateman_k_scaled(int n, double x);

enum class BesselKind { I, K };

// scaled modified Bessel: I_l * e^{-x}, K_l * e^{+x}; derivatives via the
// two-term averages.  Integer order, symmetric in l -> -l.
ScaledValue bessel_modified(int ell, double x, BesselKind kind, bool deriv);

// batch: element l holds order l, l = 0..ell_max
std::vector<ScaledValue> bessel_i_seq(int ell_max, double x);  // e^{-x} I_l
std::vector<ScaledValue> bessel_k_seq(int ell_max, double x);  // e^{+x} K_l

}  // namespace casimir
