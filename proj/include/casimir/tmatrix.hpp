#pragma once

// Scattering T-matrix elements: parabolic cylinder (general mu0 and the
// mu0 = 0 knife edge), circular cylinder, and plane, for Dirichlet and
// Neumann conditions.
//
// Phase bookkeeping: for integer order the parabolic element
//   -i^nu D_nu(i mu0~)/D_{-nu-1}(mu0~)
// is intrinsically real because D_nu(i m) = i^nu M_nu(m) with M real; the
// returned complex value therefore has zero imaginary part, and the
// scaled batch accessors below expose the signed real value directly.

#include <complex>
#include <vector>

#include "casimir/scaled.hpp"

namespace casimir {

enum class BoundaryKind { Dirichlet, Neumann };

struct ParabolicBody {
    double mu0 = 0.0;  // radius of curvature at the tip R = mu0^2; 0 = knife edge
};

struct CircularBody {
    double radius = 0.0;  // the cylinder radius
};

// -i^nu D_nu(i mu0~)/D_{-nu-1}(mu0~)  (Dirichlet)
// -i^{nu+1} D_nu'(i mu0~)/D_{-nu-1}'(mu0~)  (Neumann)
// with mu0~ = mu0 sqrt(2Q)
std::complex<double> tmat_parabolic(int nu, const ParabolicBody& body, BoundaryKind bc,
                                    double Q);

// knife-edge compact form -sqrt(2/pi) nu!; parity selects the channel
// (even nu: Dirichlet, odd nu: Neumann)
double tmat_knife_edge(int nu);

// circular cylinder, real part of -(pi/2) i^{2l+1} I_l/K_l (Dirichlet) or
// the derivative ratio (Neumann); the i^{2l+1} phase is tracked by the
// energy assembly, not here
double tmat_ordinary(int ell, const CircularBody& body, BoundaryKind bc, double Q);

// plane: Dirichlet -> -1, Neumann -> +1
double tmat_plane(BoundaryKind bc);

// batch forms for the energy hot path (signed real values, log-scaled)
std::vector<ScaledValue> tmat_parabolic_seq(int nu_max, const ParabolicBody& body,
                                            BoundaryKind bc, double Q);
std::vector<ScaledValue> tmat_ordinary_seq(int ell_max, const CircularBody& body,
                                           BoundaryKind bc, double Q);

}  // namespace casimir
