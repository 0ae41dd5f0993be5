#pragma once

// Translation / conversion matrices between scattering bases: parabolic to
// plane (with tilt), parabolic to parabolic (tilt and lateral offset, plus
// the untilted Bateman closed form), parabolic to circular cylinder, and
// the two interior regular-wave families (alpha_n and beta_{nu,l}).
//
// All integrals run on the Wick-rotated contour where
//   k_y = i q_y,  q_y = sqrt(Q^2 + k_x^2),  Q = sqrt(kappa^2 + k_z^2),
//   tan(phi/2) = -i k_x/(q_y + Q),  e^{i phi} = (q_y + k_x)/Q,
// so untilted integrands are real up to explicit i powers.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "casimir/specfun.hpp"

namespace casimir {

struct Pose {
    double d = 0.0;        // vertical focus/origin separation, > 0
    double d_x = 0.0;      // lateral offset, either sign
    double theta = 0.0;    // rotation of first body
    double theta_bar = 0.0;  // rotation of second body
};

struct InteriorOffsetParabolic {
    double lambda0 = 0.0;
    double mu0_off = 0.0;  // >= 0; offset coordinate, not the body radius
};

struct InteriorOffsetCylindrical {
    double r0 = 0.0;  // >= 0
    double theta0 = 0.0;  // from the x-axis
};

struct SpectralPoint {
    double kappa = 0.0;
    double k_z = 0.0;
    double Q = 0.0;  // sqrt(kappa^2 + k_z^2), stored exactly as used
    static SpectralPoint from_Q(double Q) { return SpectralPoint{Q, 0.0, Q}; }
};

// (t, c) = (tan((phi+theta)/2), 1/cos((phi+theta)/2)) by half-angle addition
struct AngleFactor {
    std::complex<double> t, c;
};
AngleFactor angle_factor(double k_x, const SpectralPoint& sp, double theta);

// single elements, as displayed in the source equations ------------------

// (nu! sqrt(2pi))^{-1/2} t^nu c e^{i k_y d}; the plane-facing factor
std::complex<double> trans_parabolic_plane(int nu, double k_x, const Pose& pose,
                                           const SpectralPoint& sp);

// k_x-integrated round trip against the plane (T^P included)
std::complex<double> round_trip_plane(int nu, int nu_p, const Pose& pose,
                                      const SpectralPoint& sp, int tmat_plane_value);

// (8 pi nu! nu'!)^{-1/2} integral of (1/q_y) t^nu c tbar^nu' cbar e^{-q_y d} e^{i k_x d_x}
std::complex<double> trans_parabolic_parabolic(int nu, int nu_p, const Pose& pose,
                                               const SpectralPoint& sp);

// (nu! sqrt(2pi))^{-1/2} sqrt(4(-1)^l / i) (8pi)^{-1/2} integral of
// (1/q_y) e^{i l phi} t^nu c e^{-q_y d}
std::complex<double> trans_parabolic_ordinary(int nu, int ell, const Pose& pose,
                                              const SpectralPoint& sp);

// Taylor coefficients of sqrt(1+t^2)
double alpha_coeff(int n);

// d^nu/dt^nu of (1+t^2)^{-1/2} ((1+it)/(1-it))^l at t=0
std::complex<double> beta_coeff(int nu, int ell);

// interior regular-wave translation elements
std::complex<double> interior_parabolic_matrix(int nu, int nu_p,
                                               const InteriorOffsetParabolic& off,
                                               const SpectralPoint& sp);
std::complex<double> interior_cylinder_matrix(int nu, int ell,
                                              const InteriorOffsetCylindrical& off,
                                              const SpectralPoint& sp);

// batched block fills for the energy hot path ----------------------------
// every block is (matrix, log_offset): value = m * exp(log_offset)

struct ScaledMatrix {
    Eigen::MatrixXcd m;
    double log_offset = 0.0;
};

// plane round trip, elements over (nu, nu') without T^C or T^P:
//   integral dk_x/(2 sqrt(2pi) q_y) t_+^nu c_+ t_-^nu' c_- e^{-2 q_y d} / sqrt(nu! nu'!)
// (t_+ at +theta, t_- at -theta); phase i^{nu-nu'} dropped (determinant invariant)
ScaledMatrix block_plane_round_trip(int nu_max, double theta, double d,
                                    const SpectralPoint& sp, int kx_nodes);
// untilted Bateman closed form of the same block
ScaledMatrix block_plane_round_trip_untilted(int nu_max, double d,
                                             const SpectralPoint& sp);

// pair translation U(d, theta_a, theta_b, d_x); reverse matrix = same fill
// with all three signs flipped
ScaledMatrix block_pair_U(int nu_max, const Pose& pose, const SpectralPoint& sp,
                          int kx_nodes);
ScaledMatrix block_pair_U_untilted(int nu_max, double d, const SpectralPoint& sp);

// parabolic-ordinary U over (nu, l), l = col - ell_max in [-ell_max, ell_max],
// WITHOUT the sqrt(4(-1)^l/i) phase (folded into the energy's cylinder factor)
ScaledMatrix block_parab_ord_U(int nu_max, int ell_max, double theta, double d,
                               const SpectralPoint& sp, int kx_nodes);

// interior blocks: V over (nu, nu') (parabolic) or (nu, l) (cylinder, again
// without the sqrt(4(-1)^l/i) phase)
ScaledMatrix block_interior_parabolic_V(int nu_max, const InteriorOffsetParabolic& off,
                                        const SpectralPoint& sp);
ScaledMatrix block_interior_cylinder_V(int nu_max, int ell_max,
                                       const InteriorOffsetCylindrical& off,
                                       const SpectralPoint& sp);

}  // namespace casimir
