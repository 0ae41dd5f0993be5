#pragma once

// Round-trip matrix assembly per spectral point, log det(1-N), the
// zero-temperature spectral integral, the Matsubara sum, and coefficient
// sweeps.  Energies are per unit length over hbar*c, in inverse-length
// squared units of the configured geometry (or over k_B*T for classical
// runs).

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "casimir/tmatrix.hpp"
#include "casimir/translation.hpp"

namespace casimir {

struct GeometryScenario {
    enum class Kind {
        ParabolicPlane,
        ParabolicParabolic,
        ParabolicOrdinary,
        InteriorParabolicParabolic,
        InteriorOrdinary,
    };
    Kind kind = Kind::ParabolicPlane;
    ParabolicBody outer;      // the (or the first / enclosing) parabolic body
    ParabolicBody inner_par;  // second parabolic body (pair and interior pair)
    CircularBody cylinder;    // circular body (ordinary and interior ordinary)
    Pose pose;                // exterior scenarios
    InteriorOffsetParabolic off_par;
    InteriorOffsetCylindrical off_cyl;

    static GeometryScenario parabolic_plane(const ParabolicBody& b, const Pose& p);
    static GeometryScenario parabolic_parabolic(const ParabolicBody& a,
                                                const ParabolicBody& b, const Pose& p);
    static GeometryScenario parabolic_ordinary(const ParabolicBody& a,
                                               const CircularBody& c, const Pose& p);
    static GeometryScenario interior_parabolic(const ParabolicBody& outer,
                                               const ParabolicBody& inner,
                                               const InteriorOffsetParabolic& off);
    static GeometryScenario interior_ordinary(const ParabolicBody& outer,
                                              const CircularBody& inner,
                                              const InteriorOffsetCylindrical& off);
    void validate() const;  // throws std::domain_error on invariant violation
};

struct Truncation {
    int nu_max = 24;
    int ell_max = 24;
    int q_nodes = 64;
    double kx_tolerance = 1e-6;
    double logdet_tolerance = 1e-10;
    void validate() const;
};

struct EnergyResult {
    double value = 0.0;        // E/(hbar c L); per k_B T L for classical runs
    double trunc_error = 0.0;  // |E(nu_max) - E(nu_max-2)|
    double quad_error = 0.0;   // node-doubling difference
    double dirichlet = 0.0;    // channel breakdown of value
    double neumann = 0.0;
};

enum class ChannelMode { Dirichlet, Neumann, EMCombined };

using RoundTripMatrix = Eigen::MatrixXcd;

// N assembled per the scenario's determinant equation, symmetrized by
// diag(sqrt(T)) similarity (determinant-invariant).  EMCombined requires an
// untilted knife-edge scenario where parity decouples the channels.
RoundTripMatrix round_trip(const GeometryScenario& sc, const SpectralPoint& sp,
                           ChannelMode bc, const Truncation& trunc);

// log|det(1-N)| by partial-pivot LU; trace expansion -sum tr(N^m)/m (m<=3)
// when the norm is below 1e-4 to avoid cancellation in the weak tail
double logdet_one_minus(const RoundTripMatrix& N);

// sum over channels of log det(1-N(Q)), and the same at nu_max-2
// (leading-submatrix truncation) for the error estimate
struct SpectralSample {
    double dirichlet = 0.0, neumann = 0.0;
    double dirichlet_red = 0.0, neumann_red = 0.0;
};
SpectralSample spectral_logdet(const GeometryScenario& sc, double Q,
                               const Truncation& trunc);

EnergyResult energy_zero_temperature(const GeometryScenario& sc,
                                     const Truncation& trunc);

// temperature in units k_B T L_unit/(hbar c); n_max < 0 means automatic,
// n_max = 0 is the classical (lowest Matsubara frequency) limit, in which
// case value is E/(k_B T L)
EnergyResult energy_finite_temperature(const GeometryScenario& sc, double temperature,
                                       const Truncation& trunc, int n_max = -1);

enum class SweepParameter { TiltAngle, GapOverRadius, OffsetRatio, Temperature };

// datasets behind the tilt, gap, offset and temperature figures:
// (parameter, dimensionless coefficient) rows; TiltAngle emits
// c(theta_C) = -E H^2 (positive for attraction), others the signed
// scaled energy
std::vector<std::pair<double, double>> coefficient_extract(
    const GeometryScenario& base, SweepParameter param,
    const std::vector<double>& grid, const Truncation& trunc);

// scenario decay scale: N ~ e^{-2 Q scale}; used for the Q mapping
double scenario_decay_scale(const GeometryScenario& sc);

}  // namespace casimir
