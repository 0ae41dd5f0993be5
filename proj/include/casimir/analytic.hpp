#pragma once

// Closed-form baselines: proximity force approximation for the parabolic
// cylinder opposite a plane, the parallel-plate law, the edge-PFA estimate
// for a thin disk, and the interior focal-wire expansion.

namespace casimir {

struct PfaInput {
    double H = 0.0;       // tip-plane gap
    double R = 0.0;       // tip curvature radius (mu0^2)
    double r_disk = 0.0;  // disk radius (edge PFA only)
};

// E/(hbar c L) = -(pi^3/(960 sqrt 2)) sqrt(R/H^5); 0 for the knife edge
double pfa_parabolic_plane(const PfaInput& inp);

// alternative form -(pi^3/240) mu0/(2d - mu0^2)^{5/2}; equals the above
double pfa_parabolic_plane_alt(double mu0, double d);

// energy per unit area -pi^2/(720 H^3)
double parallel_plate(double H);

// E/(hbar c) = -C_perp * integral_{-r}^{r} (H + r - sqrt(r^2-x^2))^{-2} dx
double edge_pfa_disk(const PfaInput& inp, double C_perp);
// small-H/r asymptote -C_perp pi sqrt(r/(2 H^3))
double edge_pfa_disk_asymptote(const PfaInput& inp, double C_perp);

// interior wire near the focus: leading log-accuracy expansion in r0;
// log(Rw/mu0^2) < 0 in the validity regime, so the result is negative
double interior_wire_expansion(double mu0, double wire_radius, double r0,
                               double theta0);

}  // namespace casimir
