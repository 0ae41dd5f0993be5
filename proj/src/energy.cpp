#include "casimir/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "casimir/quadrature.hpp"

namespace casimir {

namespace {

using cd = std::complex<double>;

ScaledValue sv_inverse(const ScaledValue& v) {
    if (v.is_zero()) throw std::domain_error("energy: inverting zero T-matrix element");
    return ScaledValue(1.0 / v.mantissa, -v.log_scale);
}

// diag(sqrt(Tr)) * (A.m exp(A.log_offset)) * diag(sqrt(Tc)), elementwise in
// logs; sqrt of a negative weight contributes a factor i (branch cancels in
// every determinant because each weight enters twice)
Eigen::MatrixXcd weight_sym(const ScaledMatrix& A, const std::vector<ScaledValue>& Tr,
                            const std::vector<ScaledValue>& Tc) {
    int nr = int(A.m.rows()), nc = int(A.m.cols());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nr, nc);
    for (int i = 0; i < nr; ++i) {
        if (Tr[i].is_zero()) continue;
        for (int j = 0; j < nc; ++j) {
            if (Tc[j].is_zero()) continue;
            cd a = A.m(i, j);
            double am = std::abs(a);
            if (am == 0.0) continue;
            double lg = std::log(am) + 0.5 * (Tr[i].log_abs() + Tc[j].log_abs()) +
                        A.log_offset;
            if (lg > 700.0)
                throw std::domain_error("energy: round-trip element overflow");
            int quarter = (Tr[i].sign() < 0 ? 1 : 0) + (Tc[j].sign() < 0 ? 1 : 0);
            double ph = std::arg(a) + quarter * (M_PI / 2.0);
            out(i, j) = std::exp(lg) * cd(std::cos(ph), std::sin(ph));
        }
    }
    return out;
}

int kx_node_count(const GeometryScenario& sc, const SpectralPoint& sp,
                  const Truncation& trunc) {
    int base = 96;
    if (trunc.kx_tolerance < 1e-6)
        base += 16 * int(std::round(-std::log10(trunc.kx_tolerance) - 6.0));
    double dx = std::fabs(sc.pose.d_x);
    if (dx > 0.0 && sc.pose.d > 0.0) {
        double umax = std::acosh(1.0 + 50.0 / (sp.Q * sc.pose.d));
        double osc = sp.Q * dx * std::sinh(umax) / M_PI;
        base += int(6.0 * osc);
    }
    return std::min(base, 4096);
}

std::vector<ScaledValue> knife_full_seq(int nu_max) {
    std::vector<ScaledValue> t(nu_max + 1);
    for (int nu = 0; nu <= nu_max; ++nu)
        t[nu] = ScaledValue::from_log(0.5 * std::log(2.0 / M_PI) + std::lgamma(nu + 1.0),
                                      -1);
    return t;
}

// W_l = s_l^2 T^O_l = -2 pi I_l/K_l, expanded over columns l = -lm..lm
std::vector<ScaledValue> cylinder_weights(int ell_max, const CircularBody& body,
                                          BoundaryKind bc, double Q) {
    std::vector<ScaledValue> w = tmat_ordinary_seq(ell_max, body, bc, Q);
    std::vector<ScaledValue> out(2 * ell_max + 1);
    for (int c = 0; c <= 2 * ell_max; ++c) out[c] = 4.0 * w[std::abs(c - ell_max)];
    return out;
}

bool untilted(const Pose& p) {
    return p.theta == 0.0 && p.theta_bar == 0.0 && p.d_x == 0.0;
}

}  // namespace

GeometryScenario GeometryScenario::parabolic_plane(const ParabolicBody& b,
                                                   const Pose& p) {
    GeometryScenario s;
    s.kind = Kind::ParabolicPlane;
    s.outer = b;
    s.pose = p;
    return s;
}

GeometryScenario GeometryScenario::parabolic_parabolic(const ParabolicBody& a,
                                                       const ParabolicBody& b,
                                                       const Pose& p) {
    GeometryScenario s;
    s.kind = Kind::ParabolicParabolic;
    s.outer = a;
    s.inner_par = b;
    s.pose = p;
    return s;
}

GeometryScenario GeometryScenario::parabolic_ordinary(const ParabolicBody& a,
                                                      const CircularBody& c,
                                                      const Pose& p) {
    GeometryScenario s;
    s.kind = Kind::ParabolicOrdinary;
    s.outer = a;
    s.cylinder = c;
    s.pose = p;
    return s;
}

GeometryScenario GeometryScenario::interior_parabolic(const ParabolicBody& outer,
                                                      const ParabolicBody& inner,
                                                      const InteriorOffsetParabolic& off) {
    GeometryScenario s;
    s.kind = Kind::InteriorParabolicParabolic;
    s.outer = outer;
    s.inner_par = inner;
    s.off_par = off;
    return s;
}

GeometryScenario GeometryScenario::interior_ordinary(const ParabolicBody& outer,
                                                     const CircularBody& inner,
                                                     const InteriorOffsetCylindrical& off) {
    GeometryScenario s;
    s.kind = Kind::InteriorOrdinary;
    s.outer = outer;
    s.cylinder = inner;
    s.off_cyl = off;
    return s;
}

void GeometryScenario::validate() const {
    switch (kind) {
        case Kind::ParabolicPlane:
            if (pose.d <= 0.0) throw std::domain_error("scenario: Pose.d must be > 0");
            if (pose.d - 0.5 * outer.mu0 * outer.mu0 <= 0.0)
                throw std::domain_error("scenario: tip must be above the plane (d > mu0^2/2)");
            break;
        case Kind::ParabolicParabolic:
            if (pose.d <= 0.0) throw std::domain_error("scenario: Pose.d must be > 0");
            if (pose.d - 0.5 * (outer.mu0 * outer.mu0 + inner_par.mu0 * inner_par.mu0) <=
                0.0)
                throw std::domain_error("scenario: parabolic bodies overlap");
            break;
        case Kind::ParabolicOrdinary:
            if (pose.d <= 0.0) throw std::domain_error("scenario: Pose.d must be > 0");
            if (cylinder.radius <= 0.0)
                throw std::domain_error("scenario: cylinder radius must be > 0");
            if (pose.d - 0.5 * outer.mu0 * outer.mu0 - cylinder.radius <= 0.0)
                throw std::domain_error("scenario: cylinder touches the parabola");
            if (pose.d_x != 0.0)
                throw std::domain_error("scenario: lateral offset unsupported here");
            break;
        case Kind::InteriorParabolicParabolic:
            if (inner_par.mu0 >= outer.mu0 && off_par.mu0_off == 0.0 &&
                off_par.lambda0 == 0.0)
                throw std::domain_error("scenario: inner parabola not inside outer");
            break;
        case Kind::InteriorOrdinary:
            if (cylinder.radius <= 0.0)
                throw std::domain_error("scenario: wire radius must be > 0");
            // the parabola's nearest point to its focus is the vertex, mu0^2/2 away
            if (off_cyl.r0 + cylinder.radius >= 0.5 * outer.mu0 * outer.mu0)
                throw std::domain_error("scenario: wire not inside the parabola");
            break;
    }
}

double scenario_decay_scale(const GeometryScenario& sc) {
    switch (sc.kind) {
        case GeometryScenario::Kind::ParabolicPlane:
            return sc.pose.d - 0.5 * sc.outer.mu0 * sc.outer.mu0;
        case GeometryScenario::Kind::ParabolicParabolic:
            return 0.5 * (sc.pose.d - 0.5 * (sc.outer.mu0 * sc.outer.mu0 +
                                             sc.inner_par.mu0 * sc.inner_par.mu0));
        case GeometryScenario::Kind::ParabolicOrdinary:
            return 0.5 * (sc.pose.d - 0.5 * sc.outer.mu0 * sc.outer.mu0 -
                          sc.cylinder.radius);
        case GeometryScenario::Kind::InteriorParabolicParabolic:
            return 0.25 * (sc.outer.mu0 * sc.outer.mu0 -
                           sc.inner_par.mu0 * sc.inner_par.mu0);
        case GeometryScenario::Kind::InteriorOrdinary:
            return std::max(0.25 * sc.outer.mu0 * sc.outer.mu0 - 0.5 * sc.off_cyl.r0 -
                                0.5 * sc.cylinder.radius,
                            0.05 * sc.outer.mu0 * sc.outer.mu0);
        default:
            throw std::domain_error("scenario_decay_scale: unknown kind");
    }
}

RoundTripMatrix round_trip(const GeometryScenario& sc, const SpectralPoint& sp,
                           ChannelMode mode, const Truncation& trunc) {
    if (sp.Q <= 0.0) throw std::domain_error("round_trip: Q must be > 0");
    int nm = trunc.nu_max, lm = trunc.ell_max;
    int nodes = kx_node_count(sc, sp, trunc);
    double Q = sp.Q;

    if (mode == ChannelMode::EMCombined) {
        // parity-decoupled knife-edge scenarios only
        if (sc.kind == GeometryScenario::Kind::ParabolicPlane && sc.outer.mu0 == 0.0 &&
            sc.pose.theta == 0.0) {
            ScaledMatrix A = block_plane_round_trip_untilted(nm, sc.pose.d, sp);
            Eigen::MatrixXcd N = weight_sym(A, knife_full_seq(nm), knife_full_seq(nm));
            for (int i = 0; i <= nm; ++i) N.row(i) *= (i % 2 == 0) ? -1.0 : 1.0;
            return N;
        }
        if (sc.kind == GeometryScenario::Kind::ParabolicParabolic &&
            sc.outer.mu0 == 0.0 && sc.inner_par.mu0 == 0.0 && untilted(sc.pose)) {
            ScaledMatrix U = block_pair_U_untilted(nm, sc.pose.d, sp);
            std::vector<ScaledValue> T = knife_full_seq(nm);
            Eigen::MatrixXcd M = weight_sym(U, T, T);
            return M * M;
        }
        throw std::domain_error("round_trip: EM-combined mode needs an untilted knife edge");
    }

    BoundaryKind bc = (mode == ChannelMode::Dirichlet) ? BoundaryKind::Dirichlet
                                                       : BoundaryKind::Neumann;
    switch (sc.kind) {
        case GeometryScenario::Kind::ParabolicPlane: {
            std::vector<ScaledValue> T = tmat_parabolic_seq(nm, sc.outer, bc, Q);
            ScaledMatrix A =
                (sc.pose.theta == 0.0)
                    ? block_plane_round_trip_untilted(nm, sc.pose.d, sp)
                    : block_plane_round_trip(nm, sc.pose.theta, sc.pose.d, sp, nodes);
            return tmat_plane(bc) * weight_sym(A, T, T);
        }
        case GeometryScenario::Kind::ParabolicParabolic: {
            std::vector<ScaledValue> Ta = tmat_parabolic_seq(nm, sc.outer, bc, Q);
            std::vector<ScaledValue> Tb = tmat_parabolic_seq(nm, sc.inner_par, bc, Q);
            ScaledMatrix U, Ur;
            if (untilted(sc.pose)) {
                U = block_pair_U_untilted(nm, sc.pose.d, sp);
                Ur = U;
            } else {
                U = block_pair_U(nm, sc.pose, sp, nodes);
                Pose rev{sc.pose.d, -sc.pose.d_x, -sc.pose.theta, -sc.pose.theta_bar};
                Ur = block_pair_U(nm, rev, sp, nodes);
            }
            Eigen::MatrixXcd M1 = weight_sym(U, Ta, Tb);
            Eigen::MatrixXcd M2 = weight_sym(Ur, Tb, Ta);
            return M1 * M2;
        }
        case GeometryScenario::Kind::ParabolicOrdinary: {
            std::vector<ScaledValue> T = tmat_parabolic_seq(nm, sc.outer, bc, Q);
            std::vector<ScaledValue> W = cylinder_weights(lm, sc.cylinder, bc, Q);
            ScaledMatrix U =
                block_parab_ord_U(nm, lm, sc.pose.theta, sc.pose.d, sp, nodes);
            Eigen::MatrixXcd X = weight_sym(U, T, W);
            if (sc.pose.theta == 0.0) return X * X.transpose();
            ScaledMatrix Ur =
                block_parab_ord_U(nm, lm, -sc.pose.theta, sc.pose.d, sp, nodes);
            Eigen::MatrixXcd Y = weight_sym(Ur, T, W);
            return X * Y.transpose();
        }
        case GeometryScenario::Kind::InteriorParabolicParabolic: {
            std::vector<ScaledValue> Tout = tmat_parabolic_seq(nm, sc.outer, bc, Q);
            std::vector<ScaledValue> invT(nm + 1);
            for (int i = 0; i <= nm; ++i) invT[i] = sv_inverse(Tout[i]);
            std::vector<ScaledValue> Tin = tmat_parabolic_seq(nm, sc.inner_par, bc, Q);
            ScaledMatrix V = block_interior_parabolic_V(nm, sc.off_par, sp);
            InteriorOffsetParabolic offr{-sc.off_par.lambda0, sc.off_par.mu0_off};
            ScaledMatrix Vr = block_interior_parabolic_V(nm, offr, sp);
            Eigen::MatrixXcd X = weight_sym(V, invT, Tin);
            Eigen::MatrixXcd Y = weight_sym(Vr, invT, Tin);
            return X * Y.transpose();
        }
        case GeometryScenario::Kind::InteriorOrdinary: {
            std::vector<ScaledValue> Tout = tmat_parabolic_seq(nm, sc.outer, bc, Q);
            std::vector<ScaledValue> invT(nm + 1);
            for (int i = 0; i <= nm; ++i) invT[i] = sv_inverse(Tout[i]);
            std::vector<ScaledValue> W = cylinder_weights(lm, sc.cylinder, bc, Q);
            ScaledMatrix V = block_interior_cylinder_V(nm, lm, sc.off_cyl, sp);
            InteriorOffsetCylindrical offr{sc.off_cyl.r0, M_PI - sc.off_cyl.theta0};
            ScaledMatrix Vr = block_interior_cylinder_V(nm, lm, offr, sp);
            Eigen::MatrixXcd X = weight_sym(V, invT, W);
            Eigen::MatrixXcd Y = weight_sym(Vr, invT, W);
            return X * Y.transpose();
        }
        default:
            throw std::domain_error("round_trip: unknown scenario kind");
    }
}

double logdet_one_minus(const RoundTripMatrix& N) {
    int n = int(N.rows());
    if (n == 0) return 0.0;
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        for (int j = 0; j < n; ++j) r += std::abs(N(i, j));
        norm = std::max(norm, r);
    }
    if (norm < 1e-4) {
        // trace expansion avoids the 1 - (1-eps) cancellation
        cd t1 = N.trace();
        Eigen::MatrixXcd N2 = N * N;
        cd t2 = N2.trace();
        cd t3 = (N2 * N).trace();
        return -std::real(t1 + 0.5 * t2 + t3 / 3.0);
    }
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) - N;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    double ld = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = std::abs(lu.matrixLU()(i, i));
        if (d == 0.0) throw std::domain_error("logdet_one_minus: singular 1-N");
        ld += std::log(d);
    }
    return ld;
}

SpectralSample spectral_logdet(const GeometryScenario& sc, double Q,
                               const Truncation& trunc) {
    SpectralPoint sp = SpectralPoint::from_Q(Q);
    int red = std::max(1, trunc.nu_max - 1);  // orders 0..nu_max-2
    SpectralSample out;
    RoundTripMatrix Nd = round_trip(sc, sp, ChannelMode::Dirichlet, trunc);
    out.dirichlet = logdet_one_minus(Nd);
    out.dirichlet_red = logdet_one_minus(Nd.topLeftCorner(red, red));
    RoundTripMatrix Nn = round_trip(sc, sp, ChannelMode::Neumann, trunc);
    out.neumann = logdet_one_minus(Nn);
    out.neumann_red = logdet_one_minus(Nn.topLeftCorner(red, red));
    return out;
}

namespace {

struct ChannelIntegrals {
    double d = 0.0, n = 0.0, d_red = 0.0, n_red = 0.0;
};

// integral_0^inf w(Q) f_c(Q) dQ per channel, with the log map
// Q = -ln(s)/(2 L2); w(Q) = Q for the T=0 measure, 1 for the classical one
ChannelIntegrals integrate_channels(const GeometryScenario& sc, const Truncation& trunc,
                                    int q_nodes, bool weight_Q) {
    double L2 = scenario_decay_scale(sc);
    if (L2 <= 0.0) throw std::domain_error("energy: nonpositive decay scale");
    const QuadRule& r = gauss_legendre(q_nodes);
    ChannelIntegrals acc;
    for (int i = 0; i < q_nodes; ++i) {
        double s = 0.5 * (r.x[i] + 1.0);
        double w = 0.5 * r.w[i];
        double Q = -std::log(s) / (2.0 * L2);
        if (Q <= 0.0) continue;
        double jac = w / (2.0 * L2 * s);
        double wq = (weight_Q ? Q : 1.0) * jac;
        SpectralSample f = spectral_logdet(sc, Q, trunc);
        acc.d += wq * f.dirichlet;
        acc.n += wq * f.neumann;
        acc.d_red += wq * f.dirichlet_red;
        acc.n_red += wq * f.neumann_red;
    }
    return acc;
}

Truncation effective_trunc(const GeometryScenario& sc, const Truncation& t) {
    Truncation e = t;
    if (std::fabs(sc.pose.theta) > 1.2 || std::fabs(sc.pose.theta_bar) > 1.2)
        e.nu_max = std::max(e.nu_max, 48);  // higher partial waves near pi/2
    return e;
}

}  // namespace

void Truncation::validate() const {
    if (nu_max < 1 || ell_max < 1 || q_nodes < 1)
        throw std::domain_error("Truncation: counts must be >= 1");
    if (!(kx_tolerance > 0.0 && kx_tolerance <= 1e-3) ||
        !(logdet_tolerance > 0.0 && logdet_tolerance <= 1e-3))
        throw std::domain_error("Truncation: tolerances must lie in (0, 1e-3]");
}

EnergyResult energy_zero_temperature(const GeometryScenario& sc,
                                     const Truncation& trunc_in) {
    sc.validate();
    trunc_in.validate();
    Truncation trunc = effective_trunc(sc, trunc_in);
    ChannelIntegrals lo = integrate_channels(sc, trunc, trunc.q_nodes, true);
    ChannelIntegrals hi = integrate_channels(sc, trunc, 2 * trunc.q_nodes, true);
    double pre = 1.0 / (4.0 * M_PI);
    EnergyResult res;
    res.dirichlet = pre * hi.d;
    res.neumann = pre * hi.n;
    res.value = res.dirichlet + res.neumann;
    res.quad_error = std::fabs(pre * (hi.d + hi.n - lo.d - lo.n));
    res.trunc_error = std::fabs(pre * (hi.d + hi.n - hi.d_red - hi.n_red));
    return res;
}

EnergyResult energy_finite_temperature(const GeometryScenario& sc, double temperature,
                                       const Truncation& trunc_in, int n_max) {
    sc.validate();
    trunc_in.validate();
    if (temperature <= 0.0)
        throw std::domain_error("energy_finite_temperature: T must be > 0");
    Truncation trunc = effective_trunc(sc, trunc_in);
    double L2 = scenario_decay_scale(sc);

    // n = 0: (1/pi) integral_0^inf f(Q) dQ, half weighted
    ChannelIntegrals lo0 = integrate_channels(sc, trunc, trunc.q_nodes, false);
    ChannelIntegrals hi0 = integrate_channels(sc, trunc, 2 * trunc.q_nodes, false);
    double g0d = hi0.d / M_PI, g0n = hi0.n / M_PI;
    double quad = std::fabs((hi0.d + hi0.n - lo0.d - lo0.n) / M_PI);
    double trunc_err = std::fabs((hi0.d + hi0.n - hi0.d_red - hi0.n_red) / M_PI);

    EnergyResult res;
    if (n_max == 0) {
        // classical: E/(k_B T L) = (1/2) g_0
        res.dirichlet = 0.5 * g0d;
        res.neumann = 0.5 * g0n;
        res.value = res.dirichlet + res.neumann;
        res.quad_error = 0.5 * quad;
        res.trunc_error = 0.5 * trunc_err;
        return res;
    }

    double sum_d = 0.5 * g0d, sum_n = 0.5 * g0n;
    int stop = (n_max > 0) ? n_max
                           : std::max(2, int(std::ceil(40.0 / (4.0 * M_PI * temperature *
                                                               L2))) + 2);
    for (int n = 1; n <= stop; ++n) {
        double kn = 2.0 * M_PI * n * temperature;
        // Q = kn cosh w removes the inverse-square-root endpoint
        double wmax = std::acosh(1.0 + 45.0 / (2.0 * L2 * kn));
        const QuadRule& r = gauss_legendre(std::max(32, trunc.q_nodes / 2));
        double gd = 0.0, gn = 0.0, gdr = 0.0, gnr = 0.0;
        for (size_t i = 0; i < r.x.size(); ++i) {
            double w = 0.5 * wmax * (r.x[i] + 1.0);
            double wt = 0.5 * wmax * r.w[i];
            double Q = kn * std::cosh(w);
            SpectralSample f = spectral_logdet(sc, Q, trunc);
            gd += wt * kn * std::cosh(w) * f.dirichlet;
            gn += wt * kn * std::cosh(w) * f.neumann;
            gdr += wt * kn * std::cosh(w) * f.dirichlet_red;
            gnr += wt * kn * std::cosh(w) * f.neumann_red;
        }
        sum_d += gd / M_PI;
        sum_n += gn / M_PI;
        trunc_err += std::fabs(gd - gdr + gn - gnr) / M_PI;
        if (n_max < 0 && std::fabs(gd + gn) < 1e-14 * std::fabs(sum_d + sum_n)) break;
    }
    res.dirichlet = temperature * sum_d;
    res.neumann = temperature * sum_n;
    res.value = res.dirichlet + res.neumann;
    res.quad_error = temperature * quad;
    res.trunc_error = temperature * trunc_err;
    return res;
}

std::vector<std::pair<double, double>> coefficient_extract(
    const GeometryScenario& base, SweepParameter param,
    const std::vector<double>& grid, const Truncation& trunc) {
    std::vector<std::pair<double, double>> table;
    table.reserve(grid.size());
    for (double g : grid) {
        GeometryScenario sc = base;
        double coeff = 0.0;
        switch (param) {
            case SweepParameter::TiltAngle: {
                sc.pose.theta = g;
                double H = sc.pose.d - 0.5 * sc.outer.mu0 * sc.outer.mu0;
                EnergyResult e = energy_zero_temperature(sc, trunc);
                coeff = -e.value * H * H * std::cos(g);  // c = cos(theta_C) C(theta_C)
                break;
            }
            case SweepParameter::GapOverRadius: {
                double R = sc.outer.mu0 * sc.outer.mu0;
                double H = g * R;
                sc.pose.d = H + 0.5 * R;
                EnergyResult e = energy_zero_temperature(sc, trunc);
                coeff = e.value * H * H;
                break;
            }
            case SweepParameter::OffsetRatio: {
                sc.pose.d_x = g * sc.pose.d;
                EnergyResult e = energy_zero_temperature(sc, trunc);
                coeff = e.value * sc.pose.d * sc.pose.d;
                break;
            }
            case SweepParameter::Temperature: {
                double H = scenario_decay_scale(sc);
                if (sc.kind == GeometryScenario::Kind::ParabolicPlane)
                    H = sc.pose.d - 0.5 * sc.outer.mu0 * sc.outer.mu0;
                EnergyResult e = energy_finite_temperature(sc, g / H, trunc);
                coeff = e.value * H * H;
                break;
            }
        }
        table.emplace_back(g, coeff);
    }
    return table;
}

}  // namespace casimir
