#include "casimir/translation.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "casimir/quadrature.hpp"

namespace casimir {

namespace {

using cd = std::complex<double>;
const cd I{0.0, 1.0};

double lfact(int n) { return std::lgamma(n + 1.0); }

// sqrt(4 (-1)^l / i), principal branch: 2 e^{-i pi/4} (even l), 2 e^{+i pi/4} (odd)
cd s_ell(int ell) {
    double ph = (((ell % 2) + 2) % 2 == 0) ? -M_PI / 4.0 : M_PI / 4.0;
    return 2.0 * std::exp(I * ph);
}

struct KxGrid {
    std::vector<double> kx, qy, wdu;  // nodes, q_y, du-weights (dk_x = Q cosh u du)
};

// k_x = Q sinh u; u cut where the decay exponent drops 'drop' below the peak:
// exponent(u) = ell_slack*|u| - decay_scale*Q*(cosh u - 1)
KxGrid make_kx_grid(const SpectralPoint& sp, double decay_scale_times_d, int nodes,
                    double ell_slack = 0.0, double drop = 50.0) {
    double a = decay_scale_times_d * sp.Q;  // decay in Q(cosh u - 1)
    double umax;
    if (ell_slack <= 0.0) {
        umax = std::acosh(1.0 + drop / std::max(a, 1e-300));
    } else {
        auto g = [&](double u) { return ell_slack * u - a * (std::cosh(u) - 1.0); };
        double upk = std::asinh(ell_slack / std::max(a, 1e-300));
        double gpk = g(upk);
        double hi = upk + 1.0;
        while (g(hi) > gpk - drop) hi = upk + (hi - upk) * 2.0;
        double lo = upk;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            if (g(mid) > gpk - drop) lo = mid; else hi = mid;
        }
        umax = hi;
    }
    const QuadRule& r = gauss_legendre(nodes);
    KxGrid g;
    g.kx.resize(nodes);
    g.qy.resize(nodes);
    g.wdu.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        double u = umax * r.x[i];
        g.kx[i] = sp.Q * std::sinh(u);
        g.qy[i] = sp.Q * std::cosh(u);
        g.wdu[i] = umax * r.w[i] * g.qy[i];  // includes dk_x = Q cosh u du
    }
    return g;
}

// powers t^0..t^nu_max as a matrix column per node
Eigen::MatrixXcd power_table(const std::vector<cd>& t, int nu_max) {
    int n = int(t.size());
    Eigen::MatrixXcd V(nu_max + 1, n);
    for (int i = 0; i < n; ++i) {
        cd p = 1.0;
        for (int nu = 0; nu <= nu_max; ++nu) {
            V(nu, i) = p;
            p *= t[i];
        }
    }
    return V;
}

void scale_rows_cols_by_invsqrt_fact(Eigen::MatrixXcd& A) {
    for (int i = 0; i < A.rows(); ++i) A.row(i) *= std::exp(-0.5 * lfact(i));
    for (int j = 0; j < A.cols(); ++j) A.col(j) *= std::exp(-0.5 * lfact(j));
}

}  // namespace

AngleFactor angle_factor(double k_x, const SpectralPoint& sp, double theta) {
    if (sp.Q <= 0.0) throw std::domain_error("angle_factor: Q must be > 0");
    if (std::fabs(theta) >= M_PI) throw std::domain_error("angle_factor: |theta| >= pi");
    double qy = std::sqrt(sp.Q * sp.Q + k_x * k_x);
    cd t0 = -I * k_x / (qy + sp.Q);
    double c0 = std::sqrt(2.0 * sp.Q / (sp.Q + qy));
    double tg = std::tan(0.5 * theta), ct = std::cos(0.5 * theta);
    cd den = 1.0 - t0 * tg;
    return {(t0 + tg) / den, c0 / (ct * den)};
}

std::complex<double> trans_parabolic_plane(int nu, double k_x, const Pose& pose,
                                           const SpectralPoint& sp) {
    AngleFactor af = angle_factor(k_x, sp, pose.theta);
    double qy = std::sqrt(sp.Q * sp.Q + k_x * k_x);
    return std::exp(-0.5 * (lfact(nu) + 0.5 * std::log(2.0 * M_PI))) *
           std::pow(af.t, nu) * af.c * std::exp(-qy * pose.d);
}

std::complex<double> round_trip_plane(int nu, int nu_p, const Pose& pose,
                                      const SpectralPoint& sp, int tmat_plane_value) {
    ScaledMatrix A = block_plane_round_trip(std::max(nu, nu_p), pose.theta, pose.d, sp, 512);
    return double(tmat_plane_value) * A.m(nu, nu_p) * std::exp(A.log_offset);
}

std::complex<double> trans_parabolic_parabolic(int nu, int nu_p, const Pose& pose,
                                               const SpectralPoint& sp) {
    ScaledMatrix U = block_pair_U(std::max(nu, nu_p), pose, sp, 512);
    return U.m(nu, nu_p) * std::exp(U.log_offset);
}

std::complex<double> trans_parabolic_ordinary(int nu, int ell, const Pose& pose,
                                              const SpectralPoint& sp) {
    int lm = std::abs(ell);
    ScaledMatrix U = block_parab_ord_U(nu, lm, pose.theta, pose.d, sp, 512);
    return s_ell(ell) * U.m(nu, lm + ell) * std::exp(U.log_offset);
}

ScaledMatrix block_plane_round_trip(int nu_max, double theta, double d,
                                    const SpectralPoint& sp, int kx_nodes) {
    if (d <= 0.0) throw std::domain_error("block_plane_round_trip: d must be > 0");
    KxGrid g = make_kx_grid(sp, 2.0 * d, kx_nodes);
    int n = kx_nodes;
    std::vector<cd> tp(n), tm(n);
    Eigen::VectorXcd meas(n);
    for (int i = 0; i < n; ++i) {
        AngleFactor ap = angle_factor(g.kx[i], sp, theta);
        AngleFactor am = angle_factor(g.kx[i], sp, -theta);
        tp[i] = ap.t;
        tm[i] = am.t;
        // measure dk_x/(2 sqrt(2pi) q_y) c_+ c_-, decay with 2Q d factored out
        meas(i) = g.wdu[i] / (2.0 * std::sqrt(2.0 * M_PI) * g.qy[i]) * ap.c * am.c *
                  std::exp(-2.0 * (g.qy[i] - sp.Q) * d);
    }
    Eigen::MatrixXcd Vp = power_table(tp, nu_max);
    Eigen::MatrixXcd Vm = power_table(tm, nu_max);
    ScaledMatrix out;
    out.m = Vp * meas.asDiagonal() * Vm.transpose();
    scale_rows_cols_by_invsqrt_fact(out.m);
    out.log_offset = -2.0 * sp.Q * d;
    return out;
}

ScaledMatrix block_plane_round_trip_untilted(int nu_max, double d,
                                             const SpectralPoint& sp) {
    // integral in closed form: pi k_{-nu-nu'-1}(2 d Q)/(sqrt(2pi) sqrt(nu! nu'!))
    ScaledMatrix out;
    out.m = Eigen::MatrixXcd::Zero(nu_max + 1, nu_max + 1);
    out.log_offset = -2.0 * sp.Q * d;
    std::vector<ScaledValue> k(nu_max + 1);
    for (int nn = 0; nn <= nu_max; ++nn) k[nn] = bateman_k_scaled(nn, 2.0 * d * sp.Q);
    double lpre = std::log(M_PI) - 0.5 * std::log(2.0 * M_PI);
    for (int nu = 0; nu <= nu_max; ++nu)
        for (int np = nu % 2; np <= nu_max; np += 2) {
            int nn = (nu + np) / 2;
            double lv = lpre + k[nn].log_abs() - 0.5 * (lfact(nu) + lfact(np)) -
                        out.log_offset;
            out.m(nu, np) = double(k[nn].sign()) * std::exp(lv);
        }
    return out;
}

ScaledMatrix block_pair_U(int nu_max, const Pose& pose, const SpectralPoint& sp,
                          int kx_nodes) {
    if (pose.d <= 0.0) throw std::domain_error("block_pair_U: d must be > 0");
    KxGrid g = make_kx_grid(sp, pose.d, kx_nodes);
    int n = kx_nodes;
    std::vector<cd> ta(n), tb(n);
    Eigen::VectorXcd meas(n);
    for (int i = 0; i < n; ++i) {
        AngleFactor aa = angle_factor(g.kx[i], sp, pose.theta);
        AngleFactor ab = angle_factor(g.kx[i], sp, pose.theta_bar);
        ta[i] = aa.t;
        tb[i] = ab.t;
        meas(i) = g.wdu[i] / (std::sqrt(8.0 * M_PI) * g.qy[i]) * aa.c * ab.c *
                  std::exp(-(g.qy[i] - sp.Q) * pose.d) *
                  std::exp(I * g.kx[i] * pose.d_x);
    }
    Eigen::MatrixXcd Va = power_table(ta, nu_max);
    Eigen::MatrixXcd Vb = power_table(tb, nu_max);
    ScaledMatrix out;
    out.m = Va * meas.asDiagonal() * Vb.transpose();
    scale_rows_cols_by_invsqrt_fact(out.m);
    out.log_offset = -sp.Q * pose.d;
    return out;
}

ScaledMatrix block_pair_U_untilted(int nu_max, double d, const SpectralPoint& sp) {
    // 2 pi k_{-nu-nu'-1}(d Q)/sqrt(8 pi nu! nu'!)
    ScaledMatrix out;
    out.m = Eigen::MatrixXcd::Zero(nu_max + 1, nu_max + 1);
    out.log_offset = -sp.Q * d;
    std::vector<ScaledValue> k(nu_max + 1);
    for (int nn = 0; nn <= nu_max; ++nn) k[nn] = bateman_k_scaled(nn, d * sp.Q);
    double lpre = std::log(2.0 * M_PI) - 0.5 * std::log(8.0 * M_PI);
    for (int nu = 0; nu <= nu_max; ++nu)
        for (int np = nu % 2; np <= nu_max; np += 2) {
            int nn = (nu + np) / 2;
            double lv = lpre + k[nn].log_abs() - 0.5 * (lfact(nu) + lfact(np)) -
                        out.log_offset;
            out.m(nu, np) = double(k[nn].sign()) * std::exp(lv);
        }
    return out;
}

ScaledMatrix block_parab_ord_U(int nu_max, int ell_max, double theta, double d,
                               const SpectralPoint& sp, int kx_nodes) {
    if (d <= 0.0) throw std::domain_error("block_parab_ord_U: d must be > 0");
    KxGrid g = make_kx_grid(sp, d, kx_nodes, double(ell_max));
    int n = kx_nodes;
    std::vector<cd> t(n);
    std::vector<cd> eiphi(n);
    Eigen::VectorXcd meas(n);
    for (int i = 0; i < n; ++i) {
        AngleFactor af = angle_factor(g.kx[i], sp, theta);
        t[i] = af.t;
        eiphi[i] = (g.qy[i] + g.kx[i]) / sp.Q;  // e^{i phi} is real on this contour
        meas(i) = g.wdu[i] / (std::sqrt(8.0 * M_PI) * g.qy[i]) * af.c *
                  std::exp(-(g.qy[i] - sp.Q) * d);
    }
    Eigen::MatrixXcd Vnu = power_table(t, nu_max);
    // columns l = -ell_max..ell_max: e^{i l phi}
    Eigen::MatrixXcd Vl(2 * ell_max + 1, n);
    for (int i = 0; i < n; ++i) {
        cd e = eiphi[i];
        cd p = std::pow(e, -double(ell_max));
        for (int c = 0; c <= 2 * ell_max; ++c) {
            Vl(c, i) = p;
            p *= e;
        }
    }
    ScaledMatrix out;
    out.m = Vnu * meas.asDiagonal() * Vl.transpose();
    for (int i = 0; i <= nu_max; ++i)
        out.m.row(i) *= std::exp(-0.5 * (lfact(i) + 0.5 * std::log(2.0 * M_PI)));
    out.log_offset = -sp.Q * d;
    return out;
}

double alpha_coeff(int n) {
    if (n < 0) throw std::domain_error("alpha_coeff: n must be >= 0");
    if (n % 2) return 0.0;
    // binomial(1/2, n/2): Taylor coefficients of sqrt(1+t^2)
    double c = 1.0;
    for (int m = 1; m <= n / 2; ++m) c *= (0.5 - m + 1.0) / m;
    return c;
}

namespace {

// beta as a scaled complex; phase is i^{nu mod 2} (for l >= 0) times a real sum
ScaledComplex beta_scaled_uncached(int nu, int ell) {
    int L = std::abs(ell);
    ScaledValue sum;  // real-valued magnitude sum with signs
    for (int n = (nu % 2); n <= std::min(2 * L, nu); n += 2) {
        int m = (nu - n) / 2;
        // (2L)!/(n!(2L-n)!) * prod_{j=1..m}(1/2 - L - j) / m!
        double lmag = lfact(2 * L) - lfact(n) - lfact(2 * L - n) - lfact(m) +
                      std::lgamma(L + m + 0.5) - std::lgamma(L + 0.5);
        int sign = (m % 2) ? -1 : 1;                      // each (1/2-L-j) < 0
        int ph = ((n - (nu % 2)) / 2) % 2 ? -1 : 1;       // i^n = i^{nu%2} (-1)^{(n-p)/2}
        sum = sum + ScaledValue::from_log(lmag, sign * ph);
    }
    sum = sum * ScaledValue::from_log(lfact(nu));
    ScaledComplex out;
    if (nu % 2 == 0) {
        out.re = sum;
    } else {
        // phase i (for l >= 0) or -i (for l < 0)
        out.im = (ell >= 0) ? sum : -sum;
    }
    return out;
}

// beta is Q-independent and reused across every spectral point
ScaledComplex beta_scaled(int nu, int ell) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, ScaledComplex> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(nu, ell);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    ScaledComplex v = beta_scaled_uncached(nu, ell);
    cache.emplace(key, v);
    return v;
}

}  // namespace

std::complex<double> beta_coeff(int nu, int ell) {
    ScaledComplex b = beta_scaled(nu, ell);
    return {b.re.to_real(), b.im.to_real()};
}

ScaledMatrix block_interior_parabolic_V(int nu_max, const InteriorOffsetParabolic& off,
                                        const SpectralPoint& sp) {
    if (off.lambda0 == 0.0 && off.mu0_off == 0.0) {
        // no displacement translates trivially: exactly the identity
        ScaledMatrix out;
        out.m = Eigen::MatrixXcd::Identity(nu_max + 1, nu_max + 1);
        out.log_offset = 0.0;
        return out;
    }
    double s2q = std::sqrt(2.0 * sp.Q);
    double lt = off.lambda0 * s2q, mt = off.mu0_off * s2q;
    // psi_reg_n = i^n D_n(lt) D_n(i mt) = (-1)^n D_n(lt) M_n(mt), real
    std::vector<ScaledValue> psi(nu_max + 1);
    for (int n = 0; n <= nu_max; ++n) {
        ScaledValue dl = pcf_d_nonneg(n, PcfArgument{std::fabs(lt), Axis::Real,
                                                     lt >= 0 ? +1 : -1}).re;
        ScaledComplex dm = pcf_d_nonneg(n, PcfArgument{mt, Axis::Imaginary, +1});
        ScaledValue M;
        switch (n % 4) {
            case 0: M = dm.re; break;
            case 1: M = dm.im; break;
            case 2: M = -dm.re; break;
            default: M = -dm.im; break;
        }
        psi[n] = dl * M;
        if (n % 2) psi[n] = -psi[n];
    }
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(nu_max + 1, nu_max + 1);
    for (int nu = 0; nu <= nu_max; ++nu)
        for (int np = nu; np <= nu_max; ++np) {
            ScaledValue s;
            for (int n0 = 0; n0 <= np - nu; ++n0) {
                double a = alpha_coeff(np - nu - n0);
                if (a == 0.0) continue;
                s = s + (a * std::exp(-lfact(n0))) * psi[n0];
            }
            V(nu, np) = s.to_real();  // elements are O(e^{mt^2/4}) at worst
        }
    ScaledMatrix out;
    out.m = V.cast<std::complex<double>>();
    out.log_offset = 0.0;
    return out;
}

std::complex<double> interior_parabolic_matrix(int nu, int nu_p,
                                               const InteriorOffsetParabolic& off,
                                               const SpectralPoint& sp) {
    if (nu > nu_p) return 0.0;
    ScaledMatrix V = block_interior_parabolic_V(nu_p, off, sp);
    return V.m(nu, nu_p) * std::exp(V.log_offset);
}

ScaledMatrix block_interior_cylinder_V(int nu_max, int ell_max,
                                       const InteriorOffsetCylindrical& off,
                                       const SpectralPoint& sp) {
    using std::exp;
    double x = sp.Q * off.r0;
    int l0_max = ell_max + 40 + int(x);  // I_{l0} truncation range
    std::vector<ScaledValue> Ih;        // e^{-x} I_{l0}(x)
    if (x > 0.0) {
        Ih = bessel_i_seq(l0_max, x);
    } else {
        Ih.assign(l0_max + 1, ScaledValue());
        Ih[0] = ScaledValue::from_real(1.0);
    }
    ScaledMatrix out;
    out.m = Eigen::MatrixXcd::Zero(nu_max + 1, 2 * ell_max + 1);
    out.log_offset = x;  // the e^{+x} of the unscaled I
    for (int nu = 0; nu <= nu_max; ++nu) {
        double lpre = -0.5 * (lfact(nu) + 0.5 * std::log(2.0 * M_PI));
        for (int c = 0; c <= 2 * ell_max; ++c) {
            int ell = c - ell_max;
            // sum over l0 with term beta_{nu, ell+l0} e^{i l0 theta0} i^{l0} I_{l0}
            ScaledValue acc_re, acc_im;
            for (int l0 = -l0_max; l0 <= l0_max; ++l0) {
                const ScaledValue& Iv = Ih[std::abs(l0)];
                if (Iv.is_zero()) continue;
                ScaledComplex b = beta_scaled(nu, ell + l0);
                if (b.re.is_zero() && b.im.is_zero()) continue;
                // phase e^{i l0 theta0} i^{l0}
                double ang = l0 * off.theta0 + l0 * M_PI / 2.0;
                double ca = std::cos(ang), sa = std::sin(ang);
                ScaledValue tr = (b.re * ca - b.im * sa) * Iv;
                ScaledValue ti = (b.re * sa + b.im * ca) * Iv;
                acc_re = acc_re + tr;
                acc_im = acc_im + ti;
                // truncate when the running terms are negligible
                if (std::abs(l0) > int(x) + 5 &&
                    tr.log_abs() < acc_re.log_abs() - 40.0 &&
                    ti.log_abs() < std::max(acc_im.log_abs(), acc_re.log_abs()) - 40.0 &&
                    l0 > ell_max)
                    break;
            }
            // acc already carries the e^{-x} of the scaled I, which the
            // block's log_offset restores; only the prefactor is folded here
            double lo = lpre;
            out.m(nu, c) = cd(acc_re.is_zero() ? 0.0
                                               : acc_re.sign() * exp(acc_re.log_abs() + lo),
                              acc_im.is_zero() ? 0.0
                                               : acc_im.sign() * exp(acc_im.log_abs() + lo));
        }
    }
    return out;
}

std::complex<double> interior_cylinder_matrix(int nu, int ell,
                                              const InteriorOffsetCylindrical& off,
                                              const SpectralPoint& sp) {
    int lm = std::abs(ell);
    ScaledMatrix V = block_interior_cylinder_V(nu, lm, off, sp);
    return s_ell(ell) * V.m(nu, lm + ell) * std::exp(V.log_offset);
}

}  // namespace casimir
