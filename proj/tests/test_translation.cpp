#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "casimir/quadrature.hpp"
#include "casimir/translation.hpp"
#include "oracle/oracle.hpp"

using namespace casimir;
using cd = std::complex<double>;
using oracle::mp;

namespace {

double lfact(int n) { return std::lgamma(n + 1.0); }

// panelled double-precision quadrature for oracle integrals
template <class F>
cd quad(F f, double a, double b, int panels = 100, int nodes = 64) {
    const QuadRule& r = gauss_legendre(nodes);
    cd acc = 0;
    for (int p = 0; p < panels; ++p) {
        double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
        for (int i = 0; i < nodes; ++i)
            acc += 0.5 * (hi - lo) * r.w[i] * f(0.5 * (lo + hi) + 0.5 * (hi - lo) * r.x[i]);
    }
    return acc;
}

}  // namespace

TEST_CASE("angle_factor against the complex-logarithm form") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        double Q = 0.2 + 3.0 * unif(rng);
        double kx = (unif(rng) - 0.5) * 6.0;
        double th = (unif(rng) - 0.5) * 5.0;  // inside (-pi, pi) after scaling
        th *= 0.6;
        SpectralPoint sp = SpectralPoint::from_Q(Q);
        double qy = std::sqrt(Q * Q + kx * kx);
        // e^{i phi} = (q_y + k_x)/Q defines phi through the logarithm
        cd phi = -cd(0, 1) * std::log(cd((qy + kx) / Q, 0.0));
        cd half = 0.5 * (phi + th);
        AngleFactor af = angle_factor(kx, sp, th);
        CHECK(std::abs(af.t - std::tan(half)) < 1e-12 * (1.0 + std::abs(af.t)));
        CHECK(std::abs(af.c - 1.0 / std::cos(half)) < 1e-12 * std::abs(af.c));
    }
}

TEST_CASE("angle_factor basic structure") {
    SpectralPoint sp = SpectralPoint::from_Q(1.3);
    AngleFactor a = angle_factor(0.0, sp, 0.0);
    CHECK(std::abs(a.t) == 0.0);
    CHECK(a.c == cd(1.0, 0.0));
    // untilted t is purely imaginary with |t| < 1, odd in k_x
    for (double kx : {0.4, 2.0, 17.0}) {
        AngleFactor p = angle_factor(kx, sp, 0.0);
        AngleFactor m = angle_factor(-kx, sp, 0.0);
        CHECK(std::fabs(p.t.real()) < 1e-15);
        CHECK(std::abs(p.t) < 1.0);
        CHECK(std::abs(p.t + m.t) < 1e-15);
        CHECK(std::abs(p.c - m.c) < 1e-15 * std::abs(p.c));
    }
    CHECK_THROWS_AS(angle_factor(1.0, sp, 3.2), std::domain_error);
}

TEST_CASE("trans_parabolic_plane basics") {
    SpectralPoint sp = SpectralPoint::from_Q(1.1);
    Pose pose{0.8, 0.0, 0.0, 0.0};
    cd v = trans_parabolic_plane(0, 0.0, pose, sp);
    CHECK(v.real() == doctest::Approx(std::pow(2.0 * M_PI, -0.25) *
                                      std::exp(-sp.Q * pose.d)).epsilon(1e-13));
    CHECK(v.imag() == doctest::Approx(0.0));
    // odd nu is odd in k_x when untilted
    for (int nu : {1, 3, 5}) {
        cd p = trans_parabolic_plane(nu, 0.9, pose, sp);
        cd m = trans_parabolic_plane(nu, -0.9, pose, sp);
        CHECK(std::abs(p + m) < 1e-14 * (1.0 + std::abs(p)));
    }
    // element equals the normalization times the angle-factor monomial
    AngleFactor af = angle_factor(0.7, sp, 0.3);
    cd direct = std::pow(af.t, 2) * af.c *
                std::exp(-std::sqrt(sp.Q * sp.Q + 0.49) * pose.d) /
                std::sqrt(std::exp(lfact(2)) * std::sqrt(2.0 * M_PI));
    cd got = trans_parabolic_plane(2, 0.7, Pose{0.8, 0.0, 0.3, 0.0}, sp);
    CHECK(std::abs(got - direct) < 1e-12 * std::abs(direct));
}

TEST_CASE("plane round trip: selection rule and Bateman equivalence") {
    SpectralPoint sp = SpectralPoint::from_Q(1.0);
    for (double d : {0.25, 0.5, 1.0, 2.0}) {  // 2dQ in {0.5,1,2,4}
        Pose pose{d, 0.0, 0.0, 0.0};
        for (int nu = 0; nu <= 6; ++nu) {
            for (int nup = 0; nup <= 6; ++nup) {
                cd rt = round_trip_plane(nu, nup, pose, sp, +1);
                if ((nu + nup) % 2) {
                    CHECK(std::abs(rt) < 1e-12);
                    continue;
                }
                double pred = M_PI * bateman_k((nu + nup) / 2, 2.0 * d * sp.Q) /
                              (std::sqrt(2.0 * M_PI) *
                               std::exp(0.5 * (lfact(nu) + lfact(nup))));
                CHECK(rt.real() == doctest::Approx(pred).epsilon(1e-9));
                CHECK(std::fabs(rt.imag()) < 1e-12 * std::fabs(pred));
            }
        }
    }
    // nu=nu'=0 at 2dQ=1 against the independent u-substitution oracle
    mp ref = oracle::pi() * oracle::bateman_k(0, mp(1) / 1) / sqrt(2 * oracle::pi());
    cd rt = round_trip_plane(0, 0, Pose{0.5, 0.0, 0.0, 0.0}, sp, +1);
    CHECK(oracle::rel_err(ref, rt.real()) < 1e-10);
}

TEST_CASE("pair translation: untilted Bateman form") {
    SpectralPoint sp = SpectralPoint::from_Q(1.0);
    for (double d : {0.5, 1.0, 2.0, 4.0}) {
        Pose pose{d, 0.0, 0.0, 0.0};
        for (int nu = 0; nu <= 5; ++nu) {
            for (int nup = 0; nup <= 5; ++nup) {
                cd u = trans_parabolic_parabolic(nu, nup, pose, sp);
                if ((nu + nup) % 2) {
                    CHECK(std::abs(u) < 1e-12);
                    continue;
                }
                mp pred = 2 * oracle::pi() *
                          oracle::bateman_k((nu + nup) / 2, mp(d) * 1) /
                          sqrt(8 * oracle::pi() *
                               exp(mp(lfact(nu) + lfact(nup))));
                CHECK(oracle::rel_err(pred, u.real()) < 1e-9);
                CHECK(std::fabs(u.imag()) < 1e-12);
            }
        }
    }
}

TEST_CASE("pair translation: parallel half-plane v-integral form") {
    SpectralPoint sp = SpectralPoint::from_Q(0.8);
    for (double dx : {0.6, -0.9}) {
        Pose pose{1.0, dx, M_PI / 2, M_PI / 2};
        for (auto [nu, nup] : {std::pair{0, 0}, {1, 2}, {3, 1}, {2, 2}}) {
            cd lib = trans_parabolic_parabolic(nu, nup, pose, sp);
            double Q = sp.Q;
            double s = nu + nup;
            auto f = [&](double v) -> cd {
                cd iv(0, v);
                return std::pow(1.0 - iv, (s - 1.0) / 2.0) /
                       std::pow(1.0 + iv, (s + 3.0) / 2.0) *
                       std::exp(cd(0, dx * v * Q)) *
                       std::exp(-pose.d * std::sqrt(v * v + 1.0) * Q);
            };
            double vmax = 55.0 / (pose.d * Q);
            cd ora = quad(f, -vmax, vmax, 200, 64) /
                     std::sqrt(2.0 * M_PI * std::exp(lfact(nu) + lfact(nup)));
            CHECK(std::abs(lib - ora) < 1e-9 * (1e-6 + std::abs(ora)));
        }
    }
}

TEST_CASE("pair translation: mirror map is a parity similarity") {
    SpectralPoint sp = SpectralPoint::from_Q(0.7);
    Pose a{1.0, 0.4, 0.3, -0.2};
    Pose b{1.0, -0.4, -0.3, 0.2};
    int n = 3;
    Eigen::MatrixXcd A(n, n), B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A(i, j) = trans_parabolic_parabolic(i, j, a, sp);
            B(i, j) = trans_parabolic_parabolic(i, j, b, sp);
            double sg = ((i + j) % 2) ? -1.0 : 1.0;
            CHECK(std::abs(B(i, j) - sg * A(i, j)) <
                  1e-9 * (1e-8 + std::abs(A(i, j))));
        }
    // hence identical round-trip determinants
    CHECK(std::abs((A * A.transpose()).determinant() -
                   (B * B.transpose()).determinant()) <
          1e-10 * std::abs((A * A.transpose()).determinant()));
}

TEST_CASE("parabolic-ordinary element: parity, oracle, decay") {
    SpectralPoint sp = SpectralPoint::from_Q(1.0);
    Pose pose{1.0, 0.0, 0.0, 0.0};
    for (auto [nu, l] : {std::pair{0, 1}, {1, 1}, {3, 2}, {2, 4}}) {
        cd up = trans_parabolic_ordinary(nu, l, pose, sp);
        cd um = trans_parabolic_ordinary(nu, -l, pose, sp);
        double sg = (nu % 2) ? -1.0 : 1.0;
        CHECK(std::abs(um - sg * up) < 1e-12 * (1e-8 + std::abs(up)));
    }
    // nu=0, l=0: single-angle kernel reduces to the u-substitution integral
    // 2 sqrt2 int_1^inf (u-1)^{-1/2} (u+1)^{-1} e^{-dQ u} du
    cd lib = trans_parabolic_ordinary(0, 0, pose, sp);
    cd I = quad([&](double s) { return std::exp(-(1.0 + s * s)) / (2.0 + s * s); },
                0.0, 12.0, 100, 64);
    I *= 4.0 * std::sqrt(2.0);
    cd pred = std::sqrt(cd(4.0, 0.0) / cd(0.0, 1.0)) * I /
              (std::pow(2.0 * M_PI, 0.25) * std::sqrt(8.0 * M_PI));
    CHECK(std::abs(lib - pred) < 1e-10 * std::abs(pred));
    // exponential decay: ratio at dQ=6 vs dQ=5 within 20% of e^{-1}
    double r = std::abs(trans_parabolic_ordinary(1, 2, Pose{6.0, 0, 0, 0}, sp)) /
               std::abs(trans_parabolic_ordinary(1, 2, Pose{5.0, 0, 0, 0}, sp));
    CHECK(r == doctest::Approx(std::exp(-1.0)).epsilon(0.2));
}

TEST_CASE("blocks agree with their element and closed-form paths") {
    SpectralPoint sp = SpectralPoint::from_Q(0.9);
    double d = 1.2;
    ScaledMatrix tilted = block_plane_round_trip(6, 0.0, d, sp, 256);
    ScaledMatrix bate = block_plane_round_trip_untilted(6, d, sp);
    Eigen::MatrixXcd A = tilted.m * std::exp(tilted.log_offset);
    Eigen::MatrixXcd B = bate.m * std::exp(bate.log_offset);
    CHECK((A - B).cwiseAbs().maxCoeff() < 1e-9 * B.cwiseAbs().maxCoeff());

    ScaledMatrix up = block_pair_U(6, Pose{d, 0, 0, 0}, sp, 256);
    ScaledMatrix ub = block_pair_U_untilted(6, d, sp);
    Eigen::MatrixXcd C = up.m * std::exp(up.log_offset);
    Eigen::MatrixXcd D = ub.m * std::exp(ub.log_offset);
    CHECK((C - D).cwiseAbs().maxCoeff() < 1e-9 * D.cwiseAbs().maxCoeff());
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            if ((i + j) % 2) CHECK(std::abs(D(i, j)) < 1e-12);
            CHECK(std::abs(D(i, j) - trans_parabolic_parabolic(i, j, Pose{d, 0, 0, 0}, sp)) <
                  1e-9 * (1e-8 + std::abs(D(i, j))));
        }
}

TEST_CASE("exterior decay envelope is stable under node doubling") {
    SpectralPoint sp = SpectralPoint::from_Q(1.0);
    double prevC = 1e300;
    for (double d : {2.0, 3.0, 4.0, 6.0}) {
        ScaledMatrix a = block_pair_U(4, Pose{d, 0.2, 0.1, -0.1}, sp, 128);
        ScaledMatrix b = block_pair_U(4, Pose{d, 0.2, 0.1, -0.1}, sp, 256);
        Eigen::MatrixXcd A = a.m * std::exp(a.log_offset);
        Eigen::MatrixXcd B = b.m * std::exp(b.log_offset);
        CHECK((A - B).cwiseAbs().maxCoeff() < 1e-10 * B.cwiseAbs().maxCoeff());
        double C = B.cwiseAbs().maxCoeff() * std::exp(d * sp.Q);
        CHECK(C < prevC * 1.05);  // envelope C e^{-dQ} with slowly varying C
        prevC = C;
    }
}

TEST_CASE("alpha coefficients") {
    CHECK(alpha_coeff(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(alpha_coeff(1) == 0.0);
    CHECK(alpha_coeff(3) == 0.0);
    CHECK(alpha_coeff(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(alpha_coeff(4) == doctest::Approx(-0.125).epsilon(1e-15));
    // Taylor coefficients of sqrt(1+t^2): binomial C(1/2, m) in mp
    mp c = 1;
    for (int m = 0; m <= 10; ++m) {
        if (m > 0) c *= (mp(1) / 2 - (m - 1)) / m;
        CHECK(oracle::rel_err(c, alpha_coeff(2 * m)) < 1e-13);
    }
}

TEST_CASE("beta coefficients against the series-product oracle") {
    // series of (1 + s i t)^{|l|} (1 - s i t)^{-|l|} (1+t^2)^{-1/2}, s = sign(l)
    const int N = 9;
    for (int l = -6; l <= 6; ++l) {
        int al = std::abs(l);
        double s = (l >= 0) ? 1.0 : -1.0;
        std::vector<oracle::Cmp> f(N, oracle::Cmp{mp(0), mp(0)});
        // (1 + s i t)^{al}: finite binomial
        for (int k = 0; k < N; ++k) {
            if (k > al) break;
            mp b = 1;
            for (int j = 0; j < k; ++j) b *= mp(al - j) / (j + 1);
            oracle::Cmp ik = oracle::ipow(k);
            if (s < 0 && k % 2) ik = ik * mp(-1);
            f[k] = ik * b;
        }
        // multiply by (1 - s i t)^{-al} = sum C(al+k-1, k) (s i)^k t^k
        std::vector<oracle::Cmp> g(N, oracle::Cmp{mp(0), mp(0)});
        for (int k = 0; k < N; ++k) {
            mp b = 1;
            for (int j = 0; j < k; ++j) b *= mp(al + j) / (j + 1);
            oracle::Cmp ik = oracle::ipow(k);
            if (s < 0 && k % 2) ik = ik * mp(-1);
            for (int m = 0; m + k < N; ++m) g[m + k] = g[m + k] + f[m] * (ik * b);
        }
        // multiply by (1+t^2)^{-1/2}
        std::vector<oracle::Cmp> h(N, oracle::Cmp{mp(0), mp(0)});
        mp c = 1;
        for (int m = 0; 2 * m < N; ++m) {
            if (m > 0) c *= (-mp(1) / 2 - (m - 1)) / m;
            for (int k = 0; k + 2 * m < N; ++k)
                h[k + 2 * m] = h[k + 2 * m] + g[k] * c;
        }
        mp fact = 1;
        for (int nu = 0; nu < N; ++nu) {
            if (nu > 0) fact *= nu;
            cd got = beta_coeff(nu, l);
            oracle::Cmp want = h[nu] * fact;
            double scale = static_cast<double>(want.abs()) + 1.0;
            CHECK(std::abs(got.real() - static_cast<double>(want.re)) < 1e-12 * scale);
            CHECK(std::abs(got.imag() - static_cast<double>(want.im)) < 1e-12 * scale);
        }
    }
    CHECK(beta_coeff(0, 4) == cd(1.0, 0.0));
    CHECK(std::abs(beta_coeff(1, 0)) == 0.0);
}

TEST_CASE("interior parabolic translation: structure and composition") {
    SpectralPoint sp = SpectralPoint::from_Q(0.9);
    // zero offset is exactly the identity
    ScaledMatrix id = block_interior_parabolic_V(8, {0.0, 0.0}, sp);
    CHECK(id.log_offset == 0.0);
    CHECK((id.m - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() == 0.0);
    // lower-triangular structure and constant diagonal
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            cd v = interior_parabolic_matrix(i, j, {0.3, 0.2}, sp);
            if (i > j) CHECK(std::abs(v) == 0.0);
            if (i == j)
                CHECK(std::abs(v - interior_parabolic_matrix(0, 0, {0.3, 0.2}, sp)) <
                      1e-14);
        }
    // composition of collinear offsets: lambda-direction displacements add
    // through y = -lambda0^2/2, so V(a) V(b) = V(sqrt(a^2+b^2))
    int n = 6;
    Eigen::MatrixXcd A(n, n), B(n, n), C(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A(i, j) = interior_parabolic_matrix(i, j, {0.3, 0.0}, sp);
            B(i, j) = interior_parabolic_matrix(i, j, {0.5, 0.0}, sp);
            C(i, j) = interior_parabolic_matrix(i, j, {std::sqrt(0.34), 0.0}, sp);
        }
    CHECK((A * B - C).cwiseAbs().maxCoeff() < 1e-9);
    // and along the mu direction, where y = +mu0^2/2, the squares add
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A(i, j) = interior_parabolic_matrix(i, j, {0.0, 0.3}, sp);
            B(i, j) = interior_parabolic_matrix(i, j, {0.0, 0.4}, sp);
            C(i, j) = interior_parabolic_matrix(i, j, {0.0, 0.5}, sp);
        }
    CHECK((A * B - C).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("interior cylinder translation: r0=0 and periodicity") {
    SpectralPoint sp = SpectralPoint::from_Q(1.1);
    for (int nu : {0, 1, 3}) {
        for (int l : {-3, 0, 2}) {
            cd v = interior_cylinder_matrix(nu, l, {0.0, 0.7}, sp);
            cd pred = std::sqrt(cd(4.0 * ((l % 2) ? -1.0 : 1.0), 0.0) / cd(0.0, 1.0)) *
                      beta_coeff(nu, l) /
                      (std::sqrt(std::exp(lfact(nu))) * std::pow(2.0 * M_PI, 0.25));
            CHECK(std::abs(v - pred) < 1e-12 * (1.0 + std::abs(pred)));
            cd a = interior_cylinder_matrix(nu, l, {0.4, 0.9}, sp);
            cd b = interior_cylinder_matrix(nu, l, {0.4, 0.9 + 2.0 * M_PI}, sp);
            CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)));
        }
    }
}

TEST_CASE("plane-wave resummation over regular waves") {
    // (1/cos(phi/2)) sum_nu t^nu/nu! psi^reg_nu = e^{i k_x x + q_y y}
    // on the Wick contour, with psi^reg_nu = i^nu D_nu(lam~) D_nu(i mu~)
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        double Q = 0.3 + 1.2 * unif(rng);
        // keep |t| = |k_x|/(q_y+Q) well below 1 so nu_max=40 reaches 1e-8
        double kx = (unif(rng) - 0.5) * 1.6 * Q;
        double lam = (unif(rng) - 0.5) * 2.4;
        double mu = 0.1 + 1.1 * unif(rng);
        double qy = std::sqrt(Q * Q + kx * kx);
        AngleFactor af = angle_factor(kx, SpectralPoint::from_Q(Q), 0.0);
        cd sum = 0;
        double lf = 0.0;
        for (int nu = 0; nu <= 40; ++nu) {
            if (nu > 0) lf += std::log(double(nu));
            PcfArgument la{std::fabs(lam) * std::sqrt(2.0 * Q), Axis::Real,
                           (lam >= 0) ? +1 : -1};
            ScaledComplex dl = pcf_d_nonneg(nu, la);
            ScaledComplex dm =
                pcf_d_nonneg(nu, {mu * std::sqrt(2.0 * Q), Axis::Imaginary, +1});
            cd term = std::pow(af.t, nu) / std::exp(lf) *
                      std::pow(cd(0, 1), nu) *
                      cd(dl.re.to_real(), dl.im.to_real()) *
                      cd(dm.re.to_real(), dm.im.to_real());
            sum += term;
        }
        sum *= af.c;
        double x = lam * mu, y = 0.5 * (mu * mu - lam * lam);
        cd pw = std::exp(cd(0, kx * x) + qy * y);
        CHECK(std::abs(sum - pw) < 1e-8 * std::abs(pw));
    }
}
