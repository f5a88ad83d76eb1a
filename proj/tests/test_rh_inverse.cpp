#include "doctest.h"

#include "dnls/errors.hpp"
#include "dnls/rh_inverse.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace dnls;

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double pi = std::numbers::pi;

ReflectionPair synthetic(const SpectralGrid& g, double eps, double width = 2.0)
{
    cvec rp(g.N), rm(g.N);
    for (int k = 0; k < g.N; ++k) {
        const double z = g.z(k);
        rp[k] = eps * std::exp(-width * z * z) * cplx(1.0, 0.3 * z);
        rm[k] = 4.0 * z * rp[k];
    }
    return validate_reflection(g, rp, rm);
}

// golden-section minimum of f on [a, b]
template <class F>
double golden_min(F f, double a, double b)
{
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    while (b - a > 1e-12) {
        if (f(c) < f(d))
            b = d;
        else
            a = c;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    return f(0.5 * (a + b));
}

// dense discrete projector built from the kernel -2/(pi m), m odd
Eigen::MatrixXcd dense_projector(int n, bool plus)
{
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        P(k, k) = plus ? 0.5 : -0.5;
        for (int l = 0; l < n; ++l) {
            const int m = k - l;
            if (m % 2 != 0)
                P(k, l) += -0.5 * I * (-2.0 / (pi * m));
        }
    }
    return P;
}

// [mu; eta] from the dense system for the given vector component
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> dense_solve(const RHSolver& s, double x, bool negative, int comp)
{
    const auto& g = s.data().grid;
    const int n = g.N;
    const cvec& rp = negative ? s.delta().r_plus_delta : s.data().r_plus;
    const cvec& rm = negative ? s.delta().r_minus_delta : s.data().r_minus;
    Eigen::VectorXcd c1(n), c2(n);
    for (int k = 0; k < n; ++k) {
        const cplx e = std::exp(2.0 * I * g.z(k) * x);
        c1[k] = rm[k] * e;
        c2[k] = std::conj(rp[k]) / e;
    }
    const auto Pa = dense_projector(n, negative), Pb = dense_projector(n, !negative);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
    A.block(0, n, n, n) -= Pa * c1.asDiagonal();
    A.block(n, 0, n, n) -= Pb * c2.asDiagonal();
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(2 * n);
    b.segment(comp == 0 ? 0 : n, n).setOnes();
    const Eigen::VectorXcd X = A.partialPivLu().solve(b);
    return {X.head(n), X.tail(n)};
}

double dev(const cvec& a, const Eigen::VectorXcd& b)
{
    double m = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[static_cast<int>(k)]));
    return m;
}

}  // namespace

TEST_SUITE("rh_inverse")
{
    TEST_CASE("reflection validation")
    {
        const auto g = make_spectral_grid(20.0, 2048);
        const auto z = validate_reflection(g, cvec(g.N, 0.0), cvec(g.N, 0.0));
        CHECK(z.c0_sq == 1.0);

        auto pair = [&](double alpha, double factor) {
            cvec rp(g.N), rm(g.N);
            for (int k = 0; k < g.N; ++k) {
                rp[k] = std::exp(-alpha * g.z(k) * g.z(k));
                rm[k] = factor * g.z(k) * rp[k];
            }
            return std::make_pair(rp, rm);
        };
        // r+ = exp(-z^2): 1 + 4z exp(-2z^2) dips below zero
        const double c1 = golden_min([](double z) { return 1 + 4 * z * std::exp(-2 * z * z); }, -5, 0);
        CHECK(c1 == doctest::Approx(1 - 2 * std::exp(-0.5)).epsilon(1e-9));
        CHECK(c1 < 0);
        auto [a1, b1] = pair(1.0, 4.0);
        CHECK_THROWS_AS(validate_reflection(g, a1, b1), PreconditionError);
        // r+ = exp(-2z^2) gives the positive minimum 1 - sqrt(2) e^{-1/2}
        const double c2 = golden_min([](double z) { return 1 + 4 * z * std::exp(-4 * z * z); }, -5, 0);
        CHECK(c2 == doctest::Approx(1 - std::sqrt(2.0) * std::exp(-0.5)).epsilon(1e-9));
        CHECK(c2 == doctest::Approx(0.142).epsilon(1e-2));
        auto [a2, b2] = pair(2.0, 4.0);
        const auto r2 = validate_reflection(g, a2, b2);
        CHECK(std::abs(r2.c0_sq - c2) < 1e-4);

        auto [a3, b3] = pair(2.0, 3.0);
        CHECK_THROWS_AS(validate_reflection(g, a3, b3), PreconditionError);
        CHECK_THROWS_AS(validate_reflection(g, a2, cvec(g.N - 1)), PreconditionError);
    }

    TEST_CASE("zero data")
    {
        const auto g = make_spectral_grid(10.0, 256);
        const auto r = validate_reflection(g, cvec(g.N, 0.0), cvec(g.N, 0.0));
        for (double x : {-3.0, 0.0, 2.5}) {
            const auto s = solve_rh_positive(r, x);
            for (int k = 0; k < g.N; ++k) {
                CHECK(s.mu_minus[0][k] == cplx(1.0));
                CHECK(s.mu_minus[1][k] == cplx(0.0));
                CHECK(s.eta_plus[0][k] == cplx(0.0));
                CHECK(s.eta_plus[1][k] == cplx(1.0));
            }
        }
        const auto d = delta_factor(r);
        for (int k = 0; k < g.N; ++k) {
            CHECK(std::abs(d.delta_plus[k] - 1.0) < 1e-15);
            CHECK(std::abs(d.delta_minus[k] - 1.0) < 1e-15);
            CHECK(d.r_plus_delta[k] == cplx(0.0));
        }
        const auto sn = solve_rh_negative(r, -1.0);
        for (int k = 0; k < g.N; ++k) {
            CHECK(std::abs(sn.mu_plus_delta[0][k] - 1.0) < 1e-15);
            CHECK(std::abs(sn.eta_minus_delta[1][k] - 1.0) < 1e-15);
        }
        const auto rec = reconstruct(r, make_spatial_grid(10.0, 64));
        for (const auto& v : rec.values)
            CHECK(v == cplx(0.0));
    }

    TEST_CASE("dense oracle")
    {
        const auto g = make_spectral_grid(8.0, 256);
        for (double eps : {0.05, 1.0}) {
            const RHSolver s(synthetic(g, eps));
            for (bool neg : {false, true})
                for (double x : {-1.5, 0.0, 2.0})
                    for (int c = 0; c < 2; ++c) {
                        const auto ps = s.solve_pair(x, neg, c);
                        CHECK(ps.neumann == (eps < 0.5));
                        const auto [mu, eta] = dense_solve(s, x, neg, c);
                        CHECK(dev(ps.mu, mu) < 1e-8);
                        CHECK(dev(ps.eta, eta) < 1e-8);
                    }
        }
    }

    TEST_CASE("first Neumann iterate is second order")
    {
        const auto g = make_spectral_grid(8.0, 256);
        double prev = 0;
        for (double eps : {0.04, 0.02, 0.01}) {
            const RHSolver s(synthetic(g, eps));
            const double x = 0.7;
            const auto [mu, eta] = dense_solve(s, x, false, 0);
            // mu1 = e1, eta1 = P+(conj(r+) e^{-2izx})
            const auto P = dense_projector(g.N, true);
            Eigen::VectorXcd c2(g.N);
            for (int k = 0; k < g.N; ++k)
                c2[k] = std::conj(s.data().r_plus[k]) * std::exp(-2.0 * I * g.z(k) * x);
            const Eigen::VectorXcd eta1 = P * c2;
            const double d = std::max((mu.array() - 1.0).abs().maxCoeff(), (eta - eta1).cwiseAbs().maxCoeff());
            if (prev > 0)
                CHECK(prev / d == doctest::Approx(4.0).epsilon(0.05));
            prev = d;
        }
    }

    TEST_CASE("Gaussian-derived data")
    {
        auto [xg, zg] = make_grids(20.0, 512, 20.0, 1024);
        const auto u = sample_potential([](double x) { return cplx(0.3 * std::exp(-x * x)); }, xg);
        const auto S = scattering_coefficients(u, zg);
        const auto r = reflection_from(S);
        const RHSolver s(r);

        SUBCASE("jump conditions")
        {
            for (double x : {-4.0, 0.0, 3.0}) {
                const auto sol = s.solve_positive(x);
                CHECK(jump_residual(s, sol) < 1e-8);
            }
        }
        SUBCASE("delta factorization")
        {
            const auto& d = s.delta();
            double e = 0;
            for (int k = 0; k < zg.N; ++k) {
                const cplx v = 1.0 + std::conj(r.r_plus[k]) * r.r_minus[k];
                e = std::max(e, std::abs(std::abs(d.delta_plus[k] * d.delta_minus[k]) - 1.0));
                e = std::max(e, std::abs(d.delta_plus[k] / d.delta_minus[k] - v));
            }
            CHECK(e < 1e-8);
        }
        SUBCASE("positivity")
        {
            for (double x = -20; x <= 20; x += 2.5)
                CHECK(positivity_margin(r, x) > -1e-12);
            const int k0 = zg.zero_index();
            // |r(lambda)| = |r-| / (2 sqrt z) = 2 sqrt(z) |r+| on z > 0
            double sup = 0;
            for (int k = k0 + 1; k < zg.N; ++k)
                sup = std::max(sup, 2 * std::sqrt(zg.z(k)) * std::abs(r.r_plus[k]));
            CHECK(positivity_constant(r, k0) == doctest::Approx(1.0 / ((1 + sup) * (1 + sup))).epsilon(1e-12));
            CHECK(positivity_constant(r, 10) == doctest::Approx(r.c0_sq));
        }
        SUBCASE("columns decay away from the origin")
        {
            double prev = 1e9;
            for (double x : {1.0, 4.0, 12.0}) {
                const auto sol = s.solve_positive(x);
                double m = 0;
                for (int k = 0; k < zg.N; ++k)
                    m = std::max(m, std::abs(sol.mu_minus[0][k] - 1.0));
                CHECK(m < prev);
                prev = m;
            }
            CHECK(prev < 1e-3);
        }
        SUBCASE("roundtrip and phase")
        {
            const auto rec = reconstruct(s, xg, S.a_inf);
            double num = 0, den = 0, mass = 0;
            for (int j = 0; j < xg.N; ++j) {
                num += std::norm(rec.values[j] - u.u[j]);
                den += std::norm(u.u[j]);
                mass += std::norm(rec.values[j]) * xg.dx;
            }
            CHECK(std::sqrt(num / den) < 1e-4);
            CHECK(rec.gluing_defect < 1e-5);
            CHECK(rec.a_inf_attached);
            const double ph = std::remainder(mass + 2 * std::arg(S.a_inf), 4 * pi);
            CHECK(std::abs(ph) < 1e-5);

            const auto serial = reconstruct(s, xg, S.a_inf, Exec::Serial);
            CHECK(serial.values == rec.values);
        }
        SUBCASE("Lipschitz probe")
        {
            const auto base = reconstruct(s, xg, S.a_inf);
            double ratio[2];
            int i = 0;
            for (double eps : {1e-3, 5e-4}) {
                cvec rp = r.r_plus, rm = r.r_minus;
                double dr = 0;
                for (int k = 0; k < zg.N; ++k) {
                    const cplx d = eps * std::exp(-zg.z(k) * zg.z(k)) * cplx(std::cos(zg.z(k)), 0.5);
                    rp[k] += d;
                    rm[k] += 4.0 * zg.z(k) * d;
                    dr = std::max(dr, std::abs(d));
                }
                const auto p = reconstruct(validate_reflection(zg, rp, rm), xg, S.a_inf);
                double du = 0;
                for (int j = 0; j < xg.N; ++j)
                    du = std::max(du, std::abs(p.values[j] - base.values[j]));
                ratio[i++] = du / dr;
            }
            CHECK(ratio[0] < 10.0);
            CHECK(ratio[0] == doctest::Approx(ratio[1]).epsilon(0.05));
        }
    }
}
