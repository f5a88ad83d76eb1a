#include "doctest.h"

#include "dnls/cauchy.hpp"
#include "dnls/errors.hpp"

#include <cmath>
#include <numbers>

using namespace dnls;

namespace {

constexpr cplx I{0.0, 1.0};

template <class F>
cvec sample(const SpectralGrid& g, F f)
{
    cvec v(g.N);
    for (int k = 0; k < g.N; ++k)
        v[k] = f(g.z(k));
    return v;
}

double maxdiff(const cvec& a, const cvec& b)
{
    double m = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double norm2(const cvec& f, double h)
{
    double s = 0;
    for (auto v : f)
        s += std::norm(v);
    return std::sqrt(s * h);
}

CauchyOptions rational()
{
    CauchyOptions o;
    o.tails = TailModel::Rational;
    return o;
}

}  // namespace

TEST_SUITE("cauchy")
{
    TEST_CASE("zero input")
    {
        const auto g = make_spectral_grid(10.0, 128);
        const HilbertPlan plan(g);
        const cvec z(g.N, 0.0);
        CHECK(maxdiff(hilbert(plan, z), z) == 0.0);
        CHECK(cauchy_offline(g, z, cplx(0.3, 1.0)) == cplx(0.0));
    }

    TEST_CASE("hilbert of a Lorentzian")
    {
        const auto g = make_spectral_grid(40.0, 2048);
        const HilbertPlan plan(g);
        const auto f = sample(g, [](double z) { return cplx(1.0 / (1 + z * z)); });
        // slow tails are refused without a tail model
        CHECK_THROWS_AS(hilbert(plan, f), PreconditionError);
        const auto h = hilbert(plan, f, rational());
        const auto ex = sample(g, [](double z) { return cplx(-z / (1 + z * z)); });
        CHECK(maxdiff(h, ex) < 1e-6);
    }

    TEST_CASE("projections of rational functions")
    {
        const auto g = make_spectral_grid(40.0, 2048);
        const HilbertPlan plan(g);
        const auto f = sample(g, [](double s) { return 1.0 / (s + I); });
        const auto pp = plemelj_plus(plan, f, rational());
        const auto pm = plemelj_minus(plan, f, rational());
        CHECK(maxdiff(pp, f) < 1e-6);
        CHECK(maxdiff(pm, cvec(g.N, 0.0)) < 1e-6);

        const auto l = sample(g, [](double s) { return cplx(1.0 / (1 + s * s)); });
        const auto pl = plemelj_plus(plan, l, rational());
        const auto ex = sample(g, [](double z) { return I / (2.0 * (z + I)); });
        CHECK(maxdiff(pl, ex) < 1e-6);
    }

    TEST_CASE("P+ - P- = I")
    {
        const auto g = make_spectral_grid(10.0, 512);
        const HilbertPlan plan(g);
        const auto f = sample(g, [](double z) { return std::exp(-z * z) * cplx(std::cos(3 * z), z); });
        const auto p = plan.plus(f), m = plan.minus(f);
        double e = 0;
        for (int k = 0; k < g.N; ++k)
            e = std::max(e, std::abs(p[k] - m[k] - f[k]));
        CHECK(e < 1e-15);
    }

    TEST_CASE("Fourier support")
    {
        // positive frequencies are boundary values from the upper half-plane
        const auto g = make_spectral_grid(20.0, 1024);
        const HilbertPlan plan(g);
        const auto f = sample(g, [](double s) { return std::exp(-s * s) * std::exp(8.0 * I * s); });
        const auto fb = sample(g, [](double s) { return std::exp(-s * s) * std::exp(-8.0 * I * s); });
        CHECK(maxdiff(plemelj_plus(plan, f), f) < 1e-6);
        CHECK(maxdiff(plemelj_minus(plan, f), cvec(g.N, 0.0)) < 1e-6);
        cvec nb = fb;
        for (auto& v : nb)
            v = -v;
        CHECK(maxdiff(plemelj_minus(plan, fb), nb) < 1e-6);
        CHECK(maxdiff(plemelj_plus(plan, fb), cvec(g.N, 0.0)) < 1e-6);
    }

    TEST_CASE("hilbert isometry")
    {
        const auto g = make_spectral_grid(20.0, 1024);
        const HilbertPlan plan(g);
        const auto f = sample(g, [](double s) { return cplx((-8 * s * s * s + 12 * s) * std::exp(-s * s)); });
        const auto h = hilbert(plan, f);
        CHECK(std::abs(norm2(h, g.dz) - norm2(f, g.dz)) < 1e-6 * norm2(f, g.dz));
    }

    TEST_CASE("off-axis Cauchy integral")
    {
        const auto g = make_spectral_grid(40.0, 2048);
        const auto f = sample(g, [](double s) { return 1.0 / (s + I); });
        CHECK(std::abs(cauchy_offline(g, f, 2.0 * I, rational()) - (-I / 3.0)) < 1e-6);
        // lower half-plane: C(f)(w) = 0 for f analytic above
        CHECK(std::abs(cauchy_offline(g, f, -2.0 * I, rational())) < 1e-6);
        CHECK_THROWS_AS(cauchy_offline(g, f, cplx(1.0, 0.0), rational()), PreconditionError);

        const auto gs = sample(g, [](double s) { return cplx(std::exp(-s * s)); });
        const cplx lim = -std::sqrt(std::numbers::pi) / (2 * std::numbers::pi * I);
        double prev = 1e9;
        for (double Y : {10.0, 20.0, 40.0}) {
            const cplx w = I * Y;
            const double d = std::abs(w * cauchy_offline(g, gs, w) - lim);
            CHECK(d < 1.0 / Y);
            CHECK(d < prev);
            prev = d;
        }
    }

    TEST_CASE("rational tail fit")
    {
        const auto g = make_spectral_grid(40.0, 2048);
        const auto f = sample(g, [](double s) {
            return 0.7 / (s + I) - 0.2 * I / ((s - I) * (s - I)) + std::exp(-s * s);
        });
        const auto t = fit_rational_tails(g, f, g.N / 8);
        CHECK(std::abs(t.c_plus[0] - 0.7) < 1e-6);
        CHECK(std::abs(t.c_minus[1] + 0.2 * I) < 1e-6);
        double r = 0;
        for (int k = 0; k < 8; ++k)
            r = std::max(r, std::abs(t.remainder[k]));
        CHECK(r < 1e-12);
    }
}
