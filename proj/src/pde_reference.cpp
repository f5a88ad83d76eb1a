#include "dnls/pde_reference.hpp"

#include "dnls/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dnls {

namespace {

constexpr cplx I{0.0, 1.0};

struct Rhs {
    rvec k;
    rvec mask;

    explicit Rhs(const SpatialGrid& g) : k(wavenumbers(g.N, g.dx)), mask(g.N)
    {
        // 2/3 rule on the mode index; the Nyquist mode is always removed
        for (int j = 0; j < g.N; ++j) {
            const int m = j <= g.N / 2 ? j : g.N - j;
            mask[j] = 3 * m < g.N ? 1.0 : 0.0;
        }
    }

    // -i k F(|u|^2 u), dealiased
    cvec operator()(const cvec& uh) const
    {
        cvec u = uh;
        ifft(u);
        for (auto& v : u)
            v *= std::norm(v);
        fft(u);
        for (std::size_t j = 0; j < u.size(); ++j)
            u[j] *= -I * k[j] * mask[j];
        return u;
    }
};

}  // namespace

PDEState make_pde_state(const SampledPotential& u0, double dt, const PDEOptions& opt)
{
    const double bound = opt.cfl * u0.grid.dx * u0.grid.dx;
    if (!(dt > 0.0) || dt > bound) {
        std::ostringstream os;
        os << "time step " << dt << " outside (0, " << bound << "] = (0, cfl*dx^2]";
        throw PreconditionError(os.str());
    }
    return PDEState{u0.grid, u0.u, 0.0, dt};
}

PDEState step_dnls(const PDEState& state, double t_end, const PDEOptions& opt)
{
    const auto& g = state.grid;
    if (t_end < state.t)
        throw PreconditionError("step_dnls: t_end precedes the state time");
    if (!(state.dt > 0.0) || state.dt > opt.cfl * g.dx * g.dx * (1.0 + 1e-12))
        throw PreconditionError("step_dnls: time step violates dt <= cfl*dx^2");

    PDEState out = state;
    const double span = t_end - state.t;
    if (span == 0.0)
        return out;
    const long steps = static_cast<long>(std::ceil(span / state.dt - 1e-9));
    const double h = span / steps;

    Rhs N(g);
    const int n = g.N;
    cvec E(n), E2(n);
    for (int j = 0; j < n; ++j) {
        E[j] = std::polar(1.0, -N.k[j] * N.k[j] * h);
        E2[j] = std::polar(1.0, -N.k[j] * N.k[j] * h * 0.5);
    }
    // Nyquist mode is carried with its true wavenumber in the linear phase
    if (n % 2 == 0) {
        const double kn = std::numbers::pi / g.dx;
        E[n / 2] = std::polar(1.0, -kn * kn * h);
        E2[n / 2] = std::polar(1.0, -kn * kn * h * 0.5);
    }

    cvec uh = state.u;
    fft(uh);
    cvec tmp(n);
    for (long s = 0; s < steps; ++s) {
        const cvec k1 = N(uh);
        for (int j = 0; j < n; ++j)
            tmp[j] = E2[j] * (uh[j] + 0.5 * h * k1[j]);
        const cvec k2 = N(tmp);
        for (int j = 0; j < n; ++j)
            tmp[j] = E2[j] * uh[j] + 0.5 * h * k2[j];
        const cvec k3 = N(tmp);
        for (int j = 0; j < n; ++j)
            tmp[j] = E[j] * uh[j] + h * E2[j] * k3[j];
        const cvec k4 = N(tmp);
        bool finite = true;
        for (int j = 0; j < n; ++j) {
            uh[j] = E[j] * uh[j] + h / 6.0 * (E[j] * k1[j] + 2.0 * E2[j] * (k2[j] + k3[j]) + k4[j]);
            finite = finite && std::isfinite(uh[j].real()) && std::isfinite(uh[j].imag());
        }
        if (!finite) {
            std::ostringstream os;
            os << "DNLS solver instability at step " << s + 1 << " (t = " << state.t + (s + 1) * h << ")";
            throw SolverError(os.str());
        }
    }
    ifft(uh);
    out.u = std::move(uh);
    out.t = t_end;
    return out;
}

ConservedQuantities conserved_quantities(const SpatialGrid& g, const cvec& u)
{
    const auto ux = spectral_derivative(u, g.dx);
    ConservedQuantities c;
    for (int j = 0; j < g.N; ++j) {
        const double a2 = std::norm(u[j]);
        const double im = std::imag(std::conj(u[j]) * ux[j]);
        c.I0 += a2;
        c.I1 += -2.0 * im - a2 * a2;
        c.I2 += std::norm(ux[j]) + 1.5 * a2 * im + 0.5 * a2 * a2 * a2;
    }
    c.I0 *= g.dx;
    c.I1 *= g.dx;
    c.I2 *= g.dx;
    return c;
}

ConservedQuantities conserved_quantities(const SampledPotential& u)
{
    return conserved_quantities(u.grid, u.u);
}

ConservedQuantities conserved_quantities(const PDEState& s)
{
    return conserved_quantities(s.grid, s.u);
}

SampledPotential soliton_profile(double omega, const SpatialGrid& g, double edge_floor)
{
    if (!(omega > 0.0))
        throw PreconditionError("soliton frequency must be positive");
    rvec phi2(g.N);
    for (int j = 0; j < g.N; ++j)
        phi2[j] = 4.0 * omega / std::cosh(2.0 * omega * g.x(j));
    const auto F = cumulative_left(phi2, g.dx);
    cvec u(g.N);
    for (int j = 0; j < g.N; ++j)
        u[j] = std::sqrt(phi2[j]) * std::polar(1.0, -0.75 * F[j]);
    return potential_from_values(g, std::move(u), edge_floor);
}

}  // namespace dnls
