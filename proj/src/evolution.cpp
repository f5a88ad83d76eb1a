#include "dnls/evolution.hpp"

#include "dnls/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dnls {

double nyquist_value(const SpectralGrid& g, double t)
{
    return 8.0 * g.Z * std::abs(t) * g.dz;
}

EvolvedReflection evolve_scattering(const ReflectionPair& r, double t, double nyquist_safety)
{
    if (!std::isfinite(t))
        throw PreconditionError("evolution time must be finite");
    EvolvedReflection e;
    e.base = r;
    e.t = t;
    e.values = r;
    const auto& g = r.grid;
    for (int k = 0; k < g.N; ++k) {
        const double z = g.z(k);
        const cplx ph = std::polar(1.0, 4.0 * z * z * t);
        e.values.r_plus[k] = r.r_plus[k] * ph;
        e.values.r_minus[k] = r.r_minus[k] * ph;
    }
    e.nyquist = nyquist_value(g, t);
    e.nyquist_warning = e.nyquist >= std::numbers::pi * nyquist_safety;
    return e;
}

void require_admissible(const SpectralHealthReport& h, double a_floor)
{
    if (h.winding_number_upper_half > 0) {
        std::ostringstream os;
        os << "eigenvalue detected: winding number of a in the upper half plane is "
           << h.winding_number_upper_half;
        throw HypothesisError(os.str());
    }
    if (h.min_abs_a_real_line < a_floor) {
        std::ostringstream os;
        os << "resonance detected: min |a| on the real line is " << h.min_abs_a_real_line;
        throw HypothesisError(os.str());
    }
}

PropagationResult ist_propagate(const SampledPotential& u0, const SpectralGrid& zgrid,
                                const std::vector<double>& times, const PropagationOptions& opt, Exec ex)
{
    PropagationResult res;
    res.scattering = scattering_coefficients(u0, zgrid, opt.scattering, ex);
    res.health = spectral_health(u0, res.scattering, opt.health, ex);
    require_admissible(res.health, opt.scattering.a_floor);
    res.initial = conserved_quantities(u0);

    const auto r0 = reflection_from(res.scattering);
    for (double t : times) {
        const auto ev = evolve_scattering(r0, t, opt.nyquist_safety);
        PropagatedState st;
        st.t = t;
        st.nyquist = ev.nyquist;
        st.nyquist_warning = ev.nyquist_warning;
        st.potential = reconstruct(ev.values, u0.grid, res.scattering.a_inf, opt.rh, ex);
        st.conserved = conserved_quantities(u0.grid, st.potential.values);
        res.states.push_back(std::move(st));
    }
    return res;
}

}  // namespace dnls
