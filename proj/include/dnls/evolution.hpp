#pragma once

#include "dnls/direct_scattering.hpp"
#include "dnls/pde_reference.hpp"
#include "dnls/rh_inverse.hpp"

namespace dnls {

// 8 Z |t| dz; resolution of e^{4iz^2 t} is lost when it reaches pi * safety
double nyquist_value(const SpectralGrid& grid, double t);

struct EvolvedReflection {
    ReflectionPair base;
    double t = 0.0;
    ReflectionPair values;
    double nyquist = 0.0;
    bool nyquist_warning = false;
};

EvolvedReflection evolve_scattering(const ReflectionPair& r, double t, double nyquist_safety = 1.0);

struct PropagationOptions {
    ScatteringOptions scattering;
    HealthOptions health;
    RHOptions rh;
    double nyquist_safety = 1.0;
};

struct PropagatedState {
    double t = 0.0;
    ReconstructedPotential potential;
    ConservedQuantities conserved;
    double nyquist = 0.0;
    bool nyquist_warning = false;
};

struct PropagationResult {
    ScatteringData scattering;
    SpectralHealthReport health;
    ConservedQuantities initial;
    std::vector<PropagatedState> states;
};

// Direct transform once, exact phase evolution, reconstruction at each time.
PropagationResult ist_propagate(const SampledPotential& u0, const SpectralGrid& zgrid,
                                const std::vector<double>& times, const PropagationOptions& opt = {},
                                Exec ex = Exec::Parallel);

// refuses with HypothesisError when an eigenvalue or resonance is detected
void require_admissible(const SpectralHealthReport& h, double a_floor);

}  // namespace dnls
