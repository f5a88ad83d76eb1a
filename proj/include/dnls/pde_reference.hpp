#pragma once

#include "dnls/grids.hpp"

namespace dnls {

struct PDEOptions {
    double cfl = 1.0;  // dt <= cfl * dx^2
};

struct PDEState {
    SpatialGrid grid;
    cvec u;
    double t = 0.0;
    double dt = 0.0;
};

PDEState make_pde_state(const SampledPotential& u0, double dt, const PDEOptions& opt = {});

// Integrating-factor RK4 for u_t = i u_xx - (|u|^2 u)_x with 2/3 dealiasing.
PDEState step_dnls(const PDEState& state, double t_end, const PDEOptions& opt = {});

struct ConservedQuantities {
    double I0 = 0.0, I1 = 0.0, I2 = 0.0;
};

ConservedQuantities conserved_quantities(const SpatialGrid& grid, const cvec& u);
ConservedQuantities conserved_quantities(const SampledPotential& u);
ConservedQuantities conserved_quantities(const PDEState& s);

// phi_w(x) exp(-(3i/4) int_{-inf}^x phi_w^2), phi_w = sqrt(4 w sech(2 w x))
SampledPotential soliton_profile(double omega, const SpatialGrid& grid, double edge_floor = default_edge_floor);

}  // namespace dnls
