#pragma once

#include "dnls/fft.hpp"

#include <functional>
#include <utility>

namespace dnls {

struct SpatialGrid {
    double L = 0.0;
    int N = 0;
    double dx = 0.0;

    double x(int j) const { return -L + j * dx; }
    rvec nodes() const;
};

struct SpectralGrid {
    double Z = 0.0;
    int N = 0;
    double dz = 0.0;

    double z(int k) const { return -Z + k * dz; }
    int zero_index() const { return N / 2; }
    rvec nodes() const;
};

SpatialGrid make_spatial_grid(double L, int Nx);
SpectralGrid make_spectral_grid(double Z, int Nz);
std::pair<SpatialGrid, SpectralGrid> make_grids(double L, int Nx, double Z, int Nz);

using Profile = std::function<cplx(double)>;

inline constexpr double default_edge_floor = 1e-10;

struct SampledPotential {
    SpatialGrid grid;
    cvec u;
    cvec du;

    cplx at_origin() const { return u[grid.N / 2]; }
};

SampledPotential sample_potential(const Profile& profile, const SpatialGrid& grid,
                                  double edge_floor = default_edge_floor);
SampledPotential potential_from_values(const SpatialGrid& grid, cvec values,
                                       double edge_floor = default_edge_floor);

struct NormBundle {
    double l1 = 0, l2 = 0, l3 = 0, linf = 0;
    double l2_weighted = 0;
    double h11 = 0;
    double dxl1 = 0;
};

NormBundle norms(const SampledPotential& u);

cvec spectral_derivative(const cvec& f, double dx);
// g_j = f(x_j + shift) by trigonometric interpolation
cvec spectral_shift(const cvec& f, double dx, double shift);

// Sum of samples times dx; spectrally accurate for decayed data.
double trapezoid(const rvec& f, double dx);
cplx trapezoid(const cvec& f, double dx);

// F_j = integral from x_0 to x_j, fourth-order four-point rule.
// Samples outside the array are treated as zero (decayed data).
rvec cumulative_left(const rvec& f, double dx);
cvec cumulative_left(const cvec& f, double dx);
// F_j = integral from x_j to x_0 + n dx (the right edge).
rvec cumulative_right(const rvec& f, double dx);
cvec cumulative_right(const cvec& f, double dx);

}  // namespace dnls
