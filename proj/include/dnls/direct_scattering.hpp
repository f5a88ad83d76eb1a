#pragma once

#include "dnls/grids.hpp"
#include "dnls/parallel.hpp"

#include <array>

namespace dnls {

using cvec2 = std::array<cplx, 2>;

enum class JostKind { m_minus, m_plus, n_minus, n_plus };

struct JostTrace {
    JostKind kind = JostKind::m_minus;
    cplx z = 0.0;
    std::vector<cvec2> values;  // at the x nodes
    cvec2 limit_value{};        // at the far end of the integration
    bool asymptotic_substituted = false;
};

// Fourth-order Magnus stepping of m' = (diag(0, 2iz) + Q1) m on a grid refined
// by `refinement` sub-steps per cell. Coefficients are sampled spectrally.
class JostIntegrator {
public:
    explicit JostIntegrator(const SampledPotential& u, int refinement = 8);

    const SampledPotential& potential() const { return u_; }
    int refinement() const { return R_; }
    double substep() const { return h_; }
    bool resolved(cplx z) const;

    // m_- (side < 0) integrated from -L, or m_+ (side > 0) from +L, to x = 0
    cvec2 at_origin(cplx z, int side) const;
    // full trace over all nodes; far end stored in `limit`
    std::vector<cvec2> trace(cplx z, int side, cvec2* limit) const;

private:
    cvec2 step(cplx z, int cell, int dir, const cvec2& m) const;

    SampledPotential u_;
    int R_;
    double h_;
    // Q1 entries at the two Gauss points of each sub-step
    cvec q11_[2], q12_[2], q21_[2];
};

JostTrace solve_jost(const SampledPotential& u, cplx z, JostKind kind, int refinement = 8);

struct AsymptoticData {
    cvec m_inf_minus, m_inf_plus, n_inf_minus, n_inf_plus;
    cvec q1_minus, q2_minus, q1_plus, q2_plus;
    cvec s1_minus, s2_minus, s1_plus, s2_plus;
};

AsymptoticData asymptotic_data(const SampledPotential& u);

struct ScatteringOptions {
    double a_floor = 1e-6;
    int refinement = 8;
};

struct ScatteringData {
    SpectralGrid grid;
    cvec a, bl, bs, r_plus, r_minus;
    cplx a_inf = 1.0;
    double c0_sq = 1.0;
};

ScatteringData scattering_coefficients(const SampledPotential& u, const SpectralGrid& zgrid,
                                       const ScatteringOptions& opt = {}, Exec ex = Exec::Parallel);

// a(z) for Im z >= 0, z != 0, from m_-(0;z) and m_+(0;conj z)
cplx a_off_axis(const JostIntegrator& jost, cplx z);

struct SmallNorm {
    bool satisfied = true;
    double lhs = 0.0;
    double margin = 0.5;
};

SmallNorm small_norm_criterion(const SampledPotential& u);

struct HealthOptions {
    double z_im = -1.0;  // rectangle height; negative means Z
    int samples_per_edge = 48;
    int max_depth = 12;
};

struct SpectralHealthReport {
    double min_abs_a_real_line = 1.0;
    int winding_number_upper_half = 0;
    bool small_norm_satisfied = true;
    double small_norm_lhs = 0.0;
    double c0_sq = 1.0;
    int contour_samples = 0;
};

SpectralHealthReport spectral_health(const SampledPotential& u, const ScatteringData& S,
                                     const HealthOptions& opt = {}, Exec ex = Exec::Parallel);
SpectralHealthReport spectral_health(const SampledPotential& u, const SpectralGrid& zgrid,
                                     const HealthOptions& opt = {}, Exec ex = Exec::Parallel);

double unitarity_report(const ScatteringData& S);

}  // namespace dnls
