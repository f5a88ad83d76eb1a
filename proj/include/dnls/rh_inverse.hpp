#pragma once

#include "dnls/cauchy.hpp"
#include "dnls/direct_scattering.hpp"
#include "dnls/parallel.hpp"

#include <array>
#include <memory>
#include <optional>

namespace dnls {

struct ReflectionPair {
    SpectralGrid grid;
    cvec r_plus, r_minus;
    double c0_sq = 1.0;
};

ReflectionPair validate_reflection(const SpectralGrid& grid, cvec r_plus, cvec r_minus,
                                   double relation_tol = 1e-10, double decay_floor = 1e-8);
ReflectionPair reflection_from(const ScatteringData& S);

struct RHOptions {
    double tol = 1e-10;
    int restart = 30;
    int max_iter = 1000;
    double neumann_threshold = 0.5;
    int neumann_max_sweeps = 60;
    double gluing_tol = 1e-5;
};

struct DeltaFactor {
    SpectralGrid grid;
    cvec delta_plus, delta_minus;
    cvec r_plus_delta, r_minus_delta;
};

DeltaFactor delta_factor(const ReflectionPair& r, const HilbertPlan& plan);
DeltaFactor delta_factor(const ReflectionPair& r);

struct RHSolution {
    double x = 0.0;
    // index 0 and 1 are the vector components, each sampled over z
    std::array<cvec, 2> mu_minus, eta_plus;
    std::array<cvec, 2> mu_plus_delta, eta_minus_delta;
    double residual = 0.0;
    int iterations = 0;
};

struct PairSolve {
    cvec mu, eta;
    double residual = 0.0;
    int iterations = 0;
    bool neumann = false;
};

class RHSolver {
public:
    explicit RHSolver(const ReflectionPair& r, const RHOptions& opt = {});

    const ReflectionPair& data() const { return r_; }
    const HilbertPlan& plan() const { return *plan_; }
    const DeltaFactor& delta() const { return d_; }
    const RHOptions& options() const { return opt_; }

    // mu = e_c + Pa(c1 eta), eta = e_c + Pb(c2 mu) for one vector component c
    PairSolve solve_pair(double x, bool negative, int component) const;

    RHSolution solve_positive(double x) const;
    RHSolution solve_negative(double x) const;

    // reconstruction moments (2/(pi i)) sum conj(r) e^{-2izx} mu^(1) dz
    cplx v_positive(double x, double* residual = nullptr) const;
    cplx v_negative(double x, double* residual = nullptr) const;

private:
    ReflectionPair r_;
    RHOptions opt_;
    std::shared_ptr<HilbertPlan> plan_;
    DeltaFactor d_;
    double neumann_rate_pos_ = 0.0, neumann_rate_neg_ = 0.0;
};

RHSolution solve_rh_positive(const ReflectionPair& r, double x, const RHOptions& opt = {});
RHSolution solve_rh_negative(const ReflectionPair& r, double x, const RHOptions& opt = {});

// max norm of M+ - I - P+(M- R) and M- - I - P-(M- R) on the grid
double jump_residual(const RHSolver& solver, const RHSolution& sol);

// min over z of [lowest eigenvalue of Re(I + S(x;lambda))] - C_-(z)
double positivity_margin(const ReflectionPair& r, double x);
double positivity_constant(const ReflectionPair& r, int k);
// lambda-plane jump S(x;lambda(z_k)) as row-major 2x2
std::array<cplx, 4> jump_matrix_lambda(const ReflectionPair& r, int k, double x);

struct ReconstructedPotential {
    SpatialGrid grid;
    cvec values;
    double gluing_defect = 0.0;
    double max_residual = 0.0;
    cplx a_inf_used = 1.0;
    bool a_inf_attached = false;
    double overlap_half_width = 0.0;
};

ReconstructedPotential reconstruct(const ReflectionPair& r, const SpatialGrid& xgrid,
                                   std::optional<cplx> a_inf = std::nullopt, const RHOptions& opt = {},
                                   Exec ex = Exec::Parallel);
ReconstructedPotential reconstruct(const RHSolver& solver, const SpatialGrid& xgrid,
                                   std::optional<cplx> a_inf = std::nullopt, Exec ex = Exec::Parallel);

}  // namespace dnls
