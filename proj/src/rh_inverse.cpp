#include "dnls/rh_inverse.hpp"

#include "dnls/errors.hpp"
#include "dnls/gmres.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dnls {

namespace {

constexpr cplx I{0.0, 1.0};

double max_abs(const cvec& v)
{
    double m = 0.0;
    for (const auto& a : v)
        m = std::max(m, std::abs(a));
    return m;
}

void project(const HilbertPlan& plan, bool plus, const cvec& f, cplx* out)
{
    plan.hilbert_into(f.data(), out);
    const double s = plus ? 0.5 : -0.5;
    for (std::size_t k = 0; k < f.size(); ++k)
        out[k] = s * f[k] - 0.5 * I * out[k];
}

}  // namespace

ReflectionPair validate_reflection(const SpectralGrid& grid, cvec r_plus, cvec r_minus, double relation_tol,
                                   double decay_floor)
{
    if (static_cast<int>(r_plus.size()) != grid.N || static_cast<int>(r_minus.size()) != grid.N)
        throw PreconditionError("reflection data size does not match the spectral grid");
    double rel = 0.0;
    for (int k = 0; k < grid.N; ++k)
        rel = std::max(rel, std::abs(r_minus[k] - 4.0 * grid.z(k) * r_plus[k]));
    const double scale = std::max(1.0, max_abs(r_minus));
    if (!(rel <= relation_tol * scale)) {
        std::ostringstream os;
        os << "reflection relation r_- = 4 z r_+ violated: max defect " << rel;
        throw PreconditionError(os.str());
    }
    check_decay(r_plus, decay_floor, "r_plus");
    check_decay(r_minus, decay_floor, "r_minus");

    ReflectionPair r;
    r.grid = grid;
    r.c0_sq = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid.N; ++k)
        if (grid.z(k) < 0.0)
            r.c0_sq = std::min(r.c0_sq, 1.0 + std::real(std::conj(r_plus[k]) * r_minus[k]));
    if (!(r.c0_sq > 0.0)) {
        std::ostringstream os;
        os << "inadmissible reflection data: c0^2 = " << r.c0_sq << " <= 0";
        throw PreconditionError(os.str());
    }
    r.r_plus = std::move(r_plus);
    r.r_minus = std::move(r_minus);
    return r;
}

ReflectionPair reflection_from(const ScatteringData& S)
{
    return validate_reflection(S.grid, S.r_plus, S.r_minus);
}

DeltaFactor delta_factor(const ReflectionPair& r, const HilbertPlan& plan)
{
    const auto& g = r.grid;
    cvec lg(g.N);
    for (int k = 0; k < g.N; ++k) {
        const cplx v = 1.0 + std::conj(r.r_plus[k]) * r.r_minus[k];
        if (!(v.real() > 0.0)) {
            std::ostringstream os;
            os << "delta factorization: 1 + conj(r+) r- = " << v << " at z = " << g.z(k);
            throw PreconditionError(os.str());
        }
        lg[k] = std::log(v);
    }
    DeltaFactor d;
    d.grid = g;
    d.delta_plus = plan.plus(lg);
    d.delta_minus = plan.minus(lg);
    d.r_plus_delta.resize(g.N);
    d.r_minus_delta.resize(g.N);
    for (int k = 0; k < g.N; ++k) {
        d.delta_plus[k] = std::exp(d.delta_plus[k]);
        d.delta_minus[k] = std::exp(d.delta_minus[k]);
        const cplx f = std::conj(d.delta_plus[k]) * std::conj(d.delta_minus[k]);
        d.r_plus_delta[k] = f * r.r_plus[k];
        d.r_minus_delta[k] = f * r.r_minus[k];
    }
    return d;
}

DeltaFactor delta_factor(const ReflectionPair& r)
{
    HilbertPlan plan(r.grid);
    return delta_factor(r, plan);
}

RHSolver::RHSolver(const ReflectionPair& r, const RHOptions& opt)
    : r_(r), opt_(opt), plan_(std::make_shared<HilbertPlan>(r.grid))
{
    d_ = delta_factor(r_, *plan_);
    neumann_rate_pos_ = std::sqrt(max_abs(r_.r_plus) * max_abs(r_.r_minus));
    neumann_rate_neg_ = std::sqrt(max_abs(d_.r_plus_delta) * max_abs(d_.r_minus_delta));
}

PairSolve RHSolver::solve_pair(double x, bool negative, int component) const
{
    const auto& g = r_.grid;
    const int n = g.N;
    const cvec& rp = negative ? d_.r_plus_delta : r_.r_plus;
    const cvec& rm = negative ? d_.r_minus_delta : r_.r_minus;
    cvec c1(n), c2(n);
    for (int k = 0; k < n; ++k) {
        const cplx e = std::polar(1.0, 2.0 * g.z(k) * x);
        c1[k] = rm[k] * e;
        c2[k] = std::conj(rp[k]) * std::conj(e);
    }
    const bool a_plus = negative;  // projector acting on the first equation
    const cplx b1 = component == 0 ? 1.0 : 0.0;
    const cplx b2 = component == 1 ? 1.0 : 0.0;

    cvec tmp(n), proj(n);
    // out = [mu - Pa(c1 eta); eta - Pb(c2 mu)]
    auto apply = [&](const cplx* mu, const cplx* eta, cplx* out1, cplx* out2) {
        for (int k = 0; k < n; ++k)
            tmp[k] = c1[k] * eta[k];
        project(*plan_, a_plus, tmp, proj.data());
        for (int k = 0; k < n; ++k)
            out1[k] = mu[k] - proj[k];
        for (int k = 0; k < n; ++k)
            tmp[k] = c2[k] * mu[k];
        project(*plan_, !a_plus, tmp, proj.data());
        for (int k = 0; k < n; ++k)
            out2[k] = eta[k] - proj[k];
    };
    auto defect = [&](const cvec& mu, const cvec& eta) {
        cvec o1(n), o2(n);
        apply(mu.data(), eta.data(), o1.data(), o2.data());
        double d = 0.0;
        for (int k = 0; k < n; ++k)
            d = std::max({d, std::abs(o1[k] - b1), std::abs(o2[k] - b2)});
        return d;
    };

    PairSolve ps;
    ps.mu.assign(n, b1);
    ps.eta.assign(n, b2);
    const double rate = negative ? neumann_rate_neg_ : neumann_rate_pos_;
    if (rate < opt_.neumann_threshold) {
        ps.neumann = true;
        for (int it = 0; it < opt_.neumann_max_sweeps; ++it) {
            ++ps.iterations;
            double change = 0.0;
            for (int k = 0; k < n; ++k)
                tmp[k] = c1[k] * ps.eta[k];
            project(*plan_, a_plus, tmp, proj.data());
            for (int k = 0; k < n; ++k) {
                const cplx v = b1 + proj[k];
                change = std::max(change, std::abs(v - ps.mu[k]));
                ps.mu[k] = v;
            }
            for (int k = 0; k < n; ++k)
                tmp[k] = c2[k] * ps.mu[k];
            project(*plan_, !a_plus, tmp, proj.data());
            for (int k = 0; k < n; ++k) {
                const cplx v = b2 + proj[k];
                change = std::max(change, std::abs(v - ps.eta[k]));
                ps.eta[k] = v;
            }
            if (change < 0.1 * opt_.tol)
                break;
        }
        ps.residual = defect(ps.mu, ps.eta);
        if (ps.residual < opt_.tol)
            return ps;
        ps.neumann = false;
    }

    cvec b(2 * n), X(2 * n);
    for (int k = 0; k < n; ++k) {
        b[k] = b1;
        b[n + k] = b2;
        X[k] = ps.mu[k];
        X[n + k] = ps.eta[k];
    }
    LinearOperator A = [&](const cvec& in, cvec& out) {
        out.resize(2 * n);
        apply(in.data(), in.data() + n, out.data(), out.data() + n);
    };
    const auto gr = gmres(A, b, X, opt_.tol, opt_.restart, opt_.max_iter);
    ps.iterations += gr.iterations;
    std::copy(X.begin(), X.begin() + n, ps.mu.begin());
    std::copy(X.begin() + n, X.end(), ps.eta.begin());
    ps.residual = defect(ps.mu, ps.eta);
    if (!gr.converged) {
        std::ostringstream os;
        os << "RH Krylov solve stagnated at x = " << x << ": residual " << gr.residual << " after "
           << gr.iterations << " iterations (c0^2 = " << r_.c0_sq << ", Nz = " << n << ", dz = " << g.dz
           << ")";
        throw SolverError(os.str());
    }
    return ps;
}

RHSolution RHSolver::solve_positive(double x) const
{
    RHSolution s;
    s.x = x;
    for (int c = 0; c < 2; ++c) {
        auto ps = solve_pair(x, false, c);
        s.mu_minus[c] = std::move(ps.mu);
        s.eta_plus[c] = std::move(ps.eta);
        s.residual = std::max(s.residual, ps.residual);
        s.iterations += ps.iterations;
    }
    return s;
}

RHSolution RHSolver::solve_negative(double x) const
{
    RHSolution s;
    s.x = x;
    for (int c = 0; c < 2; ++c) {
        auto ps = solve_pair(x, true, c);
        s.mu_plus_delta[c] = std::move(ps.mu);
        s.eta_minus_delta[c] = std::move(ps.eta);
        s.residual = std::max(s.residual, ps.residual);
        s.iterations += ps.iterations;
    }
    return s;
}

namespace {

cplx moment(const SpectralGrid& g, const cvec& rp, const cvec& mu, double x)
{
    cplx s = 0.0;
    for (int k = 0; k < g.N; ++k)
        s += std::conj(rp[k]) * std::polar(1.0, -2.0 * g.z(k) * x) * mu[k];
    return 2.0 / (std::numbers::pi * I) * s * g.dz;
}

}  // namespace

cplx RHSolver::v_positive(double x, double* residual) const
{
    const auto ps = solve_pair(x, false, 0);
    if (residual)
        *residual = ps.residual;
    return moment(r_.grid, r_.r_plus, ps.mu, x);
}

cplx RHSolver::v_negative(double x, double* residual) const
{
    const auto ps = solve_pair(x, true, 0);
    if (residual)
        *residual = ps.residual;
    return moment(r_.grid, d_.r_plus_delta, ps.mu, x);
}

RHSolution solve_rh_positive(const ReflectionPair& r, double x, const RHOptions& opt)
{
    return RHSolver(r, opt).solve_positive(x);
}

RHSolution solve_rh_negative(const ReflectionPair& r, double x, const RHOptions& opt)
{
    return RHSolver(r, opt).solve_negative(x);
}

double jump_residual(const RHSolver& solver, const RHSolution& sol)
{
    const auto& r = solver.data();
    const auto& g = r.grid;
    const int n = g.N;
    const double x = sol.x;
    double worst = 0.0;
    cvec J1(n), J2(n), mup(n), etam(n), P(n);
    for (int c = 0; c < 2; ++c) {
        const auto& mum = sol.mu_minus[c];
        const auto& etap = sol.eta_plus[c];
        for (int k = 0; k < n; ++k) {
            const cplx e = std::polar(1.0, 2.0 * g.z(k) * x);
            const cplx rpb = std::conj(r.r_plus[k]);
            etam[k] = etap[k] - rpb * std::conj(e) * mum[k];
            mup[k] = mum[k] * (1.0 + rpb * r.r_minus[k]) + etam[k] * r.r_minus[k] * e;
            J1[k] = mum[k] * rpb * r.r_minus[k] + etam[k] * r.r_minus[k] * e;
            J2[k] = mum[k] * rpb * std::conj(e);
        }
        const cplx e1 = c == 0 ? 1.0 : 0.0;
        const cplx e2 = c == 1 ? 1.0 : 0.0;
        project(solver.plan(), true, J1, P.data());
        for (int k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(mup[k] - e1 - P[k]));
        project(solver.plan(), false, J1, P.data());
        for (int k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(mum[k] - e1 - P[k]));
        project(solver.plan(), true, J2, P.data());
        for (int k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(etap[k] - e2 - P[k]));
        project(solver.plan(), false, J2, P.data());
        for (int k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(etam[k] - e2 - P[k]));
    }
    return worst;
}

std::array<cplx, 4> jump_matrix_lambda(const ReflectionPair& r, int k, double x)
{
    const double z = r.grid.z(k);
    const cplx e = std::polar(1.0, 2.0 * z * x);
    if (z >= 0.0) {
        const cplx rl = z == 0.0 ? 0.0 : r.r_minus[k] / (2.0 * I * std::sqrt(z));
        return {std::norm(rl), std::conj(rl) * std::conj(e), rl * e, 0.0};
    }
    const cplx rl = -r.r_minus[k] / (2.0 * std::sqrt(-z));
    return {-std::norm(rl), -std::conj(rl) * std::conj(e), rl * e, 0.0};
}

double positivity_constant(const ReflectionPair& r, int k)
{
    if (r.grid.z(k) < 0.0)
        return r.c0_sq;
    double sup = 0.0;
    for (int j = 0; j < r.grid.N; ++j) {
        const double z = r.grid.z(j);
        if (z > 0.0)
            sup = std::max(sup, std::abs(r.r_minus[j]) / (2.0 * std::sqrt(z)));
    }
    return 1.0 / ((1.0 + sup) * (1.0 + sup));
}

double positivity_margin(const ReflectionPair& r, double x)
{
    double worst = std::numeric_limits<double>::infinity();
    double cpos = -1.0;
    for (int k = 0; k < r.grid.N; ++k) {
        const auto S = jump_matrix_lambda(r, k, x);
        // Hermitian part of I + S
        const double p = 1.0 + S[0].real();
        const double s = 1.0 + S[3].real();
        const cplx q = 0.5 * (S[1] + std::conj(S[2]));
        const double lo = 0.5 * (p + s) - std::sqrt(0.25 * (p - s) * (p - s) + std::norm(q));
        double c;
        if (r.grid.z(k) < 0.0) {
            c = r.c0_sq;
        } else {
            if (cpos < 0.0)
                cpos = positivity_constant(r, k);
            c = cpos;
        }
        worst = std::min(worst, lo - c);
    }
    return worst;
}

ReconstructedPotential reconstruct(const RHSolver& solver, const SpatialGrid& xg, std::optional<cplx> a_inf,
                                   Exec ex)
{
    const int N = xg.N;
    const double xov = std::min(2.0, xg.L / 8.0);
    int jr = N, jl = -1;
    for (int j = 0; j < N; ++j) {
        if (xg.x(j) >= -xov && jr == N)
            jr = j;
        if (xg.x(j) <= xov)
            jl = j;
    }
    const int jr0 = std::max(0, jr - 2);
    const int jl1 = std::min(N - 1, jl + 2);

    cvec vr(N, 0.0), vl(N, 0.0);
    rvec res_r(N, 0.0), res_l(N, 0.0);
    const int nr = N - jr0;
    const int nl = jl1 + 1;
    parallel_for(static_cast<std::size_t>(nr + nl), ex, [&](std::size_t i) {
        const int ii = static_cast<int>(i);
        if (ii < nr) {
            const int j = jr0 + ii;
            vr[j] = solver.v_positive(xg.x(j), &res_r[j]);
        } else {
            const int j = ii - nr;
            vl[j] = solver.v_negative(xg.x(j), &res_l[j]);
        }
    });

    ReconstructedPotential out;
    out.grid = xg;
    out.overlap_half_width = xov;
    for (int j = 0; j < N; ++j)
        out.max_residual = std::max({out.max_residual, res_r[j], res_l[j]});

    rvec fr(N, 0.0), fl(N, 0.0);
    for (int j = jr0; j < N; ++j)
        fr[j] = std::norm(vr[j]);
    for (int j = 0; j <= jl1; ++j)
        fl[j] = std::norm(vl[j]);
    const auto Ir = cumulative_right(fr, xg.dx);
    const auto Il = cumulative_left(fl, xg.dx);

    if (a_inf) {
        out.a_inf_used = *a_inf;
        out.a_inf_attached = true;
    } else {
        const int j0 = N / 2;
        out.a_inf_used = std::exp(-0.5 * I * (Ir[j0] + Il[j0]));
    }
    const cplx gauge = std::conj(out.a_inf_used) * std::conj(out.a_inf_used);

    out.values.assign(N, 0.0);
    for (int j = 0; j < N; ++j) {
        const double x = xg.x(j);
        const bool right = x >= -xov;
        const bool left = x <= xov;
        cplx ur = 0.0, ul = 0.0;
        if (right)
            ur = vr[j] * std::polar(1.0, Ir[j]);
        if (left)
            ul = vl[j] * gauge * std::polar(1.0, -Il[j]);
        if (right && left) {
            const double w = 0.5 * (1.0 - std::cos(std::numbers::pi * (x + xov) / (2.0 * xov)));
            out.values[j] = w * ur + (1.0 - w) * ul;
            out.gluing_defect = std::max(out.gluing_defect, std::abs(vr[j] - vl[j]));
        } else {
            out.values[j] = right ? ur : ul;
        }
    }
    if (!(out.gluing_defect <= solver.options().gluing_tol)) {
        std::ostringstream os;
        os << "reconstruction gluing defect " << out.gluing_defect << " exceeds " << solver.options().gluing_tol;
        throw SolverError(os.str());
    }
    return out;
}

ReconstructedPotential reconstruct(const ReflectionPair& r, const SpatialGrid& xgrid, std::optional<cplx> a_inf,
                                   const RHOptions& opt, Exec ex)
{
    RHSolver solver(r, opt);
    return reconstruct(solver, xgrid, a_inf, ex);
}

}  // namespace dnls
