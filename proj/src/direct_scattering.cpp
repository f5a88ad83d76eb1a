#include "dnls/direct_scattering.hpp"

#include "dnls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace dnls {

namespace {

constexpr cplx I{0.0, 1.0};

struct M2 {
    cplx a, b, c, d;
};

M2 mul(const M2& x, const M2& y)
{
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

M2 expm2(const M2& m)
{
    const cplx t = 0.5 * (m.a + m.d);
    const cplx n11 = m.a - t;
    const cplx s2 = n11 * n11 + m.b * m.c;
    cplx ch, sh;
    if (std::abs(s2) < 1e-6) {
        ch = 1.0 + s2 * (0.5 + s2 * (1.0 / 24.0 + s2 / 720.0));
        sh = 1.0 + s2 * (1.0 / 6.0 + s2 * (1.0 / 120.0 + s2 / 5040.0));
    } else {
        const cplx s = std::sqrt(s2);
        const cplx e = std::exp(s);
        const cplx ei = 1.0 / e;
        ch = 0.5 * (e + ei);
        sh = 0.5 * (e - ei) / s;
    }
    const cplx et = std::exp(t);
    return {et * (ch + sh * n11), et * sh * m.b, et * sh * m.c, et * (ch - sh * n11)};
}

cvec2 conj_swap(const cvec2& m)
{
    return {std::conj(m[1]), std::conj(m[0])};
}

// (1/2i) int_{-inf}^0 |u|^2 and (1/2i) int_{+inf}^0 |u|^2 as phases
std::pair<cplx, cplx> origin_limits(const SampledPotential& u)
{
    const auto& g = u.grid;
    rvec a2(g.N);
    for (int j = 0; j < g.N; ++j)
        a2[j] = std::norm(u.u[j]);
    const auto left = cumulative_left(a2, g.dx);
    const auto right = cumulative_right(a2, g.dx);
    const int j0 = g.N / 2;
    return {std::exp(left[j0] / (2.0 * I)), std::exp(-right[j0] / (2.0 * I))};
}

}  // namespace

JostIntegrator::JostIntegrator(const SampledPotential& u, int refinement)
    : u_(u), R_(refinement)
{
    if (R_ < 1)
        throw PreconditionError("Jost refinement must be >= 1");
    const auto& g = u.grid;
    h_ = g.dx / R_;
    const int M = g.N * R_;
    const double c = std::sqrt(3.0) / 6.0;
    for (int gp = 0; gp < 2; ++gp) {
        q11_[gp].resize(M);
        q12_[gp].resize(M);
        q21_[gp].resize(M);
        const double off = (gp == 0 ? 0.5 - c : 0.5 + c) * h_;
        for (int r = 0; r < R_; ++r) {
            const auto us = spectral_shift(u.u, g.dx, r * h_ + off);
            const auto ds = spectral_shift(u.du, g.dx, r * h_ + off);
            for (int j = 0; j < g.N; ++j) {
                const cplx v = us[j];
                const cplx vx = ds[j];
                const double n2 = std::norm(v);
                const int s = j * R_ + r;
                q11_[gp][s] = n2 / (2.0 * I);
                q12_[gp][s] = v / (2.0 * I);
                q21_[gp][s] = (-2.0 * I * std::conj(vx) - std::conj(v) * n2) / (2.0 * I);
            }
        }
    }
}

bool JostIntegrator::resolved(cplx z) const
{
    return 2.0 * std::abs(z) * h_ <= std::numbers::pi;
}

cvec2 JostIntegrator::step(cplx z, int cell, int dir, const cvec2& m) const
{
    const cplx d = 2.0 * I * z;
    const M2 A0{q11_[0][cell], q12_[0][cell], q21_[0][cell], -q11_[0][cell] + d};
    const M2 A1{q11_[1][cell], q12_[1][cell], q21_[1][cell], -q11_[1][cell] + d};
    const M2& Aa = dir > 0 ? A0 : A1;
    const M2& Ab = dir > 0 ? A1 : A0;
    const double hh = dir > 0 ? h_ : -h_;
    const M2 p = mul(Ab, Aa);
    const M2 q = mul(Aa, Ab);
    const double k = std::sqrt(3.0) * hh * hh / 12.0;
    const double s = 0.5 * hh;
    const M2 om{s * (Aa.a + Ab.a) + k * (p.a - q.a), s * (Aa.b + Ab.b) + k * (p.b - q.b),
                s * (Aa.c + Ab.c) + k * (p.c - q.c), s * (Aa.d + Ab.d) + k * (p.d - q.d)};
    const M2 E = expm2(om);
    return {E.a * m[0] + E.b * m[1], E.c * m[0] + E.d * m[1]};
}

cvec2 JostIntegrator::at_origin(cplx z, int side) const
{
    if (!resolved(z)) {
        auto lim = origin_limits(u_);
        return {side < 0 ? lim.first : lim.second, 0.0};
    }
    const int M = u_.grid.N * R_;
    cvec2 m{1.0, 0.0};
    if (side < 0) {
        for (int s = 0; s < M / 2; ++s)
            m = step(z, s, +1, m);
    } else {
        for (int s = M - 1; s >= M / 2; --s)
            m = step(z, s, -1, m);
    }
    return m;
}

std::vector<cvec2> JostIntegrator::trace(cplx z, int side, cvec2* limit) const
{
    const int N = u_.grid.N;
    std::vector<cvec2> out(N);
    cvec2 m{1.0, 0.0};
    if (side < 0) {
        out[0] = m;
        for (int j = 0; j < N; ++j) {
            for (int r = 0; r < R_; ++r)
                m = step(z, j * R_ + r, +1, m);
            if (j + 1 < N)
                out[j + 1] = m;
        }
    } else {
        for (int j = N - 1; j >= 0; --j) {
            for (int r = R_ - 1; r >= 0; --r)
                m = step(z, j * R_ + r, -1, m);
            out[j] = m;
        }
    }
    if (limit)
        *limit = m;
    return out;
}

JostTrace solve_jost(const SampledPotential& u, cplx z, JostKind kind, int refinement)
{
    const bool upper = kind == JostKind::m_minus || kind == JostKind::n_plus;
    if (upper && z.imag() < 0.0)
        throw PreconditionError("Jost trace requested outside its analyticity half-plane (needs Im z >= 0)");
    if (!upper && z.imag() > 0.0)
        throw PreconditionError("Jost trace requested outside its analyticity half-plane (needs Im z <= 0)");

    const bool is_n = kind == JostKind::n_minus || kind == JostKind::n_plus;
    const int side = (kind == JostKind::m_minus || kind == JostKind::n_minus) ? -1 : +1;
    const cplx zm = is_n ? std::conj(z) : z;

    JostIntegrator jost(u, refinement);
    JostTrace t;
    t.kind = kind;
    t.z = z;
    if (jost.resolved(zm)) {
        t.values = jost.trace(zm, side, &t.limit_value);
    } else {
        t.asymptotic_substituted = true;
        const auto A = asymptotic_data(u);
        const auto& minf = side < 0 ? A.m_inf_minus : A.m_inf_plus;
        t.values.resize(u.grid.N);
        for (int j = 0; j < u.grid.N; ++j)
            t.values[j] = {minf[j], 0.0};
        const auto lim = origin_limits(u);
        const cplx far = side < 0 ? lim.first / lim.second : lim.second / lim.first;
        t.limit_value = {far, 0.0};
    }
    if (is_n) {
        for (auto& v : t.values)
            v = conj_swap(v);
        t.limit_value = conj_swap(t.limit_value);
    }
    return t;
}

AsymptoticData asymptotic_data(const SampledPotential& u)
{
    const auto& g = u.grid;
    const int N = g.N;
    rvec a2(N);
    cvec G(N), H(N);
    for (int j = 0; j < N; ++j) {
        const cplx v = u.u[j], vx = u.du[j];
        a2[j] = std::norm(v);
        G[j] = v * std::conj(vx) + a2[j] * a2[j] / (2.0 * I);
        H[j] = std::conj(v) * vx - a2[j] * a2[j] / (2.0 * I);
    }
    const auto Im = cumulative_left(a2, g.dx);
    const auto Ipr = cumulative_right(a2, g.dx);
    const auto Gm = cumulative_left(G, g.dx);
    const auto Gp = cumulative_right(G, g.dx);
    const auto Hm = cumulative_left(H, g.dx);
    const auto Hp = cumulative_right(H, g.dx);

    AsymptoticData A;
    for (cvec* v : {&A.m_inf_minus, &A.m_inf_plus, &A.n_inf_minus, &A.n_inf_plus, &A.q1_minus,
                    &A.q2_minus, &A.q1_plus, &A.q2_plus, &A.s1_minus, &A.s2_minus, &A.s1_plus,
                    &A.s2_plus})
        v->resize(N);

    for (int j = 0; j < N; ++j) {
        const cplx v = u.u[j], vx = u.du[j];
        const double Iminus = Im[j];
        const double Iplus = -Ipr[j];
        for (int side = 0; side < 2; ++side) {
            const double Iv = side == 0 ? Iminus : Iplus;
            const cplx intG = side == 0 ? Gm[j] : -Gp[j];
            const cplx intH = side == 0 ? Hm[j] : -Hp[j];
            const cplx minf = std::exp(Iv / (2.0 * I));
            const cplx ninf = std::conj(minf);
            const cplx q1 = -0.25 * minf * intG;
            const cplx q2 = (std::conj(vx) * minf + std::conj(v) * minf * a2[j] / (2.0 * I)) / (2.0 * I);
            const cplx s1 = -(vx * ninf - v * ninf * a2[j] / (2.0 * I)) / (2.0 * I);
            const cplx s2 = -0.25 * ninf * intH;
            if (side == 0) {
                A.m_inf_minus[j] = minf;
                A.n_inf_minus[j] = ninf;
                A.q1_minus[j] = q1;
                A.q2_minus[j] = q2;
                A.s1_minus[j] = s1;
                A.s2_minus[j] = s2;
            } else {
                A.m_inf_plus[j] = minf;
                A.n_inf_plus[j] = ninf;
                A.q1_plus[j] = q1;
                A.q2_plus[j] = q2;
                A.s1_plus[j] = s1;
                A.s2_plus[j] = s2;
            }
        }
    }
    return A;
}

cplx a_off_axis(const JostIntegrator& jost, cplx z)
{
    const cplx u0b = std::conj(jost.potential().at_origin());
    const cvec2 mm = jost.at_origin(z, -1);
    const cvec2 mp = jost.at_origin(std::conj(z), +1);
    const cplx wm = (u0b * mm[0] + mm[1]) / (2.0 * I * z);
    const cplx wp = (u0b * mp[0] + mp[1]) / (2.0 * I * std::conj(z));
    return mm[0] * std::conj(mp[0]) + z * wm * std::conj(wp);
}

namespace {

ScatteringData raw_coefficients(const SampledPotential& u, const SpectralGrid& zg, int refinement,
                                Exec ex)
{
    JostIntegrator jost(u, refinement);
    ScatteringData S;
    S.grid = zg;
    S.a.assign(zg.N, 0.0);
    S.bl.assign(zg.N, 0.0);
    S.bs.assign(zg.N, 0.0);
    const int k0 = zg.zero_index();
    const cplx u0b = std::conj(u.at_origin());

    parallel_for(zg.N, ex, [&](std::size_t k) {
        if (static_cast<int>(k) == k0)
            return;
        const double z = zg.z(static_cast<int>(k));
        const cvec2 mm = jost.at_origin(z, -1);
        const cvec2 mp = jost.at_origin(z, +1);
        const cplx wm = (u0b * mm[0] + mm[1]) / (2.0 * I * z);
        const cplx wp = (u0b * mp[0] + mp[1]) / (2.0 * I * z);
        S.a[k] = mm[0] * std::conj(mp[0]) + z * wm * std::conj(wp);
        S.bs[k] = mp[0] * wm - mm[0] * wp;
        S.bl[k] = mp[0] * mm[1] - mp[1] * mm[0];
    });

    // z = 0: m^(1) = 1 and w' = -conj(u) on both half-lines
    const auto& g = u.grid;
    cvec ub(g.N + 1, 0.0);
    for (int j = 0; j < g.N; ++j)
        ub[j] = std::conj(u.u[j]);
    const auto C = cumulative_left(ub, g.dx);
    const cplx left = C[g.N / 2];
    const cplx right = C[g.N] - left;
    S.a[k0] = 1.0;
    S.bl[k0] = 0.0;
    S.bs[k0] = -left - right;

    double l2sq = 0.0;
    for (const auto& v : u.u)
        l2sq += std::norm(v);
    l2sq *= g.dx;
    S.a_inf = std::exp(-0.5 * I * l2sq);
    return S;
}

void form_reflection(ScatteringData& S)
{
    const auto& zg = S.grid;
    S.r_plus.resize(zg.N);
    S.r_minus.resize(zg.N);
    S.c0_sq = std::numeric_limits<double>::infinity();
    for (int k = 0; k < zg.N; ++k) {
        S.r_plus[k] = -S.bs[k] / (2.0 * I * S.a[k]);
        S.r_minus[k] = S.bl[k] / S.a[k];
        if (zg.z(k) < 0.0)
            S.c0_sq = std::min(S.c0_sq, 1.0 + std::real(std::conj(S.r_plus[k]) * S.r_minus[k]));
    }
}

}  // namespace

ScatteringData scattering_coefficients(const SampledPotential& u, const SpectralGrid& zgrid,
                                       const ScatteringOptions& opt, Exec ex)
{
    auto S = raw_coefficients(u, zgrid, opt.refinement, ex);
    for (int k = 0; k < zgrid.N; ++k) {
        if (!(std::abs(S.a[k]) >= opt.a_floor)) {
            std::ostringstream os;
            os << "resonance detected: |a(z)| = " << std::abs(S.a[k]) << " at z = " << zgrid.z(k)
               << " (floor " << opt.a_floor << ")";
            throw HypothesisError(os.str());
        }
    }
    form_reflection(S);
    return S;
}

SmallNorm small_norm_criterion(const SampledPotential& u)
{
    const auto n = norms(u);
    SmallNorm s;
    s.lhs = 0.5 * n.l2 * n.l2 + 0.5 * std::sqrt(n.l1 * (2.0 * n.dxl1 + n.l3 * n.l3 * n.l3));
    s.margin = 0.5 - s.lhs;
    s.satisfied = s.lhs < 0.5;
    return s;
}

namespace {

struct Winding {
    const JostIntegrator& jost;
    int max_depth;
    int evaluations = 0;

    cplx eval(cplx z)
    {
        ++evaluations;
        const cplx a = a_off_axis(jost, z);
        if (!(std::abs(a) > 1e-300) || !std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw SolverError("winding: a vanishes on the contour; shift the rectangle");
        return a;
    }

    double increment(cplx p0, cplx a0, cplx p1, cplx a1, int depth)
    {
        const double d = std::arg(a1 / a0);
        if (std::abs(d) <= std::numbers::pi / 4)
            return d;
        if (depth >= max_depth) {
            if (std::abs(d) > std::numbers::pi / 2) {
                std::ostringstream os;
                os << "winding unresolved: argument jump " << d << " between z = " << p0 << " and " << p1
                   << "; refine the contour sampling";
                throw SolverError(os.str());
            }
            return d;
        }
        const cplx pm = 0.5 * (p0 + p1);
        const cplx am = eval(pm);
        return increment(p0, a0, pm, am, depth + 1) + increment(pm, am, p1, a1, depth + 1);
    }
};

}  // namespace

SpectralHealthReport spectral_health(const SampledPotential& u, const ScatteringData& S,
                                     const HealthOptions& opt, Exec ex)
{
    const auto& zg = S.grid;
    SpectralHealthReport rep;
    rep.min_abs_a_real_line = std::numeric_limits<double>::infinity();
    for (const auto& a : S.a)
        rep.min_abs_a_real_line = std::min(rep.min_abs_a_real_line, std::abs(a));
    rep.c0_sq = S.c0_sq;
    const auto sn = small_norm_criterion(u);
    rep.small_norm_satisfied = sn.satisfied;
    rep.small_norm_lhs = sn.lhs;

    JostIntegrator jost(u);
    Winding w{jost, opt.max_depth};
    const double Z = zg.Z;
    const double H = opt.z_im > 0 ? opt.z_im : Z;

    // counterclockwise: real grid, then right, top, left edges
    std::vector<cplx> pts;
    std::vector<cplx> vals;
    for (int k = 0; k < zg.N; ++k) {
        pts.push_back(zg.z(k));
        vals.push_back(S.a[k]);
    }
    const cplx corners[4] = {cplx(Z, 0), cplx(Z, H), cplx(-Z, H), cplx(-Z, 0)};
    const int n = std::max(4, opt.samples_per_edge);
    std::vector<cplx> edge_pts;
    for (int e = 0; e < 3; ++e)
        for (int i = 0; i < n; ++i)
            edge_pts.push_back(corners[e] + (corners[e + 1] - corners[e]) * (double(i) / n));
    std::vector<cplx> edge_vals(edge_pts.size());
    parallel_for(edge_pts.size(), ex, [&](std::size_t i) { edge_vals[i] = a_off_axis(jost, edge_pts[i]); });
    w.evaluations += static_cast<int>(edge_pts.size());
    for (std::size_t i = 0; i < edge_pts.size(); ++i) {
        if (!(std::abs(edge_vals[i]) > 1e-300))
            throw SolverError("winding: a vanishes on the contour; shift the rectangle");
        pts.push_back(edge_pts[i]);
        vals.push_back(edge_vals[i]);
    }

    double total = 0.0;
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = (i + 1) % m;
        total += w.increment(pts[i], vals[i], pts[j], vals[j], 0);
    }
    const double turns = total / (2.0 * std::numbers::pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 0.05) {
        std::ostringstream os;
        os << "winding unresolved: " << turns << " turns is not close to an integer";
        throw SolverError(os.str());
    }
    rep.winding_number_upper_half = static_cast<int>(rounded);
    rep.contour_samples = w.evaluations;
    return rep;
}

SpectralHealthReport spectral_health(const SampledPotential& u, const SpectralGrid& zgrid,
                                     const HealthOptions& opt, Exec ex)
{
    auto S = raw_coefficients(u, zgrid, 8, ex);
    for (auto& a : S.a)
        if (a == 0.0)
            a = std::numeric_limits<double>::min();
    form_reflection(S);
    return spectral_health(u, S, opt, ex);
}

double unitarity_report(const ScatteringData& S)
{
    double worst = 0.0;
    for (std::size_t k = 0; k < S.a.size(); ++k) {
        const double d = std::norm(S.a[k]) * (1.0 + std::real(std::conj(S.r_plus[k]) * S.r_minus[k])) - 1.0;
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

}  // namespace dnls
