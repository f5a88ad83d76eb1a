#include "dnls/cauchy.hpp"

#include "dnls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dnls {

namespace {

constexpr cplx I{0.0, 1.0};

int default_band(int n)
{
    return std::max(4, n / 8);
}

enum class Which { H, Plus, Minus };

cvec apply(const HilbertPlan& plan, const cvec& f, const CauchyOptions& opt, Which which)
{
    const auto& g = plan.grid();
    if (static_cast<int>(f.size()) != g.N)
        throw PreconditionError("grid function size does not match the spectral grid");

    auto finish = [&](const cvec& base, const cvec& h) {
        cvec out(base.size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            switch (which) {
            case Which::H: out[k] = h[k]; break;
            case Which::Plus: out[k] = 0.5 * base[k] - 0.5 * I * h[k]; break;
            case Which::Minus: out[k] = -0.5 * base[k] - 0.5 * I * h[k]; break;
            }
        }
        return out;
    };

    if (opt.tails == TailModel::None) {
        check_decay(f, opt.decay_floor, "grid function");
        return finish(f, plan.hilbert(f));
    }

    auto fit = fit_rational_tails(g, f, default_band(g.N));
    double scale = 0.0;
    for (const auto& v : f)
        scale = std::max(scale, std::abs(v));
    check_decay(fit.remainder, opt.decay_floor, "tail-model remainder", scale);
    auto out = finish(fit.remainder, plan.hilbert(fit.remainder));
    // H = i(P+ + P-); rational pieces have P+ b+ = b+, P- b+ = 0, P+ b- = 0, P- b- = -b-
    for (int k = 0; k < g.N; ++k) {
        const double s = g.z(k);
        const cplx bp = fit.analytic_plus(s);
        const cplx bm = fit.analytic_minus(s);
        switch (which) {
        case Which::H: out[k] += I * (bp - bm); break;
        case Which::Plus: out[k] += bp; break;
        case Which::Minus: out[k] += -bm; break;
        }
    }
    return out;
}

// Least squares via modified Gram-Schmidt QR on the 6 rational columns.
void least_squares(std::vector<cvec>& cols, cvec rhs, cplx* coef)
{
    // Gram-Schmidt, two passes
    const int m = static_cast<int>(cols.size());
    std::vector<std::vector<cplx>> R(m, std::vector<cplx>(m, 0.0));
    for (int j = 0; j < m; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < j; ++i) {
                cplx d = 0.0;
                for (std::size_t r = 0; r < rhs.size(); ++r)
                    d += std::conj(cols[i][r]) * cols[j][r];
                R[i][j] += d;
                for (std::size_t r = 0; r < rhs.size(); ++r)
                    cols[j][r] -= d * cols[i][r];
            }
        double nrm = 0.0;
        for (const auto& v : cols[j])
            nrm += std::norm(v);
        nrm = std::sqrt(nrm);
        R[j][j] = nrm;
        for (auto& v : cols[j])
            v /= nrm;
    }
    std::vector<cplx> qb(m);
    for (int i = 0; i < m; ++i) {
        cplx d = 0.0;
        for (std::size_t r = 0; r < rhs.size(); ++r)
            d += std::conj(cols[i][r]) * rhs[r];
        qb[i] = d;
    }
    for (int i = m - 1; i >= 0; --i) {
        cplx s = qb[i];
        for (int j = i + 1; j < m; ++j)
            s -= R[i][j] * coef[j];
        coef[i] = s / R[i][i];
    }
}

// s^a / (s^2+1)^3 = sum_k c_k (s - s0)^{-k} + (terms at the other pole);
// c_k is the Taylor coefficient of order 3-k of s^a (s - s1)^{-3} at s0.
void partial_fractions(int a, cplx s0, cplx s1, cplx* c)
{
    const double binom[6][3] = {{1, 0, 0}, {1, 1, 0}, {1, 2, 1}, {1, 3, 3}, {1, 4, 6}, {1, 5, 10}};
    cplx A[3], B[3];
    const cplx d = s0 - s1;
    const double neg3[3] = {1.0, -3.0, 6.0};
    for (int j = 0; j < 3; ++j) {
        A[j] = j <= a ? binom[a][j] * std::pow(s0, a - j) : cplx(0.0);
        B[j] = neg3[j] * std::pow(d, -3 - j);
    }
    for (int k = 1; k <= 3; ++k) {
        const int j = 3 - k;
        cplx t = 0.0;
        for (int i = 0; i <= j; ++i)
            t += A[i] * B[j - i];
        c[k - 1] = t;
    }
}

}  // namespace

HilbertPlan::HilbertPlan(const SpectralGrid& grid) : grid_(grid)
{
    const int n = grid.N;
    const int p = 2 * n;
    cvec ker(p, 0.0);
    // lag m stored at index m (m >= 0) and p + m (m < 0)
    for (int m = 1; m < n; ++m) {
        if (m % 2 == 0)
            continue;
        const double h = -2.0 / (std::numbers::pi * m);
        ker[m] = h;
        ker[p - m] = -h;
    }
    fft(ker);
    kernel_hat_ = std::move(ker);
}

void HilbertPlan::hilbert_into(const cplx* f, cplx* out) const
{
    const int n = grid_.N;
    cvec buf(2 * n, 0.0);
    std::copy(f, f + n, buf.begin());
    fft(buf);
    for (int k = 0; k < 2 * n; ++k)
        buf[k] *= kernel_hat_[k];
    ifft(buf);
    std::copy(buf.begin(), buf.begin() + n, out);
}

cvec HilbertPlan::hilbert(const cvec& f) const
{
    cvec out(f.size());
    hilbert_into(f.data(), out.data());
    return out;
}

cvec HilbertPlan::plus(const cvec& f) const
{
    cvec h = hilbert(f);
    for (std::size_t k = 0; k < f.size(); ++k)
        h[k] = 0.5 * f[k] - 0.5 * I * h[k];
    return h;
}

cvec HilbertPlan::minus(const cvec& f) const
{
    cvec h = hilbert(f);
    for (std::size_t k = 0; k < f.size(); ++k)
        h[k] = -0.5 * f[k] - 0.5 * I * h[k];
    return h;
}

void check_decay(const cvec& f, double floor, const char* what, double scale)
{
    double own = 0.0;
    for (const auto& v : f) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw PreconditionError(std::string(what) + " has non-finite values");
        own = std::max(own, std::abs(v));
    }
    if (scale < 0.0)
        scale = own;
    if (scale == 0.0)
        return;
    const double edge = std::max(std::abs(f.front()), std::abs(f.back()));
    if (edge > floor * scale) {
        std::ostringstream os;
        os << what << ": endpoint decay violated (edge " << edge << ", max " << scale
           << ", relative floor " << floor << ")";
        throw PreconditionError(os.str());
    }
}

cvec hilbert(const HilbertPlan& plan, const cvec& f, const CauchyOptions& opt)
{
    return apply(plan, f, opt, Which::H);
}

cvec plemelj_plus(const HilbertPlan& plan, const cvec& f, const CauchyOptions& opt)
{
    return apply(plan, f, opt, Which::Plus);
}

cvec plemelj_minus(const HilbertPlan& plan, const cvec& f, const CauchyOptions& opt)
{
    return apply(plan, f, opt, Which::Minus);
}

cplx RationalTails::analytic_plus(cplx s) const
{
    const cplx q = 1.0 / (s + I);
    return q * (c_plus[0] + q * (c_plus[1] + q * c_plus[2]));
}

cplx RationalTails::analytic_minus(cplx s) const
{
    const cplx q = 1.0 / (s - I);
    return q * (c_minus[0] + q * (c_minus[1] + q * c_minus[2]));
}

RationalTails fit_rational_tails(const SpectralGrid& grid, const cvec& f, int band)
{
    const int n = grid.N;
    band = std::clamp(band, 4, n / 2);
    std::vector<int> rows;
    for (int k = 0; k < band; ++k)
        rows.push_back(k);
    for (int k = n - band; k < n; ++k)
        rows.push_back(k);

    std::vector<cvec> cols(6, cvec(rows.size()));
    cvec rhs(rows.size());
    double scale[6] = {};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double s = grid.z(rows[r]);
        const double q = 1.0 / ((s * s + 1) * (s * s + 1) * (s * s + 1));
        for (int a = 0; a < 6; ++a) {
            cols[a][r] = std::pow(s, a) * q;
            scale[a] = std::max(scale[a], std::abs(cols[a][r]));
        }
        rhs[r] = f[rows[r]];
    }
    for (int a = 0; a < 6; ++a)
        for (auto& v : cols[a])
            v /= scale[a];
    cplx beta[6];
    least_squares(cols, rhs, beta);

    RationalTails t;
    for (int a = 0; a < 6; ++a) {
        cplx cp[3], cm[3];
        partial_fractions(a, -I, I, cp);
        partial_fractions(a, I, -I, cm);
        for (int k = 0; k < 3; ++k) {
            t.c_plus[k] += beta[a] / scale[a] * cp[k];
            t.c_minus[k] += beta[a] / scale[a] * cm[k];
        }
    }
    t.remainder.resize(n);
    for (int k = 0; k < n; ++k) {
        const double s = grid.z(k);
        t.remainder[k] = f[k] - t.analytic_plus(s) - t.analytic_minus(s);
    }
    return t;
}

cplx cauchy_offline(const SpectralGrid& grid, const cvec& f, cplx w, const CauchyOptions& opt)
{
    if (w.imag() == 0.0)
        throw PreconditionError("cauchy_offline: w must lie off the real line");
    if (static_cast<int>(f.size()) != grid.N)
        throw PreconditionError("grid function size does not match the spectral grid");

    const cvec* data = &f;
    RationalTails fit;
    cplx exact = 0.0;
    if (opt.tails == TailModel::Rational) {
        fit = fit_rational_tails(grid, f, default_band(grid.N));
        data = &fit.remainder;
        exact = w.imag() > 0 ? fit.analytic_plus(w) : -fit.analytic_minus(w);
    }
    double scale = 0.0;
    for (const auto& v : f)
        scale = std::max(scale, std::abs(v));
    check_decay(*data, opt.decay_floor, "grid function", scale);

    cplx s = 0.0;
    for (int k = 0; k < grid.N; ++k)
        s += (*data)[k] / (grid.z(k) - w);
    return exact + s * grid.dz / (2.0 * std::numbers::pi * I);
}

}  // namespace dnls
