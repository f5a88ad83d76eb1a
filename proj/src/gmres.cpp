#include "dnls/gmres.hpp"

#include <cmath>

namespace dnls {

namespace {

double norm2(const cvec& v)
{
    double s = 0.0;
    for (const auto& a : v)
        s += std::norm(a);
    return std::sqrt(s);
}

cplx dot(const cvec& a, const cvec& b)
{
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

}  // namespace

GmresResult gmres(const LinearOperator& A, const cvec& b, cvec& x, double tol, int restart, int max_iter)
{
    const std::size_t n = b.size();
    if (x.size() != n)
        x.assign(n, 0.0);
    GmresResult res;
    cvec r(n), w(n);

    auto true_residual = [&]() {
        A(x, w);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = b[i] - w[i];
        return norm2(r);
    };

    double beta = true_residual();
    res.residual = beta;
    if (beta <= tol) {
        res.converged = true;
        return res;
    }

    const int m = restart;
    std::vector<cvec> V(m + 1, cvec(n));
    std::vector<std::vector<cplx>> Hm(m + 1, std::vector<cplx>(m, 0.0));
    std::vector<double> cs(m);
    std::vector<cplx> sn(m), g(m + 1);

    while (res.iterations < max_iter) {
        for (std::size_t i = 0; i < n; ++i)
            V[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), cplx(0.0));
        g[0] = beta;
        int k = 0;
        for (; k < m && res.iterations < max_iter; ++k) {
            ++res.iterations;
            A(V[k], w);
            for (int i = 0; i <= k; ++i) {
                const cplx h = dot(V[i], w);
                Hm[i][k] = h;
                for (std::size_t j = 0; j < n; ++j)
                    w[j] -= h * V[i][j];
            }
            const double hn = norm2(w);
            Hm[k + 1][k] = hn;
            if (hn > 0.0)
                for (std::size_t j = 0; j < n; ++j)
                    V[k + 1][j] = w[j] / hn;

            for (int i = 0; i < k; ++i) {
                const cplx h1 = Hm[i][k], h2 = Hm[i + 1][k];
                Hm[i][k] = cs[i] * h1 + sn[i] * h2;
                Hm[i + 1][k] = -std::conj(sn[i]) * h1 + cs[i] * h2;
            }
            const cplx h1 = Hm[k][k], h2 = Hm[k + 1][k];
            const double den = std::hypot(std::abs(h1), std::abs(h2));
            if (std::abs(h1) == 0.0) {
                cs[k] = 0.0;
                sn[k] = std::conj(h2) / std::abs(h2);
            } else {
                const cplx ph = h1 / std::abs(h1);
                cs[k] = std::abs(h1) / den;
                sn[k] = ph * std::conj(h2) / den;
            }
            Hm[k][k] = cs[k] * h1 + sn[k] * h2;
            Hm[k + 1][k] = 0.0;
            g[k + 1] = -std::conj(sn[k]) * g[k];
            g[k] = cs[k] * g[k];
            if (std::abs(g[k + 1]) <= 0.5 * tol || hn == 0.0) {
                ++k;
                break;
            }
        }
        std::vector<cplx> y(k);
        for (int i = k - 1; i >= 0; --i) {
            cplx s = g[i];
            for (int j = i + 1; j < k; ++j)
                s -= Hm[i][j] * y[j];
            y[i] = s / Hm[i][i];
        }
        for (int j = 0; j < k; ++j)
            for (std::size_t i = 0; i < n; ++i)
                x[i] += y[j] * V[j][i];
        beta = true_residual();
        res.residual = beta;
        if (beta <= tol) {
            res.converged = true;
            return res;
        }
    }
    return res;
}

}  // namespace dnls
