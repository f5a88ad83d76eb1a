#include "dnls/grids.hpp"

#include "dnls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dnls {

namespace {

bool is_pow2(int n)
{
    return n > 0 && (n & (n - 1)) == 0;
}

void check_count(int n, const char* what)
{
    if (n < 8 || !is_pow2(n)) {
        std::ostringstream os;
        os << what << " = " << n << " must be a power of two >= 8";
        throw PreconditionError(os.str());
    }
}

template <class T>
std::vector<T> cumulative(const std::vector<T>& f, double dx)
{
    const int n = static_cast<int>(f.size());
    auto at = [&](int j) { return (j >= 0 && j < n) ? f[j] : T{}; };
    std::vector<T> F(n);
    T acc{};
    F[0] = acc;
    for (int j = 0; j + 1 < n; ++j) {
        acc += dx / 24.0 * (-at(j - 1) + 13.0 * at(j) + 13.0 * at(j + 1) - at(j + 2));
        F[j + 1] = acc;
    }
    return F;
}

}  // namespace

rvec SpatialGrid::nodes() const
{
    rvec v(N);
    for (int j = 0; j < N; ++j)
        v[j] = x(j);
    return v;
}

rvec SpectralGrid::nodes() const
{
    rvec v(N);
    for (int k = 0; k < N; ++k)
        v[k] = z(k);
    return v;
}

SpatialGrid make_spatial_grid(double L, int Nx)
{
    if (!(L > 0.0) || !std::isfinite(L))
        throw PreconditionError("spatial half width L must be positive");
    check_count(Nx, "Nx");
    return SpatialGrid{L, Nx, 2.0 * L / Nx};
}

SpectralGrid make_spectral_grid(double Z, int Nz)
{
    if (!(Z > 0.0) || !std::isfinite(Z))
        throw PreconditionError("spectral half width Z must be positive");
    check_count(Nz, "Nz");
    return SpectralGrid{Z, Nz, 2.0 * Z / Nz};
}

std::pair<SpatialGrid, SpectralGrid> make_grids(double L, int Nx, double Z, int Nz)
{
    return {make_spatial_grid(L, Nx), make_spectral_grid(Z, Nz)};
}

SampledPotential potential_from_values(const SpatialGrid& grid, cvec values, double edge_floor)
{
    if (static_cast<int>(values.size()) != grid.N)
        throw PreconditionError("potential sample count does not match the grid");
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw PreconditionError("potential has non-finite samples");
    const double left = std::abs(values.front());
    const double right = std::abs(values.back());
    if (left >= edge_floor || right >= edge_floor) {
        std::ostringstream os;
        os << "edge decay violated: |u(-L)| = " << left << ", |u(L-dx)| = " << right
           << ", floor " << edge_floor;
        throw PreconditionError(os.str());
    }
    SampledPotential p;
    p.grid = grid;
    p.du = spectral_derivative(values, grid.dx);
    p.u = std::move(values);
    return p;
}

SampledPotential sample_potential(const Profile& profile, const SpatialGrid& grid, double edge_floor)
{
    cvec v(grid.N);
    for (int j = 0; j < grid.N; ++j)
        v[j] = profile(grid.x(j));
    return potential_from_values(grid, std::move(v), edge_floor);
}

namespace {

// integral of |f| sampled on a grid refined R times by trigonometric
// interpolation; |f| has kinks at sign changes where plain sums are O(dx^2)
double abs_integral(const cvec& f, double dx, int R, double* peak)
{
    double s = 0.0;
    for (int r = 0; r < R; ++r) {
        const cvec g = r == 0 ? f : spectral_shift(f, dx, r * dx / R);
        for (const auto& v : g) {
            s += std::abs(v);
            if (peak)
                *peak = std::max(*peak, std::abs(v));
        }
    }
    return s * dx / R;
}

}  // namespace

NormBundle norms(const SampledPotential& p)
{
    const auto& g = p.grid;
    NormBundle n;
    double s2 = 0, s3 = 0, sw = 0, swd = 0;
    for (int j = 0; j < g.N; ++j) {
        const double a = std::abs(p.u[j]);
        const double d = std::abs(p.du[j]);
        const double w = 1.0 + g.x(j) * g.x(j);
        s2 += a * a;
        s3 += a * a * a;
        sw += w * a * a;
        swd += w * d * d;
    }
    n.l1 = abs_integral(p.u, g.dx, 8, &n.linf);
    n.l2 = std::sqrt(s2 * g.dx);
    n.l3 = std::cbrt(s3 * g.dx);
    n.l2_weighted = std::sqrt(sw * g.dx);
    n.h11 = std::sqrt((sw + swd) * g.dx);
    n.dxl1 = abs_integral(p.du, g.dx, 8, nullptr);
    return n;
}

cvec spectral_derivative(const cvec& f, double dx)
{
    cvec F = f;
    fft(F);
    const auto k = wavenumbers(static_cast<int>(f.size()), dx);
    for (std::size_t j = 0; j < F.size(); ++j)
        F[j] *= cplx(0.0, k[j]);
    ifft(F);
    return F;
}

cvec spectral_shift(const cvec& f, double dx, double shift)
{
    cvec F = f;
    fft(F);
    const auto k = wavenumbers(static_cast<int>(f.size()), dx);
    for (std::size_t j = 0; j < F.size(); ++j)
        F[j] *= std::polar(1.0, k[j] * shift);
    ifft(F);
    return F;
}

double trapezoid(const rvec& f, double dx)
{
    double s = 0.0;
    for (double v : f)
        s += v;
    return s * dx;
}

cplx trapezoid(const cvec& f, double dx)
{
    cplx s = 0.0;
    for (const auto& v : f)
        s += v;
    return s * dx;
}

rvec cumulative_left(const rvec& f, double dx)
{
    return cumulative(f, dx);
}

cvec cumulative_left(const cvec& f, double dx)
{
    return cumulative(f, dx);
}

template <class T>
std::vector<T> cumulative_from_right(const std::vector<T>& f, double dx)
{
    std::vector<T> rev(f.rbegin(), f.rend());
    // include the last cell [x_{n-1}, x_{n-1}+dx] where the data vanish
    rev.insert(rev.begin(), T{});
    auto F = cumulative(rev, dx);
    std::vector<T> out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j)
        out[j] = F[f.size() - j];
    return out;
}

rvec cumulative_right(const rvec& f, double dx)
{
    return cumulative_from_right(f, dx);
}

cvec cumulative_right(const cvec& f, double dx)
{
    return cumulative_from_right(f, dx);
}

}  // namespace dnls
