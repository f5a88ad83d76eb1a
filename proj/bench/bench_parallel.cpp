#include "dnls/direct_scattering.hpp"
#include "dnls/rh_inverse.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>

using namespace dnls;

namespace {

double seconds(const std::function<void()>& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool identical(const cvec& a, const cvec& b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(cplx)) == 0;
}

}  // namespace

int main(int argc, char** argv)
{
    int Nx = 1024, Nz = 2048;
    if (argc > 2) {
        Nx = std::atoi(argv[1]);
        Nz = std::atoi(argv[2]);
    }
    auto [xg, zg] = make_grids(20.0, Nx, 40.0, Nz);
    const auto u = sample_potential([](double x) { return cplx(0.3 * std::exp(-x * x)); }, xg);
    std::printf("threads %d, Nx %d, Nz %d\n", thread_count(), Nx, Nz);

    ScatteringData Ss, Sp;
    const double ts = seconds([&] { Ss = scattering_coefficients(u, zg, {}, Exec::Serial); });
    const double tp = seconds([&] { Sp = scattering_coefficients(u, zg, {}, Exec::Parallel); });
    const bool same_s = identical(Ss.a, Sp.a) && identical(Ss.r_plus, Sp.r_plus) && identical(Ss.r_minus, Sp.r_minus);
    std::printf("scattering   serial %8.3f s  parallel %8.3f s  speedup %5.2f  identical %s\n", ts, tp, ts / tp,
                same_s ? "yes" : "NO");

    const auto rp = reflection_from(Ss);
    ReconstructedPotential Rs, Rp;
    const double rs = seconds([&] { Rs = reconstruct(rp, xg, Ss.a_inf, {}, Exec::Serial); });
    const double rpar = seconds([&] { Rp = reconstruct(rp, xg, Ss.a_inf, {}, Exec::Parallel); });
    const bool same_r = identical(Rs.values, Rp.values);
    std::printf("reconstruct  serial %8.3f s  parallel %8.3f s  speedup %5.2f  identical %s\n", rs, rpar, rs / rpar,
                same_r ? "yes" : "NO");
    return same_s && same_r ? 0 : 1;
}
