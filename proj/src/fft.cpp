#include "dnls/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace dnls {

namespace {

std::mutex plan_lock;
std::map<std::pair<int, int>, fftw_plan> plans;

fftw_plan get_plan(int n, int sign)
{
    std::lock_guard<std::mutex> g(plan_lock);
    auto key = std::make_pair(n, sign);
    auto it = plans.find(key);
    if (it != plans.end())
        return it->second;
    cvec tmp(n);
    auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
    fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(key, plan);
    return plan;
}

void run(cvec& a, int sign)
{
    if (a.empty())
        return;
    fftw_plan plan = get_plan(static_cast<int>(a.size()), sign);
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(plan, p, p);
}

}  // namespace

void fft(cvec& a)
{
    run(a, FFTW_FORWARD);
}

void ifft(cvec& a)
{
    run(a, FFTW_BACKWARD);
    const double s = 1.0 / static_cast<double>(a.size());
    for (auto& v : a)
        v *= s;
}

rvec wavenumbers(int n, double h)
{
    rvec k(n);
    const double base = 2.0 * std::numbers::pi / (n * h);
    for (int j = 0; j < n; ++j)
        k[j] = base * (j <= n / 2 - 1 ? j : j - n);
    // Nyquist mode carries no odd derivative information
    if (n % 2 == 0)
        k[n / 2] = 0.0;
    return k;
}

}  // namespace dnls
