#pragma once

#include <complex>
#include <vector>

namespace dnls {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

// Unnormalized forward transform, in place.
void fft(cvec& a);
// Inverse transform scaled by 1/n, in place.
void ifft(cvec& a);

// Angular wavenumbers for n samples at spacing h, FFT ordering.
rvec wavenumbers(int n, double h);

}  // namespace dnls
