#pragma once

#include "dnls/fft.hpp"

#include <functional>

namespace dnls {

using LinearOperator = std::function<void(const cvec& in, cvec& out)>;

struct GmresResult {
    int iterations = 0;
    double residual = 0.0;  // final true residual, 2-norm
    bool converged = false;
};

// Restarted GMRES(m), modified Gram-Schmidt Arnoldi, Givens rotations.
// Stops when ||b - A x||_2 <= tol.
GmresResult gmres(const LinearOperator& A, const cvec& b, cvec& x, double tol, int restart, int max_iter);

}  // namespace dnls
