#pragma once

#include "dnls/grids.hpp"

namespace dnls {

// None: endpoint decay is enforced. Rational: boundary bands are fitted by
// 1/(s+i)^k and 1/(s-i)^k, k=1..3, projected exactly; the remainder must decay.
enum class TailModel { None, Rational };

struct CauchyOptions {
    double decay_floor = 1e-8;  // relative to max|f|
    TailModel tails = TailModel::None;
};

// Discrete principal-value convolution with the kernel -2/(pi m), m odd,
// on the z-grid. Immutable after construction.
class HilbertPlan {
public:
    explicit HilbertPlan(const SpectralGrid& grid);

    const SpectralGrid& grid() const { return grid_; }

    // raw operators, no decay checks
    cvec hilbert(const cvec& f) const;
    cvec plus(const cvec& f) const;
    cvec minus(const cvec& f) const;
    void hilbert_into(const cplx* f, cplx* out) const;

private:
    SpectralGrid grid_;
    cvec kernel_hat_;
};

// edge magnitude must stay below floor * scale; scale < 0 means max|f|
void check_decay(const cvec& f, double floor, const char* what, double scale = -1.0);

cvec hilbert(const HilbertPlan& plan, const cvec& f, const CauchyOptions& opt = {});
cvec plemelj_plus(const HilbertPlan& plan, const cvec& f, const CauchyOptions& opt = {});
cvec plemelj_minus(const HilbertPlan& plan, const cvec& f, const CauchyOptions& opt = {});

// (1/2 pi i) integral f(s)/(s-w) ds by the trapezoid rule, Im w != 0.
cplx cauchy_offline(const SpectralGrid& grid, const cvec& f, cplx w, const CauchyOptions& opt = {});

struct RationalTails {
    cplx c_plus[3]{};   // coefficients of 1/(s+i)^k
    cplx c_minus[3]{};  // coefficients of 1/(s-i)^k
    cvec remainder;

    cplx analytic_plus(cplx s) const;
    cplx analytic_minus(cplx s) const;
};

RationalTails fit_rational_tails(const SpectralGrid& grid, const cvec& f, int band);

}  // namespace dnls
