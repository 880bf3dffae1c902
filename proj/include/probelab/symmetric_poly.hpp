#pragma once
#include <gmpxx.h>

#include <vector>

namespace probelab::pta {

// Symmetric polynomial q(t) on {0..k} that is huge at t=0 and bounded by 1 in
// absolute value on {1..k}: a Chebyshev polynomial composed with the affine
// map sending [1,k] onto [-1,1]. Stored in the Newton binomial basis,
// q(t) = sum_r b_r * C(t,r), so the multilinear lift Q(x) = q(sum x_i) has
// monomial coefficient b_|Y| on each subset Y.
struct SymmetricPoly {
    int k = 0;
    int degree = 0;              // D, minimal with q(0) >= M
    std::vector<mpq_class> q;    // values at t = 0..k
    std::vector<mpq_class> b;    // forward differences b_0..b_min(D,k)
    mpq_class coeff_sum;         // sum_r C(k,r)|b_r|
};

// requires k >= 1 and 2 <= M <= 2^(4k)
SymmetricPoly chebyshev_symmetric(int k, const mpq_class& M);

} // namespace probelab::pta
