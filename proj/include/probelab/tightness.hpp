#pragma once
#include <gmpxx.h>

#include <vector>

#include "probelab/signed_table.hpp"

namespace probelab::pta {

// Witness that the peak-to-average tradeoff cannot beat the degree bound:
// a univariate Q with Q(0) = 1 and degree <= r minimizing sum_i C(k,i)|Q(i)|,
// lifted to f(x) = Q(#plus(x)) * prod(x_i) / N on {-1,1}^k. The lift has unit
// l1 mass, peak |Q(0)|/N at the all-minus point, and every Fourier monomial
// of degree >= k - r, so conditioning on fewer than k - r coordinates sees
// zero mass.
struct CounterexampleCert {
    int k = 0, r = 0;
    std::vector<mpq_class> Q;  // values at t = 0..k, Q[0] = 1
    mpq_class normalizer;      // N = sum_i C(k,i)|Q(i)|, the LP optimum
    mpq_class epsilon_cert;    // 1 / N
    SignedTable f;             // table over {0,1}^k; bit 1 encodes +1
};

// requires 0 <= r < k and k <= 20
CounterexampleCert tight_counterexample(int k, int r);

} // namespace probelab::pta
