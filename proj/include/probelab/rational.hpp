#pragma once
#include <gmpxx.h>

namespace probelab::rat {

inline mpq_class frac(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

inline mpq_class binom(int n, int r) {
    if (r < 0 || r > n) return 0;
    mpz_class z;
    mpz_bin_uiui(z.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
    return mpq_class(z);
}

inline mpq_class pow2(int e) {
    mpz_class z = 1;
    z <<= e;
    return mpq_class(z);
}

} // namespace probelab::rat
