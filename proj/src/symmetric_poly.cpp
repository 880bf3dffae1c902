#include "probelab/symmetric_poly.hpp"

#include <algorithm>
#include <stdexcept>

#include "probelab/rational.hpp"

namespace probelab::pta {

SymmetricPoly chebyshev_symmetric(int k, const mpq_class& M) {
    if (k < 1) throw std::invalid_argument("arity must be positive");
    if (M < 2) throw std::invalid_argument("need M >= 2");
    if (M > rat::pow2(4 * k)) throw std::length_error("M exceeds the 2^(4k) guard");

    SymmetricPoly P;
    P.k = k;
    if (k == 1) {
        // the line through (0, M) and (1, 1)
        P.degree = 1;
        P.q = {M, 1};
        P.b = {M, mpq_class(1) - M};
    } else {
        mpq_class a0 = rat::frac(k + 1, k - 1);
        // minimal D with T_D(a0) >= M; T grows monotonically since a0 > 1
        int D = 1;
        mpq_class prev = 1, cur = a0;
        while (cur < M) {
            mpq_class next = 2 * a0 * cur - prev;
            prev = cur;
            cur = next;
            D++;
        }
        P.degree = D;
        P.q.resize(size_t(k) + 1);
        for (int t = 0; t <= k; t++) {
            mpq_class at = rat::frac(k + 1 - 2 * t, k - 1);
            mpq_class u = 1, v = at;
            for (int i = 1; i < D; i++) {
                mpq_class w = 2 * at * v - u;
                u = v;
                v = w;
            }
            P.q[size_t(t)] = v;
        }
        int nb = std::min(D, k);
        P.b.resize(size_t(nb) + 1);
        for (int r = 0; r <= nb; r++) {
            mpq_class acc = 0;
            for (int j = 0; j <= r; j++) {
                mpq_class term = rat::binom(r, j) * P.q[size_t(j)];
                acc += ((r - j) % 2 == 0) ? term : -term;
            }
            P.b[size_t(r)] = acc;
        }
    }
    P.coeff_sum = 0;
    for (size_t r = 0; r < P.b.size(); r++) P.coeff_sum += rat::binom(k, int(r)) * abs(P.b[r]);
    return P;
}

} // namespace probelab::pta
