#include "probelab/peak_to_average.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace probelab::pta {

PeakCert find_peak_subset(const SignedTable& h, double epsilon) {
    if (h.sigma != 2) throw std::invalid_argument("peak finder needs a boolean table");
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
    if (l1_mass(h) > 1.0 + 1e-12)
        throw std::invalid_argument("premise violated: l1 mass exceeds 1");
    if (std::fabs(h.v[0]) < epsilon)
        throw std::invalid_argument("premise violated: no epsilon peak at the origin");

    mpq_class M = 2 / mpq_class(epsilon);  // exact dyadic conversion
    SymmetricPoly P = chebyshev_symmetric(h.k, M);

    // superset sums S[Y] = sum over x >= Y of h(x)
    std::vector<double> S(h.v);
    for (int j = 0; j < h.k; j++)
        for (size_t x = 0; x < S.size(); x++)
            if (!(x >> j & 1)) S[x] += S[x | (size_t(1) << j)];

    int maxr = int(P.b.size()) - 1;
    bool found = false;
    size_t bestY = 0;
    double bestv = 0;
    for (size_t Y = 0; Y < S.size(); Y++) {
        int r = std::popcount(Y);
        if (r > maxr || P.b[size_t(r)] == 0) continue;
        double a = std::fabs(S[Y]);
        bool better;
        if (!found || a > bestv) {
            better = true;
        } else if (a < bestv) {
            better = false;
        } else {
            int rb = std::popcount(bestY);
            if (r != rb) {
                better = r < rb;
            } else {
                // lexicographic on sorted element lists: the set holding the
                // lowest differing coordinate comes first
                size_t d = Y ^ bestY;
                better = (Y & (d & (~d + 1))) != 0;
            }
        }
        if (better) {
            found = true;
            bestY = Y;
            bestv = a;
        }
    }

    PeakCert cert;
    for (int i = 0; i < h.k; i++)
        if (bestY >> i & 1) cert.Y.push_back(i);
    cert.mass = bestv;
    cert.bound = 1 / P.coeff_sum;
    cert.degree = P.degree;
    return cert;
}

} // namespace probelab::pta
