#include "probelab/tightness.hpp"

#include <bit>
#include <stdexcept>

#include "probelab/rational.hpp"
#include "probelab/simplex.hpp"

namespace probelab::pta {

namespace {

// exact Gaussian elimination; returns false when the system is singular
bool solve_square(std::vector<std::vector<mpq_class>> A, std::vector<mpq_class> rhs,
                  std::vector<mpq_class>& out) {
    size_t n = rhs.size();
    for (size_t col = 0; col < n; col++) {
        size_t p = col;
        while (p < n && A[p][col] == 0) p++;
        if (p == n) return false;
        std::swap(A[p], A[col]);
        std::swap(rhs[p], rhs[col]);
        mpq_class d = A[col][col];
        for (auto& x : A[col]) x /= d;
        rhs[col] /= d;
        for (size_t i = 0; i < n; i++) {
            if (i == col || A[i][col] == 0) continue;
            mpq_class f = A[i][col];
            for (size_t j = col; j < n; j++) A[i][j] -= f * A[col][j];
            rhs[i] -= f * rhs[col];
        }
    }
    out = rhs;
    return true;
}

// forward-difference row: sum_j (-1)^(m-j) C(m,j) Q_j = 0 pins degree <= m-1
mpq_class diff_coeff(int m, int j) {
    mpq_class c = rat::binom(m, j);
    return ((m - j) % 2 == 0) ? c : -c;
}

} // namespace

CounterexampleCert tight_counterexample(int k, int r) {
    if (k < 1 || k > 20) throw std::invalid_argument("arity must be in 1..20");
    if (r < 0 || r >= k) throw std::invalid_argument("target degree must satisfy 0 <= r < k");

    // split LP: variables p_0..p_k, n_0..n_k with Q_i = p_i - n_i.
    // rows: p_0 - n_0 = 1, then vanishing forward differences of order r+1..k.
    const size_t nv = 2 * size_t(k + 1);
    std::vector<std::vector<mpq_class>> A;
    std::vector<mpq_class> b;
    {
        std::vector<mpq_class> row(nv, 0);
        row[0] = 1;
        row[size_t(k + 1)] = -1;
        A.push_back(row);
        b.push_back(1);
    }
    for (int m = r + 1; m <= k; m++) {
        std::vector<mpq_class> row(nv, 0);
        for (int j = 0; j <= m; j++) {
            row[size_t(j)] = diff_coeff(m, j);
            row[size_t(k + 1 + j)] = -row[size_t(j)];
        }
        A.push_back(row);
        b.push_back(0);
    }
    std::vector<mpq_class> c(nv);
    for (int i = 0; i <= k; i++) c[size_t(i)] = c[size_t(k + 1 + i)] = rat::binom(k, i);

    lp::Result lpres = lp::solve(A, b, c);
    if (!lpres.feasible || !lpres.bounded) throw std::logic_error("optimum must exist");
    const mpq_class N = lpres.objective;

    // The optimal face can contain several vertices. Canonicalize: every
    // vertex zeroes at least r of Q_1..Q_k; take the lexicographically first
    // size-r zero set whose induced solution achieves the optimum.
    std::vector<mpq_class> Q(size_t(k) + 1);
    Q[0] = 1;
    for (int i = 1; i <= k; i++) Q[size_t(i)] = lpres.x[size_t(i)] - lpres.x[size_t(k + 1 + i)];
    std::vector<int> zeros(static_cast<size_t>(r));
    for (int i = 0; i < r; i++) zeros[size_t(i)] = i + 1;
    while (true) {
        std::vector<int> unknown;
        {
            size_t zi = 0;
            for (int j = 1; j <= k; j++) {
                if (zi < zeros.size() && zeros[zi] == j) {
                    zi++;
                    continue;
                }
                unknown.push_back(j);
            }
        }
        std::vector<std::vector<mpq_class>> S;
        std::vector<mpq_class> rhs;
        for (int m = r + 1; m <= k; m++) {
            std::vector<mpq_class> row;
            for (int j : unknown) row.push_back(diff_coeff(m, j));
            S.push_back(row);
            rhs.push_back(-diff_coeff(m, 0));  // move the Q_0 = 1 term across
        }
        std::vector<mpq_class> sol;
        if (solve_square(S, rhs, sol)) {
            std::vector<mpq_class> cand(size_t(k) + 1, 0);
            cand[0] = 1;
            for (size_t u = 0; u < unknown.size(); u++) cand[size_t(unknown[u])] = sol[u];
            mpq_class obj = 0;
            for (int i = 0; i <= k; i++) obj += rat::binom(k, i) * abs(cand[size_t(i)]);
            if (obj == N) {
                Q = cand;
                break;
            }
        }
        // next size-r combination of {1..k}; fall back to the raw LP vertex
        int i = r - 1;
        while (i >= 0 && zeros[size_t(i)] == k - (r - 1 - i)) i--;
        if (i < 0) break;
        zeros[size_t(i)]++;
        for (int j = i + 1; j < r; j++) zeros[size_t(j)] = zeros[size_t(j - 1)] + 1;
    }

    CounterexampleCert cert;
    cert.k = k;
    cert.r = r;
    cert.Q = Q;
    cert.normalizer = N;
    cert.epsilon_cert = 1 / N;
    cert.f = SignedTable(2, k);
    for (size_t x = 0; x < cert.f.size(); x++) {
        int plus = std::popcount(x);
        mpq_class val = Q[size_t(plus)] / N;
        if ((k - plus) % 2 != 0) val = -val;  // product of coordinates, bit 0 = -1
        cert.f.v[x] = val.get_d();
    }
    return cert;
}

} // namespace probelab::pta
