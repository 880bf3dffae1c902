#include "probelab/simplex.hpp"

#include <stdexcept>

namespace probelab::lp {

Result solve(std::vector<std::vector<mpq_class>> A, std::vector<mpq_class> b,
             const std::vector<mpq_class>& c) {
    const size_t m = A.size(), n = c.size();
    if (b.size() != m) throw std::invalid_argument("constraint/rhs size mismatch");
    for (const auto& row : A)
        if (row.size() != n) throw std::invalid_argument("constraint width mismatch");

    for (size_t i = 0; i < m; i++)
        if (b[i] < 0) {
            for (auto& x : A[i]) x = -x;
            b[i] = -b[i];
        }

    // phase-1 tableau [A | I | b] with artificial basis
    const size_t width = n + m;
    std::vector<std::vector<mpq_class>> T(m, std::vector<mpq_class>(width + 1));
    std::vector<size_t> basis(m);
    for (size_t i = 0; i < m; i++) {
        for (size_t j = 0; j < n; j++) T[i][j] = A[i][j];
        T[i][n + i] = 1;
        T[i][width] = b[i];
        basis[i] = n + i;
    }

    auto pivot = [&](size_t r, size_t col) {
        mpq_class p = T[r][col];
        for (auto& x : T[r]) x /= p;
        for (size_t i = 0; i < T.size(); i++) {
            if (i == r || T[i][col] == 0) continue;
            mpq_class f = T[i][col];
            for (size_t j = 0; j <= width; j++)
                if (T[r][j] != 0) T[i][j] -= f * T[r][j];
        }
        basis[r] = col;
    };

    // Bland's rule throughout; entering scan limited to the first ncols columns.
    // Returns false when the program is unbounded below.
    auto run = [&](const std::vector<mpq_class>& cost, size_t ncols) -> bool {
        while (true) {
            size_t enter = width;
            for (size_t j = 0; j < ncols && enter == width; j++) {
                mpq_class rj = cost[j];
                for (size_t i = 0; i < T.size(); i++)
                    if (cost[basis[i]] != 0) rj -= cost[basis[i]] * T[i][j];
                if (rj < 0) enter = j;
            }
            if (enter == width) return true;
            size_t leave = T.size();
            mpq_class best;
            for (size_t i = 0; i < T.size(); i++) {
                if (T[i][enter] <= 0) continue;
                mpq_class ratio = T[i][width] / T[i][enter];
                if (leave == T.size() || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == T.size()) return false;
            pivot(leave, enter);
        }
    };

    std::vector<mpq_class> cost1(width, 0);
    for (size_t j = n; j < width; j++) cost1[j] = 1;
    if (!run(cost1, width)) throw std::logic_error("phase 1 cannot be unbounded");

    mpq_class art = 0;
    for (size_t i = 0; i < T.size(); i++)
        if (basis[i] >= n) art += T[i][width];
    Result res;
    if (art > 0) return res;  // infeasible

    // drive zero-valued artificials out; all-zero rows are redundant constraints
    for (size_t i = 0; i < T.size();) {
        if (basis[i] < n) {
            i++;
            continue;
        }
        size_t j = 0;
        while (j < n && T[i][j] == 0) j++;
        if (j < n) {
            pivot(i, j);
            i++;
        } else {
            T.erase(T.begin() + long(i));
            basis.erase(basis.begin() + long(i));
        }
    }

    std::vector<mpq_class> cost2(width, 0);
    for (size_t j = 0; j < n; j++) cost2[j] = c[j];
    res.feasible = true;
    if (!run(cost2, n)) {
        res.bounded = false;
        return res;
    }
    res.x.assign(n, 0);
    for (size_t i = 0; i < T.size(); i++) res.x[basis[i]] = T[i][width];
    res.objective = 0;
    for (size_t j = 0; j < n; j++) res.objective += c[j] * res.x[j];
    return res;
}

} // namespace probelab::lp
