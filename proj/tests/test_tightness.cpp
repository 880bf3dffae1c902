#include <doctest.h>

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "probelab/rational.hpp"
#include "probelab/signed_table.hpp"
#include "probelab/simplex.hpp"
#include "probelab/tightness.hpp"

using namespace probelab;
using namespace probelab::pta;

namespace {

mpq_class diff_row(int m, int j) {
    mpq_class c = rat::binom(m, j);
    return ((m - j) % 2 == 0) ? c : -c;
}

// independent optimum: every optimal vertex zeroes >= r of Q(1..k); enumerate
// all size-r zero sets, solve the vanishing-difference system for the rest,
// and take the best objective
mpq_class vertex_enum_optimum(int k, int r) {
    std::vector<int> zeros(static_cast<size_t>(r));
    for (int i = 0; i < r; i++) zeros[size_t(i)] = i + 1;
    mpq_class best;
    bool have = false;
    while (true) {
        std::vector<int> unknown;
        size_t zi = 0;
        for (int j = 1; j <= k; j++) {
            if (zi < zeros.size() && zeros[zi] == j)
                zi++;
            else
                unknown.push_back(j);
        }
        size_t n = unknown.size();
        std::vector<std::vector<mpq_class>> A(n, std::vector<mpq_class>(n + 1));
        for (int m = r + 1; m <= k; m++) {
            size_t row = size_t(m - r - 1);
            for (size_t u = 0; u < n; u++) A[row][u] = diff_row(m, unknown[u]);
            A[row][n] = -diff_row(m, 0);
        }
        bool singular = false;
        for (size_t col = 0; col < n && !singular; col++) {
            size_t p = col;
            while (p < n && A[p][col] == 0) p++;
            if (p == n) {
                singular = true;
                break;
            }
            std::swap(A[p], A[col]);
            mpq_class d = A[col][col];
            for (auto& x : A[col]) x /= d;
            for (size_t i = 0; i < n; i++) {
                if (i == col || A[i][col] == 0) continue;
                mpq_class f = A[i][col];
                for (size_t j = col; j <= n; j++) A[i][j] -= f * A[col][j];
            }
        }
        if (!singular) {
            mpq_class obj = rat::binom(k, 0);  // |Q(0)| = 1 term
            for (size_t u = 0; u < n; u++) obj += rat::binom(k, unknown[u]) * abs(A[u][n]);
            if (!have || obj < best) {
                best = obj;
                have = true;
            }
        }
        int i = r - 1;
        while (i >= 0 && zeros[size_t(i)] == k - (r - 1 - i)) i--;
        if (i < 0) break;
        zeros[size_t(i)]++;
        for (int j = i + 1; j < r; j++) zeros[size_t(j)] = zeros[size_t(j - 1)] + 1;
    }
    REQUIRE(have);
    return best;
}

} // namespace

TEST_CASE("simplex: pinned programs") {
    using lp::solve;
    // max x + y over the simplex: x + y + s = 1
    auto r1 = solve({{1, 1, 1}}, {1}, {-1, -1, 0});
    CHECK(r1.feasible);
    CHECK(r1.bounded);
    CHECK(r1.objective == -1);
    CHECK(r1.x[0] + r1.x[1] == 1);

    // x + y = -1 with x, y >= 0 has no solution
    auto r2 = solve({{1, 1}}, {-1}, {0, 0});
    CHECK_FALSE(r2.feasible);

    // min -x with x = y free to grow
    auto r3 = solve({{1, -1}}, {0}, {-1, 0});
    CHECK(r3.feasible);
    CHECK_FALSE(r3.bounded);

    // duplicated constraint row is dropped as redundant
    auto r4 = solve({{1, 1}, {1, 1}}, {1, 1}, {1, 0});
    CHECK(r4.feasible);
    CHECK(r4.objective == 0);
    CHECK(r4.x[1] == 1);

    // equality pin
    auto r5 = solve({{1, 0}}, {3}, {1, 0});
    CHECK(r5.feasible);
    CHECK(r5.objective == 3);
    CHECK(r5.x[0] == 3);

    CHECK_THROWS_AS(solve({{1}}, {1, 2}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(solve({{1, 2}}, {1}, {1}), std::invalid_argument);
}

TEST_CASE("simplex solutions satisfy their constraints exactly") {
    std::vector<std::vector<mpq_class>> A = {{2, 1, -1, 0}, {1, -1, 0, 1}};
    std::vector<mpq_class> b = {rat::frac(3, 2), rat::frac(1, 3)};
    std::vector<mpq_class> c = {1, 2, 0, rat::frac(1, 5)};
    auto r = lp::solve(A, b, c);
    REQUIRE(r.feasible);
    REQUIRE(r.bounded);
    for (size_t i = 0; i < A.size(); i++) {
        mpq_class acc = 0;
        for (size_t j = 0; j < A[i].size(); j++) acc += A[i][j] * r.x[j];
        CHECK(acc == b[i]);
    }
    for (const auto& x : r.x) CHECK(x >= 0);
    mpq_class obj = 0;
    for (size_t j = 0; j < c.size(); j++) obj += c[j] * r.x[j];
    CHECK(obj == r.objective);
}

TEST_CASE("normalizer matches the vertex-enumeration oracle") {
    for (int k = 2; k <= 7; k++) {
        for (int r = 0; r < k; r++) {
            CounterexampleCert cert = tight_counterexample(k, r);
            CHECK(cert.normalizer == vertex_enum_optimum(k, r));
        }
    }
}

TEST_CASE("frozen witness at arity 2") {
    CounterexampleCert cert = tight_counterexample(2, 1);
    CHECK(cert.normalizer == 2);
    CHECK(cert.epsilon_cert == rat::frac(1, 2));
    CHECK(cert.Q == std::vector<mpq_class>{1, 0, -1});
    REQUIRE(cert.f.size() == 4);
    CHECK(cert.f.v == std::vector<double>{0.5, 0.0, 0.0, -0.5});
    CHECK(conditional_mass(cert.f, {}) == 0.0);
    CHECK(l1_mass(cert.f) == 1.0);
}

TEST_CASE("frozen witnesses at arity 3, 4, 6") {
    CounterexampleCert c30 = tight_counterexample(3, 0);
    CHECK(c30.normalizer == 8);
    CHECK(c30.epsilon_cert == rat::frac(1, 8));
    CHECK(c30.Q == std::vector<mpq_class>{1, 1, 1, 1});

    CounterexampleCert c42 = tight_counterexample(4, 2);
    CHECK(c42.normalizer == rat::frac(8, 3));
    CHECK(c42.epsilon_cert == rat::frac(3, 8));
    CHECK(c42.Q == std::vector<mpq_class>{1, rat::frac(1, 3), 0, 0, rat::frac(1, 3)});

    CounterexampleCert c63 = tight_counterexample(6, 3);
    CHECK(c63.normalizer == 4);
    CHECK(c63.epsilon_cert == rat::frac(1, 4));
    CHECK(c63.Q == std::vector<mpq_class>{1, rat::frac(4, 15), 0, 0, rat::frac(1, 15), 0,
                                          rat::frac(-2, 5)});
}

TEST_CASE("certificate invariants across arities and degrees") {
    for (int k = 1; k <= 6; k++) {
        for (int r = 0; r < k; r++) {
            CounterexampleCert cert = tight_counterexample(k, r);
            CHECK(cert.Q[0] == 1);
            CHECK(cert.epsilon_cert * cert.normalizer == 1);

            // the reported Q really has degree <= r and really is optimal-normalized
            mpq_class obj = 0;
            for (int i = 0; i <= k; i++) obj += rat::binom(k, i) * abs(cert.Q[size_t(i)]);
            CHECK(obj == cert.normalizer);
            for (int m = r + 1; m <= k; m++) {
                mpq_class acc = 0;
                for (int j = 0; j <= m; j++) acc += diff_row(m, j) * cert.Q[size_t(j)];
                CHECK(acc == 0);
            }

            CHECK(std::fabs(l1_mass(cert.f) - 1.0) <= 1e-9);
            double eps = cert.epsilon_cert.get_d();
            CHECK(std::fabs(std::fabs(cert.f.v[0]) - eps) <= 1e-12);
            CHECK(linf_peak(cert.f) >= eps - 1e-12);

            // conditioning below the degree threshold sees nothing
            for (uint32_t m = 0; m < (1u << k); m++) {
                if (std::popcount(m) >= k - r) continue;
                std::vector<int> Y;
                for (int i = 0; i < k; i++)
                    if (m >> i & 1) Y.push_back(i);
                CHECK(conditional_mass(cert.f, Y) <= 1e-9);
            }

            // Fourier mass lives on monomials of degree >= k - r only
            double high = 0;
            for (uint32_t S = 0; S < (1u << k); S++) {
                double coef = 0;
                for (uint32_t x = 0; x < (1u << k); x++) {
                    int sgn = std::popcount(S & ~x) % 2 ? -1 : 1;
                    coef += cert.f.v[x] * sgn;
                }
                if (std::popcount(S) < k - r)
                    CHECK(std::fabs(coef) <= 1e-9 * double(1u << k));
                else
                    high += std::fabs(coef);
            }
            CHECK(high > 0);
        }
    }
}

TEST_CASE("witness construction validates its arguments") {
    CHECK_THROWS_AS(tight_counterexample(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(tight_counterexample(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(tight_counterexample(3, -1), std::invalid_argument);
    CHECK_THROWS_AS(tight_counterexample(21, 2), std::invalid_argument);
}
