#pragma once
#include <gmpxx.h>

#include <vector>

namespace probelab::lp {

struct Result {
    bool feasible = false;
    bool bounded = true;
    mpq_class objective;
    std::vector<mpq_class> x;
};

// minimize c.x subject to A x = b, x >= 0
// two-phase dense tableau simplex with Bland's rule, exact rationals
Result solve(std::vector<std::vector<mpq_class>> A, std::vector<mpq_class> b,
             const std::vector<mpq_class>& c);

} // namespace probelab::lp
