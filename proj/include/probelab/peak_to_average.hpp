#pragma once
#include <gmpxx.h>

#include <vector>

#include "probelab/signed_table.hpp"
#include "probelab/symmetric_poly.hpp"

namespace probelab::pta {

struct PeakCert {
    std::vector<int> Y;  // sorted coordinate set
    double mass = 0;     // |S_Y| with S_Y = sum of h(x) over x with x_i = 1 for all i in Y
    mpq_class bound;     // certified lower bound 1 / sum_r C(k,r)|b_r|
    int degree = 0;      // degree of the polynomial driving the scan
};

// Given a boolean table with l1 mass <= 1 and |h(0)| >= epsilon, produce a
// coordinate subset whose top superset-sum is at least the certified bound.
// Scans every monomial of the degree-D polynomial built for M = 2/epsilon;
// ties break toward smaller |Y|, then lexicographically smaller sets.
PeakCert find_peak_subset(const SignedTable& h, double epsilon);

} // namespace probelab::pta
