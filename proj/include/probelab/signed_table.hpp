#pragma once
#include <cstddef>
#include <vector>

namespace probelab {
class Rng;
}

namespace probelab::pta {

// Dense real-valued function on Sigma^k. Entry index packs the coordinates
// base-sigma with coordinate 0 least significant.
struct SignedTable {
    int sigma = 2;
    int k = 1;
    std::vector<double> v;

    SignedTable() = default;
    SignedTable(int sigma, int k);  // zero-filled; guards sigma^k <= 2^20

    size_t size() const { return v.size(); }
    size_t index(const std::vector<int>& z) const;
    double& at(const std::vector<int>& z) { return v[index(z)]; }
    double at(const std::vector<int>& z) const { return v[index(z)]; }
};

double l1_mass(const SignedTable& f);
double linf_peak(const SignedTable& f);
size_t peak_index(const SignedTable& f);  // first argmax of |f|
std::vector<int> unpack(const SignedTable& f, size_t idx);

// Collapse to a boolean table keyed by disagreement with z_star:
// h(x) = sum of f(z) over z with z_i = z*_i exactly where x_i = 0.
// In particular h(0) = f(z_star) and the l1 mass can only shrink.
SignedTable reduce_alphabet(const SignedTable& f, const std::vector<int>& z_star);

// sum over buckets y in Sigma^Y of |sum of f(z) over z restricting to y on Y|
double conditional_mass(const SignedTable& f, const std::vector<int>& Y);

// Seeded random boolean table on the 2^-30 dyadic grid: exact unit l1 mass,
// a planted peak of at least eps at the origin, random signs elsewhere.
SignedTable planted_unit_table(int k, double eps, Rng& rng);

} // namespace probelab::pta
