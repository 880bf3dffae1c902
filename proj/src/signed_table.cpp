#include "probelab/signed_table.hpp"

#include <cmath>
#include <stdexcept>

#include "probelab/rng.hpp"

namespace probelab::pta {

SignedTable::SignedTable(int sigma_, int k_) : sigma(sigma_), k(k_) {
    if (sigma < 2) throw std::invalid_argument("alphabet needs at least two symbols");
    if (k < 1) throw std::invalid_argument("arity must be positive");
    size_t n = 1;
    for (int i = 0; i < k; i++) {
        n *= size_t(sigma);
        if (n > (size_t(1) << 20)) throw std::length_error("table exceeds the 2^20 entry guard");
    }
    v.assign(n, 0.0);
}

size_t SignedTable::index(const std::vector<int>& z) const {
    if (int(z.size()) != k) throw std::invalid_argument("coordinate count mismatch");
    size_t idx = 0, base = 1;
    for (int i = 0; i < k; i++) {
        if (z[size_t(i)] < 0 || z[size_t(i)] >= sigma)
            throw std::out_of_range("coordinate outside the alphabet");
        idx += size_t(z[size_t(i)]) * base;
        base *= size_t(sigma);
    }
    return idx;
}

double l1_mass(const SignedTable& f) {
    double s = 0;
    for (double x : f.v) s += std::fabs(x);
    return s;
}

double linf_peak(const SignedTable& f) {
    double m = 0;
    for (double x : f.v) m = std::max(m, std::fabs(x));
    return m;
}

size_t peak_index(const SignedTable& f) {
    size_t best = 0;
    for (size_t i = 1; i < f.v.size(); i++)
        if (std::fabs(f.v[i]) > std::fabs(f.v[best])) best = i;
    return best;
}

std::vector<int> unpack(const SignedTable& f, size_t idx) {
    if (idx >= f.v.size()) throw std::out_of_range("entry index out of range");
    std::vector<int> z(size_t(f.k));
    for (int i = 0; i < f.k; i++) {
        z[size_t(i)] = int(idx % size_t(f.sigma));
        idx /= size_t(f.sigma);
    }
    return z;
}

SignedTable reduce_alphabet(const SignedTable& f, const std::vector<int>& z_star) {
    size_t star = f.index(z_star);  // validates length and digits
    SignedTable h(2, f.k);
    for (size_t idx = 0; idx < f.v.size(); idx++) {
        size_t rest = idx, srest = star, x = 0;
        for (int i = 0; i < f.k; i++) {
            if (rest % size_t(f.sigma) != srest % size_t(f.sigma)) x |= size_t(1) << i;
            rest /= size_t(f.sigma);
            srest /= size_t(f.sigma);
        }
        h.v[x] += f.v[idx];
    }
    return h;
}

double conditional_mass(const SignedTable& f, const std::vector<int>& Y) {
    size_t seen = 0;
    size_t buckets = 1;
    for (int c : Y) {
        if (c < 0 || c >= f.k) throw std::invalid_argument("conditioning coordinate out of range");
        if (seen >> c & 1) throw std::invalid_argument("duplicate conditioning coordinate");
        seen |= size_t(1) << c;
        buckets *= size_t(f.sigma);
    }
    std::vector<size_t> stride(size_t(f.k), 1);
    for (int i = 1; i < f.k; i++) stride[size_t(i)] = stride[size_t(i) - 1] * size_t(f.sigma);
    std::vector<double> sums(buckets, 0.0);
    for (size_t idx = 0; idx < f.v.size(); idx++) {
        size_t key = 0, base = 1;
        for (int c : Y) {
            key += ((idx / stride[size_t(c)]) % size_t(f.sigma)) * base;
            base *= size_t(f.sigma);
        }
        sums[key] += f.v[idx];
    }
    double mass = 0;
    for (double s : sums) mass += std::fabs(s);
    return mass;
}

SignedTable planted_unit_table(int k, double eps, Rng& rng) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("need 0 < eps <= 1");
    const int64_t total = int64_t(1) << 30;
    int64_t u0 = int64_t(std::ceil(eps * std::ldexp(1.0, 30)));
    size_t n = size_t(1) << k;
    std::vector<int64_t> units(n, 0);
    units[0] = u0;
    // split the remaining mass by random integer weights, exactly
    int64_t rest = total - u0;
    std::vector<uint64_t> wts(n - 1);
    uint64_t wsum = 0;
    for (auto& w : wts) {
        w = 1 + rng.below(1000);
        wsum += w;
    }
    int64_t acc = 0;
    for (size_t j = 0; j + 1 < n; j++) {
        int64_t share = int64_t(__int128(rest) * __int128(wts[j]) / __int128(wsum));
        units[j + 1] = share;
        acc += share;
    }
    units[1] += rest - acc;
    SignedTable h(2, k);
    for (size_t j = 0; j < n; j++) {
        double sign = j > 0 && rng.bit() ? -1.0 : 1.0;
        h.v[j] = sign * std::ldexp(double(units[j]), -30);
    }
    return h;
}

} // namespace probelab::pta
