#include "probelab/gf2.hpp"

#include <stdexcept>
#include <string>

namespace probelab::gf2 {

namespace {

const uint32_t kModuli[17] = {
    0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,    0x83,  0x11B,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003,  0x1100B,
};

int poly_degree(uint64_t p) {
    int d = -1;
    while (p) {
        d++;
        p >>= 1;
    }
    return d;
}

uint64_t poly_mod(uint64_t a, uint64_t m) {
    int dm = poly_degree(m);
    for (int da = poly_degree(a); da >= dm; da = poly_degree(a)) a ^= m << (da - dm);
    return a;
}

uint64_t poly_gcd(uint64_t a, uint64_t b) {
    while (b) {
        uint64_t r = poly_mod(a, b);
        a = b;
        b = r;
    }
    return a;
}

uint64_t clmul64(uint64_t a, uint64_t b) {
    uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return r;
}

// x^(2^k) modulo m, by k squarings
uint64_t xpow2k(int k, uint64_t m) {
    uint64_t r = poly_mod(2, m);
    for (int i = 0; i < k; i++) r = poly_mod(clmul64(r, r), m);
    return r;
}

} // namespace

uint32_t modulus(int d) {
    if (d < 1 || d > 16) throw std::invalid_argument("field degree must be 1..16");
    return kModuli[d];
}

bool is_irreducible(uint32_t poly, int degree) {
    if (degree < 1 || poly_degree(poly) != degree) return false;
    if (xpow2k(degree, poly) != poly_mod(2, poly)) return false;
    for (int q = 2; q <= degree; q++) {
        if (degree % q != 0) continue;
        bool prime = true;
        for (int f = 2; f * f <= q; f++)
            if (q % f == 0) prime = false;
        if (!prime) continue;
        // gcd(x^(2^(d/q)) - x, poly) must be trivial
        uint64_t u = xpow2k(degree / q, poly) ^ poly_mod(2, poly);
        if (u == 0 || poly_gcd(u, poly) != 1) return false;
    }
    return true;
}

uint64_t clmul(uint32_t a, uint32_t b) { return clmul64(a, b); }

uint32_t reduce(uint64_t v, int d) {
    uint64_t m = modulus(d);
    return uint32_t(poly_mod(v, m));
}

FieldElem fe(int d, uint32_t bits) {
    modulus(d);  // validates d
    if (d < 32 && (bits >> d) != 0)
        throw std::invalid_argument("element does not fit " + std::to_string(d) + " bits");
    return {d, bits};
}

static void same_field(FieldElem a, FieldElem b) {
    if (a.d != b.d) throw std::invalid_argument("mismatched field degrees");
}

FieldElem gf_add(FieldElem a, FieldElem b) {
    same_field(a, b);
    return {a.d, a.bits ^ b.bits};
}

FieldElem gf_mul(FieldElem a, FieldElem b) {
    same_field(a, b);
    return {a.d, reduce(clmul(a.bits, b.bits), a.d)};
}

FieldElem gf_pow(FieldElem a, uint64_t e) {
    FieldElem r = fe(a.d, 1), base = a;
    while (e) {
        if (e & 1) r = gf_mul(r, base);
        base = gf_mul(base, base);
        e >>= 1;
    }
    return r;
}

int lsb(FieldElem a) { return int(a.bits & 1); }

PolyState::PolyState(int d, int n, bool regime_guard) : d_(d), n_(n) {
    modulus(d);
    if (n < 0) throw std::invalid_argument("degree bound must be non-negative");
    if (regime_guard) {
        // n <= 2^(d/4) with integer arithmetic: n^4 <= 2^d
        uint64_t n4 = n > 65536 ? ~uint64_t(0) : uint64_t(n) * n * n * n;
        if (n4 > (uint64_t(1) << d))
            throw std::length_error("degree bound exceeds the 2^(d/4) regime guard");
    }
    a_.assign(size_t(n) + 1, FieldElem{d, 0});
}

void PolyState::update(int i, FieldElem b) {
    if (i < 0 || i > n_) throw std::out_of_range("coefficient index out of range");
    if (b.d != d_) throw std::invalid_argument("mismatched field degrees");
    a_[size_t(i)].bits ^= b.bits;
}

FieldElem PolyState::eval(FieldElem y) const {
    if (y.d != d_) throw std::invalid_argument("mismatched field degrees");
    FieldElem acc{d_, 0};
    for (int i = n_; i >= 0; i--) acc = gf_add(gf_mul(acc, y), a_[size_t(i)]);
    return acc;
}

KwiseReport kwise_independence_oracle(int d, int h, int deg) {
    modulus(d);
    if (h < 1 || deg < 0) throw std::invalid_argument("need h >= 1, deg >= 0");
    int coeff_bits = d * (deg + 1);
    if (coeff_bits > 20)
        throw std::length_error("polynomial space 2^" + std::to_string(coeff_bits) +
                                " exceeds the 2^20 exhaustive guard");
    uint64_t npolys = uint64_t(1) << coeff_bits;
    uint64_t npoints = uint64_t(1) << d;
    if (uint64_t(d) * uint64_t(h) > 20)
        throw std::length_error("value-tuple space exceeds the 2^20 guard");

    // subsets(npoints, h) * npolys bounded to keep the scan exhaustive but sane
    long double work = 1.0L;
    for (int i = 0; i < h; i++) work *= (long double)(npoints - uint64_t(i)) / (i + 1);
    if (work * (long double)npolys > (long double)(uint64_t(1) << 28))
        throw std::length_error("subset scan would exceed the 2^28 work guard");

    uint32_t mask = uint32_t((uint64_t(1) << d) - 1);
    // evaluation table evals[p * npoints + x] when it fits; Horner on demand otherwise
    bool tabulate = npolys * npoints <= (uint64_t(1) << 22);
    std::vector<uint32_t> evals;
    if (tabulate) {
        evals.resize(size_t(npolys * npoints));
        for (uint64_t p = 0; p < npolys; p++) {
            PolyState ps(d, deg);
            for (int i = 0; i <= deg; i++)
                ps.update(i, fe(d, uint32_t(p >> (uint64_t(i) * uint64_t(d))) & mask));
            for (uint64_t x = 0; x < npoints; x++)
                evals[size_t(p * npoints + x)] = ps.eval(fe(d, uint32_t(x))).bits;
        }
    }
    auto eval_at = [&](uint64_t p, uint32_t x) -> uint32_t {
        if (tabulate) return evals[size_t(p * npoints + x)];
        uint32_t acc = 0;
        for (int i = deg; i >= 0; i--)
            acc = reduce(clmul(acc, x), d) ^ (uint32_t(p >> (uint64_t(i) * uint64_t(d))) & mask);
        return acc;
    };

    KwiseReport rep;
    rep.poly_count = npolys;
    rep.expected = (h <= deg + 1) ? (npolys >> (uint64_t(d) * uint64_t(h))) : 0;

    std::vector<uint32_t> idx(static_cast<size_t>(h));
    for (int i = 0; i < h; i++) idx[size_t(i)] = uint32_t(i);
    std::vector<uint64_t> counts(size_t(1) << (uint64_t(d) * uint64_t(h)));
    while (true) {
        std::fill(counts.begin(), counts.end(), 0);
        for (uint64_t p = 0; p < npolys; p++) {
            uint64_t tuple = 0;
            for (int i = 0; i < h; i++)
                tuple |= uint64_t(eval_at(p, idx[size_t(i)])) << (uint64_t(i) * uint64_t(d));
            counts[size_t(tuple)]++;
        }
        for (size_t t = 0; t < counts.size(); t++) {
            if (counts[t] == rep.expected) continue;
            rep.pass = false;
            for (int i = 0; i < h; i++) {
                rep.witness_points.push_back(idx[size_t(i)]);
                rep.witness_values.push_back(uint32_t(t >> (uint64_t(i) * uint64_t(d))) & mask);
            }
            rep.witness_count = counts[t];
            return rep;
        }
        // next h-combination of [0, npoints)
        int i = h - 1;
        while (i >= 0 && idx[size_t(i)] == npoints - uint64_t(h - i)) i--;
        if (i < 0) break;
        idx[size_t(i)]++;
        for (int m = i + 1; m < h; m++) idx[size_t(m)] = idx[size_t(m - 1)] + 1;
    }
    rep.pass = true;
    return rep;
}

} // namespace probelab::gf2
