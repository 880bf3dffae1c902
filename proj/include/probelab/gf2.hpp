#pragma once
#include <cstdint>
#include <vector>

namespace probelab::gf2 {

// Fixed irreducible modulus for GF(2^d), d in 1..16. Bit i is the coefficient
// of x^i, leading term included (d=4 -> 0x13 = x^4 + x + 1).
uint32_t modulus(int d);

// Rabin's irreducibility test over GF(2); oracle for the modulus table.
bool is_irreducible(uint32_t poly, int degree);

// carryless product of two polynomials over GF(2)
uint64_t clmul(uint32_t a, uint32_t b);
// reduce a carryless product modulo the degree-d table modulus
uint32_t reduce(uint64_t v, int d);

struct FieldElem {
    int d = 1;
    uint32_t bits = 0;
    bool operator==(const FieldElem&) const = default;
};

FieldElem fe(int d, uint32_t bits);  // validates d and bit width
FieldElem gf_add(FieldElem a, FieldElem b);
FieldElem gf_mul(FieldElem a, FieldElem b);
FieldElem gf_pow(FieldElem a, uint64_t e);
int lsb(FieldElem a);  // constant-term coefficient

// P(x) = a_0 + a_1 x + ... + a_n x^n with XOR-accumulating coefficient
// updates; the dynamic problem answers lsb(P(y)).
class PolyState {
public:
    // regime_guard enforces n <= 2^(d/4), the scale the lower bound lives at
    PolyState(int d, int n, bool regime_guard = false);
    void update(int i, FieldElem b);  // a_i ^= b
    FieldElem eval(FieldElem y) const;
    int eval_lsb(FieldElem y) const { return lsb(eval(y)); }
    int degree_bound() const { return n_; }
    int field_degree() const { return d_; }
    const std::vector<FieldElem>& coeffs() const { return a_; }

private:
    int d_, n_;
    std::vector<FieldElem> a_;
};

// Exhaustive h-wise independence check: over all degree-<=deg polynomials,
// every h-tuple of distinct points takes every value tuple equally often.
struct KwiseReport {
    bool pass = false;
    uint64_t poly_count = 0;
    uint64_t expected = 0;  // 2^(d(deg+1-h)), 0 when h > deg+1
    // witness on failure: the offending points, values, and observed count
    std::vector<uint32_t> witness_points;
    std::vector<uint32_t> witness_values;
    uint64_t witness_count = 0;
};

KwiseReport kwise_independence_oracle(int d, int h, int deg);

} // namespace probelab::gf2
