#pragma once
#include <algorithm>
#include <cstdint>
#include <vector>

#include "probelab/word_store.hpp"

namespace probelab {

struct Point {
    int64_t x, y;
    bool operator==(const Point&) const = default;
};

// Counts inserted points p with p.x <= q.x and p.y <= q.y. Realized as a
// two-level Fenwick tree over a dense or coordinate-compressed grid; every
// word access goes through a WordStore so probes can be counted or traced.
class DominanceIndex {
public:
    // dense universe: coordinates in [0, universe) on both axes
    explicit DominanceIndex(int64_t universe, WordStore* store = nullptr);
    // compressed: the admissible insert coordinates, given up front
    DominanceIndex(std::vector<int64_t> xs, std::vector<int64_t> ys,
                   WordStore* store = nullptr);

    void insert(Point p);
    int64_t count(Point q);
    int parity(Point q) { return int(count(q) & 1); }

    int64_t probes() const { return probes_; }
    int64_t inserted() const { return inserted_; }

private:
    uint64_t rd(uint64_t a);
    void wr(uint64_t a, uint64_t v);
    int64_t insert_rank(const std::vector<int64_t>& axis, int64_t c) const;
    WordStore& mem() { return ext_ ? *ext_ : own_; }

    bool compressed_;
    int64_t universe_ = 0;
    std::vector<int64_t> xs_, ys_;  // sorted unique, compressed mode only
    int64_t nx_, ny_;
    FlatStore own_;
    WordStore* ext_;  // external store, or null to use own_ (keeps moves safe)
    int64_t probes_ = 0;
    int64_t inserted_ = 0;
};

// Mutable array C[0..N), entries non-negative and initially 0, supporting
// prefix selection: the index of the k-th smallest entry of C[0..j]. Ties
// resolve to the smallest qualifying position. Values are bounded by
// max_value so a value-indexed counting tree with prefix descent works.
class SelectionIndex {
public:
    SelectionIndex(int64_t n, int64_t max_value, WordStore* store = nullptr);

    void update(int64_t i, int64_t v);  // overwrite C[i] = v
    int64_t value_at(int64_t i);
    int64_t select(int64_t j, int64_t k);
    int select_parity(int64_t j, int64_t k) { return int(select(j, k) & 1); }

    int64_t size() const { return n_; }
    int64_t probes() const { return probes_; }

private:
    uint64_t rd(uint64_t a);
    void wr(uint64_t a, uint64_t v);
    void zf_add(int64_t pos, int64_t delta);     // zero-indicator tree
    int64_t zf_prefix(int64_t pos);
    int64_t zf_first_zero();                     // smallest zero position, 0-based
    uint64_t f2_addr(int64_t v, int64_t pos) const;
    void f2_add(int64_t v, int64_t pos, int64_t delta);  // nonzero-value tree
    int64_t f2_ycount(int64_t vnode, int64_t pos);
    int64_t f2_count_le(int64_t v, int64_t pos);
    WordStore& mem() { return ext_ ? *ext_ : own_; }

    int64_t n_, maxv_;
    int64_t vbit_;  // highest power of two <= maxv_
    FlatStore own_;
    WordStore* ext_;  // external store, or null to use own_ (keeps moves safe)
    int64_t probes_ = 0;
};

// Brute-force twins used for cross-checking.
class BruteDominance {
public:
    void insert(Point p) { pts_.push_back(p); }
    int64_t count(Point q) const {
        int64_t c = 0;
        for (const Point& p : pts_)
            if (p.x <= q.x && p.y <= q.y) c++;
        return c;
    }
    int parity(Point q) const { return int(count(q) & 1); }

private:
    std::vector<Point> pts_;
};

class BruteSelection {
public:
    explicit BruteSelection(int64_t n) : c_(size_t(n), 0) {}
    void update(int64_t i, int64_t v) { c_.at(size_t(i)) = v; }
    int64_t value_at(int64_t i) const { return c_.at(size_t(i)); }
    int64_t select(int64_t j, int64_t k) const {
        std::vector<int64_t> pre(c_.begin(), c_.begin() + j + 1);
        std::nth_element(pre.begin(), pre.begin() + (k - 1), pre.end());
        int64_t vstar = pre[size_t(k - 1)];
        for (int64_t i = 0; i <= j; i++)
            if (c_[size_t(i)] == vstar) return i;
        return -1;  // unreachable for valid k
    }

private:
    std::vector<int64_t> c_;
};

} // namespace probelab
