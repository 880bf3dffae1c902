#include "probelab/index_structures.hpp"

#include <stdexcept>

namespace probelab {

DominanceIndex::DominanceIndex(int64_t universe, WordStore* store)
    : compressed_(false), universe_(universe), ext_(store) {
    if (universe < 1) throw std::invalid_argument("universe must be positive");
    nx_ = ny_ = universe;
}

DominanceIndex::DominanceIndex(std::vector<int64_t> xs, std::vector<int64_t> ys,
                               WordStore* store)
    : compressed_(true), xs_(std::move(xs)), ys_(std::move(ys)), ext_(store) {
    std::sort(xs_.begin(), xs_.end());
    xs_.erase(std::unique(xs_.begin(), xs_.end()), xs_.end());
    std::sort(ys_.begin(), ys_.end());
    ys_.erase(std::unique(ys_.begin(), ys_.end()), ys_.end());
    if (xs_.empty() || ys_.empty()) throw std::invalid_argument("empty coordinate set");
    nx_ = int64_t(xs_.size());
    ny_ = int64_t(ys_.size());
}

uint64_t DominanceIndex::rd(uint64_t a) {
    probes_++;
    return mem().read(a);
}

void DominanceIndex::wr(uint64_t a, uint64_t v) {
    probes_++;
    mem().write(a, v);
}

// 1-based Fenwick rank of an insert coordinate
int64_t DominanceIndex::insert_rank(const std::vector<int64_t>& axis, int64_t c) const {
    if (!compressed_) {
        if (c < 0 || c >= universe_) throw std::out_of_range("point outside universe");
        return c + 1;
    }
    auto it = std::lower_bound(axis.begin(), axis.end(), c);
    if (it == axis.end() || *it != c) throw std::out_of_range("point outside universe");
    return (it - axis.begin()) + 1;
}

void DominanceIndex::insert(Point p) {
    int64_t cx = insert_rank(xs_, p.x);
    int64_t cy = insert_rank(ys_, p.y);
    for (int64_t xi = cx; xi <= nx_; xi += xi & -xi)
        for (int64_t yi = cy; yi <= ny_; yi += yi & -yi) {
            uint64_t a = uint64_t(xi) * uint64_t(ny_ + 1) + uint64_t(yi);
            wr(a, rd(a) + 1);
        }
    inserted_++;
}

int64_t DominanceIndex::count(Point q) {
    int64_t cx, cy;
    if (!compressed_) {
        if (q.x < 0 || q.x >= universe_ || q.y < 0 || q.y >= universe_)
            throw std::out_of_range("query outside universe");
        cx = q.x + 1;
        cy = q.y + 1;
    } else {
        cx = std::upper_bound(xs_.begin(), xs_.end(), q.x) - xs_.begin();
        cy = std::upper_bound(ys_.begin(), ys_.end(), q.y) - ys_.begin();
    }
    int64_t total = 0;
    for (int64_t xi = cx; xi > 0; xi -= xi & -xi)
        for (int64_t yi = cy; yi > 0; yi -= yi & -yi)
            total += int64_t(rd(uint64_t(xi) * uint64_t(ny_ + 1) + uint64_t(yi)));
    return total;
}

// SelectionIndex memory layout on the store:
//   [0, n)                 raw entry values (read-back / overwrite detection)
//   n + pos, pos in 1..n   Fenwick tree counting zero entries
//   2n+2 + v*(n+1) + pos   Fenwick-of-Fenwick counting (value, position) pairs
SelectionIndex::SelectionIndex(int64_t n, int64_t max_value, WordStore* store)
    : n_(n), maxv_(max_value), ext_(store) {
    if (n < 1 || max_value < 1) throw std::invalid_argument("need n >= 1, max_value >= 1");
    vbit_ = 1;
    while (vbit_ * 2 <= maxv_) vbit_ *= 2;
    // all entries start at 0, so the zero tree starts as all-ones
    for (int64_t pos = 1; pos <= n_; pos++) wr(uint64_t(n_ + pos), uint64_t(pos & -pos));
}

uint64_t SelectionIndex::rd(uint64_t a) {
    probes_++;
    return mem().read(a);
}

void SelectionIndex::wr(uint64_t a, uint64_t v) {
    probes_++;
    mem().write(a, v);
}

void SelectionIndex::zf_add(int64_t pos, int64_t delta) {
    for (; pos <= n_; pos += pos & -pos) {
        uint64_t a = uint64_t(n_ + pos);
        wr(a, rd(a) + uint64_t(delta));
    }
}

int64_t SelectionIndex::zf_prefix(int64_t pos) {
    int64_t s = 0;
    for (; pos > 0; pos -= pos & -pos) s += int64_t(rd(uint64_t(n_ + pos)));
    return s;
}

int64_t SelectionIndex::zf_first_zero() {
    int64_t pos = 0, rem = 1;
    int64_t bit = 1;
    while (bit * 2 <= n_) bit *= 2;
    for (; bit; bit >>= 1) {
        int64_t nx = pos + bit;
        if (nx <= n_) {
            int64_t s = int64_t(rd(uint64_t(n_ + nx)));
            if (s < rem) {
                rem -= s;
                pos = nx;
            }
        }
    }
    return pos;  // 1-based pos+1 is the first zero; as 0-based index it is pos
}

uint64_t SelectionIndex::f2_addr(int64_t v, int64_t pos) const {
    return uint64_t(2 * n_ + 2) + uint64_t(v) * uint64_t(n_ + 1) + uint64_t(pos);
}

void SelectionIndex::f2_add(int64_t v, int64_t pos, int64_t delta) {
    for (int64_t vi = v; vi <= maxv_; vi += vi & -vi)
        for (int64_t pi = pos; pi <= n_; pi += pi & -pi) {
            uint64_t a = f2_addr(vi, pi);
            wr(a, rd(a) + uint64_t(delta));
        }
}

int64_t SelectionIndex::f2_ycount(int64_t vnode, int64_t pos) {
    int64_t s = 0;
    for (; pos > 0; pos -= pos & -pos) s += int64_t(rd(f2_addr(vnode, pos)));
    return s;
}

int64_t SelectionIndex::f2_count_le(int64_t v, int64_t pos) {
    int64_t s = 0;
    for (int64_t vi = v; vi > 0; vi -= vi & -vi) s += f2_ycount(vi, pos);
    return s;
}

void SelectionIndex::update(int64_t i, int64_t v) {
    if (i < 0 || i >= n_) throw std::out_of_range("position out of range");
    if (v < 0 || v > maxv_) throw std::out_of_range("value out of range");
    int64_t old = int64_t(rd(uint64_t(i)));
    if (old == v) return;
    if (old == 0) zf_add(i + 1, -1); else f2_add(old, i + 1, -1);
    if (v == 0) zf_add(i + 1, +1); else f2_add(v, i + 1, +1);
    wr(uint64_t(i), uint64_t(v));
}

int64_t SelectionIndex::value_at(int64_t i) {
    if (i < 0 || i >= n_) throw std::out_of_range("position out of range");
    return int64_t(rd(uint64_t(i)));
}

int64_t SelectionIndex::select(int64_t j, int64_t k) {
    if (j < 0 || j >= n_) throw std::out_of_range("prefix end out of range");
    if (k < 1 || k > j + 1) throw std::out_of_range("rank out of range");
    int64_t zeros = zf_prefix(j + 1);
    if (k <= zeros) return zf_first_zero();  // v* = 0; smallest zero position <= j
    // descend the value dimension to the (k - zeros)-th smallest nonzero value
    int64_t rem = k - zeros, cur = 0;
    for (int64_t bit = vbit_; bit; bit >>= 1) {
        int64_t nx = cur + bit;
        if (nx <= maxv_) {
            int64_t s = f2_ycount(nx, j + 1);
            if (s < rem) {
                rem -= s;
                cur = nx;
            }
        }
    }
    int64_t vstar = cur + 1;
    // smallest position <= j holding vstar
    int64_t lo = 1, hi = j + 1;
    while (lo < hi) {
        int64_t mid = (lo + hi) / 2;
        if (f2_count_le(vstar, mid) - f2_count_le(vstar - 1, mid) >= 1) hi = mid;
        else lo = mid + 1;
    }
    return lo - 1;
}

} // namespace probelab
