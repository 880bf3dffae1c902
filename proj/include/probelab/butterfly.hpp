#pragma once
#include <cstdint>
#include <utility>
#include <vector>

namespace probelab::butterfly {

// Layered DAG with d+1 layers of B^d vertices each. A vertex is a length-d
// base-B digit vector (least significant digit = coordinate 0); the level-j
// edges connect vectors differing only in coordinate j.
struct Graph {
    int B;
    int d;
    int64_t layer_size() const;  // B^d
    int64_t edge_count() const;  // d * B^(d+1)
};

// Canonical edge form: source node (as layer index) at level `level`, target
// obtained by setting digit `level` to `to_digit`. Self edges are legal.
struct EdgeId {
    int level;
    int64_t from_index;
    int to_digit;
    bool operator==(const EdgeId&) const = default;
};

// Closed integer ranges on both axes.
struct Rect {
    int64_t s_lo, s_hi, t_lo, t_hi;
    bool contains(int64_t s, int64_t t) const {
        return s_lo <= s && s <= s_hi && t_lo <= t && t <= t_hi;
    }
    bool operator==(const Rect&) const = default;
};

int64_t pow_i64(int64_t base, int exp);

std::vector<int> node_vector(int64_t index, int d, int B);
int64_t node_index(const std::vector<int>& digits, int B);
int64_t digit_reverse(int64_t x, int d, int B);

// The unique path morphing source digits into sink digits, one level at a
// time; exactly d edges. sink_index is a sink-layer index (callers coming
// from a query apply digit_reverse first).
std::vector<EdgeId> path_edges(int64_t source_index, int64_t sink_index, const Graph& g);

// Queries (s,t) in [B^d_ell]^2 routing through `edge` of a depth-d_i graph
// form exactly this rectangle.
Rect edge_rectangle(const EdgeId& edge, int d_i, int d_ell, int B);

// Brute-force twin of edge_rectangle: enumerate every (s,t) and test path
// membership. Guard: B^(2 d_ell) <= 2^24.
std::vector<std::pair<int64_t, int64_t>> stabbing_pairs_oracle(const EdgeId& edge, int d_i,
                                                               int d_ell, int B);

} // namespace probelab::butterfly
