#include "probelab/butterfly.hpp"

#include <stdexcept>
#include <string>

namespace probelab::butterfly {

int64_t pow_i64(int64_t base, int exp) {
    int64_t r = 1;
    for (int i = 0; i < exp; i++) {
        if (r > (int64_t(1) << 62) / base) throw std::overflow_error("pow_i64 overflow");
        r *= base;
    }
    return r;
}

int64_t Graph::layer_size() const { return pow_i64(B, d); }
int64_t Graph::edge_count() const { return int64_t(d) * pow_i64(B, d + 1); }

static void check_graph(const Graph& g) {
    if (g.B < 2 || g.d < 1) throw std::invalid_argument("butterfly: need B >= 2, d >= 1");
}

std::vector<int> node_vector(int64_t index, int d, int B) {
    if (index < 0 || index >= pow_i64(B, d))
        throw std::out_of_range("node_vector: index out of range");
    std::vector<int> v(d);
    for (int i = 0; i < d; i++) {
        v[i] = int(index % B);
        index /= B;
    }
    return v;
}

int64_t node_index(const std::vector<int>& digits, int B) {
    int64_t x = 0;
    for (size_t i = digits.size(); i-- > 0;) {
        if (digits[i] < 0 || digits[i] >= B)
            throw std::out_of_range("node_index: digit out of range");
        x = x * B + digits[i];
    }
    return x;
}

int64_t digit_reverse(int64_t x, int d, int B) {
    if (x < 0 || x >= pow_i64(B, d)) throw std::out_of_range("digit_reverse: x out of range");
    int64_t r = 0;
    for (int i = 0; i < d; i++) {
        r = r * B + x % B;
        x /= B;
    }
    return r;
}

std::vector<EdgeId> path_edges(int64_t source_index, int64_t sink_index, const Graph& g) {
    check_graph(g);
    std::vector<int> cur = node_vector(source_index, g.d, g.B);
    std::vector<int> sink = node_vector(sink_index, g.d, g.B);
    std::vector<EdgeId> path;
    path.reserve(g.d);
    for (int j = 0; j < g.d; j++) {
        path.push_back({j, node_index(cur, g.B), sink[j]});
        cur[j] = sink[j];
    }
    return path;
}

static void check_edge(const EdgeId& e, int d, int B) {
    if (e.level < 0 || e.level >= d || e.to_digit < 0 || e.to_digit >= B ||
        e.from_index < 0 || e.from_index >= pow_i64(B, d))
        throw std::invalid_argument("invalid edge for depth " + std::to_string(d));
}

Rect edge_rectangle(const EdgeId& edge, int d_i, int d_ell, int B) {
    if (d_i > d_ell) throw std::invalid_argument("edge_rectangle: d_i > d_ell");
    check_edge(edge, d_i, B);
    std::vector<int> w = node_vector(edge.from_index, d_i, B);
    int j = edge.level;
    int shift = d_ell - d_i;

    int64_t s_lo = 0;
    for (int k = j; k < d_i; k++) s_lo += w[k] * pow_i64(B, k + shift);
    // sum_{k=0}^{j-1+shift} (B-1) B^k = B^(j+shift) - 1
    int64_t s_hi = s_lo + pow_i64(B, j + shift) - 1;

    int64_t t_lo = int64_t(edge.to_digit) * pow_i64(B, d_ell - j - 1);
    for (int k = 0; k < j; k++) t_lo += w[k] * pow_i64(B, d_ell - 1 - k);
    int64_t t_hi = t_lo + pow_i64(B, d_ell - j - 1) - 1;

    return {s_lo, s_hi, t_lo, t_hi};
}

std::vector<std::pair<int64_t, int64_t>> stabbing_pairs_oracle(const EdgeId& edge, int d_i,
                                                               int d_ell, int B) {
    if (d_i > d_ell) throw std::invalid_argument("stabbing_pairs_oracle: d_i > d_ell");
    check_edge(edge, d_i, B);
    int64_t side = pow_i64(B, d_ell);
    if (side > (int64_t(1) << 12))
        throw std::invalid_argument("stabbing_pairs_oracle: B^(2 d_ell) exceeds 2^24 guard");
    Graph g{B, d_i};
    int64_t scale = pow_i64(B, d_ell - d_i);
    std::vector<std::pair<int64_t, int64_t>> hits;
    for (int64_t s = 0; s < side; s++) {
        for (int64_t t = 0; t < side; t++) {
            int64_t si = s / scale;
            int64_t ti = digit_reverse(t / scale, d_i, B);
            for (const EdgeId& e : path_edges(si, ti, g)) {
                if (e == edge) {
                    hits.emplace_back(s, t);
                    break;
                }
            }
        }
    }
    return hits;
}

} // namespace probelab::butterfly
