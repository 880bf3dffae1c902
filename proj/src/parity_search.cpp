#include "probelab/parity_search.hpp"

#include <stdexcept>
#include <string>

namespace probelab::parity {

using butterfly::EdgeId;
using butterfly::Graph;
using butterfly::pow_i64;

Graph Instance::graph(int i) const {
    if (i < 1 || i > ell) throw std::out_of_range("graph index must be in 1..ell");
    return Graph{B, i};
}

int64_t Instance::side() const { return pow_i64(B, ell); }

int64_t Instance::total_edges() const {
    int64_t n = 0;
    for (int i = 1; i <= ell; i++) n += graph(i).edge_count();
    return n;
}

int Instance::delta() const { return ell * (ell + 1) / 2; }

static void check_instance(const Instance& inst) {
    if (inst.ell < 1 || inst.B < 2) throw std::invalid_argument("need ell >= 1, B >= 2");
}

WeightState::WeightState(const Instance& inst) : inst_(inst) {
    check_instance(inst);
    bits_.assign(size_t(inst.total_edges()), 0);
    set_.assign(bits_.size(), 0);
}

int64_t WeightState::slot(int graph, const EdgeId& e) const {
    if (graph < 1 || graph > inst_.ell) throw std::out_of_range("graph index out of range");
    int64_t base = 0;
    for (int i = 1; i < graph; i++) base += inst_.graph(i).edge_count();
    Graph g = inst_.graph(graph);
    if (e.level < 0 || e.level >= g.d || e.to_digit < 0 || e.to_digit >= g.B ||
        e.from_index < 0 || e.from_index >= g.layer_size())
        throw std::invalid_argument("invalid edge for graph " + std::to_string(graph));
    return base + (int64_t(e.level) * g.layer_size() + e.from_index) * g.B + e.to_digit;
}

void WeightState::apply_update(const Update& u) {
    if (u.weight != 0 && u.weight != 1) throw std::invalid_argument("weight must be 0 or 1");
    int64_t s = slot(u.graph, u.edge);
    if (set_[size_t(s)]) throw std::invalid_argument("edge weight already set");
    set_[size_t(s)] = 1;
    bits_[size_t(s)] = uint8_t(u.weight);
    set_count_++;
}

int WeightState::weight(int graph, const EdgeId& e) const { return bits_[size_t(slot(graph, e))]; }

bool WeightState::is_set(int graph, const EdgeId& e) const { return set_[size_t(slot(graph, e))]; }

bool WeightState::all_set() const { return set_count_ == int64_t(bits_.size()); }

std::pair<int64_t, int64_t> per_graph_pair(const Instance& inst, const Query& q, int graph) {
    if (q.s < 0 || q.s >= inst.side() || q.t < 0 || q.t >= inst.side())
        throw std::out_of_range("query out of range");
    int64_t scale = pow_i64(inst.B, inst.ell - graph);
    return {q.s / scale, butterfly::digit_reverse(q.t / scale, graph, inst.B)};
}

int answer_query(const Instance& inst, const WeightState& w, const Query& q) {
    int acc = 0;
    for (int i = 1; i <= inst.ell; i++) {
        auto [si, ti] = per_graph_pair(inst, q, i);
        for (const EdgeId& e : butterfly::path_edges(si, ti, inst.graph(i)))
            acc ^= w.weight(i, e);
    }
    return acc;
}

HardSample sample_hard_distribution(const Instance& inst, Rng& rng) {
    check_instance(inst);
    HardSample out;
    for (int i = inst.ell; i >= 1; i--) {
        Graph g = inst.graph(i);
        std::vector<Update> epoch;
        epoch.reserve(size_t(g.edge_count()));
        for (int j = 0; j < g.d; j++)
            for (int64_t f = 0; f < g.layer_size(); f++)
                for (int wd = 0; wd < g.B; wd++)
                    epoch.push_back({i, EdgeId{j, f, wd}, rng.bit()});
        out.epochs.push_back(std::move(epoch));
    }
    out.query = {int64_t(rng.below(uint64_t(inst.side()))),
                 int64_t(rng.below(uint64_t(inst.side())))};
    return out;
}

// chunk key: digits of the node with digit `level` removed, gap closed
static int64_t chunk_of(int64_t node, int level, int d, int B) {
    std::vector<int> v = butterfly::node_vector(node, d, B);
    int64_t key = 0;
    for (int m = d - 1; m >= 0; m--)
        if (m != level) key = key * B + v[m];
    return key;
}

ChunkPermutations identity_chunk_permutations(const Instance& inst, int graph) {
    Graph g = inst.graph(graph);
    ChunkPermutations cp{graph, {}};
    int64_t chunks = pow_i64(g.B, g.d - 1);
    for (int j = 0; j < g.d; j++) {
        std::vector<int> p(size_t(chunks * g.B));
        for (int64_t c = 0; c < chunks; c++)
            for (int b = 0; b < g.B; b++) p[size_t(c * g.B + b)] = b;
        cp.perms.push_back(std::move(p));
    }
    return cp;
}

ChunkPermutations random_chunk_permutations(const Instance& inst, int graph, Rng& rng) {
    ChunkPermutations cp = identity_chunk_permutations(inst, graph);
    int B = inst.B;
    for (auto& level : cp.perms) {
        for (size_t c = 0; c + B <= level.size(); c += size_t(B)) {
            for (int b = B - 1; b > 0; b--) {  // Fisher-Yates per chunk
                int r = int(rng.below(uint64_t(b) + 1));
                std::swap(level[c + size_t(b)], level[c + size_t(r)]);
            }
        }
    }
    return cp;
}

std::vector<std::pair<int64_t, int64_t>> build_meta_paths(const Instance& inst,
                                                          const ChunkPermutations& cp) {
    Graph g = inst.graph(cp.graph);
    if (int(cp.perms.size()) != g.d) throw std::invalid_argument("missing chunk permutations");
    std::vector<std::pair<int64_t, int64_t>> pairs;
    pairs.reserve(size_t(g.layer_size()));
    for (int64_t s = 0; s < g.layer_size(); s++) {
        std::vector<int> v = butterfly::node_vector(s, g.d, g.B);
        for (int j = 0; j < g.d; j++) {
            int64_t node = butterfly::node_index(v, g.B);
            int64_t chunk = chunk_of(node, j, g.d, g.B);
            v[j] = cp.perms[size_t(j)].at(size_t(chunk * g.B + v[j]));
        }
        pairs.emplace_back(s, butterfly::node_index(v, g.B));
    }
    return pairs;
}

std::vector<Query> lift_meta_query(const Instance& inst, int graph,
                                   const std::vector<std::pair<int64_t, int64_t>>& pairs) {
    int64_t scale = pow_i64(inst.B, inst.ell - graph);
    std::vector<Query> list;
    list.reserve(pairs.size());
    for (auto [src, sink] : pairs)
        list.push_back({src * scale, butterfly::digit_reverse(sink, graph, inst.B) * scale});
    return list;
}

int answer_meta_query(const Instance& inst, const WeightState& w, int graph,
                      const std::vector<Query>& list) {
    Graph g = inst.graph(graph);
    if (list.empty() || int64_t(list.size()) > g.layer_size())
        throw std::invalid_argument("meta query holds 1..B^d_i entries");
    bool full = int64_t(list.size()) == g.layer_size();
    std::vector<std::pair<int64_t, int64_t>> pairs;
    pairs.reserve(list.size());
    std::vector<uint8_t> src_seen(size_t(g.layer_size()), 0);
    for (size_t j = 0; j < list.size(); j++) {
        auto p = per_graph_pair(inst, list[j], graph);
        if (full && p.first != int64_t(j))
            throw std::invalid_argument("meta query entry " + std::to_string(j) +
                                        " does not source at " + std::to_string(j));
        if (src_seen[size_t(p.first)])
            throw std::invalid_argument("meta query repeats a source");
        src_seen[size_t(p.first)] = 1;
        pairs.push_back(p);
    }
    // node-disjoint at every level <=> realizable by per-chunk permutations
    std::vector<uint8_t> seen(size_t(g.layer_size()));
    for (int lvl = 0; lvl <= g.d; lvl++) {
        seen.assign(seen.size(), 0);
        for (auto [src, sink] : pairs) {
            auto v = butterfly::node_vector(src, g.d, g.B);
            auto tv = butterfly::node_vector(sink, g.d, g.B);
            for (int j = 0; j < lvl; j++) v[j] = tv[j];
            int64_t node = butterfly::node_index(v, g.B);
            if (seen[size_t(node)])
                throw std::invalid_argument("meta query paths collide at level " +
                                            std::to_string(lvl));
            seen[size_t(node)] = 1;
        }
    }
    int acc = 0;
    for (const Query& q : list) acc ^= answer_query(inst, w, q);
    return acc;
}

} // namespace probelab::parity
