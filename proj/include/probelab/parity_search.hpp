#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "probelab/butterfly.hpp"
#include "probelab/rng.hpp"

namespace probelab::parity {

// Graphs G_1..G_ell of common degree B with depths d_i = i. Epoch i of the
// hard distribution sets every edge of G_i; epoch ell comes first in time.
struct Instance {
    int ell;
    int B;
    butterfly::Graph graph(int i) const;      // 1-based
    int64_t side() const;                     // B^ell, the query universe edge
    int64_t total_edges() const;
    int delta() const;                        // sum of depths = ell(ell+1)/2
};

struct Update {
    int graph;  // 1-based, doubles as the epoch index
    butterfly::EdgeId edge;
    int weight;
};

struct Query {
    int64_t s, t;
};

// Per-edge weight bits with set-once semantics; unset edges read 0.
class WeightState {
public:
    explicit WeightState(const Instance& inst);
    void apply_update(const Update& u);
    int weight(int graph, const butterfly::EdgeId& e) const;  // 0 when unset
    bool is_set(int graph, const butterfly::EdgeId& e) const;
    bool all_set() const;
    const Instance& instance() const { return inst_; }

private:
    int64_t slot(int graph, const butterfly::EdgeId& e) const;
    Instance inst_;
    std::vector<uint8_t> bits_;
    std::vector<uint8_t> set_;
    int64_t set_count_ = 0;
};

// Per-graph decomposition of a query: source floor(s / B^(ell-i)), sink the
// digit-reversed floor(t / B^(ell-i)).
std::pair<int64_t, int64_t> per_graph_pair(const Instance& inst, const Query& q, int graph);

// Reference solver: XOR of weights along all ell decomposed paths.
int answer_query(const Instance& inst, const WeightState& w, const Query& q);

struct HardSample {
    std::vector<std::vector<Update>> epochs;  // epochs[0] = epoch ell (earliest)
    Query query;
};

// Every edge of every graph gets an i.i.d. uniform bit; query uniform.
HardSample sample_hard_distribution(const Instance& inst, Rng& rng);

// One permutation of [0,B) per chunk: level j in [0,d_i) crossed with the
// d_i-1 digits besides digit j (chunk key = those digits, gap closed).
struct ChunkPermutations {
    int graph;
    // perms[level][chunk * B + digit] = image digit
    std::vector<std::vector<int>> perms;
};

ChunkPermutations identity_chunk_permutations(const Instance& inst, int graph);
ChunkPermutations random_chunk_permutations(const Instance& inst, int graph, Rng& rng);

// Trace each source through the per-chunk permutations; the resulting
// B^(d_i) paths are node-disjoint at every level. Entry s = (s, sink(s)).
std::vector<std::pair<int64_t, int64_t>> build_meta_paths(const Instance& inst,
                                                          const ChunkPermutations& cp);

// Lift per-graph pairs to full queries: entry j has floor(s'/B^(ell-i)) = j
// and digit-reversed floor(t'/B^(ell-i)) = sink(j).
std::vector<Query> lift_meta_query(const Instance& inst, int graph,
                                   const std::vector<std::pair<int64_t, int64_t>>& pairs);

// XOR of answer_query over the list after validating that the list is a meta
// query for graph `graph` (entry j sources at j; per-level node-disjoint).
int answer_meta_query(const Instance& inst, const WeightState& w, int graph,
                      const std::vector<Query>& list);

} // namespace probelab::parity
