#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "probelab/butterfly.hpp"
#include "probelab/parity_search.hpp"
#include "probelab/peak_to_average.hpp"
#include "probelab/rng.hpp"
#include "probelab/signed_table.hpp"
#include "probelab/word_store.hpp"

// Cell-probe instrumentation (per-cell last-write epochs, per-query probe
// traces) plus a desk-scale execution of the one-way simulation protocol:
// the encoder samples recently-written cells, the decoder replays the
// structure on a partially reconstructed memory and turns a posterior over
// the hidden epoch into a boolean prediction via a peak-to-average subset.
namespace probelab::cellprobe {

// ---------------------------------------------------------------------------
// Memory with epoch stamps and probe tracing
// ---------------------------------------------------------------------------

struct ProbeTrace {
    struct Probe {
        uint64_t addr;
        bool write;
        int epoch;  // stamp of the probed cell at probe time; 0 = never written
    };
    std::vector<Probe> probes;

    int64_t total() const { return int64_t(probes.size()); }
    int64_t in_epoch(int i) const {
        int64_t c = 0;
        for (const Probe& p : probes)
            if (p.epoch == i) c++;
        return c;
    }
    // Probed addresses, first occurrence first.
    std::vector<uint64_t> distinct_addresses() const {
        std::vector<uint64_t> out;
        for (const Probe& p : probes)
            if (std::find(out.begin(), out.end(), p.addr) == out.end()) out.push_back(p.addr);
        return out;
    }
};

struct CellRecord {
    uint64_t addr;
    uint64_t value;
    bool operator==(const CellRecord&) const = default;
};

// w-bit cells in a sparse address space. Writes stamp the cell with the
// current epoch counter; absent cells read as 0. During a query the memory
// traces every read and rejects writes (the protocol replays queries on
// reconstructed memories, which only works for read-only query algorithms).
class CellMemory : public WordStore {
public:
    explicit CellMemory(int word_bits) : w_(word_bits) {
        if (word_bits < 1 || word_bits > 64)
            throw std::invalid_argument("word size must be 1..64 bits");
    }

    void begin_epoch(int e) {
        if (e < 1) throw std::invalid_argument("epoch counter must be >= 1");
        if (in_query_) throw std::logic_error("cannot switch epochs inside a query");
        epoch_ = e;
    }
    int current_epoch() const { return epoch_; }

    void begin_query(ProbeTrace* trace) {
        in_query_ = true;
        trace_ = trace;
    }
    void end_query() {
        in_query_ = false;
        trace_ = nullptr;
    }

    uint64_t read(uint64_t addr) override {
        auto it = cells_.find(addr);
        uint64_t v = it == cells_.end() ? 0 : it->second.value;
        if (in_query_ && trace_)
            trace_->probes.push_back({addr, false, it == cells_.end() ? 0 : it->second.epoch});
        return v;
    }

    void write(uint64_t addr, uint64_t value) override {
        if (in_query_) throw std::logic_error("query algorithms must not write cells");
        if (epoch_ == 0) throw std::logic_error("write outside any epoch: call begin_epoch first");
        if (w_ < 64 && (value >> w_) != 0)
            throw std::invalid_argument("cell content exceeds the word size");
        cells_[addr] = {value, epoch_};
    }

    // Message overlay: set a cell without tracing and without an epoch stamp
    // of its own (stamp 0 marks "received, origin unknown").
    void overlay(uint64_t addr, uint64_t value, int epoch = 0) { cells_[addr] = {value, epoch}; }

    uint64_t peek(uint64_t addr) const {
        auto it = cells_.find(addr);
        return it == cells_.end() ? 0 : it->second.value;
    }
    int epoch_of(uint64_t addr) const {
        auto it = cells_.find(addr);
        return it == cells_.end() ? 0 : it->second.epoch;
    }
    bool contains(uint64_t addr) const { return cells_.count(addr) != 0; }
    size_t cell_count() const { return cells_.size(); }
    int word_bits() const { return w_; }

    struct Entry {
        uint64_t addr;
        uint64_t value;
        int epoch;
    };
    // Address-sorted snapshot; the deterministic order every sampling and
    // serialization step iterates in.
    std::vector<Entry> sorted_cells() const {
        std::vector<Entry> out;
        out.reserve(cells_.size());
        for (const auto& [a, c] : cells_) out.push_back({a, c.value, c.epoch});
        std::sort(out.begin(), out.end(),
                  [](const Entry& x, const Entry& y) { return x.addr < y.addr; });
        return out;
    }

private:
    struct Cell {
        uint64_t value;
        int epoch;
    };
    int w_;
    int epoch_ = 0;
    bool in_query_ = false;
    ProbeTrace* trace_ = nullptr;
    std::unordered_map<uint64_t, Cell> cells_;
};

// ---------------------------------------------------------------------------
// Structures driven through the memory, and epoch-grouped runs
// ---------------------------------------------------------------------------

struct CellUpdate {
    uint64_t key;
    uint64_t value;
};

// A dynamic boolean structure that keeps all state in the store it is handed.
class CellStructure {
public:
    virtual ~CellStructure() = default;
    virtual void update(WordStore& mem, const CellUpdate& u) = 0;
    virtual int query(WordStore& mem, uint64_t q) = 0;  // 0/1 answer
};

struct RunResult {
    CellMemory memory;
    ProbeTrace trace;
    int answer = 0;
};

// Apply the update groups in order -- groups[0] is the earliest epoch and
// carries the highest epoch number L, groups[L-1] is epoch 1 -- then run the
// query with tracing. T_q decomposes exactly into the per-epoch counts
// because every probe lands in some stamp class (0 = never written).
inline RunResult run_with_trace(CellStructure& ds, const std::vector<std::vector<CellUpdate>>& epochs,
                                uint64_t q, int word_bits) {
    if (epochs.empty()) throw std::invalid_argument("need at least one epoch group");
    RunResult out{CellMemory(word_bits), {}, 0};
    int L = int(epochs.size());
    for (int g = 0; g < L; g++) {
        out.memory.begin_epoch(L - g);
        for (const CellUpdate& u : epochs[size_t(g)]) ds.update(out.memory, u);
    }
    out.memory.begin_query(&out.trace);
    out.answer = ds.query(out.memory, q);
    out.memory.end_query();
    return out;
}

// ---------------------------------------------------------------------------
// Toy problems: hard-distribution update streams small enough to enumerate
// ---------------------------------------------------------------------------

// Epoch i's update data packed into one word (at most 63 bits; the posterior
// guard caps enumeration far below that anyway). Index 1..ell; slot 0 unused.
struct EpochData {
    std::vector<uint64_t> data;

    explicit EpochData(int ell = 0) : data(size_t(ell) + 1, 0) {}
    int ell() const { return int(data.size()) - 1; }
};

// A dynamic problem whose updates arrive in epochs of prescribed sizes and
// whose query returns one bit. Epoch i's random data is epoch_data_bits(i)
// i.i.d. bits; the decoder enumerates that space exhaustively.
class ToyProblem {
public:
    virtual ~ToyProblem() = default;
    virtual int ell() const = 0;
    virtual int word_bits() const = 0;
    virtual int64_t update_budget() const = 0;        // t_u: cells written per update
    virtual int64_t query_budget() const = 0;         // t_q: worst-case query probes
    virtual int64_t epoch_size(int i) const = 0;      // n_i updates in epoch i
    virtual int epoch_data_bits(int i) const = 0;
    virtual std::vector<CellUpdate> epoch_updates(int i, uint64_t data) const = 0;
    virtual CellStructure& structure() = 0;
    virtual uint64_t sample_query(Rng& rng) const = 0;
};

inline uint64_t data_mask(int bits) {
    if (bits < 0 || bits > 63) throw std::invalid_argument("epoch data must fit 0..63 bits");
    return bits == 0 ? 0 : (uint64_t(1) << bits) - 1;
}

// Draw every epoch's data, earliest epoch (number ell) first.
inline EpochData sample_epoch_data(const ToyProblem& toy, Rng& rng) {
    EpochData ed(toy.ell());
    for (int i = toy.ell(); i >= 1; i--) ed.data[size_t(i)] = rng.next() & data_mask(toy.epoch_data_bits(i));
    return ed;
}

inline std::vector<std::vector<CellUpdate>> epoch_groups(const ToyProblem& toy, const EpochData& ed) {
    if (ed.ell() != toy.ell()) throw std::invalid_argument("epoch data has the wrong arity");
    std::vector<std::vector<CellUpdate>> groups;
    for (int i = toy.ell(); i >= 1; i--) groups.push_back(toy.epoch_updates(i, ed.data[size_t(i)]));
    return groups;
}

inline RunResult run_toy(ToyProblem& toy, const EpochData& ed, uint64_t q) {
    return run_with_trace(toy.structure(), epoch_groups(toy, ed), q, toy.word_bits());
}

// ---------------------------------------------------------------------------
// Protocol configuration
// ---------------------------------------------------------------------------

struct ProtocolConfig {
    int epoch = 1;        // the hidden epoch i
    double p = 0.5;       // cell sampling probability
    double a = 0.0;       // if > 0, overrides p with 1/(w*t_u)^a
    uint64_t seed = 0;    // master seed; trials derive private/public streams
    double good_threshold = -1.0;  // < 0: use the default p^(32 t_q / ell) / 4
    double find_eps = -1.0;        // < 0: reuse the goodness threshold
    int64_t posterior_guard = int64_t(1) << 20;

    double resolved_p(int w, int64_t t_u) const {
        double out = a > 0.0 ? std::pow(double(w) * double(t_u), -a) : p;
        if (!(out >= 0.0 && out <= 1.0))
            throw std::invalid_argument("sampling probability must be in [0,1]");
        return out;
    }
};

// Derived sizes of one protocol run. c2_cap bounds the older-epoch cells:
// at most t_u cells per update across every epoch after i in time.
struct ProblemDims {
    int ell = 1;
    int64_t n_i = 0;
    int64_t t_u = 1;
    int64_t t_q = 1;
    int64_t c2_cap = 0;
    int word_bits = 8;
};

inline ProblemDims dims_for(const ToyProblem& toy, int epoch) {
    if (epoch < 1 || epoch > toy.ell()) throw std::invalid_argument("epoch out of range");
    ProblemDims d;
    d.ell = toy.ell();
    d.n_i = toy.epoch_size(epoch);
    d.t_u = toy.update_budget();
    d.t_q = toy.query_budget();
    d.word_bits = toy.word_bits();
    d.c2_cap = 0;
    for (int j = 1; j < epoch; j++) d.c2_cap += toy.epoch_size(j) * d.t_u;
    return d;
}

// ---------------------------------------------------------------------------
// Encoder: three cell sets and an explicit bit count
// ---------------------------------------------------------------------------

// c0: private Bernoulli(p) sample of the epoch-i cells, abort flag when the
//     sample exceeds 2 p n_i t_u cells.
// c1: public-seed sample over every cell of the memory, kept only where the
//     stamp equals i, same cap on that count.
// c2: every cell whose stamp is an epoch after i in time (stamp < i).
// A transmitted cell costs address + content = 2w bits; each flag costs 1.
struct AliceMessages {
    bool c0_ok = true;
    bool c1_ok = true;
    std::vector<CellRecord> c0, c1, c2;  // kept even when flagged, for diagnostics
    double cap_cells = 0;                // 2 p n_i t_u
    int64_t bits = 0;                    // bits actually sent
};

inline bool public_sampled(uint64_t public_seed, double p, uint64_t addr) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return mix64(public_seed, addr) < uint64_t(std::ldexp(p, 64));
}

inline AliceMessages alice_messages(const CellMemory& mem, const ProtocolConfig& cfg,
                                    const ProblemDims& dims, uint64_t public_seed,
                                    Rng& private_rng) {
    double p = cfg.resolved_p(mem.word_bits(), dims.t_u);
    AliceMessages msg;
    msg.cap_cells = 2.0 * p * double(dims.n_i) * double(dims.t_u);

    for (const CellMemory::Entry& e : mem.sorted_cells()) {
        if (e.epoch == cfg.epoch) {
            if (private_rng.unit() < p) msg.c0.push_back({e.addr, e.value});
            if (public_sampled(public_seed, p, e.addr)) msg.c1.push_back({e.addr, e.value});
        } else if (e.epoch < cfg.epoch) {
            msg.c2.push_back({e.addr, e.value});
        }
    }
    if (int64_t(msg.c2.size()) > dims.c2_cap)
        throw std::logic_error("older-epoch cells exceed the per-update write budget");

    msg.c0_ok = !(double(msg.c0.size()) > msg.cap_cells);
    msg.c1_ok = !(double(msg.c1.size()) > msg.cap_cells);

    int64_t w2 = 2 * int64_t(mem.word_bits());
    msg.bits = 1;
    if (msg.c0_ok) {
        msg.bits += w2 * int64_t(msg.c0.size()) + 1;
        if (msg.c1_ok) msg.bits += w2 * int64_t(msg.c1.size()) + w2 * int64_t(msg.c2.size());
    }
    return msg;
}

// ---------------------------------------------------------------------------
// Exhaustive posterior over the hidden epoch
// ---------------------------------------------------------------------------

// One enumerated epoch-i candidate that is consistent with the received
// messages: c2 must match the replayed older-epoch cells exactly, c0 must be
// a subset of the replayed epoch-i cells with equal contents. The weight is
// the sampling likelihood (1-p)^(|A_i| - |c0|); the p^|c0| factor is shared
// by every candidate and cancels.
struct PosteriorRow {
    uint64_t data;
    double weight;
    int answer;              // true query answer under this candidate
    bool wq;                 // its epoch-i probed cells are all inside c0
    std::vector<uint64_t> z;  // candidate memory contents at the S_q addresses
};

inline std::vector<PosteriorRow> enumerate_posterior(
    ToyProblem& toy, const EpochData& u_minus_i, const ProtocolConfig& cfg,
    const std::vector<CellRecord>& c0, const std::vector<CellRecord>& c2, uint64_t q,
    const std::vector<uint64_t>& S_q) {
    int i = cfg.epoch;
    if (i < 1 || i > toy.ell()) throw std::invalid_argument("epoch out of range");
    int bits = toy.epoch_data_bits(i);
    if (bits > 20 || (int64_t(1) << bits) > cfg.posterior_guard)
        throw std::length_error("epoch state space 2^" + std::to_string(bits) +
                                " exceeds the posterior enumeration guard");
    double p = cfg.resolved_p(toy.word_bits(), toy.update_budget());

    // Shared prefix: epochs before i in time (numbers > i).
    CellMemory base(toy.word_bits());
    for (int j = toy.ell(); j > i; j--) {
        base.begin_epoch(j);
        for (const CellUpdate& u : toy.epoch_updates(j, u_minus_i.data[size_t(j)]))
            toy.structure().update(base, u);
    }

    std::vector<CellRecord> c2_sorted = c2;
    std::sort(c2_sorted.begin(), c2_sorted.end(),
              [](const CellRecord& x, const CellRecord& y) { return x.addr < y.addr; });
    std::vector<uint64_t> c0_addrs;
    for (const CellRecord& r : c0) c0_addrs.push_back(r.addr);
    std::sort(c0_addrs.begin(), c0_addrs.end());

    std::vector<PosteriorRow> rows;
    uint64_t space = uint64_t(1) << bits;
    for (uint64_t v = 0; v < space; v++) {
        CellMemory mem = base;
        mem.begin_epoch(i);
        for (const CellUpdate& u : toy.epoch_updates(i, v)) toy.structure().update(mem, u);
        for (int j = i - 1; j >= 1; j--) {
            mem.begin_epoch(j);
            for (const CellUpdate& u : toy.epoch_updates(j, u_minus_i.data[size_t(j)]))
                toy.structure().update(mem, u);
        }

        int64_t in_i = 0;
        bool ok = true;
        std::vector<CellRecord> older;
        for (const CellMemory::Entry& e : mem.sorted_cells()) {
            if (e.epoch == i) in_i++;
            else if (e.epoch < i) older.push_back({e.addr, e.value});
        }
        if (older.size() != c2_sorted.size() ||
            !std::equal(older.begin(), older.end(), c2_sorted.begin()))
            ok = false;
        for (const CellRecord& r : c0) {
            if (!ok) break;
            if (mem.epoch_of(r.addr) != i || mem.peek(r.addr) != r.value) ok = false;
        }
        if (!ok) continue;

        ProbeTrace tr;
        mem.begin_query(&tr);
        int ans = toy.structure().query(mem, q);
        mem.end_query();
        bool wq = true;
        for (const ProbeTrace::Probe& pr : tr.probes)
            if (pr.epoch == i &&
                !std::binary_search(c0_addrs.begin(), c0_addrs.end(), pr.addr))
                wq = false;

        PosteriorRow row;
        row.data = v;
        row.weight = std::pow(1.0 - p, double(in_i - int64_t(c0.size())));
        row.answer = ans;
        row.wq = wq;
        row.z.reserve(S_q.size());
        for (uint64_t addr : S_q) row.z.push_back(mem.peek(addr));
        rows.push_back(std::move(row));
    }
    return rows;
}

// Pr[answer = 1] given the messages and, optionally, pinned contents y at the
// S_q positions listed in Y. Throws when the conditioning excludes every
// candidate.
inline double posterior_bias(ToyProblem& toy, const EpochData& u_minus_i,
                             const ProtocolConfig& cfg, const std::vector<CellRecord>& c0,
                             const std::vector<CellRecord>& c2, uint64_t q,
                             const std::vector<uint64_t>& S_q, const std::vector<int>& Y,
                             const std::vector<uint64_t>& y) {
    if (Y.size() != y.size()) throw std::invalid_argument("Y and y must have equal length");
    for (int pos : Y)
        if (pos < 0 || size_t(pos) >= S_q.size())
            throw std::invalid_argument("Y indexes outside S_q");
    std::vector<PosteriorRow> rows = enumerate_posterior(toy, u_minus_i, cfg, c0, c2, q, S_q);
    double num = 0, den = 0;
    for (const PosteriorRow& r : rows) {
        bool match = true;
        for (size_t j = 0; j < Y.size(); j++)
            if (r.z[size_t(Y[j])] != y[j]) match = false;
        if (!match) continue;
        den += r.weight;
        if (r.answer == 1) num += r.weight;
    }
    if (den <= 0.0) throw std::invalid_argument("conditioning excludes every epoch candidate");
    return num / den;
}

// Posterior tables over the S_q contents, collapsed onto disagreement with a
// reference tuple z_star (bit j set = content differs at S_q[j], so index 0
// is z_star itself). f = Pr[answer 1, contents] - Pr[contents]/2 and mu is
// the content marginal; sum |f| <= 1/2 and f(z_star) = +-mu(z_star)/2
// whenever the contents pin the answer.
struct PosteriorTables {
    pta::SignedTable f;
    pta::SignedTable mu;
};

inline PosteriorTables build_posterior_tables(const std::vector<PosteriorRow>& rows,
                                              const std::vector<uint64_t>& z_star) {
    int k = int(z_star.size());
    if (k < 1 || k > 20) throw std::invalid_argument("need 1..20 reference coordinates");
    PosteriorTables t{pta::SignedTable(2, k), pta::SignedTable(2, k)};
    double total = 0;
    for (const PosteriorRow& r : rows) total += r.weight;
    if (total <= 0.0) throw std::invalid_argument("no candidate weight to normalize");
    for (const PosteriorRow& r : rows) {
        if (r.z.size() != z_star.size())
            throw std::invalid_argument("row tuple arity mismatch");
        size_t mask = 0;
        for (int j = 0; j < k; j++)
            if (r.z[size_t(j)] != z_star[size_t(j)]) mask |= size_t(1) << j;
        double wbar = r.weight / total;
        t.mu.v[mask] += wbar;
        t.f.v[mask] += r.answer == 1 ? 0.5 * wbar : -0.5 * wbar;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Decoder
// ---------------------------------------------------------------------------

struct BobResult {
    bool ran = false;                // false when a flag abort stopped everything
    std::vector<uint64_t> S_q;       // distinct probed addresses, replay order
    std::vector<uint64_t> z_replay;  // reconstructed-memory contents at S_q
    int replay_answer = -1;
    double pr_wq = 0;       // posterior probability that c0 covers the probed epoch-i cells
    bool good_default = false;  // goodness under the default threshold
    bool good_used = false;     // goodness under the configured threshold
    std::vector<int> Y;         // positions into S_q
    bool y_in_c1 = false;
    double posterior = 0.5;  // final conditioned bias, when reached
    int output = 0;
    // 0 = full run; 1 = encoder flag abort; 2 = not good (or no candidate);
    // 3 = no usable peak epsilon; 4 = peak subset not in the public sample.
    int abort_code = 0;
};

// Replay on everything except the hidden epoch: prefix epochs from u_minus_i,
// then the c0/c2 overlays. Under W_q (c0 covering the epoch-i cells the true
// execution probes) every probe reads the true value, by induction on the
// probe sequence, so the replayed answer is exact.
inline BobResult bob_simulate(ToyProblem& toy, const EpochData& u_minus_i,
                              const AliceMessages& msg, uint64_t q, const ProtocolConfig& cfg,
                              Rng& coin) {
    BobResult res;
    if (!msg.c0_ok || !msg.c1_ok) {
        res.abort_code = 1;
        res.output = coin.bit();
        return res;
    }
    ProblemDims dims = dims_for(toy, cfg.epoch);
    double p = cfg.resolved_p(toy.word_bits(), dims.t_u);

    CellMemory mem(toy.word_bits());
    for (int j = toy.ell(); j > cfg.epoch; j--) {
        mem.begin_epoch(j);
        for (const CellUpdate& u : toy.epoch_updates(j, u_minus_i.data[size_t(j)]))
            toy.structure().update(mem, u);
    }
    for (const CellRecord& r : msg.c2) mem.overlay(r.addr, r.value);
    for (const CellRecord& r : msg.c0) mem.overlay(r.addr, r.value, cfg.epoch);

    ProbeTrace tr;
    mem.begin_query(&tr);
    res.replay_answer = toy.structure().query(mem, q);
    mem.end_query();
    res.ran = true;
    res.S_q = tr.distinct_addresses();
    for (uint64_t addr : res.S_q) res.z_replay.push_back(mem.peek(addr));

    std::vector<PosteriorRow> rows =
        enumerate_posterior(toy, u_minus_i, cfg, msg.c0, msg.c2, q, res.S_q);
    double total = 0, wq_mass = 0, ans_mass = 0;
    for (const PosteriorRow& r : rows) {
        total += r.weight;
        if (r.wq) wq_mass += r.weight;
        if (r.answer == 1) ans_mass += r.weight;
    }
    if (total <= 0.0) {
        res.abort_code = 2;
        res.output = coin.bit();
        return res;
    }
    res.pr_wq = wq_mass / total;

    double thr_default = std::pow(p, 32.0 * double(dims.t_q) / double(dims.ell)) / 4.0;
    double thr_used = cfg.good_threshold >= 0.0 ? cfg.good_threshold : thr_default;
    bool narrow = int64_t(res.S_q.size()) <= 32 * dims.t_q;
    res.good_default = narrow && res.pr_wq >= thr_default;
    res.good_used = narrow && res.pr_wq >= thr_used;
    if (!res.good_used) {
        res.abort_code = 2;
        res.output = coin.bit();
        return res;
    }

    if (res.S_q.empty()) {
        // The query probes nothing: the posterior needs no content conditioning.
        res.y_in_c1 = true;
        res.posterior = ans_mass / total;
        res.output = res.posterior > 0.5 ? 1 : 0;
        return res;
    }
    int k = int(res.S_q.size());
    if (k > 20) {  // the boolean table would blow the table guard
        res.abort_code = 2;
        res.good_used = res.good_default = false;
        res.output = coin.bit();
        return res;
    }

    PosteriorTables tables = build_posterior_tables(rows, res.z_replay);
    double peak = std::fabs(tables.f.v[0]);
    // The peak finder needs eps <= |h(0)| and its polynomial guard needs
    // eps >= 2^(1-4k); soften the configured value into that window.
    double eps_cfg = cfg.find_eps >= 0.0 ? cfg.find_eps : thr_used;
    double floor_eps = std::ldexp(1.0, 1 - 4 * k);
    double eps = std::clamp(eps_cfg, floor_eps, 0.5);
    eps = std::min(eps, peak);
    if (!(eps >= floor_eps) || eps <= 0.0) {
        res.abort_code = 3;
        res.output = coin.bit();
        return res;
    }

    pta::PeakCert cert = pta::find_peak_subset(tables.f, eps);
    res.Y = cert.Y;

    std::unordered_map<uint64_t, uint64_t> c1_map;
    for (const CellRecord& r : msg.c1) c1_map[r.addr] = r.value;
    std::vector<uint64_t> y;
    res.y_in_c1 = true;
    for (int pos : res.Y) {
        auto it = c1_map.find(res.S_q[size_t(pos)]);
        if (it == c1_map.end()) {
            res.y_in_c1 = false;
            break;
        }
        y.push_back(it->second);
    }
    if (!res.y_in_c1) {
        res.abort_code = 4;
        res.output = coin.bit();
        return res;
    }

    double num = 0, den = 0;
    for (const PosteriorRow& r : rows) {
        bool match = true;
        for (size_t j = 0; j < res.Y.size(); j++)
            if (r.z[size_t(res.Y[j])] != y[j]) match = false;
        if (!match) continue;
        den += r.weight;
        if (r.answer == 1) num += r.weight;
    }
    if (den <= 0.0)
        throw std::logic_error("content conditioning eliminated the true candidate");
    res.posterior = num / den;
    res.output = res.posterior > 0.5 ? 1 : 0;
    return res;
}

// ---------------------------------------------------------------------------
// Monte Carlo advantage estimation
// ---------------------------------------------------------------------------

struct TrialRow {
    int64_t trial;
    int epoch;
    int64_t c0_size, c1_size, c2_size;
    int64_t bits;
    int wq;
    int good;
    int y_size;
    int y_in_c1;
    int output;
    int truth;
};

struct AdvantageReport {
    std::vector<TrialRow> rows;
    int64_t trials = 0;
    double advantage = 0;  // success rate minus 1/2
    double wq_rate = 0;
    double good_rate = 0;
    double good_rate_default = 0;  // under the default threshold, logged alongside
    int64_t max_bits = 0;
    int64_t max_epoch_probes = 0;  // max over trials of T_q^i on the true trace
    int64_t flag_aborts = 0;
};

// Each trial draws a fresh hard-distribution input from a trial-indexed seed,
// runs the true execution, produces the encoder messages, and lets the
// decoder predict. Trials are independent and seed-addressed, so any subset
// reproduces bit-identically.
inline AdvantageReport estimate_advantage(ToyProblem& toy, const ProtocolConfig& cfg,
                                          int64_t trials) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    ProblemDims dims = dims_for(toy, cfg.epoch);
    AdvantageReport rep;
    rep.trials = trials;
    rep.rows.reserve(size_t(trials));
    int64_t successes = 0, wq_count = 0, good_count = 0, good_default_count = 0;

    for (int64_t t = 0; t < trials; t++) {
        Rng trial_rng(mix64(cfg.seed, uint64_t(t)));
        Rng data_rng = trial_rng.split();
        Rng alice_rng = trial_rng.split();
        Rng coin_rng = trial_rng.split();
        uint64_t public_seed = trial_rng.next();

        EpochData ed = sample_epoch_data(toy, data_rng);
        uint64_t q = toy.sample_query(data_rng);
        RunResult run = run_toy(toy, ed, q);
        int truth = run.answer;

        AliceMessages msg = alice_messages(run.memory, cfg, dims, public_seed, alice_rng);

        bool wq = true;
        for (const ProbeTrace::Probe& pr : run.trace.probes) {
            if (pr.epoch != cfg.epoch) continue;
            bool found = false;
            for (const CellRecord& r : msg.c0)
                if (r.addr == pr.addr) found = true;
            if (!found) wq = false;
        }
        rep.max_epoch_probes = std::max(rep.max_epoch_probes, run.trace.in_epoch(cfg.epoch));

        EpochData hidden = ed;
        hidden.data[size_t(cfg.epoch)] = 0;  // the decoder never sees epoch i
        BobResult bob = bob_simulate(toy, hidden, msg, q, cfg, coin_rng);

        if (wq && msg.c0_ok && msg.c1_ok && bob.replay_answer != truth)
            throw std::logic_error("replay under a covering sample must match the truth");
        if (msg.c0_ok && double(msg.c0.size()) > msg.cap_cells)
            throw std::logic_error("c0 breached its size cap without aborting");
        if (msg.c1_ok && double(msg.c1.size()) > msg.cap_cells)
            throw std::logic_error("c1 breached its size cap without aborting");

        if (bob.output == truth) successes++;
        if (wq) wq_count++;
        if (bob.good_used) good_count++;
        if (bob.good_default) good_default_count++;
        if (!msg.c0_ok || !msg.c1_ok) rep.flag_aborts++;
        rep.max_bits = std::max(rep.max_bits, msg.bits);

        rep.rows.push_back({t, cfg.epoch, int64_t(msg.c0.size()), int64_t(msg.c1.size()),
                            int64_t(msg.c2.size()), msg.bits, wq ? 1 : 0, bob.good_used ? 1 : 0,
                            int(bob.Y.size()), bob.y_in_c1 ? 1 : 0, bob.output, truth});
    }
    rep.advantage = double(successes) / double(trials) - 0.5;
    rep.wq_rate = double(wq_count) / double(trials);
    rep.good_rate = double(good_count) / double(trials);
    rep.good_rate_default = double(good_default_count) / double(trials);
    return rep;
}

inline void write_report_csv(std::ostream& os, const AdvantageReport& rep) {
    os << "trial,epoch,|c0|,|c1|,|c2|,bits,W_q,good,Y_size,Y_in_c1,output,truth\n";
    for (const TrialRow& r : rep.rows)
        os << r.trial << ',' << r.epoch << ',' << r.c0_size << ',' << r.c1_size << ','
           << r.c2_size << ',' << r.bits << ',' << r.wq << ',' << r.good << ',' << r.y_size
           << ',' << r.y_in_c1 << ',' << r.output << ',' << r.truth << '\n';
    os << "# summary trials=" << rep.trials << " advantage=" << rep.advantage
       << " wq_rate=" << rep.wq_rate << " good_rate=" << rep.good_rate
       << " good_rate_default=" << rep.good_rate_default << " flag_aborts=" << rep.flag_aborts
       << " max_bits=" << rep.max_bits << " max_epoch_probes=" << rep.max_epoch_probes << '\n';
}

// ---------------------------------------------------------------------------
// Concrete toys
// ---------------------------------------------------------------------------

// 14 one-bit updates in epochs of sizes 8/4/2 (geometric, ratio 2); update j
// writes its bit into cell j. The query asks the parity of cells 0..q. With
// min_query >= 8 every query straddles epoch 2, which keeps the truth
// conditionally uniform given everything outside that epoch.
class PrefixParityToy : public ToyProblem {
public:
    explicit PrefixParityToy(int min_query = 0) : min_query_(min_query) {
        if (min_query < 0 || min_query >= 14) throw std::invalid_argument("min_query in 0..13");
    }

    int ell() const override { return 3; }
    int word_bits() const override { return 8; }
    int64_t update_budget() const override { return 1; }
    int64_t query_budget() const override { return 14; }
    int64_t epoch_size(int i) const override {
        check_epoch(i);
        return int64_t(1) << i;  // 8, 4, 2 for epochs 3, 2, 1
    }
    int epoch_data_bits(int i) const override { return int(epoch_size(i)); }
    std::vector<CellUpdate> epoch_updates(int i, uint64_t data) const override {
        check_epoch(i);
        std::vector<CellUpdate> ups;
        int64_t start = epoch_start(i);
        for (int64_t j = 0; j < epoch_size(i); j++)
            ups.push_back({uint64_t(start + j), (data >> j) & 1});
        return ups;
    }
    CellStructure& structure() override { return ds_; }
    uint64_t sample_query(Rng& rng) const override {
        return uint64_t(min_query_) + rng.below(uint64_t(14 - min_query_));
    }

    int64_t epoch_start(int i) const {
        check_epoch(i);
        int64_t s = 0;
        for (int j = 3; j > i; j--) s += epoch_size(j);
        return s;
    }

private:
    static void check_epoch(int i) {
        if (i < 1 || i > 3) throw std::invalid_argument("epoch must be 1..3");
    }
    class Store : public CellStructure {
    public:
        void update(WordStore& mem, const CellUpdate& u) override { mem.write(u.key, u.value); }
        int query(WordStore& mem, uint64_t q) override {
            if (q >= 14) throw std::invalid_argument("prefix end must be 0..13");
            uint64_t acc = 0;
            for (uint64_t j = 0; j <= q; j++) acc ^= mem.read(j);
            return int(acc & 1);
        }
    };
    Store ds_;
    int min_query_;
};

// Parity searching over a family of layered graphs: epoch i sets every edge
// weight of the depth-i member, one cell per edge, and the query XORs the
// weights along its per-graph paths (depth-sum probes in total). Every query
// crosses every epoch, so the truth stays conditionally uniform no matter
// which epoch is hidden.
class ButterflyParityToy : public ToyProblem {
public:
    ButterflyParityToy(int ell, int B, int word_bits = 8)
        : inst_{ell, B}, w_(word_bits), ds_(inst_) {
        if (ell < 1 || B < 2) throw std::invalid_argument("need ell >= 1, B >= 2");
        for (int i = 1; i <= ell; i++)
            if (inst_.graph(i).edge_count() > 63)
                throw std::length_error("epoch data would not fit one word");
    }

    int ell() const override { return inst_.ell; }
    int word_bits() const override { return w_; }
    int64_t update_budget() const override { return 1; }
    int64_t query_budget() const override { return inst_.delta(); }
    int64_t epoch_size(int i) const override { return inst_.graph(i).edge_count(); }
    int epoch_data_bits(int i) const override { return int(epoch_size(i)); }
    std::vector<CellUpdate> epoch_updates(int i, uint64_t data) const override {
        butterfly::Graph g = inst_.graph(i);
        std::vector<CellUpdate> ups;
        ups.reserve(size_t(g.edge_count()));
        int64_t idx = 0;
        for (int j = 0; j < g.d; j++)
            for (int64_t f = 0; f < g.layer_size(); f++)
                for (int wd = 0; wd < g.B; wd++, idx++)
                    ups.push_back({slot(i, {j, f, wd}), (data >> idx) & 1});
        return ups;
    }
    CellStructure& structure() override { return ds_; }
    uint64_t sample_query(Rng& rng) const override {
        uint64_t side = uint64_t(inst_.side());
        return rng.below(side) * side + rng.below(side);
    }

    const parity::Instance& instance() const { return inst_; }
    uint64_t pack_query(const parity::Query& q) const {
        return uint64_t(q.s) * uint64_t(inst_.side()) + uint64_t(q.t);
    }
    // Global edge cell: graphs laid out end to end, edges in (level, source,
    // digit) order within a graph.
    uint64_t slot(int graph, const butterfly::EdgeId& e) const {
        int64_t base = 0;
        for (int i = 1; i < graph; i++) base += inst_.graph(i).edge_count();
        butterfly::Graph g = inst_.graph(graph);
        return uint64_t(base + (int64_t(e.level) * g.layer_size() + e.from_index) * g.B +
                        e.to_digit);
    }

private:
    class PathXor : public CellStructure {
    public:
        explicit PathXor(const parity::Instance& inst) : inst_(inst) {}
        void update(WordStore& mem, const CellUpdate& u) override { mem.write(u.key, u.value); }
        int query(WordStore& mem, uint64_t q) override {
            int64_t side = inst_.side();
            parity::Query pq{int64_t(q) / side, int64_t(q) % side};
            uint64_t acc = 0;
            for (int i = 1; i <= inst_.ell; i++) {
                auto [si, ti] = parity::per_graph_pair(inst_, pq, i);
                butterfly::Graph g = inst_.graph(i);
                int64_t base = 0;
                for (int j = 1; j < i; j++) base += inst_.graph(j).edge_count();
                for (const butterfly::EdgeId& e : butterfly::path_edges(si, ti, g))
                    acc ^= mem.read(uint64_t(
                        base + (int64_t(e.level) * g.layer_size() + e.from_index) * g.B +
                        e.to_digit));
            }
            return int(acc & 1);
        }

    private:
        parity::Instance inst_;
    };

    parity::Instance inst_;
    int w_;
    PathXor ds_;
};

}  // namespace probelab::cellprobe
