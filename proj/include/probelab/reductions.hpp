#pragma once
#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "probelab/butterfly.hpp"
#include "probelab/index_structures.hpp"
#include "probelab/parity_search.hpp"

namespace probelab::reductions {

// Doubled-coordinate corners of an inclusive rectangle [x1,x2] x [y1,y2]:
//   p1 = (2x1, 2y1)    p2 = (2x1, 2y2+1)
//   p3 = (2x2+1, 2y1)  p4 = (2x2+1, 2y2+1)
// The query point (x, y) maps to (2x, 2y); it dominates an odd number of the
// four corners exactly when (x, y) lies inside the rectangle.
std::array<Point, 4> rectangle_corners(const butterfly::Rect& r);

// Common face of the reference solver and the reduction drivers so the
// cross-checker can feed them the same update/query streams.
class ParitySolver {
public:
    virtual ~ParitySolver() = default;
    virtual void apply_update(const parity::Update& u) = 0;
    virtual int answer(const parity::Query& q) = 0;
    virtual std::string name() const = 0;
};

class ReferenceSolver : public ParitySolver {
public:
    explicit ReferenceSolver(const parity::Instance& inst) : state_(inst) {}
    void apply_update(const parity::Update& u) override { state_.apply_update(u); }
    int answer(const parity::Query& q) override {
        return parity::answer_query(state_.instance(), state_, q);
    }
    std::string name() const override { return "reference"; }

private:
    parity::WeightState state_;
};

// Step one of the chain: weight-1 edges become rectangles, a query asks for
// the parity of the number of rectangles stabbed by (s, t).
class RectParityDriver : public ParitySolver {
public:
    explicit RectParityDriver(const parity::Instance& inst) : seen_(inst) {}
    void apply_update(const parity::Update& u) override;
    int answer(const parity::Query& q) override;
    std::string name() const override { return "rectparity"; }

private:
    parity::WeightState seen_;  // set-once bookkeeping
    std::vector<butterfly::Rect> rects_;
};

// Step two: each rectangle contributes its four corners to a 2D dominance
// index; the answer is the dominance-count parity at (2s, 2t).
class RangeParityDriver : public ParitySolver {
public:
    explicit RangeParityDriver(const parity::Instance& inst);
    void apply_update(const parity::Update& u) override;
    int answer(const parity::Query& q) override;
    std::string name() const override { return "rangeparity"; }
    int64_t probes() const { return index_.probes(); }

private:
    parity::WeightState seen_;
    DominanceIndex index_;
};

// The fixed geometry of the selection reduction: the corner multiset P with
// provenance, rank bijections, and the B-array of sentinel batch values.
struct CornerRec {
    Point pt;
    int graph;   // 1-based, doubles as epoch index
    int level;
    int64_t from_index;
    int to_digit;
    int corner;  // 1..4 as in rectangle_corners
};

struct SelectionLayout {
    int delta = 0;              // sum of depths Delta
    int64_t scale = 0;          // value scale Delta + 2
    std::vector<CornerRec> corners;            // P, |P| = 4n
    std::vector<int64_t> rank_x, rank_y;       // P-index -> rank in [0, |P|)
    int64_t b_array_len = 0;                   // |P| * (Delta + 1)
    std::vector<int64_t> xs_sorted, ys_sorted; // all corner coordinates
    std::vector<Point> type23_by_x;            // corners 2 and 3, sorted by x

    int64_t psize() const { return int64_t(corners.size()); }
    int64_t array_len() const { return b_array_len + psize(); }
    int64_t max_value() const { return psize() * scale; }
    int64_t b_value(int64_t index) const;      // (Delta+2)j + i + 1 at (Delta+1)j + i
};

SelectionLayout build_selection_layout(const parity::Instance& inst);

struct SelectionParams {
    int64_t j, h, k, r;
};

// Step three: parity via prefix range selection over C = B-array followed by
// A (one entry per corner, indexed by rank_x). The B-array is materialized
// incrementally during the epoch-ell updates; each update writes O(Delta)
// entries. Queries demand a fully assigned instance.
class RangeSelectDriver : public ParitySolver {
public:
    struct TraceRow {
        int64_t query_index, s, t, j, h, k, r, returned;
    };

    explicit RangeSelectDriver(const parity::Instance& inst);
    void apply_update(const parity::Update& u) override;
    int answer(const parity::Query& q) override;
    std::string name() const override { return "rangeselect"; }

    SelectionParams selection_params(const parity::Query& q) const;
    const SelectionLayout& layout() const { return layout_; }
    int64_t max_updates_per_op() const { return max_ops_; }
    int64_t probes() const { return sel_.probes(); }
    void enable_trace(bool on) { trace_on_ = on; }
    const std::vector<TraceRow>& trace() const { return trace_; }

private:
    parity::WeightState seen_;
    SelectionLayout layout_;
    SelectionIndex sel_;
    int64_t b_batch_;        // B-entries per epoch-ell update, ceil(|B|/n_ell)
    int64_t b_written_ = 0;
    int64_t max_ops_ = 0;
    int64_t queries_ = 0;
    bool trace_on_ = false;
    std::vector<TraceRow> trace_;
};

std::unique_ptr<ParitySolver> make_solver(const std::string& name,
                                          const parity::Instance& inst);

} // namespace probelab::reductions
