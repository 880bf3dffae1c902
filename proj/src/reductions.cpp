#include "probelab/reductions.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <tuple>

namespace probelab::reductions {

using butterfly::Rect;
using parity::Instance;
using parity::Query;
using parity::Update;

std::array<Point, 4> rectangle_corners(const Rect& r) {
    return {Point{2 * r.s_lo, 2 * r.t_lo}, Point{2 * r.s_lo, 2 * r.t_hi + 1},
            Point{2 * r.s_hi + 1, 2 * r.t_lo}, Point{2 * r.s_hi + 1, 2 * r.t_hi + 1}};
}

static Rect update_rectangle(const Instance& inst, const Update& u) {
    return butterfly::edge_rectangle(u.edge, u.graph, inst.ell, inst.B);
}

void RectParityDriver::apply_update(const Update& u) {
    seen_.apply_update(u);  // validates and enforces set-once
    if (u.weight == 1) rects_.push_back(update_rectangle(seen_.instance(), u));
}

int RectParityDriver::answer(const Query& q) {
    if (q.s < 0 || q.s >= seen_.instance().side() || q.t < 0 || q.t >= seen_.instance().side())
        throw std::out_of_range("query out of range");
    int acc = 0;
    for (const Rect& r : rects_)
        if (r.contains(q.s, q.t)) acc ^= 1;
    return acc;
}

// every corner coordinate any update could produce, for compression
static void all_corner_points(const Instance& inst,
                              const std::function<void(const CornerRec&)>& sink) {
    for (int i = 1; i <= inst.ell; i++) {
        butterfly::Graph g = inst.graph(i);
        for (int j = 0; j < g.d; j++)
            for (int64_t f = 0; f < g.layer_size(); f++)
                for (int wd = 0; wd < g.B; wd++) {
                    Rect r = butterfly::edge_rectangle({j, f, wd}, i, inst.ell, inst.B);
                    auto c = rectangle_corners(r);
                    for (int n = 0; n < 4; n++)
                        sink(CornerRec{c[size_t(n)], i, j, f, wd, n + 1});
                }
    }
}

RangeParityDriver::RangeParityDriver(const Instance& inst)
    : seen_(inst), index_([&inst] {
          std::vector<int64_t> xs, ys;
          all_corner_points(inst, [&](const CornerRec& c) {
              xs.push_back(c.pt.x);
              ys.push_back(c.pt.y);
          });
          return DominanceIndex(std::move(xs), std::move(ys));
      }()) {}

void RangeParityDriver::apply_update(const Update& u) {
    seen_.apply_update(u);
    if (u.weight != 1) return;  // weight 0: do nothing
    for (const Point& p : rectangle_corners(update_rectangle(seen_.instance(), u)))
        index_.insert(p);
}

int RangeParityDriver::answer(const Query& q) {
    if (q.s < 0 || q.s >= seen_.instance().side() || q.t < 0 || q.t >= seen_.instance().side())
        throw std::out_of_range("query out of range");
    return index_.parity({2 * q.s, 2 * q.t});
}

int64_t SelectionLayout::b_value(int64_t index) const {
    int64_t batch = index / (delta + 1), off = index % (delta + 1);
    return scale * batch + off + 1;
}

SelectionLayout build_selection_layout(const Instance& inst) {
    SelectionLayout lay;
    lay.delta = inst.delta();
    lay.scale = lay.delta + 2;
    all_corner_points(inst, [&](const CornerRec& c) { lay.corners.push_back(c); });
    lay.b_array_len = lay.psize() * (lay.delta + 1);

    // rank bijections: sort by coordinate, ties broken by provenance
    auto rank_of = [&](bool by_x) {
        std::vector<int64_t> order(lay.corners.size());
        for (size_t i = 0; i < order.size(); i++) order[i] = int64_t(i);
        std::sort(order.begin(), order.end(), [&](int64_t a, int64_t b) {
            const CornerRec& ca = lay.corners[size_t(a)];
            const CornerRec& cb = lay.corners[size_t(b)];
            auto key = [&](const CornerRec& c) {
                return std::tuple(by_x ? c.pt.x : c.pt.y, c.graph, c.level, c.from_index,
                                  c.to_digit, c.corner);
            };
            return key(ca) < key(cb);
        });
        std::vector<int64_t> rank(order.size());
        for (size_t pos = 0; pos < order.size(); pos++) rank[size_t(order[pos])] = int64_t(pos);
        return rank;
    };
    lay.rank_x = rank_of(true);
    lay.rank_y = rank_of(false);

    for (const CornerRec& c : lay.corners) {
        lay.xs_sorted.push_back(c.pt.x);
        lay.ys_sorted.push_back(c.pt.y);
        if (c.corner == 2 || c.corner == 3) lay.type23_by_x.push_back(c.pt);
    }
    std::sort(lay.xs_sorted.begin(), lay.xs_sorted.end());
    std::sort(lay.ys_sorted.begin(), lay.ys_sorted.end());
    std::sort(lay.type23_by_x.begin(), lay.type23_by_x.end(),
              [](const Point& a, const Point& b) { return a.x < b.x; });
    return lay;
}

RangeSelectDriver::RangeSelectDriver(const Instance& inst)
    : seen_(inst), layout_(build_selection_layout(inst)),
      sel_(layout_.array_len(), layout_.max_value()) {
    int64_t n_ell = inst.graph(inst.ell).edge_count();
    b_batch_ = (layout_.b_array_len + n_ell - 1) / n_ell;
}

void RangeSelectDriver::apply_update(const Update& u) {
    seen_.apply_update(u);
    int64_t ops = 0;
    if (u.graph == seen_.instance().ell) {
        // materialize the next slice of the B-array during epoch ell
        int64_t stop = std::min(layout_.b_array_len, b_written_ + b_batch_);
        for (; b_written_ < stop; b_written_++) {
            sel_.update(b_written_, layout_.b_value(b_written_));
            ops++;
        }
    }
    // locate this edge's four corners in P: they were generated contiguously
    const butterfly::Graph g = seen_.instance().graph(u.graph);
    int64_t base = 0;
    for (int i = 1; i < u.graph; i++) base += seen_.instance().graph(i).edge_count() * 4;
    base += ((int64_t(u.edge.level) * g.layer_size() + u.edge.from_index) * g.B +
             u.edge.to_digit) * 4;
    for (int n = 0; n < 4; n++) {
        const CornerRec& c = layout_.corners[size_t(base + n)];
        // weight 1 pins the rank value on corners 1 and 4; weight 0 on 2 and 3
        bool ranked = (u.weight == 1) ? (c.corner == 1 || c.corner == 4)
                                      : (c.corner == 2 || c.corner == 3);
        int64_t value = ranked ? layout_.rank_y[size_t(base + n)] * layout_.scale
                               : layout_.psize() * layout_.scale;
        sel_.update(layout_.b_array_len + layout_.rank_x[size_t(base + n)], value);
        ops++;
    }
    max_ops_ = std::max(max_ops_, ops);
}

SelectionParams RangeSelectDriver::selection_params(const Query& q) const {
    const auto& xs = layout_.xs_sorted;
    const auto& ys = layout_.ys_sorted;
    int64_t j = std::upper_bound(xs.begin(), xs.end(), 2 * q.s) - xs.begin() - 1;
    int64_t h = std::upper_bound(ys.begin(), ys.end(), 2 * q.t) - ys.begin() - 1;
    int64_t r = h * (layout_.delta + 1) + layout_.delta;
    // K0: corners of type 2/3 dominated by (2s,2t) — independent of weights
    int64_t k0 = 0;
    for (const Point& p : layout_.type23_by_x) {
        if (p.x > 2 * q.s) break;
        if (p.y <= 2 * q.t) k0++;
    }
    return {j, h, r + 1 + k0, r};
}

int RangeSelectDriver::answer(const Query& q) {
    if (!seen_.all_set()) throw std::logic_error("selection driver queried before full assignment");
    if (q.s < 0 || q.s >= seen_.instance().side() || q.t < 0 || q.t >= seen_.instance().side())
        throw std::out_of_range("query out of range");
    SelectionParams p = selection_params(q);
    int64_t returned;
    if (p.j < 0) {
        // no corner lies at or left of 2s: pure B-array prefix
        returned = sel_.select(layout_.b_array_len - 1, p.k);
    } else {
        returned = sel_.select(p.j + layout_.b_array_len, p.k);
    }
    if (trace_on_) trace_.push_back({queries_, q.s, q.t, p.j, p.h, p.k, p.r, returned});
    queries_++;
    return int(((p.r - returned) % 2 + 2) % 2);
}

std::unique_ptr<ParitySolver> make_solver(const std::string& name, const Instance& inst) {
    if (name == "reference") return std::make_unique<ReferenceSolver>(inst);
    if (name == "rectparity") return std::make_unique<RectParityDriver>(inst);
    if (name == "rangeparity") return std::make_unique<RangeParityDriver>(inst);
    if (name == "rangeselect") return std::make_unique<RangeSelectDriver>(inst);
    throw std::invalid_argument("unknown solver '" + name + "'");
}

} // namespace probelab::reductions
