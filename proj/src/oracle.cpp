#include "kpeaks/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "kpeaks/errors.hpp"
#include "kpeaks/union_find.hpp"

namespace kpeaks {

namespace {

std::vector<Rational> sorted_values_at(std::span<const Line> lines, const Rational& x) {
    std::vector<Rational> vals;
    vals.reserve(lines.size());
    for (const Line& l : lines) vals.push_back(l.value_at(x));
    std::sort(vals.begin(), vals.end());
    return vals;
}

std::vector<int> order_at(std::span<const Line> lines, const Rational& x) {
    std::vector<std::pair<Rational, int>> v;
    v.reserve(lines.size());
    for (const Line& l : lines) v.emplace_back(l.value_at(x), l.id);
    std::sort(v.begin(), v.end());
    std::vector<int> ids;
    ids.reserve(v.size());
    for (auto& [val, id] : v) ids.push_back(id);
    return ids;
}

}  // namespace

LevelSweep::LevelSweep(std::span<const Line> lines, const Interval& I)
    : lines_(lines.begin(), lines.end()), interval_(I) {
    if (lines_.empty()) throw EmptyInput();

    int max_id = 0;
    for (const Line& l : lines_) max_id = std::max(max_id, l.id);
    index_of_id_.assign(max_id + 1, -1);
    for (size_t i = 0; i < lines_.size(); ++i) {
        if (lines_[i].id < 0 || index_of_id_[lines_[i].id] != -1) {
            throw std::invalid_argument("line ids must be unique and nonnegative");
        }
        index_of_id_[lines_[i].id] = static_cast<int>(i);
    }

    const std::vector<Rational> global = event_abscissas(lines);

    breaks_.push_back(I.lo);
    for (const Rational& e : global) {
        if (I.lo < e && e < I.hi) breaks_.push_back(e);
    }
    if (I.hi != I.lo) breaks_.push_back(I.hi);

    break_vals_.reserve(breaks_.size());
    for (const Rational& x : breaks_) break_vals_.push_back(sorted_values_at(lines_, x));

    for (size_t s = 0; s + 1 < breaks_.size(); ++s) {
        seg_order_.push_back(order_at(lines_, midpoint(breaks_[s], breaks_[s + 1])));
    }

    // Orders just outside a closed interval whose endpoint sits on an event;
    // needed to classify boundary peaks.
    auto outside_order = [&](const Rational& endpoint, bool left_side) -> std::vector<int> {
        if (!std::binary_search(global.begin(), global.end(), endpoint)) return {};
        Rational probe;
        if (left_side) {
            auto it = std::lower_bound(global.begin(), global.end(), endpoint);
            probe = it == global.begin() ? endpoint - Rational(1) : midpoint(*std::prev(it), endpoint);
        } else {
            auto it = std::upper_bound(global.begin(), global.end(), endpoint);
            probe = it == global.end() ? endpoint + Rational(1) : midpoint(endpoint, *it);
        }
        return order_at(lines_, probe);
    };
    left_outside_ = outside_order(I.lo, true);
    right_outside_ = outside_order(I.hi, false);
}

LevelResult klevel_sweep(std::span<const Line> lines, int k, const Interval& I) {
    return LevelSweep(lines, I).level(k);
}

LevelResult LevelSweep::level(int k) const {
    const int n = static_cast<int>(lines_.size());
    if (k < 1 || k > n) throw std::invalid_argument("level k out of range");

    LevelResult res;
    res.sample.breakpoints = breaks_;
    for (const auto& vals : break_vals_) res.sample.values.push_back(vals[k - 1]);
    for (const auto& order : seg_order_) res.sample.defining.push_back(order[k - 1]);

    auto peak_kind = [&](int left_id, int right_id) -> std::optional<PeakKind> {
        if (left_id == right_id) return std::nullopt;
        const int sl = by_id(left_id).a.sign();
        const int sr = by_id(right_id).a.sign();
        if (sl > 0 && sr < 0) return PeakKind::maximal;
        if (sl < 0 && sr > 0) return PeakKind::minimal;
        return std::nullopt;
    };
    auto emit = [&](size_t break_idx, int left_id, int right_id, bool boundary) {
        if (auto kind = peak_kind(left_id, right_id)) {
            res.peaks.push_back(Peak{Point{breaks_[break_idx], break_vals_[break_idx][k - 1]},
                                     *kind, left_id, right_id, boundary});
        }
    };

    if (!left_outside_.empty()) {
        const int right = seg_order_.empty()
                              ? (right_outside_.empty() ? left_outside_[k - 1] : right_outside_[k - 1])
                              : seg_order_.front()[k - 1];
        emit(0, left_outside_[k - 1], right, true);
    }
    for (size_t i = 1; i + 1 < breaks_.size(); ++i) {
        emit(i, seg_order_[i - 1][k - 1], seg_order_[i][k - 1], false);
    }
    if (!right_outside_.empty() && breaks_.size() > 1) {
        emit(breaks_.size() - 1, seg_order_.back()[k - 1], right_outside_[k - 1], true);
    }
    return res;
}

MstResult mst_at(int nodes, std::span<const ParamEdge> edges, const Rational& x0) {
    std::vector<std::pair<Rational, int>> order;
    order.reserve(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
        order.emplace_back(edges[i].weight_at(x0), static_cast<int>(i));
    }
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return edges[a.second].id < edges[b.second].id;
    });

    UnionFind uf(nodes);
    MstResult res;
    std::vector<const ParamEdge*> tree;
    for (const auto& [w, i] : order) {
        const ParamEdge& e = edges[i];
        if (uf.unite(e.u, e.v)) {
            tree.push_back(&e);
            if (uf.components() == 1) break;
        }
    }
    if (uf.components() != 1) throw Disconnected();

    Rational max_w = tree.front()->weight_at(x0);
    for (const ParamEdge* e : tree) {
        res.tree_edge_ids.push_back(e->id);
        if (e->a.sign() > 0) ++res.positive_slope_edges;
        const Rational w = e->weight_at(x0);
        if (w > max_w) max_w = w;
    }
    std::sort(res.tree_edge_ids.begin(), res.tree_edge_ids.end());

    const ParamEdge* bottleneck = nullptr;
    for (const ParamEdge* e : tree) {
        if (e->weight_at(x0) == max_w && (!bottleneck || e->id < bottleneck->id)) bottleneck = e;
    }
    res.bottleneck = SbeResult{*bottleneck, max_w};
    return res;
}

namespace {

// Smallest threshold whose at-or-below subgraph has at most `components`
// parts. When the bare node set already satisfies the bound, the threshold is
// the smallest edge weight (thresholds range over attained weights).
SbeResult threshold_at(int nodes, std::span<const ParamEdge> edges, const Rational& x,
                       int components) {
    if (edges.empty()) throw Disconnected();
    std::vector<int> order(edges.size());
    for (size_t i = 0; i < edges.size(); ++i) order[i] = static_cast<int>(i);
    std::vector<Rational> w;
    w.reserve(edges.size());
    for (const ParamEdge& e : edges) w.push_back(e.weight_at(x));
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (w[i] != w[j]) return w[i] < w[j];
        return edges[i].id < edges[j].id;
    });

    if (nodes <= components) {
        return SbeResult{edges[order[0]], w[order[0]]};
    }

    UnionFind uf(nodes);
    std::vector<int> forest;
    for (int i : order) {
        if (uf.unite(edges[i].u, edges[i].v)) {
            forest.push_back(i);
            if (uf.components() <= components) {
                const Rational& threshold = w[i];
                int best = i;
                for (int f : forest) {
                    if (w[f] == threshold && edges[f].id < edges[best].id) best = f;
                }
                return SbeResult{edges[best], threshold};
            }
        }
    }
    throw Disconnected();
}

}  // namespace

SbeTrajectory sbe_trajectory(int nodes, std::span<const ParamEdge> edges, const Interval& I,
                             int components) {
    std::vector<Line> wlines;
    wlines.reserve(edges.size());
    for (const ParamEdge& e : edges) wlines.push_back(e.weight_line());

    std::vector<Rational> breaks;
    breaks.push_back(I.lo);
    for (const Rational& e : event_abscissas(wlines)) {
        if (I.lo < e && e < I.hi) breaks.push_back(e);
    }
    if (I.hi != I.lo) breaks.push_back(I.hi);

    std::vector<const ParamEdge*> by_id(edges.size() ? edges.back().id + 1 : 0, nullptr);
    for (const ParamEdge& e : edges) {
        if (e.id >= static_cast<int>(by_id.size())) by_id.resize(e.id + 1, nullptr);
        by_id[e.id] = &e;
    }

    SbeTrajectory res;
    res.sample.breakpoints = breaks;
    for (size_t s = 0; s + 1 < breaks.size(); ++s) {
        const SbeResult seg = threshold_at(nodes, edges, midpoint(breaks[s], breaks[s + 1]),
                                           components);
        res.sample.defining.push_back(seg.edge.id);
    }

    for (size_t i = 0; i < breaks.size(); ++i) {
        if (res.sample.defining.empty()) {
            res.sample.values.push_back(threshold_at(nodes, edges, breaks[i], components).weight);
            continue;
        }
        std::optional<Rational> value;
        if (i > 0) value = by_id[res.sample.defining[i - 1]]->weight_at(breaks[i]);
        if (i < res.sample.defining.size()) {
            const Rational right = by_id[res.sample.defining[i]]->weight_at(breaks[i]);
            if (value && *value != right) {
                throw std::logic_error("bottleneck trajectory discontinuous at a breakpoint");
            }
            value = right;
        }
        res.sample.values.push_back(*value);
    }

    for (size_t i = 1; i + 1 < breaks.size(); ++i) {
        const int left = res.sample.defining[i - 1];
        const int right = res.sample.defining[i];
        if (left == right) continue;
        const int sl = by_id[left]->a.sign();
        const int sr = by_id[right]->a.sign();
        if (sl > 0 && sr < 0) {
            res.peaks.push_back(Peak{Point{breaks[i], res.sample.values[i]}, PeakKind::maximal,
                                     left, right, false});
        } else if (sl < 0 && sr > 0) {
            res.peaks.push_back(Peak{Point{breaks[i], res.sample.values[i]}, PeakKind::minimal,
                                     left, right, false});
        }
    }
    return res;
}

}  // namespace kpeaks
