#include "kpeaks/pmst.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpeaks/errors.hpp"
#include "kpeaks/union_find.hpp"

namespace kpeaks {

namespace {

int partition_fanout(int n, int nodes) {
    const double r = std::ceil(std::pow(double(n) / double(nodes), 2.0 / 3.0));
    return std::max(1, std::min(n, static_cast<int>(r)));
}

// Dual cut line for "weight at x0 is at most c": Y <= -x0*X + c.
Halfplane weight_cut(const Rational& x0, const Rational& c) {
    return Halfplane{-x0, c, Halfplane::Orientation::below_or_on};
}

Rational vertex_height(const Point& v, const Rational& x0) {
    return v.x * x0 + v.y;  // inner product with (x0, 1)
}

}  // namespace

ParamGraph::ParamGraph(int nodes, std::vector<ParamEdge> edges)
    : nodes_(nodes), edges_(std::move(edges)) {
    if (nodes_ < 2) throw InvalidInstance("graph must have at least 2 nodes");
    for (const ParamEdge& e : edges_) {
        if (e.u < 0 || e.u >= nodes_ || e.v < 0 || e.v >= nodes_) {
            throw InvalidInstance("edge endpoint outside the node range");
        }
        if (e.u == e.v) throw InvalidInstance("self-loop edge");
    }

    {
        UnionFind uf(nodes_);
        for (const ParamEdge& e : edges_) uf.unite(e.u, e.v);
        if (uf.components() != 1) throw Disconnected();
    }

    std::vector<Line> wlines;
    wlines.reserve(edges_.size());
    for (const ParamEdge& e : edges_) wlines.push_back(e.weight_line());
    CanonicalLines canon = canonicalize(wlines);
    perturbed_ = canon.perturbed;
    epsilon_ = canon.epsilon;
    for (size_t i = 0; i < edges_.size(); ++i) {
        edges_[i].id = static_cast<int>(i);
        edges_[i].a = canon.lines[i].a;
        edges_[i].b = canon.lines[i].b;
    }

    std::vector<Point> duals;
    duals.reserve(edges_.size());
    for (const ParamEdge& e : edges_) duals.push_back(e.weight_line().dual());
    partition_ = build_partition(duals, partition_fanout(edge_count(), nodes_), /*probe_count=*/0);

    // Spanning forest per class, blind to weights: class connectivity in a
    // handful of edges.
    class_forest_.resize(partition_.classes.size());
    for (size_t ci = 0; ci < partition_.classes.size(); ++ci) {
        UnionFind uf(nodes_);
        for (int idx : partition_.classes[ci].point_index) {
            if (uf.unite(edges_[idx].u, edges_[idx].v)) class_forest_[ci].push_back(idx);
        }
    }
}

SbeResult ParamGraph::sbe_value_at(const Rational& x, int c) const {
    if (c < 1) throw std::invalid_argument("component bound c must be >= 1");
    std::vector<int> order(edges_.size());
    for (size_t i = 0; i < edges_.size(); ++i) order[i] = static_cast<int>(i);
    std::vector<Rational> w;
    w.reserve(edges_.size());
    for (const ParamEdge& e : edges_) w.push_back(e.weight_at(x));
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (w[i] != w[j]) return w[i] < w[j];
        return i < j;
    });

    // With c >= node count the bound already holds with no edges; thresholds
    // range over attained weights, so the answer is the lightest edge.
    if (nodes_ <= c) return SbeResult{edges_[order[0]], w[order[0]]};

    UnionFind uf(nodes_);
    std::vector<int> forest;
    for (int i : order) {
        if (uf.unite(edges_[i].u, edges_[i].v)) {
            forest.push_back(i);
            if (uf.components() <= c) {
                int best = i;
                for (int f : forest) {
                    if (w[f] == w[i] && f < best) best = f;
                }
                return SbeResult{edges_[best], w[i]};
            }
        }
    }
    throw Disconnected();
}

const ParamGraph::TrajPoint& ParamGraph::traj_point(const Rational& x) const {
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        auto it = traj_cache_.find(x);
        if (it != traj_cache_.end()) return it->second;
    }

    std::vector<int> order(edges_.size());
    for (size_t i = 0; i < edges_.size(); ++i) order[i] = static_cast<int>(i);
    std::vector<Rational> w;
    w.reserve(edges_.size());
    for (const ParamEdge& e : edges_) w.push_back(e.weight_at(x));
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (w[i] != w[j]) return w[i] < w[j];
        return i < j;
    });

    UnionFind uf(nodes_);
    TrajPoint tp;
    int best = -1;
    Rational max_w;
    for (int i : order) {
        if (!uf.unite(edges_[i].u, edges_[i].v)) continue;
        if (best < 0 || w[i] > max_w) {
            max_w = w[i];
            best = i;
        }
        if (edges_[i].a.sign() > 0) ++tp.positive_mst_edges;
        if (uf.components() == 1) break;
    }
    if (uf.components() != 1) throw Disconnected();
    tp.sbe = SbeResult{edges_[best], max_w};

    std::lock_guard<std::mutex> lock(cache_mu_);
    return traj_cache_.try_emplace(x, std::move(tp)).first->second;
}

SbeResult ParamGraph::sbe_one_shot(const Rational& x0) const {
    std::vector<Rational> heights;
    heights.reserve(partition_.classes.size() * 3);
    for (const auto& cls : partition_.classes) {
        for (const Point* v : {&cls.triangle.v0, &cls.triangle.v1, &cls.triangle.v2}) {
            heights.push_back(vertex_height(*v, x0));
        }
    }
    std::sort(heights.begin(), heights.end());
    heights.erase(std::unique(heights.begin(), heights.end()), heights.end());

    const auto spans_at = [&](const Rational& cut) {
        const Halfplane h = weight_cut(x0, cut);
        UnionFind uf(nodes_);
        for (size_t ci = 0; ci < partition_.classes.size(); ++ci) {
            switch (classify(partition_.classes[ci].triangle, h)) {
                case Side::inside:
                    for (int idx : class_forest_[ci]) uf.unite(edges_[idx].u, edges_[idx].v);
                    break;
                case Side::split:
                    for (int idx : partition_.classes[ci].point_index) {
                        if (edges_[idx].weight_at(x0) <= cut) uf.unite(edges_[idx].u, edges_[idx].v);
                    }
                    break;
                case Side::outside:
                    break;
            }
        }
        return uf.components() == 1;
    };

    // Threshold feasibility is monotone in the cut height; the top candidate
    // admits every edge, so connectivity guarantees it is feasible.
    size_t lo = 0, hi = heights.size() - 1;
    if (!spans_at(heights[hi])) throw Disconnected();
    while (lo < hi) {
        const size_t mid = (lo + hi) / 2;
        if (spans_at(heights[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    const Rational& cut = heights[lo];

    // Classes strictly below the lowest feasible cut carry only weights below
    // the true bottleneck; everything else is considered edge by edge.
    UnionFind uf(nodes_);
    std::vector<int> tree;
    std::vector<int> loose;
    for (size_t ci = 0; ci < partition_.classes.size(); ++ci) {
        const Triangle& tri = partition_.classes[ci].triangle;
        bool strictly_below = true;
        bool strictly_above = true;
        for (const Point* v : {&tri.v0, &tri.v1, &tri.v2}) {
            const Rational h = vertex_height(*v, x0);
            if (h >= cut) strictly_below = false;
            if (h <= cut) strictly_above = false;
        }
        if (strictly_below) {
            for (int idx : class_forest_[ci]) {
                if (uf.unite(edges_[idx].u, edges_[idx].v)) tree.push_back(idx);
            }
        } else if (!strictly_above) {
            for (int idx : partition_.classes[ci].point_index) loose.push_back(idx);
        }
    }
    std::sort(loose.begin(), loose.end(), [&](int i, int j) {
        const Rational wi = edges_[i].weight_at(x0);
        const Rational wj = edges_[j].weight_at(x0);
        if (wi != wj) return wi < wj;
        return i < j;
    });
    for (int idx : loose) {
        if (uf.components() == 1) break;
        if (uf.unite(edges_[idx].u, edges_[idx].v)) tree.push_back(idx);
    }
    if (uf.components() != 1) throw std::logic_error("one-shot greedy failed to span");

    // smallest id among the maximum-weight tree edges
    Rational max_w = edges_[tree.front()].weight_at(x0);
    for (int idx : tree) {
        const Rational w = edges_[idx].weight_at(x0);
        if (w > max_w) max_w = w;
    }
    int best = -1;
    for (int idx : tree) {
        if (edges_[idx].weight_at(x0) == max_w && (best < 0 || idx < best)) best = idx;
    }
    return SbeResult{edges_[best], max_w};
}

Forest ParamGraph::two_shot_forest(const Point& p0, const Point& p1) const {
    if (!(p0.x < p1.x)) throw std::invalid_argument("two-shot query needs p0.x < p1.x");
    const Halfplane h0 = Halfplane::lines_at_or_below(p0);
    const Halfplane h1 = Halfplane::lines_at_or_below(p1);

    std::vector<int> candidates;
    for (size_t ci = 0; ci < partition_.classes.size(); ++ci) {
        const Side s0 = classify(partition_.classes[ci].triangle, h0);
        const Side s1 = classify(partition_.classes[ci].triangle, h1);
        if (s0 == Side::outside || s1 == Side::outside) continue;
        if (s0 == Side::inside && s1 == Side::inside) {
            for (int idx : class_forest_[ci]) candidates.push_back(idx);
        } else {
            for (int idx : partition_.classes[ci].point_index) {
                const ParamEdge& e = edges_[idx];
                if (e.weight_at(p0.x) <= p0.y && e.weight_at(p1.x) <= p1.y) {
                    candidates.push_back(idx);
                }
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());

    Forest f;
    UnionFind uf(nodes_);
    for (int idx : candidates) {
        if (uf.unite(edges_[idx].u, edges_[idx].v)) f.edges.push_back(edges_[idx]);
    }
    f.components = uf.components();
    f.component_of = uf.canonical_labels();
    return f;
}

bool ParamGraph::decision_sweep(const Rational& y0, const Interval& I, int c, bool forall,
                                Rational* witness) const {
    const long n = edge_count();
    const long s = static_cast<long>(std::ceil(std::sqrt(double(n) * double(nodes_))));

    const auto direct_ok = [&](const Rational& x) {
        UnionFind uf(nodes_);
        long active = 0;
        for (const ParamEdge& e : edges_) {
            if (e.weight_at(x) <= y0) {
                ++active;
                uf.unite(e.u, e.v);
            }
        }
        return active > 0 && uf.components() <= c;
    };
    if (I.degenerate()) {
        if (direct_ok(I.lo)) {
            if (witness) *witness = I.lo;
            return true;
        }
        return false;
    }

    std::vector<std::pair<Rational, int>> cross;  // (x, edge index), closed interval
    for (const ParamEdge& e : edges_) {
        if (e.a.is_zero()) continue;
        Rational x = (y0 - e.b) / e.a;
        if (I.contains(x)) cross.emplace_back(std::move(x), e.id);
    }
    std::sort(cross.begin(), cross.end());

    // Chunks of at most s crossings; boundaries sit at midpoints between
    // crossing groups so no boundary is itself a crossing.
    struct Chunk {
        Rational xl, xr;
        size_t first, last;  // crossing index range [first, last)
    };
    std::vector<Chunk> chunks;
    if (cross.empty()) {
        chunks.push_back({I.lo, I.hi, 0, 0});
    } else {
        size_t i = 0;
        Rational xl = I.lo;
        while (i < cross.size()) {
            size_t j = std::min(i + static_cast<size_t>(s), cross.size());
            // never split a same-abscissa group across chunks
            while (j < cross.size() && cross[j].first == cross[j - 1].first) ++j;
            Rational xr = j == cross.size() ? I.hi : midpoint(cross[j - 1].first, cross[j].first);
            chunks.push_back({xl, xr, i, j});
            xl = xr;
            i = j;
        }
    }

    for (const Chunk& chunk : chunks) {
        // Crossing exactly at a chunk boundary can only happen at I's ends,
        // where the boundary is pinned; two-shot still applies there because
        // equality counts as below.
        Forest base;
        if (chunk.xl < chunk.xr) {
            base = two_shot_forest(Point{chunk.xl, y0}, Point{chunk.xr, y0});
        } else {
            base.components = nodes_;
            base.component_of.resize(nodes_);
            for (int v = 0; v < nodes_; ++v) base.component_of[v] = v;
        }
        if (base.components > s + c) {
            // even inserting every crossing edge cannot reach c components
            if (forall) return false;
            continue;
        }

        // supernode ids
        std::vector<int> super(nodes_, -1);
        int m = 0;
        for (int v = 0; v < nodes_; ++v) {
            const int rep = base.component_of[v];
            if (super[rep] < 0) super[rep] = m++;
            super[v] = super[rep];
        }

        std::vector<int> varying;
        for (size_t t = chunk.first; t < chunk.last; ++t) varying.push_back(cross[t].second);
        std::sort(varying.begin(), varying.end());
        varying.erase(std::unique(varying.begin(), varying.end()), varying.end());

        std::vector<Rational> cands;
        cands.push_back(chunk.xl);
        for (size_t t = chunk.first; t < chunk.last;) {
            size_t u = t;
            while (u < chunk.last && cross[u].first == cross[t].first) ++u;
            if (cross[t].first != cands.back()) cands.push_back(cross[t].first);
            const Rational next = u == chunk.last ? chunk.xr : cross[u].first;
            if (cross[t].first < next) cands.push_back(midpoint(cross[t].first, next));
            t = u;
        }
        if (chunk.xr != cands.back()) cands.push_back(chunk.xr);

        for (const Rational& x : cands) {
            UnionFind uf(m);
            long active = base.edges.size();
            for (int idx : varying) {
                if (edges_[idx].weight_at(x) <= y0) {
                    ++active;
                    uf.unite(super[edges_[idx].u], super[edges_[idx].v]);
                }
            }
            const bool ok = active > 0 && uf.components() <= c;
            if (!forall && ok) {
                if (witness) *witness = x;
                return true;
            }
            if (forall && !ok) return false;
        }
    }
    return forall;
}

SbeDecision ParamGraph::sbe_decision(const Rational& y0, const Interval& I, int c) const {
    if (c < 1) throw std::invalid_argument("component bound c must be >= 1");
    Rational witness;
    if (decision_sweep(y0, I, c, /*forall=*/false, &witness)) return {true, witness};
    return {false, std::nullopt};
}

SbeExtrema ParamGraph::sbe_extrema(const Interval& I, int c) const {
    if (c < 1) throw std::invalid_argument("component bound c must be >= 1");

    std::vector<Line> wlines;
    wlines.reserve(edges_.size());
    for (const ParamEdge& e : edges_) wlines.push_back(e.weight_line());

    std::vector<Rational> cands;
    std::vector<Point> vertices;
    for (size_t i = 0; i < wlines.size(); ++i) {
        for (size_t j = i + 1; j < wlines.size(); ++j) {
            if (auto p = intersect(wlines[i], wlines[j]); p && I.contains(p->x)) {
                cands.push_back(p->y);
                vertices.push_back(*p);
            }
        }
    }
    for (const ParamEdge& e : edges_) {
        cands.push_back(e.weight_at(I.lo));
        cands.push_back(e.weight_at(I.hi));
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    const auto first_true = [&](auto&& pred) -> size_t {
        size_t lo = 0, hi = cands.size() - 1;
        if (!pred(cands[hi])) throw std::logic_error("no feasible candidate ordinate");
        while (lo < hi) {
            const size_t mid = (lo + hi) / 2;
            if (pred(cands[mid])) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        return lo;
    };

    const Rational min_value = cands[first_true(
        [&](const Rational& y) { return decision_sweep(y, I, c, false, nullptr); })];
    const Rational max_value = cands[first_true(
        [&](const Rational& y) { return decision_sweep(y, I, c, true, nullptr); })];

    const auto smallest_arg = [&](const Rational& value) -> Rational {
        std::vector<Rational> xs{I.lo, I.hi};
        for (const Point& v : vertices) {
            if (v.y == value) xs.push_back(v.x);
        }
        std::sort(xs.begin(), xs.end());
        for (const Rational& x : xs) {
            if (sbe_value_at(x, c).weight == value) return x;
        }
        throw std::logic_error("extremum not attained at any candidate abscissa");
    };

    SbeExtrema res;
    res.min_value = min_value;
    res.argmin = smallest_arg(min_value);
    res.max_value = max_value;
    res.argmax = smallest_arg(max_value);
    return res;
}

long ParamGraph::d_bound(const Interval& I) const {
    return traj_point(I.lo).positive_mst_edges - traj_point(I.hi).positive_mst_edges;
}

void ParamGraph::sbe_peaks_rec(const std::vector<Rational>& events,
                               const std::vector<Rational>& brackets, int lo, int hi,
                               std::vector<Peak>& out) const {
    const TrajPoint& tl = traj_point(brackets[lo]);
    const TrajPoint& tr = traj_point(brackets[hi + 1]);
    const long d = tl.positive_mst_edges - tr.positive_mst_edges;
    const int sl = tl.sbe.edge.a.sign();
    const int sr = tr.sbe.edge.a.sign();

    const auto inspect = [&](int idx) {
        const SbeResult& left = traj_point(brackets[idx]).sbe;
        const SbeResult& right = traj_point(brackets[idx + 1]).sbe;
        if (left.edge.id == right.edge.id) return;
        const int a = left.edge.a.sign();
        const int b = right.edge.a.sign();
        PeakKind kind;
        if (a > 0 && b < 0) {
            kind = PeakKind::maximal;
        } else if (a < 0 && b > 0) {
            kind = PeakKind::minimal;
        } else {
            return;
        }
        out.push_back(Peak{Point{events[idx], sbe_value_at(events[idx]).weight}, kind,
                           left.edge.id, right.edge.id, false});
    };

    if (d <= 0) {
        if (sl < 0 && sr > 0) {
            // no maximal peaks here, so the slope flips exactly once
            int jlo = lo, jhi = hi + 1;
            while (jhi - jlo > 1) {
                const int jm = jlo + (jhi - jlo) / 2;
                (traj_point(brackets[jm]).sbe.edge.a.sign() > 0 ? jhi : jlo) = jm;
            }
            inspect(jlo);
        } else if (sl > 0 && sr < 0) {
            // contradicts the d bound; fall back to event-by-event resolution
            for (int i = lo; i <= hi; ++i) inspect(i);
        }
        return;
    }
    if (lo == hi) {
        inspect(lo);
        return;
    }
    const int mid = lo + (hi - lo) / 2;
    sbe_peaks_rec(events, brackets, lo, mid, out);
    sbe_peaks_rec(events, brackets, mid + 1, hi, out);
}

std::vector<Peak> ParamGraph::sbe_all_peaks(const Interval& I) const {
    std::vector<Line> wlines;
    wlines.reserve(edges_.size());
    for (const ParamEdge& e : edges_) wlines.push_back(e.weight_line());
    const std::vector<Rational> global = event_abscissas(wlines);

    std::vector<Rational> events;
    for (const Rational& e : global) {
        if (I.lo < e && e < I.hi) events.push_back(e);
    }
    if (events.empty()) return {};
    const int m = static_cast<int>(events.size());

    // Brackets stay inside I and strictly between adjacent events.
    std::vector<Rational> brackets(m + 1);
    {
        const auto first = std::lower_bound(global.begin(), global.end(), events.front());
        Rational left = I.lo;
        if (first != global.begin() && *std::prev(first) > left) left = *std::prev(first);
        brackets[0] = midpoint(left, events.front());
        const auto last = std::upper_bound(global.begin(), global.end(), events.back());
        Rational right = I.hi;
        if (last != global.end() && *last < right) right = *last;
        brackets[m] = midpoint(events.back(), right);
    }
    for (int i = 1; i < m; ++i) brackets[i] = midpoint(events[i - 1], events[i]);

    std::vector<Peak> out;
    sbe_peaks_rec(events, brackets, 0, m - 1, out);
    return out;
}

SbeBoundary ParamGraph::sbe_boundary(const Interval& I, int c) const {
    return SbeBoundary{sbe_value_at(I.lo, c), sbe_value_at(I.hi, c)};
}

}  // namespace kpeaks
