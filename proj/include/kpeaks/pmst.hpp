#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "kpeaks/peak.hpp"
#include "kpeaks/pmst_types.hpp"
#include "kpeaks/range_search.hpp"

namespace kpeaks {

// Spanning forest with the union-find component labeling it induces.
struct Forest {
    std::vector<ParamEdge> edges;
    int components = 0;
    std::vector<int> component_of;  // per node: smallest node index in its component

    friend bool operator==(const Forest&, const Forest&) = default;
};

struct SbeDecision {
    bool feasible = false;
    std::optional<Rational> witness;  // smallest witness abscissa when feasible
};

struct SbeExtrema {
    Rational max_value;
    Rational argmax;  // smallest maximizing abscissa
    Rational min_value;
    Rational argmin;
};

// Values of the bottleneck trajectory at the ends of a query interval;
// boundary extrema are reported here, never as peaks.
struct SbeBoundary {
    SbeResult at_lo;
    SbeResult at_hi;
};

// Connected graph with linear parametric edge weights. The weight-line set is
// canonicalized on construction (shared rules with the arrangement module);
// the dual points are partitioned with a per-class spanning forest stored for
// the one-shot and two-shot queries. Immutable after construction.
class ParamGraph {
public:
    ParamGraph(int nodes, std::vector<ParamEdge> edges);

    int nodes() const { return nodes_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<ParamEdge>& edges() const { return edges_; }
    bool perturbed() const { return perturbed_; }
    const Rational& epsilon() const { return epsilon_; }
    const SimplicialPartition& partition() const { return partition_; }

    // Longest edge of a minimum spanning tree at x0: binary search over the
    // partition-triangle vertex heights, merging stored class forests below
    // the cut and greedily inserting cut-class edges in weight order. Ties in
    // bottleneck identity go to the smaller edge id.
    SbeResult sbe_one_shot(const Rational& x0) const;

    // Spanning forest of the edges whose weight lines pass at-or-below both
    // query points (requires p0.x < p1.x).
    Forest two_shot_forest(const Point& p0, const Point& p1) const;

    // Whether some x in I makes the subgraph of weight <= y0 have at most c
    // components: chunked sweep along y = y0 with two-shot forests per chunk
    // and contracted supernodes across the chunk's crossings.
    SbeDecision sbe_decision(const Rational& y0, const Interval& I, int c = 1) const;

    // Exact max and min of the c-truncated bottleneck threshold over I via
    // binary search of the decision over candidate ordinates.
    SbeExtrema sbe_extrema(const Interval& I, int c = 1) const;

    // Positive-slope MST edge count at I.lo minus at I.hi (two Kruskal runs);
    // an upper bound on the maximal peaks of the bottleneck trajectory in I.
    // Exact only when I's endpoints are not transition abscissas.
    long d_bound(const Interval& I) const;

    // All interior local peaks of x -> w_SBE(x) in I, sorted by abscissa:
    // recursive subdivision over weight-line events, pruned by d_bound and
    // endpoint slopes. Boundary extrema are excluded (see sbe_boundary).
    std::vector<Peak> sbe_all_peaks(const Interval& I) const;

    SbeBoundary sbe_boundary(const Interval& I, int c = 1) const;

    // Direct evaluation: smallest threshold whose at-or-below subgraph has at
    // most c components (Kruskal-style, no partition involved).
    SbeResult sbe_value_at(const Rational& x, int c = 1) const;

private:
    struct TrajPoint {
        SbeResult sbe;
        long positive_mst_edges = 0;
    };
    const TrajPoint& traj_point(const Rational& x) const;
    void sbe_peaks_rec(const std::vector<Rational>& events, const std::vector<Rational>& brackets,
                       int lo, int hi, std::vector<Peak>& out) const;
    // mode=false: exists-style early exit; mode=true: require the bound at
    // every candidate abscissa (used by the maximum search).
    bool decision_sweep(const Rational& y0, const Interval& I, int c, bool forall,
                        Rational* witness) const;

    int nodes_;
    std::vector<ParamEdge> edges_;
    bool perturbed_ = false;
    Rational epsilon_;
    SimplicialPartition partition_;
    std::vector<std::vector<int>> class_forest_;  // per class: forest edge indices
    mutable std::mutex cache_mu_;
    mutable std::map<Rational, TrajPoint> traj_cache_;
};

}  // namespace kpeaks
