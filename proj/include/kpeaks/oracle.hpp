#pragma once

#include <span>
#include <vector>

#include "kpeaks/geometry.hpp"
#include "kpeaks/peak.hpp"
#include "kpeaks/pmst_types.hpp"

namespace kpeaks {

// Brute-force reference implementations. Everything here enumerates all
// arrangement events and therefore runs in O(n^2) or worse; the point is to
// be obviously correct, not fast.

// Piecewise-linear trajectory: values at breakpoints, defining line/edge id
// per segment (defining.size() + 1 == breakpoints.size()).
struct TrajectorySample {
    std::vector<Rational> breakpoints;
    std::vector<Rational> values;
    std::vector<int> defining;
};

struct LevelResult {
    TrajectorySample sample;
    std::vector<Peak> peaks;
};

// Full plane sweep of an arrangement over an interval, shared across levels:
// sorts all line values at every event and between every pair of adjacent
// events once, then reads any k-level off the precomputed orders.
class LevelSweep {
public:
    LevelSweep(std::span<const Line> lines, const Interval& I);

    LevelResult level(int k) const;
    int n() const { return static_cast<int>(lines_.size()); }

private:
    const Line& by_id(int id) const { return lines_[index_of_id_[id]]; }

    std::vector<Line> lines_;
    std::vector<int> index_of_id_;
    Interval interval_;
    std::vector<Rational> breaks_;                  // I.lo, interior events, I.hi
    std::vector<std::vector<Rational>> break_vals_; // sorted values per breakpoint
    std::vector<std::vector<int>> seg_order_;       // ids sorted by value per segment
    std::vector<int> left_outside_;                 // order just left of I.lo (if lo is an event)
    std::vector<int> right_outside_;                // order just right of I.hi (if hi is an event)
};

LevelResult klevel_sweep(std::span<const Line> lines, int k, const Interval& I);

struct MstResult {
    std::vector<int> tree_edge_ids;  // sorted
    SbeResult bottleneck;
    long positive_slope_edges = 0;
};

// Kruskal with exact weights at x0, ties broken by edge id. Throws
// Disconnected when the edge set does not span.
MstResult mst_at(int nodes, std::span<const ParamEdge> edges, const Rational& x0);

struct SbeTrajectory {
    TrajectorySample sample;
    std::vector<Peak> peaks;  // interior peaks only
};

// Stitches the exact piecewise-linear bottleneck-threshold trajectory from
// Kruskal runs at midpoints between consecutive weight-line crossings.
// components > 1 evaluates the truncated variant (threshold for at most
// `components` connected parts).
SbeTrajectory sbe_trajectory(int nodes, std::span<const ParamEdge> edges, const Interval& I,
                             int components = 1);

}  // namespace kpeaks
