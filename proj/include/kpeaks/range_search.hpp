#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kpeaks/geometry.hpp"

namespace kpeaks {

// Halfplane in the dual plane, bounded by Y = a*X + b. "below_or_on" includes
// the boundary, "above" is strict, so a boundary and its complement partition
// the plane exactly.
struct Halfplane {
    enum class Orientation { below_or_on, above };

    Rational a;
    Rational b;
    Orientation orient = Orientation::below_or_on;

    // Dual of "lines l with l(q.x) <= q.y" (level_of's predicate).
    static Halfplane lines_at_or_below(const Point& query) {
        return Halfplane{-query.x, query.y, Orientation::below_or_on};
    }
    static Halfplane lines_above(const Point& query) {
        return Halfplane{-query.x, query.y, Orientation::above};
    }

    bool contains(const Point& p) const {
        const int c = (p.y - (a * p.x + b)).sign();
        return orient == Orientation::below_or_on ? c <= 0 : c > 0;
    }

    Halfplane complement() const {
        return Halfplane{a, b,
                         orient == Orientation::below_or_on ? Orientation::above
                                                            : Orientation::below_or_on};
    }
};

struct Triangle {
    Point v0, v1, v2;
};

enum class Side { inside, outside, split };

// Conservative classification of a closed triangle against a halfplane:
// inside/outside only when all three vertices agree, which is exact for the
// points the triangle encloses.
Side classify(const Triangle& t, const Halfplane& h);

// True when the line y = a*x + b touches the closed triangle.
bool line_cuts(const Triangle& t, const Rational& a, const Rational& b);

struct SimplicialPartition {
    struct Class {
        std::vector<int> point_index;  // sorted original indices
        Triangle triangle;
    };

    std::vector<Class> classes;
    int r = 0;
    // max crossings / floor(sqrt(r)) over the probe set; unset when the
    // build skipped measurement.
    std::optional<Rational> crossing_constant;
};

inline constexpr std::uint64_t kCrossingProbeSeed = 0x9e3779b97f4a7c15ULL;

// Disjoint cover of the points into r classes with |S_i| <= 2n/r, each inside
// an explicit triangle. probe_count random lines measure the crossing number;
// the build fails if any probe cuts more than 8*sqrt(r) triangles. Pass
// probe_count = 0 to skip measurement.
SimplicialPartition build_partition(std::span<const Point> points, int r,
                                    int probe_count = 500,
                                    std::uint64_t probe_seed = kCrossingProbeSeed);

// Partition tree over a point set: fanout max(4, ceil(sqrt(subset))) per node,
// leaves of at most 8 points. Immutable after construction; queries are safe
// to run concurrently.
class PartitionTree {
public:
    static constexpr int kLeafSize = 8;

    struct Stats {
        std::size_t visited_leaf_points = 0;
        std::size_t nodes_visited = 0;
    };

    explicit PartitionTree(std::vector<Point> points);

    // Exact count of points in h; positive_only restricts to points with
    // x > 0 (dual points of positive-slope lines).
    long halfplane_count(const Halfplane& h, bool positive_only = false,
                         Stats* stats = nullptr) const;

    // Indices (into the construction order) of points in h, sorted.
    std::vector<int> halfplane_report(const Halfplane& h, Stats* stats = nullptr) const;

    // Count of points in h1 ∩ h2.
    long wedge_count(const Halfplane& h1, const Halfplane& h2, Stats* stats = nullptr) const;

    long size() const { return static_cast<long>(pts_.size()); }
    const std::vector<Point>& points() const { return pts_; }

    // Recomputes every node's counts from its leaves; for tests.
    bool validate_counts() const;

private:
    struct Node {
        Triangle tri;
        int begin = 0;
        int end = 0;
        long pos_count = 0;
        std::vector<int> children;
        bool leaf() const { return children.empty(); }
        long count() const { return end - begin; }
    };

    int build_node(int begin, int end, int depth);
    long count_rec(int node, const Halfplane& h, bool positive_only, Stats* stats) const;
    void report_rec(int node, const Halfplane& h, std::vector<int>& out, Stats* stats) const;
    long wedge_rec(int node, const Halfplane& h1, const Halfplane& h2, Stats* stats) const;

    std::vector<Point> pts_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
};

}  // namespace kpeaks
