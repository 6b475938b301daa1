#include "kpeaks/range_search.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "kpeaks/errors.hpp"

namespace kpeaks {

Side classify(const Triangle& t, const Halfplane& h) {
    int in = 0;
    for (const Point* v : {&t.v0, &t.v1, &t.v2}) {
        if (h.contains(*v)) ++in;
    }
    if (in == 3) return Side::inside;
    if (in == 0) return Side::outside;
    return Side::split;
}

bool line_cuts(const Triangle& t, const Rational& a, const Rational& b) {
    int neg = 0, pos = 0;
    for (const Point* v : {&t.v0, &t.v1, &t.v2}) {
        const int s = (v->y - (a * v->x + b)).sign();
        if (s < 0) ++neg;
        if (s > 0) ++pos;
    }
    return neg < 3 && pos < 3;  // touching counts as a cut
}

namespace {

struct Cell {
    int begin;
    int end;
    int depth;
    int len() const { return end - begin; }
};

bool less_on_axis(const Point& p, const Point& q, int pi, int qi, int axis) {
    const Rational& pa = axis == 0 ? p.x : p.y;
    const Rational& qa = axis == 0 ? q.x : q.y;
    if (pa != qa) return pa < qa;
    const Rational& pb = axis == 0 ? p.y : p.x;
    const Rational& qb = axis == 0 ? q.y : q.x;
    if (pb != qb) return pb < qb;
    return pi < qi;
}

// Splits order[begin, end) into exactly r contiguous cells by repeatedly
// halving the largest cell at its median, alternating the split axis with
// depth. Ties resolved by coordinate then index, so the result is a
// deterministic function of the input.
std::vector<Cell> split_cells(const std::vector<Point>& pts, std::vector<int>& order,
                              int begin, int end, int r, int depth0) {
    std::vector<Cell> cells{{begin, end, depth0}};
    while (static_cast<int>(cells.size()) < r) {
        int best = -1;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].len() < 2) continue;
            if (best < 0 || cells[i].len() > cells[best].len()) best = static_cast<int>(i);
        }
        if (best < 0) throw std::logic_error("cannot split singleton cells further");
        Cell c = cells[best];
        const int axis = c.depth % 2;
        const int mid = c.begin + (c.len() + 1) / 2;
        std::nth_element(order.begin() + c.begin, order.begin() + mid, order.begin() + c.end,
                         [&](int i, int j) { return less_on_axis(pts[i], pts[j], i, j, axis); });
        cells[best] = Cell{c.begin, mid, c.depth + 1};
        cells.insert(cells.begin() + best + 1, Cell{mid, c.end, c.depth + 1});
    }
    std::sort(cells.begin(), cells.end(),
              [](const Cell& a, const Cell& b) { return a.begin < b.begin; });
    return cells;
}

// Right triangle on the bounding-box corner, twice the box in each direction;
// contains the closed box, degenerating gracefully with it.
Triangle enclosing_triangle(const std::vector<Point>& pts, std::span<const int> idx) {
    Rational x0 = pts[idx[0]].x, x1 = x0, y0 = pts[idx[0]].y, y1 = y0;
    for (int i : idx) {
        if (pts[i].x < x0) x0 = pts[i].x;
        if (pts[i].x > x1) x1 = pts[i].x;
        if (pts[i].y < y0) y0 = pts[i].y;
        if (pts[i].y > y1) y1 = pts[i].y;
    }
    const Rational two(2);
    return Triangle{Point{x0, y0}, Point{x0, y0 + two * (y1 - y0)},
                    Point{x0 + two * (x1 - x0), y0}};
}

long isqrt_floor(long v) {
    long r = static_cast<long>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Probe lines through two random grid points spanning the data's bounding box.
std::vector<std::pair<Rational, Rational>> probe_lines(std::span<const Point> points,
                                                       int count, std::uint64_t seed) {
    Rational x0 = points[0].x, x1 = x0, y0 = points[0].y, y1 = y0;
    for (const Point& p : points) {
        if (p.x < x0) x0 = p.x;
        if (p.x > x1) x1 = p.x;
        if (p.y < y0) y0 = p.y;
        if (p.y > y1) y1 = p.y;
    }
    const Rational one(1);
    x0 -= one; x1 += one; y0 -= one; y1 += one;
    const Rational sx = (x1 - x0) / Rational(2048);
    const Rational sy = (y1 - y0) / Rational(2048);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> grid(0, 2048);
    std::vector<std::pair<Rational, Rational>> lines;
    lines.reserve(count);
    while (static_cast<int>(lines.size()) < count) {
        const int gx0 = grid(rng), gy0 = grid(rng), gx1 = grid(rng), gy1 = grid(rng);
        if (gx0 == gx1) continue;  // vertical probe, redraw
        const Point p{x0 + sx * Rational(gx0), y0 + sy * Rational(gy0)};
        const Point q{x0 + sx * Rational(gx1), y0 + sy * Rational(gy1)};
        const Rational a = (q.y - p.y) / (q.x - p.x);
        lines.emplace_back(a, p.y - a * p.x);
    }
    return lines;
}

}  // namespace

SimplicialPartition build_partition(std::span<const Point> points, int r, int probe_count,
                                    std::uint64_t probe_seed) {
    const long n = static_cast<long>(points.size());
    if (n == 0) throw EmptyInput();
    if (r < 1) throw std::invalid_argument("partition class count must be >= 1");
    if (r > n) throw RTooLarge(r, n);

    std::vector<Point> pts(points.begin(), points.end());
    std::vector<int> order(n);
    for (long i = 0; i < n; ++i) order[i] = static_cast<int>(i);

    SimplicialPartition part;
    part.r = r;
    for (const Cell& c : split_cells(pts, order, 0, static_cast<int>(n), r, 0)) {
        if (static_cast<long>(c.len()) * r > 2 * n) {
            throw std::logic_error("partition class exceeds the 2n/r size bound");
        }
        SimplicialPartition::Class cls;
        cls.point_index.assign(order.begin() + c.begin, order.begin() + c.end);
        std::sort(cls.point_index.begin(), cls.point_index.end());
        cls.triangle = enclosing_triangle(pts, cls.point_index);
        part.classes.push_back(std::move(cls));
    }

    if (probe_count > 0) {
        long max_cut = 0;
        for (const auto& [a, b] : probe_lines(points, probe_count, probe_seed)) {
            long cut = 0;
            for (const auto& cls : part.classes) {
                if (line_cuts(cls.triangle, a, b)) ++cut;
            }
            max_cut = std::max(max_cut, cut);
        }
        if (max_cut * max_cut > 64L * r) {
            throw std::logic_error("measured crossing number exceeds 8*sqrt(r)");
        }
        part.crossing_constant = Rational(max_cut) / Rational(std::max(1L, isqrt_floor(r)));
    }
    return part;
}

PartitionTree::PartitionTree(std::vector<Point> points) : pts_(std::move(points)) {
    if (pts_.empty()) throw EmptyInput();
    order_.resize(pts_.size());
    for (size_t i = 0; i < pts_.size(); ++i) order_[i] = static_cast<int>(i);
    build_node(0, static_cast<int>(pts_.size()), 0);
}

int PartitionTree::build_node(int begin, int end, int depth) {
    const int me = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[me].begin = begin;
    nodes_[me].end = end;
    nodes_[me].tri =
        enclosing_triangle(pts_, std::span<const int>(order_).subspan(begin, end - begin));
    long pos = 0;
    for (int i = begin; i < end; ++i) {
        if (pts_[order_[i]].x.sign() > 0) ++pos;
    }
    nodes_[me].pos_count = pos;

    const int len = end - begin;
    if (len > kLeafSize) {
        const int r = std::max(4, static_cast<int>(std::ceil(std::sqrt(double(len)))));
        const auto cells = split_cells(pts_, order_, begin, end, std::min(r, len), depth);
        std::vector<int> children;
        children.reserve(cells.size());
        for (const Cell& c : cells) children.push_back(build_node(c.begin, c.end, depth + 1));
        nodes_[me].children = std::move(children);
    }
    return me;
}

long PartitionTree::count_rec(int ni, const Halfplane& h, bool positive_only,
                              Stats* stats) const {
    const Node& node = nodes_[ni];
    if (stats) ++stats->nodes_visited;
    switch (classify(node.tri, h)) {
        case Side::inside:
            return positive_only ? node.pos_count : node.count();
        case Side::outside:
            return 0;
        case Side::split:
            break;
    }
    if (node.leaf()) {
        if (stats) stats->visited_leaf_points += node.count();
        long c = 0;
        for (int i = node.begin; i < node.end; ++i) {
            const Point& p = pts_[order_[i]];
            if (positive_only && p.x.sign() <= 0) continue;
            if (h.contains(p)) ++c;
        }
        return c;
    }
    long c = 0;
    for (int child : node.children) c += count_rec(child, h, positive_only, stats);
    return c;
}

long PartitionTree::halfplane_count(const Halfplane& h, bool positive_only, Stats* stats) const {
    return count_rec(0, h, positive_only, stats);
}

void PartitionTree::report_rec(int ni, const Halfplane& h, std::vector<int>& out,
                               Stats* stats) const {
    const Node& node = nodes_[ni];
    if (stats) ++stats->nodes_visited;
    switch (classify(node.tri, h)) {
        case Side::inside:
            for (int i = node.begin; i < node.end; ++i) out.push_back(order_[i]);
            return;
        case Side::outside:
            return;
        case Side::split:
            break;
    }
    if (node.leaf()) {
        if (stats) stats->visited_leaf_points += node.count();
        for (int i = node.begin; i < node.end; ++i) {
            if (h.contains(pts_[order_[i]])) out.push_back(order_[i]);
        }
        return;
    }
    for (int child : node.children) report_rec(child, h, out, stats);
}

std::vector<int> PartitionTree::halfplane_report(const Halfplane& h, Stats* stats) const {
    std::vector<int> out;
    report_rec(0, h, out, stats);
    std::sort(out.begin(), out.end());
    return out;
}

long PartitionTree::wedge_rec(int ni, const Halfplane& h1, const Halfplane& h2,
                              Stats* stats) const {
    const Node& node = nodes_[ni];
    if (stats) ++stats->nodes_visited;
    const Side s1 = classify(node.tri, h1);
    const Side s2 = classify(node.tri, h2);
    if (s1 == Side::outside || s2 == Side::outside) return 0;
    if (s1 == Side::inside && s2 == Side::inside) return node.count();
    if (node.leaf()) {
        if (stats) stats->visited_leaf_points += node.count();
        long c = 0;
        for (int i = node.begin; i < node.end; ++i) {
            const Point& p = pts_[order_[i]];
            if (h1.contains(p) && h2.contains(p)) ++c;
        }
        return c;
    }
    long c = 0;
    for (int child : node.children) c += wedge_rec(child, h1, h2, stats);
    return c;
}

long PartitionTree::wedge_count(const Halfplane& h1, const Halfplane& h2, Stats* stats) const {
    return wedge_rec(0, h1, h2, stats);
}

bool PartitionTree::validate_counts() const {
    for (const Node& node : nodes_) {
        long pos = 0;
        for (int i = node.begin; i < node.end; ++i) {
            if (pts_[order_[i]].x.sign() > 0) ++pos;
        }
        if (pos != node.pos_count) return false;
        if (!node.leaf()) {
            long sum = 0;
            for (int child : node.children) sum += nodes_[child].count();
            if (sum != node.count()) return false;
        }
    }
    return true;
}

}  // namespace kpeaks
