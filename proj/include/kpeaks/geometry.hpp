#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kpeaks/rational.hpp"

namespace kpeaks {

struct Point {
    Rational x;
    Rational y;

    friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

// Primal line y = a*x + b. Its dual point is (a, b); a point (x0, y0) dualizes
// to the line Y = -x0*X + y0, and "line at-or-below point" becomes "dual point
// at-or-below dual line".
struct Line {
    int id = 0;
    Rational a;  // slope
    Rational b;  // intercept

    Rational value_at(const Rational& x) const { return a * x + b; }
    Point dual() const { return Point{a, b}; }

    friend bool operator==(const Line& l, const Line& r) {
        return l.id == r.id && l.a == r.a && l.b == r.b;
    }
};

struct Interval {
    Rational lo;
    Rational hi;

    Interval(Rational lo_, Rational hi_);
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool degenerate() const { return lo == hi; }
};

struct CanonicalLines {
    std::vector<Line> lines;
    bool perturbed = false;
    Rational epsilon;  // zero when no perturbation was applied
};

// Reassigns ids by position. Returns the input untouched when no line is
// horizontal and all (a, b) pairs are distinct; otherwise applies the
// deterministic perturbation a += (id+1)*eps, b += (id+1)*eps^2 with eps an
// explicit rational below the minimum positive gap of slope/intercept
// differences, so all slopes end up nonzero and pairwise distinct.
CanonicalLines canonicalize(const std::vector<Line>& input);

// Unique intersection point, or nullopt for parallel lines.
std::optional<Point> intersect(const Line& l1, const Line& l2);

// Sorted, deduplicated x-coordinates of pairwise intersections inside I
// (closed). Every k-level peak abscissa is in this set.
std::vector<Rational> event_abscissas(std::span<const Line> lines, const Interval& I);

// All pairwise intersection abscissas, sorted and deduplicated.
std::vector<Rational> event_abscissas(std::span<const Line> lines);

// Number of lines with value_at(p.x) <= p.y; the reference predicate that the
// range-search structures must reproduce.
int level_of(std::span<const Line> lines, const Point& p);

}  // namespace kpeaks
