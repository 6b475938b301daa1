#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "kpeaks/peak.hpp"
#include "kpeaks/range_search.hpp"

namespace kpeaks {

// Point of the k-level at one abscissa. left_line/right_line are the lines
// carrying the level just left/right of the abscissa; they differ exactly at
// vertices.
struct LevelPoint {
    Point p;
    Line left_line;
    Line right_line;
};

struct DecideLevelMax {
    bool reaches = false;                 // true: level reaches alpha somewhere in I
    std::optional<Rational> witness;     // smallest witness abscissa when reaches
};

struct SemiActive {
    std::vector<Interval> intervals;  // maximal intervals of I where the level is above y0
    long total_peaks = 0;             // local peaks of the level inside those intervals
};

// Arrangement-wide state shared by every level of the same line set: the
// canonical lines, partition trees over all duals and over positive-slope
// duals, and the global event abscissas.
struct LevelContext {
    CanonicalLines canonical;
    PartitionTree tree_all;
    std::optional<PartitionTree> tree_positive;
    std::vector<Rational> global_events;

    explicit LevelContext(CanonicalLines cl);
};

// k-level of an arrangement of non-vertical, non-horizontal lines.
// Immutable after construction; queries may run concurrently (the internal
// per-abscissa cache is mutex-guarded).
class LevelInstance {
public:
    LevelInstance(const std::vector<Line>& raw_lines, int k);
    LevelInstance(std::shared_ptr<const LevelContext> ctx, int k);

    int k() const { return k_; }
    int n() const { return static_cast<int>(ctx_->canonical.lines.size()); }
    const std::vector<Line>& lines() const { return ctx_->canonical.lines; }
    const std::shared_ptr<const LevelContext>& context() const { return ctx_; }
    bool perturbed() const { return ctx_->canonical.perturbed; }
    const Rational& epsilon() const { return ctx_->canonical.epsilon; }

    // Point of the level at x0 with its incoming and outgoing lines: binary
    // search over the sorted line values at x0, testing levels with
    // halfplane counts on the dual tree.
    LevelPoint one_shot(const Rational& x0) const;

    // f(J.lo) - f(J.hi), where f(x) counts positive-slope lines at or below
    // the level. Exact when J's endpoints are not vertex abscissas.
    long count_max_peaks(const Interval& J) const;

    // Total local peaks in J (same endpoint condition): minimal-peak count is
    // recovered from the maximal count and the level slopes at the endpoints.
    long count_peaks(const Interval& J) const;

    // Every local peak with abscissa in closed I, sorted by abscissa,
    // alternating kinds; peaks exactly at I's ends carry on_boundary.
    std::vector<Peak> all_peaks(const Interval& I) const;

    // Whether the level reaches y = alpha inside I; sweeps the probe line
    // across its intersections with the arrangement.
    DecideLevelMax decide_level_max(const Rational& alpha, const Interval& I) const;

    // Maximal x-intervals of I where the level lies strictly above y0,
    // plus the number of level peaks inside them, from one sweep.
    SemiActive semi_active(const Rational& y0, const Interval& I) const;

    // tau maximal peaks of largest y (all of them when fewer exist), sorted
    // by decreasing y, ties by smaller abscissa.
    std::vector<Peak> top_peaks(const Interval& I, int tau) const;

    // Mirror image: tau minimal peaks of smallest y, increasing y order.
    std::vector<Peak> bottom_peaks(const Interval& I, int tau) const;

private:
    struct Column {
        LevelPoint lp;
        long f = 0;  // positive-slope lines at or below the level point
    };
    struct SemiPiece {
        Rational lo;
        Rational hi;
        long max_peaks = 0;
        long total = 0;
    };

    const Column& column(const Rational& x) const;
    std::vector<SemiPiece> semi_active_detail(const Rational& y0, const Interval& I) const;
    void peaks_rec(const std::vector<Rational>& events, const std::vector<Rational>& brackets,
                   int lo, int hi, const Interval& I, std::vector<Peak>& out) const;
    std::vector<Peak> top_peaks_fallback(const Interval& I, int tau) const;

    std::shared_ptr<const LevelContext> ctx_;
    int k_;
    mutable std::mutex cache_mu_;
    mutable std::map<Rational, Column> cache_;
};

}  // namespace kpeaks
