#include "kpeaks/klevel.hpp"

#include <algorithm>
#include <stdexcept>

namespace kpeaks {

namespace {

std::vector<Point> dual_points(const std::vector<Line>& lines, bool positive_only) {
    std::vector<Point> pts;
    for (const Line& l : lines) {
        if (positive_only && l.a.sign() <= 0) continue;
        pts.push_back(l.dual());
    }
    return pts;
}

}  // namespace

LevelContext::LevelContext(CanonicalLines cl)
    : canonical(std::move(cl)),
      tree_all(dual_points(canonical.lines, false)),
      global_events(event_abscissas(canonical.lines)) {
    std::vector<Point> pos = dual_points(canonical.lines, true);
    if (!pos.empty()) tree_positive.emplace(std::move(pos));
}

LevelInstance::LevelInstance(const std::vector<Line>& raw_lines, int k)
    : LevelInstance(std::make_shared<LevelContext>(canonicalize(raw_lines)), k) {}

LevelInstance::LevelInstance(std::shared_ptr<const LevelContext> ctx, int k)
    : ctx_(std::move(ctx)), k_(k) {
    if (k_ < 1 || k_ > n()) throw std::invalid_argument("level k must be in [1, n]");
}

const LevelInstance::Column& LevelInstance::column(const Rational& x) const {
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        auto it = cache_.find(x);
        if (it != cache_.end()) return it->second;
    }

    const std::vector<Line>& lines = ctx_->canonical.lines;
    std::vector<std::pair<Rational, int>> vals;
    vals.reserve(lines.size());
    for (const Line& l : lines) vals.emplace_back(l.value_at(x), l.id);
    std::sort(vals.begin(), vals.end());

    std::vector<Rational> distinct;
    for (const auto& [v, id] : vals) {
        if (distinct.empty() || distinct.back() != v) distinct.push_back(v);
    }

    // smallest y among the line values whose closed level count reaches k
    size_t lo = 0, hi = distinct.size() - 1;
    while (lo < hi) {
        const size_t mid = (lo + hi) / 2;
        const long count =
            ctx_->tree_all.halfplane_count(Halfplane::lines_at_or_below(Point{x, distinct[mid]}));
        if (count >= k_) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    const Rational& y = distinct[lo];
    if (y != vals[k_ - 1].first) {
        throw std::logic_error("partition tree level count disagrees with direct sort");
    }

    const auto value_less = [](const std::pair<Rational, int>& a, const Rational& b) {
        return a.first < b;
    };
    const size_t first =
        std::lower_bound(vals.begin(), vals.end(), y, value_less) - vals.begin();
    size_t last = first;
    while (last < vals.size() && vals[last].first == y) ++last;

    std::vector<int> through;
    for (size_t i = first; i < last; ++i) through.push_back(vals[i].second);
    std::sort(through.begin(), through.end(),
              [&](int a, int b) { return lines[a].a > lines[b].a; });  // descending slope
    const long q = k_ - static_cast<long>(first);                      // 1-indexed position
    if (q < 1 || q > static_cast<long>(through.size())) {
        throw std::logic_error("level position outside its vertex bundle");
    }

    Column col;
    col.lp.p = Point{x, y};
    col.lp.left_line = lines[through[q - 1]];
    col.lp.right_line = lines[through[through.size() - q]];

    col.f = ctx_->tree_positive
                ? ctx_->tree_positive->halfplane_count(Halfplane::lines_at_or_below(col.lp.p))
                : 0;
    long f_direct = 0;
    for (size_t i = 0; i < last; ++i) {
        if (lines[vals[i].second].a.sign() > 0) ++f_direct;
    }
    if (col.f != f_direct) {
        throw std::logic_error("positive-dual tree count disagrees with direct scan");
    }

    std::lock_guard<std::mutex> lock(cache_mu_);
    return cache_.try_emplace(x, std::move(col)).first->second;
}

LevelPoint LevelInstance::one_shot(const Rational& x0) const {
    return column(x0).lp;
}

long LevelInstance::count_max_peaks(const Interval& J) const {
    return column(J.lo).f - column(J.hi).f;
}

long LevelInstance::count_peaks(const Interval& J) const {
    const long max_peaks = count_max_peaks(J);
    const int s_lo = column(J.lo).lp.right_line.a.sign();
    const int s_hi = column(J.hi).lp.left_line.a.sign();
    const long min_peaks = max_peaks - 1 + (s_lo < 0 ? 1 : 0) + (s_hi > 0 ? 1 : 0);
    return max_peaks + std::max(min_peaks, 0L);
}

void LevelInstance::peaks_rec(const std::vector<Rational>& events,
                              const std::vector<Rational>& brackets, int lo, int hi,
                              const Interval& I, std::vector<Peak>& out) const {
    if (count_peaks(Interval(brackets[lo], brackets[hi + 1])) <= 0) return;
    if (lo == hi) {
        const Column& col = column(events[lo]);
        if (col.lp.left_line.id == col.lp.right_line.id) return;
        const int sl = col.lp.left_line.a.sign();
        const int sr = col.lp.right_line.a.sign();
        PeakKind kind;
        if (sl > 0 && sr < 0) {
            kind = PeakKind::maximal;
        } else if (sl < 0 && sr > 0) {
            kind = PeakKind::minimal;
        } else {
            return;  // level vertex without a slope sign change
        }
        out.push_back(Peak{col.lp.p, kind, col.lp.left_line.id, col.lp.right_line.id,
                           events[lo] == I.lo || events[lo] == I.hi});
        return;
    }
    const int mid = lo + (hi - lo) / 2;
    peaks_rec(events, brackets, lo, mid, I, out);
    peaks_rec(events, brackets, mid + 1, hi, I, out);
}

std::vector<Peak> LevelInstance::all_peaks(const Interval& I) const {
    const std::vector<Rational>& G = ctx_->global_events;
    const auto first = std::lower_bound(G.begin(), G.end(), I.lo);
    const auto last = std::upper_bound(G.begin(), G.end(), I.hi);
    if (first == last) return {};

    const std::vector<Rational> events(first, last);
    const int m = static_cast<int>(events.size());

    // Brackets are abscissas strictly between adjacent global events, so each
    // leaf interval isolates one event and no bracket is a vertex abscissa.
    std::vector<Rational> brackets(m + 1);
    brackets[0] =
        first == G.begin() ? events.front() - Rational(1) : midpoint(*std::prev(first), events.front());
    for (int i = 1; i < m; ++i) brackets[i] = midpoint(events[i - 1], events[i]);
    brackets[m] = last == G.end() ? events.back() + Rational(1) : midpoint(events.back(), *last);

    std::vector<Peak> out;
    peaks_rec(events, brackets, 0, m - 1, I, out);
    return out;
}

DecideLevelMax LevelInstance::decide_level_max(const Rational& alpha, const Interval& I) const {
    const std::vector<Line>& lines = ctx_->canonical.lines;

    const auto strictly_below = [&](const Rational& x) {
        long c = 0;
        for (const Line& l : lines) {
            if (l.value_at(x) < alpha) ++c;
        }
        return c;
    };
    // Level reaches alpha at x iff fewer than k lines lie strictly below
    // (x, alpha); between crossings that count is constant and no smaller
    // than at the bounding crossings, so candidates are the endpoints and
    // the crossings.
    if (strictly_below(I.lo) <= k_ - 1) return {true, I.lo};

    std::vector<std::pair<Rational, int>> crossings;
    for (const Line& l : lines) {
        if (l.a.is_zero()) continue;
        Rational x = (alpha - l.b) / l.a;
        if (I.lo < x && x < I.hi) crossings.emplace_back(std::move(x), l.id);
    }
    std::sort(crossings.begin(), crossings.end());

    std::vector<char> below(lines.size());
    long count = 0;
    for (const Line& l : lines) {
        const Rational v = l.value_at(I.lo);
        // state on the open segment right of I.lo
        const bool b = v == alpha ? l.a.sign() < 0 : v < alpha;
        below[l.id] = b;
        if (b) ++count;
    }

    size_t i = 0;
    while (i < crossings.size()) {
        size_t j = i;
        while (j < crossings.size() && crossings[j].first == crossings[i].first) ++j;
        long below_in_group = 0;
        for (size_t t = i; t < j; ++t) below_in_group += below[crossings[t].second];
        if (count - below_in_group <= k_ - 1) return {true, crossings[i].first};
        for (size_t t = i; t < j; ++t) {
            const int id = crossings[t].second;
            const bool nb = lines[id].a.sign() < 0;
            count += (nb ? 1 : 0) - (below[id] ? 1 : 0);
            below[id] = nb;
        }
        i = j;
    }

    if (!I.degenerate() && strictly_below(I.hi) <= k_ - 1) return {true, I.hi};
    return {false, std::nullopt};
}

std::vector<LevelInstance::SemiPiece> LevelInstance::semi_active_detail(const Rational& y0,
                                                                        const Interval& I) const {
    std::vector<SemiPiece> pieces;
    const std::vector<Line>& lines = ctx_->canonical.lines;

    if (I.degenerate()) {
        if (column(I.lo).lp.p.y > y0) pieces.push_back({I.lo, I.hi, 0, 0});
        return pieces;
    }

    std::vector<std::pair<Rational, int>> crossings;
    for (const Line& l : lines) {
        if (l.a.is_zero()) continue;
        Rational x = (y0 - l.b) / l.a;
        if (I.lo < x && x < I.hi) crossings.emplace_back(std::move(x), l.id);
    }
    std::sort(crossings.begin(), crossings.end());

    // States hold on the current open segment between crossings; at a
    // crossing the crossing lines sit exactly on the probe and count as
    // at-or-below there.
    std::vector<char> below(lines.size());
    long cnt_all = 0, cnt_pos = 0;
    {
        const Rational first_end = crossings.empty() ? I.hi : crossings.front().first;
        const Rational probe = midpoint(I.lo, first_end);
        for (const Line& l : lines) {
            const bool b = l.value_at(probe) < y0;
            below[l.id] = b;
            if (b) {
                ++cnt_all;
                if (l.a.sign() > 0) ++cnt_pos;
            }
        }
    }

    bool run_open = false;
    Rational run_lo;
    long run_f_lo = 0;
    bool run_truncated_lo = false;

    auto open_run = [&](const Rational& u, long f_u, bool truncated) {
        run_open = true;
        run_lo = u;
        run_f_lo = f_u;
        run_truncated_lo = truncated;
    };
    auto close_run = [&](const Rational& v, long f_v, bool truncated_hi) {
        int ind_lo = 0, ind_hi = 0;
        if (run_truncated_lo && column(run_lo).lp.right_line.a.sign() < 0) ind_lo = 1;
        if (truncated_hi && column(v).lp.left_line.a.sign() > 0) ind_hi = 1;
        const long max_peaks = run_f_lo - f_v;
        const long total = max_peaks + std::max(max_peaks - 1 + ind_lo + ind_hi, 0L);
        pieces.push_back({run_lo, v, max_peaks, total});
        run_open = false;
    };

    if (cnt_all <= k_ - 1) open_run(I.lo, column(I.lo).f, true);

    size_t i = 0;
    while (i < crossings.size()) {
        size_t j = i;
        while (j < crossings.size() && crossings[j].first == crossings[i].first) ++j;
        const Rational& xc = crossings[i].first;

        long g_below = 0, g_below_pos = 0, g_pos = 0, g_size = 0;
        for (size_t t = i; t < j; ++t) {
            const Line& l = lines[crossings[t].second];
            ++g_size;
            if (l.a.sign() > 0) ++g_pos;
            if (below[l.id]) {
                ++g_below;
                if (l.a.sign() > 0) ++g_below_pos;
            }
        }
        const long at_all = cnt_all - g_below + g_size;
        const long at_pos = cnt_pos - g_below_pos + g_pos;

        for (size_t t = i; t < j; ++t) {
            const int id = crossings[t].second;
            const bool nb = lines[id].a.sign() < 0;
            if (nb != static_cast<bool>(below[id])) {
                const long d = nb ? 1 : -1;
                cnt_all += d;
                if (lines[id].a.sign() > 0) cnt_pos += d;
            }
            below[id] = nb;
        }

        const bool point_active = at_all <= k_ - 1;
        const bool next_seg_active = cnt_all <= k_ - 1;
        if (run_open) {
            if (!point_active) {
                close_run(xc, at_pos, false);
                if (next_seg_active) open_run(xc, at_pos, false);
            }
        } else if (next_seg_active) {
            open_run(xc, at_pos, false);
        }
        i = j;
    }

    if (run_open) close_run(I.hi, column(I.hi).f, true);
    return pieces;
}

SemiActive LevelInstance::semi_active(const Rational& y0, const Interval& I) const {
    SemiActive res;
    for (const SemiPiece& piece : semi_active_detail(y0, I)) {
        res.intervals.emplace_back(piece.lo, piece.hi);
        res.total_peaks += piece.total;
    }
    return res;
}

std::vector<Peak> LevelInstance::top_peaks_fallback(const Interval& I, int tau) const {
    std::vector<Peak> maxima;
    for (Peak& p : all_peaks(I)) {
        if (p.kind == PeakKind::maximal) maxima.push_back(std::move(p));
    }
    std::sort(maxima.begin(), maxima.end(), [](const Peak& a, const Peak& b) {
        if (a.at.y != b.at.y) return a.at.y > b.at.y;
        return a.at.x < b.at.x;
    });
    if (static_cast<int>(maxima.size()) > tau) maxima.resize(tau);
    return maxima;
}

std::vector<Peak> LevelInstance::top_peaks(const Interval& I, int tau) const {
    if (tau < 1) throw std::invalid_argument("tau must be >= 1");
    const std::vector<Line>& lines = ctx_->canonical.lines;

    std::vector<Rational> ords;
    for (size_t i = 0; i < lines.size(); ++i) {
        for (size_t j = i + 1; j < lines.size(); ++j) {
            if (auto p = intersect(lines[i], lines[j]); p && I.contains(p->x)) {
                ords.push_back(std::move(p->y));
            }
        }
    }
    std::sort(ords.begin(), ords.end());
    ords.erase(std::unique(ords.begin(), ords.end()), ords.end());
    if (ords.empty()) return top_peaks_fallback(I, tau);

    // Probe heights stay strictly between vertex ordinates, so no probe line
    // ever passes through a vertex of the arrangement.
    const size_t t = ords.size();
    const auto probe = [&](size_t j) -> Rational {
        if (j == 0) return ords.front() - Rational(1);
        if (j == t) return ords.back() + Rational(1);
        return midpoint(ords[j - 1], ords[j]);
    };
    const auto count_max_above = [&](size_t j) {
        long sum = 0;
        for (const SemiPiece& piece : semi_active_detail(probe(j), I)) sum += piece.max_peaks;
        return sum;
    };

    if (count_max_above(0) < tau) return top_peaks_fallback(I, tau);
    size_t lo = 0, hi = t;  // count(lo) >= tau; count(t) == 0 < tau
    while (hi - lo > 1) {
        const size_t mid = lo + (hi - lo) / 2;
        (count_max_above(mid) >= tau ? lo : hi) = mid;
    }

    std::vector<Peak> maxima;
    for (const SemiPiece& piece : semi_active_detail(probe(lo), I)) {
        for (Peak& p : all_peaks(Interval(piece.lo, piece.hi))) {
            if (p.kind == PeakKind::maximal) maxima.push_back(std::move(p));
        }
    }
    if (static_cast<int>(maxima.size()) < tau) return top_peaks_fallback(I, tau);

    std::sort(maxima.begin(), maxima.end(), [](const Peak& a, const Peak& b) {
        if (a.at.y != b.at.y) return a.at.y > b.at.y;
        return a.at.x < b.at.x;
    });
    maxima.resize(tau);
    for (Peak& p : maxima) p.on_boundary = p.at.x == I.lo || p.at.x == I.hi;
    return maxima;
}

std::vector<Peak> LevelInstance::bottom_peaks(const Interval& I, int tau) const {
    CanonicalLines reflected = ctx_->canonical;
    for (Line& l : reflected.lines) {
        l.a = -l.a;
        l.b = -l.b;
    }
    const LevelInstance mirror(std::make_shared<LevelContext>(std::move(reflected)),
                               n() - k_ + 1);
    std::vector<Peak> peaks = mirror.top_peaks(I, tau);
    for (Peak& p : peaks) {
        p.at.y = -p.at.y;
        p.kind = p.kind == PeakKind::maximal ? PeakKind::minimal : PeakKind::maximal;
    }
    return peaks;
}

}  // namespace kpeaks
