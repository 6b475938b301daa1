#include "kpeaks/geometry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "kpeaks/errors.hpp"

namespace kpeaks {

Interval::Interval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (hi < lo) throw std::invalid_argument("interval with lo > hi");
}

namespace {

bool needs_perturbation(const std::vector<Line>& lines) {
    std::set<std::pair<Rational, Rational>> seen;
    for (const Line& l : lines) {
        if (l.a.is_zero()) return true;
        if (!seen.insert({l.a, l.b}).second) return true;
    }
    return false;
}

// Minimum positive gap over slope differences, intercept differences and
// slope magnitudes; 1 when every candidate vanishes (all-identical input).
Rational min_positive_gap(const std::vector<Line>& lines) {
    std::optional<Rational> gap;
    auto consider = [&](const Rational& v) {
        Rational m = v.abs();
        if (m.is_zero()) return;
        if (!gap || m < *gap) gap = m;
    };
    const size_t n = lines.size();
    for (size_t i = 0; i < n; ++i) {
        consider(lines[i].a);
        for (size_t j = i + 1; j < n; ++j) {
            consider(lines[i].a - lines[j].a);
            consider(lines[i].b - lines[j].b);
        }
    }
    return gap ? *gap : Rational(1);
}

}  // namespace

CanonicalLines canonicalize(const std::vector<Line>& input) {
    if (input.empty()) throw EmptyInput();

    CanonicalLines out;
    out.lines = input;
    for (size_t i = 0; i < out.lines.size(); ++i) out.lines[i].id = static_cast<int>(i);

    if (!needs_perturbation(out.lines)) return out;

    const long n = static_cast<long>(out.lines.size());
    const Rational eps = min_positive_gap(out.lines) / Rational((n + 1) * 65536L);
    const Rational eps2 = eps * eps;
    for (Line& l : out.lines) {
        const Rational m(static_cast<long>(l.id) + 1);
        l.a += m * eps;
        l.b += m * eps2;
    }
    out.perturbed = true;
    out.epsilon = eps;

    // eps was chosen so these cannot fail; check anyway since everything
    // downstream assumes them.
    std::set<Rational> slopes;
    for (const Line& l : out.lines) {
        if (l.a.is_zero() || !slopes.insert(l.a).second) {
            throw std::logic_error("perturbation failed to separate slopes");
        }
    }
    return out;
}

std::optional<Point> intersect(const Line& l1, const Line& l2) {
    if (l1.a == l2.a) return std::nullopt;
    Rational x = (l2.b - l1.b) / (l1.a - l2.a);
    return Point{x, l1.value_at(x)};
}

std::vector<Rational> event_abscissas(std::span<const Line> lines) {
    std::vector<Rational> xs;
    for (size_t i = 0; i < lines.size(); ++i) {
        for (size_t j = i + 1; j < lines.size(); ++j) {
            if (auto p = intersect(lines[i], lines[j])) xs.push_back(p->x);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

std::vector<Rational> event_abscissas(std::span<const Line> lines, const Interval& I) {
    std::vector<Rational> all = event_abscissas(lines);
    std::vector<Rational> xs;
    for (Rational& x : all) {
        if (I.contains(x)) xs.push_back(std::move(x));
    }
    return xs;
}

int level_of(std::span<const Line> lines, const Point& p) {
    int count = 0;
    for (const Line& l : lines) {
        if (l.value_at(p.x) <= p.y) ++count;
    }
    return count;
}

}  // namespace kpeaks
