#pragma once

#include "kpeaks/geometry.hpp"

namespace kpeaks {

enum class PeakKind { maximal, minimal };

inline const char* to_string(PeakKind k) {
    return k == PeakKind::maximal ? "maximal" : "minimal";
}

// Local extremum of a piecewise-linear trajectory (a k-level or a bottleneck
// weight curve). left_id/right_id are the defining line or edge ids on each
// side. on_boundary marks a peak whose abscissa equals a query interval end
// (k-level queries use the closed-interval convention).
struct Peak {
    Point at;
    PeakKind kind = PeakKind::maximal;
    int left_id = 0;
    int right_id = 0;
    bool on_boundary = false;

    friend bool operator==(const Peak& a, const Peak& b) {
        return a.at == b.at && a.kind == b.kind && a.left_id == b.left_id &&
               a.right_id == b.right_id && a.on_boundary == b.on_boundary;
    }
};

}  // namespace kpeaks
