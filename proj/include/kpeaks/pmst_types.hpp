#pragma once

#include "kpeaks/geometry.hpp"

namespace kpeaks {

// Edge with linear parametric weight w(x) = a*x + b.
struct ParamEdge {
    int id = 0;
    int u = 0;
    int v = 0;
    Rational a;
    Rational b;

    Rational weight_at(const Rational& x) const { return a * x + b; }
    Line weight_line() const { return Line{id, a, b}; }
};

struct SbeResult {
    ParamEdge edge;
    Rational weight;  // edge weight evaluated at the query abscissa
};

}  // namespace kpeaks
