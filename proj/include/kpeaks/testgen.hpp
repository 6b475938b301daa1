#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kpeaks/geometry.hpp"
#include "kpeaks/pmst_types.hpp"

namespace kpeaks {

// Deterministic random instances for oracle cross-checks. Generated line sets
// are canonical and free of three-line concurrences (the standing simplicity
// assumption); duplicates may appear before canonicalization so the
// perturbation path still gets exercised.

struct LineGenOptions {
    int n_min = 3;
    int n_max = 20;
    long coef_range = 30;  // numerators drawn from [-range, range]
    long den_range = 6;    // denominators drawn from [1, range]
    bool allow_duplicates = true;
};

struct GraphGenOptions {
    int nodes_min = 3;
    int nodes_max = 9;
    long coef_range = 20;
    long den_range = 4;
    double extra_edge_fraction = 0.5;  // of the possible non-tree slots
};

Rational random_rational(std::mt19937_64& rng, long num_range, long den_range);

// Canonical, simple (no three concurrent lines) instance.
CanonicalLines random_lines(std::mt19937_64& rng, const LineGenOptions& opt = {});

struct GraphSpec {
    int nodes = 0;
    std::vector<ParamEdge> edges;
};

// Connected graph with simple canonicalizable weight lines.
GraphSpec random_graph(std::mt19937_64& rng, const GraphGenOptions& opt = {});

// True when two pairs of lines intersect in the same point.
bool has_concurrent_triple(const std::vector<Line>& lines);

}  // namespace kpeaks
