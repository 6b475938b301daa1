#include "kpeaks/testgen.hpp"

#include <algorithm>
#include <map>

#include "kpeaks/union_find.hpp"

namespace kpeaks {

Rational random_rational(std::mt19937_64& rng, long num_range, long den_range) {
    std::uniform_int_distribution<long> num(-num_range, num_range);
    std::uniform_int_distribution<long> den(1, den_range);
    return Rational(num(rng), den(rng));
}

bool has_concurrent_triple(const std::vector<Line>& lines) {
    std::map<std::pair<Rational, Rational>, int> seen;
    for (size_t i = 0; i < lines.size(); ++i) {
        for (size_t j = i + 1; j < lines.size(); ++j) {
            if (auto p = intersect(lines[i], lines[j])) {
                if (++seen[{p->x, p->y}] > 1) return true;
            }
        }
    }
    return false;
}

CanonicalLines random_lines(std::mt19937_64& rng, const LineGenOptions& opt) {
    std::uniform_int_distribution<int> size(opt.n_min, opt.n_max);
    const int n = size(rng);
    for (;;) {
        std::vector<Line> raw;
        raw.reserve(n);
        for (int i = 0; i < n; ++i) {
            Rational a = random_rational(rng, opt.coef_range, opt.den_range);
            if (!opt.allow_duplicates) {
                while (a.is_zero()) a = random_rational(rng, opt.coef_range, opt.den_range);
            }
            raw.push_back(Line{i, a, random_rational(rng, opt.coef_range, opt.den_range)});
        }
        CanonicalLines canon = canonicalize(raw);
        if (!has_concurrent_triple(canon.lines)) return canon;
    }
}

GraphSpec random_graph(std::mt19937_64& rng, const GraphGenOptions& opt) {
    std::uniform_int_distribution<int> size(opt.nodes_min, opt.nodes_max);
    const int k = size(rng);
    for (;;) {
        GraphSpec g;
        g.nodes = k;
        // random spanning tree, then extra edges
        for (int v = 1; v < k; ++v) {
            std::uniform_int_distribution<int> parent(0, v - 1);
            g.edges.push_back(ParamEdge{static_cast<int>(g.edges.size()), parent(rng), v,
                                        random_rational(rng, opt.coef_range, opt.den_range),
                                        random_rational(rng, opt.coef_range, opt.den_range)});
        }
        const long slots = static_cast<long>(k) * (k - 1) / 2;
        const long extra = static_cast<long>(opt.extra_edge_fraction * double(slots));
        std::uniform_int_distribution<int> node(0, k - 1);
        for (long t = 0; t < extra; ++t) {
            int u = node(rng), v = node(rng);
            if (u == v) continue;
            g.edges.push_back(ParamEdge{static_cast<int>(g.edges.size()), u, v,
                                        random_rational(rng, opt.coef_range, opt.den_range),
                                        random_rational(rng, opt.coef_range, opt.den_range)});
        }

        std::vector<Line> wlines;
        for (const ParamEdge& e : g.edges) wlines.push_back(e.weight_line());
        CanonicalLines canon = canonicalize(wlines);
        if (has_concurrent_triple(canon.lines)) continue;

        UnionFind uf(k);
        for (const ParamEdge& e : g.edges) uf.unite(e.u, e.v);
        if (uf.components() == 1) return g;
    }
}

}  // namespace kpeaks
