#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kpeaks/geometry.hpp"
#include "kpeaks/pmst_types.hpp"

namespace kpeaks {

// Instance files are UTF-8 JSON with all numerics exact: integers or "p/q"
// strings. A lines instance is {"lines": [{"a": .., "b": ..}, ...], "k"?: int};
// a graph instance is {"nodes": int, "edges": [{"u","v","a","b"}, ...]}.
// Query parameters (k, tau, c, interval ends) come from CLI flags; a file "k"
// only provides a default.

struct LinesInstance {
    std::vector<Line> lines;  // raw, not canonicalized
    std::optional<int> k;
};

struct GraphInstance {
    int nodes = 0;
    std::vector<ParamEdge> edges;
};

using Instance = std::variant<LinesInstance, GraphInstance>;

Instance parse_instance(const nlohmann::json& doc);
Instance load_instance(const std::string& path);

nlohmann::ordered_json to_json(const LinesInstance& inst);
nlohmann::ordered_json to_json(const GraphInstance& inst);
void save_instance(const Instance& inst, const std::string& path);

// Exact numeric field: JSON integer or "p/q" string. vertical=true maps a
// zero denominator to VerticalLineUnrepresentable instead of InvalidInstance.
Rational rational_field(const nlohmann::json& v, const std::string& name, bool vertical = false);

}  // namespace kpeaks
