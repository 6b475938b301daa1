#include "kpeaks/instance_io.hpp"

#include <fstream>

#include "kpeaks/errors.hpp"

namespace kpeaks {

using nlohmann::json;
using nlohmann::ordered_json;

Rational rational_field(const json& v, const std::string& name, bool vertical) {
    try {
        if (v.is_number_integer()) return Rational(v.get<long>());
        if (v.is_string()) return Rational::parse(v.get<std::string>());
    } catch (const ZeroDenominator&) {
        if (vertical) throw VerticalLineUnrepresentable();
        throw InvalidInstance("field '" + name + "' has a zero denominator");
    } catch (const std::invalid_argument& e) {
        throw InvalidInstance("field '" + name + "' is not an exact rational: " + e.what());
    }
    throw InvalidInstance("field '" + name + "' must be an integer or a \"p/q\" string");
}

namespace {

LinesInstance parse_lines(const json& doc) {
    LinesInstance inst;
    const json& arr = doc.at("lines");
    if (!arr.is_array() || arr.empty()) {
        throw InvalidInstance("'lines' must be a nonempty array");
    }
    int id = 0;
    for (const json& item : arr) {
        if (!item.is_object() || !item.contains("a") || !item.contains("b")) {
            throw InvalidInstance("each line needs fields 'a' and 'b'");
        }
        inst.lines.push_back(Line{id++, rational_field(item.at("a"), "a", /*vertical=*/true),
                                  rational_field(item.at("b"), "b")});
    }
    if (doc.contains("k")) {
        if (!doc.at("k").is_number_integer()) throw InvalidInstance("'k' must be an integer");
        const long k = doc.at("k").get<long>();
        if (k < 1 || k > static_cast<long>(inst.lines.size())) {
            throw InvalidInstance("'k' must satisfy 1 <= k <= number of lines");
        }
        inst.k = static_cast<int>(k);
    }
    return inst;
}

GraphInstance parse_graph(const json& doc) {
    GraphInstance inst;
    if (!doc.contains("nodes") || !doc.at("nodes").is_number_integer()) {
        throw InvalidInstance("graph instance needs an integer 'nodes' field");
    }
    inst.nodes = doc.at("nodes").get<int>();
    if (inst.nodes < 2) throw InvalidInstance("graph must have at least 2 nodes");
    const json& arr = doc.at("edges");
    if (!arr.is_array() || arr.empty()) {
        throw InvalidInstance("'edges' must be a nonempty array");
    }
    int id = 0;
    for (const json& item : arr) {
        if (!item.is_object() || !item.contains("u") || !item.contains("v") ||
            !item.contains("a") || !item.contains("b")) {
            throw InvalidInstance("each edge needs fields 'u', 'v', 'a', 'b'");
        }
        if (!item.at("u").is_number_integer() || !item.at("v").is_number_integer()) {
            throw InvalidInstance("edge endpoints must be integers");
        }
        const int u = item.at("u").get<int>();
        const int v = item.at("v").get<int>();
        if (u < 0 || u >= inst.nodes || v < 0 || v >= inst.nodes) {
            throw InvalidInstance("edge endpoint outside the node range");
        }
        if (u == v) throw InvalidInstance("self-loop edge");
        inst.edges.push_back(ParamEdge{id++, u, v,
                                       rational_field(item.at("a"), "a", /*vertical=*/true),
                                       rational_field(item.at("b"), "b")});
    }
    return inst;
}

json rational_out(const Rational& r) {
    return json(r.str());
}

}  // namespace

Instance parse_instance(const json& doc) {
    if (!doc.is_object()) throw InvalidInstance("instance file must hold a JSON object");
    if (doc.contains("lines")) return parse_lines(doc);
    if (doc.contains("edges")) return parse_graph(doc);
    throw InvalidInstance("instance must contain either 'lines' or 'edges'");
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInstance("cannot open instance file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw InvalidInstance(std::string("instance is not valid JSON: ") + e.what());
    }
    return parse_instance(doc);
}

ordered_json to_json(const LinesInstance& inst) {
    ordered_json doc;
    doc["lines"] = ordered_json::array();
    for (const Line& l : inst.lines) {
        doc["lines"].push_back({{"a", rational_out(l.a)}, {"b", rational_out(l.b)}});
    }
    if (inst.k) doc["k"] = *inst.k;
    return doc;
}

ordered_json to_json(const GraphInstance& inst) {
    ordered_json doc;
    doc["nodes"] = inst.nodes;
    doc["edges"] = ordered_json::array();
    for (const ParamEdge& e : inst.edges) {
        doc["edges"].push_back(
            {{"u", e.u}, {"v", e.v}, {"a", rational_out(e.a)}, {"b", rational_out(e.b)}});
    }
    return doc;
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInstance("cannot write instance file: " + path);
    std::visit([&](const auto& v) { out << to_json(v).dump(2) << "\n"; }, inst);
}

}  // namespace kpeaks
