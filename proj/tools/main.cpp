#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "kpeaks/errors.hpp"
#include "kpeaks/instance_io.hpp"
#include "kpeaks/klevel.hpp"
#include "kpeaks/oracle.hpp"
#include "kpeaks/pmst.hpp"
#include "kpeaks/testgen.hpp"
#include "svg.hpp"

using namespace kpeaks;
using nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational parse_flag(const std::string& value, const std::string& flag) {
    try {
        return Rational::parse(value);
    } catch (const std::exception&) {
        throw UsageError("flag " + flag + " needs an exact rational, got '" + value + "'");
    }
}

Interval parse_interval(const std::string& from, const std::string& to) {
    if (from.empty() || to.empty()) throw UsageError("--from and --to are required");
    const Rational lo = parse_flag(from, "--from");
    const Rational hi = parse_flag(to, "--to");
    if (hi < lo) throw UsageError("--from must not exceed --to");
    return Interval(lo, hi);
}

const LinesInstance& require_lines(const Instance& inst) {
    if (const auto* p = std::get_if<LinesInstance>(&inst)) return *p;
    throw InvalidInstance("this operation needs a lines instance");
}

const GraphInstance& require_graph(const Instance& inst) {
    if (const auto* p = std::get_if<GraphInstance>(&inst)) return *p;
    throw InvalidInstance("this operation needs a graph instance");
}

int pick_k(const std::optional<int>& flag_k, const LinesInstance& inst) {
    if (flag_k) return *flag_k;
    if (inst.k) return *inst.k;
    throw UsageError("--k is required (the instance file carries no default)");
}

ordered_json rat(const Rational& r) { return ordered_json(r.str()); }

ordered_json line_json(const Line& l) {
    return ordered_json{{"id", l.id}, {"a", rat(l.a)}, {"b", rat(l.b)}};
}

ordered_json edge_json(const ParamEdge& e) {
    return ordered_json{{"id", e.id}, {"u", e.u}, {"v", e.v}, {"a", rat(e.a)}, {"b", rat(e.b)}};
}

ordered_json peak_json(const Peak& p, const char* ids_key) {
    ordered_json j{{"x", rat(p.at.x)},
                   {"y", rat(p.at.y)},
                   {"kind", to_string(p.kind)},
                   {ids_key, ordered_json::array({p.left_id, p.right_id})}};
    if (p.on_boundary) j["on_boundary"] = true;
    return j;
}

ordered_json interval_json(const Interval& I) {
    return ordered_json::array({rat(I.lo), rat(I.hi)});
}

void emit(const ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

void level_svg(const std::string& path, const LevelInstance& inst, const Interval& I,
               const std::vector<Peak>& peaks, const std::string& title) {
    const LevelResult res = klevel_sweep(inst.lines(), inst.k(), I);
    std::vector<std::pair<double, double>> poly;
    for (size_t i = 0; i < res.sample.breakpoints.size(); ++i) {
        poly.emplace_back(res.sample.breakpoints[i].to_double(), res.sample.values[i].to_double());
    }
    std::vector<svg::Marker> marks;
    for (const Peak& p : peaks) {
        marks.push_back({p.at.x.to_double(), p.at.y.to_double(), p.kind == PeakKind::maximal});
    }
    svg::write_trajectory(path, title, poly, marks);
}

void sbe_svg(const std::string& path, const ParamGraph& g, const Interval& I,
             const std::vector<Peak>& peaks) {
    const SbeTrajectory res = sbe_trajectory(g.nodes(), g.edges(), I);
    std::vector<std::pair<double, double>> poly;
    for (size_t i = 0; i < res.sample.breakpoints.size(); ++i) {
        poly.emplace_back(res.sample.breakpoints[i].to_double(), res.sample.values[i].to_double());
    }
    std::vector<svg::Marker> marks;
    for (const Peak& p : peaks) {
        marks.push_back({p.at.x.to_double(), p.at.y.to_double(), p.kind == PeakKind::maximal});
    }
    svg::write_trajectory(path, "w_SBE trajectory", poly, marks);
}

ordered_json instance_header(const char* op, const LevelInstance& inst) {
    ordered_json doc;
    doc["op"] = op;
    doc["n"] = inst.n();
    doc["k"] = inst.k();
    doc["perturbed"] = inst.perturbed();
    if (inst.perturbed()) doc["epsilon"] = rat(inst.epsilon());
    return doc;
}

// ---- subcommand bodies ----------------------------------------------------

int run_peaks(const std::string& path, std::optional<int> k_flag, const std::string& from,
              const std::string& to, const std::string& svg_path, const char* op, int tau) {
    const Instance loaded = load_instance(path);
    const auto& li = require_lines(loaded);
    const LevelInstance inst(li.lines, pick_k(k_flag, li));
    const Interval I = parse_interval(from, to);

    std::vector<Peak> peaks;
    if (std::string(op) == "peaks") {
        peaks = inst.all_peaks(I);
    } else if (std::string(op) == "top-peaks") {
        peaks = inst.top_peaks(I, tau);
    } else {
        peaks = inst.bottom_peaks(I, tau);
    }

    ordered_json doc = instance_header(op, inst);
    if (tau > 0) doc["tau"] = tau;
    doc["interval"] = interval_json(I);
    doc["peaks"] = ordered_json::array();
    for (const Peak& p : peaks) doc["peaks"].push_back(peak_json(p, "lines"));
    emit(doc);

    if (!svg_path.empty()) level_svg(svg_path, inst, I, peaks, op);
    return 0;
}

int run_level_query(const std::string& path, std::optional<int> k_flag, const std::string& at) {
    const Instance loaded = load_instance(path);
    const auto& li = require_lines(loaded);
    const LevelInstance inst(li.lines, pick_k(k_flag, li));
    if (at.empty()) throw UsageError("--at is required");
    const LevelPoint lp = inst.one_shot(parse_flag(at, "--at"));

    ordered_json doc = instance_header("level-query", inst);
    doc["x"] = rat(lp.p.x);
    doc["y"] = rat(lp.p.y);
    doc["left_line"] = line_json(lp.left_line);
    doc["right_line"] = line_json(lp.right_line);
    emit(doc);
    return 0;
}

int run_count_peaks(const std::string& path, std::optional<int> k_flag, const std::string& from,
                    const std::string& to) {
    const Instance loaded = load_instance(path);
    const auto& li = require_lines(loaded);
    const LevelInstance inst(li.lines, pick_k(k_flag, li));
    const Interval I = parse_interval(from, to);
    const long maximal = inst.count_max_peaks(I);
    const long total = inst.count_peaks(I);

    ordered_json doc = instance_header("count-peaks", inst);
    doc["interval"] = interval_json(I);
    doc["max_peaks"] = maximal;
    doc["min_peaks"] = total - maximal;
    doc["total_peaks"] = total;
    emit(doc);
    return 0;
}

int run_sbe_query(const std::string& path, const std::string& at) {
    const Instance loaded = load_instance(path);
    const auto& gi = require_graph(loaded);
    const ParamGraph g(gi.nodes, gi.edges);
    if (at.empty()) throw UsageError("--at is required");
    const SbeResult res = g.sbe_one_shot(parse_flag(at, "--at"));

    ordered_json doc;
    doc["op"] = "sbe-query";
    doc["nodes"] = g.nodes();
    doc["edges"] = g.edge_count();
    doc["perturbed"] = g.perturbed();
    if (g.perturbed()) doc["epsilon"] = rat(g.epsilon());
    doc["at"] = rat(parse_flag(at, "--at"));
    doc["edge"] = edge_json(res.edge);
    doc["weight"] = rat(res.weight);
    emit(doc);
    return 0;
}

int run_sbe_extrema(const std::string& path, const std::string& from, const std::string& to,
                    int c) {
    const Instance loaded = load_instance(path);
    const auto& gi = require_graph(loaded);
    const ParamGraph g(gi.nodes, gi.edges);
    const Interval I = parse_interval(from, to);
    const SbeExtrema res = g.sbe_extrema(I, c);

    ordered_json doc;
    doc["op"] = "sbe-extrema";
    doc["nodes"] = g.nodes();
    doc["edges"] = g.edge_count();
    doc["perturbed"] = g.perturbed();
    if (g.perturbed()) doc["epsilon"] = rat(g.epsilon());
    doc["interval"] = interval_json(I);
    doc["c"] = c;
    doc["max"] = rat(res.max_value);
    doc["argmax"] = rat(res.argmax);
    doc["min"] = rat(res.min_value);
    doc["argmin"] = rat(res.argmin);
    emit(doc);
    return 0;
}

int run_sbe_peaks(const std::string& path, const std::string& from, const std::string& to,
                  const std::string& svg_path) {
    const Instance loaded = load_instance(path);
    const auto& gi = require_graph(loaded);
    const ParamGraph g(gi.nodes, gi.edges);
    const Interval I = parse_interval(from, to);
    const auto peaks = g.sbe_all_peaks(I);
    const auto boundary = g.sbe_boundary(I);

    ordered_json doc;
    doc["op"] = "sbe-peaks";
    doc["nodes"] = g.nodes();
    doc["edges"] = g.edge_count();
    doc["perturbed"] = g.perturbed();
    if (g.perturbed()) doc["epsilon"] = rat(g.epsilon());
    doc["interval"] = interval_json(I);
    doc["peaks"] = ordered_json::array();
    for (const Peak& p : peaks) doc["peaks"].push_back(peak_json(p, "edges"));
    doc["boundary"] = ordered_json{
        {"lo", {{"x", rat(I.lo)}, {"edge", boundary.at_lo.edge.id}, {"weight", rat(boundary.at_lo.weight)}}},
        {"hi", {{"x", rat(I.hi)}, {"edge", boundary.at_hi.edge.id}, {"weight", rat(boundary.at_hi.weight)}}}};
    emit(doc);

    if (!svg_path.empty()) sbe_svg(svg_path, g, I, peaks);
    return 0;
}

// ---- oracle-check ----------------------------------------------------------

Interval default_interval(const std::vector<Rational>& events) {
    if (events.empty()) return Interval(Rational(-1), Rational(1));
    return Interval(events.front() - Rational(1), events.back() + Rational(1));
}

long check_lines_instance(const CanonicalLines& canon, std::optional<int> only_k,
                          const std::optional<Interval>& interval, ordered_json& mismatches,
                          const std::string& label) {
    const auto ctx = std::make_shared<LevelContext>(canon);
    const Interval I = interval ? *interval : default_interval(ctx->global_events);
    const LevelSweep sweep(canon.lines, I);
    const int n = static_cast<int>(canon.lines.size());
    long queries = 0;
    for (int k = 1; k <= n; ++k) {
        if (only_k && *only_k != k) continue;
        const LevelInstance inst(ctx, k);
        ++queries;
        if (inst.all_peaks(I) != sweep.level(k).peaks) {
            mismatches.push_back(label + ": all_peaks disagrees with sweep at k=" +
                                 std::to_string(k));
        }
    }
    return queries;
}

long check_graph_instance(const ParamGraph& g, const std::optional<Interval>& interval,
                          ordered_json& mismatches, const std::string& label) {
    std::vector<Line> wlines;
    for (const ParamEdge& e : g.edges()) wlines.push_back(e.weight_line());
    const auto events = event_abscissas(wlines);
    const Interval I = interval ? *interval : default_interval(events);
    long queries = 0;

    // one-shot probes at event midpoints (strided to at most 20)
    std::vector<Rational> probes{I.lo, I.hi};
    const size_t stride = std::max<size_t>(1, events.size() / 18);
    for (size_t i = 0; i + 1 < events.size(); i += stride) {
        probes.push_back(midpoint(events[i], events[i + 1]));
    }
    for (const Rational& x : probes) {
        ++queries;
        const auto fast = g.sbe_one_shot(x);
        const auto oracle = mst_at(g.nodes(), g.edges(), x);
        if (fast.weight != oracle.bottleneck.weight || fast.edge.id != oracle.bottleneck.edge.id) {
            mismatches.push_back(label + ": sbe_one_shot disagrees with Kruskal at x=" + x.str());
        }
    }

    const auto oracle = sbe_trajectory(g.nodes(), g.edges(), I, 1);
    ++queries;
    if (g.sbe_all_peaks(I) != oracle.peaks) {
        mismatches.push_back(label + ": sbe_all_peaks disagrees with the trajectory oracle");
    }

    Rational omax = oracle.sample.values[0], omin = omax;
    for (const Rational& v : oracle.sample.values) {
        if (v > omax) omax = v;
        if (v < omin) omin = v;
    }
    ++queries;
    const auto ext = g.sbe_extrema(I, 1);
    if (ext.max_value != omax || ext.min_value != omin) {
        mismatches.push_back(label + ": sbe_extrema disagrees with the trajectory oracle");
    }
    return queries;
}

int run_oracle_check(const std::string& target, const std::string& path, std::optional<int> k_flag,
                     const std::string& from, const std::string& to, std::uint64_t seed,
                     int count) {
    if (target != "peaks" && target != "sbe") {
        throw UsageError("oracle-check target must be 'peaks' or 'sbe'");
    }
    std::optional<Interval> interval;
    if (!from.empty() || !to.empty()) interval = parse_interval(from, to);

    ordered_json mismatches = ordered_json::array();
    long instances = 0, queries = 0;

    if (!path.empty()) {
        const Instance inst = load_instance(path);
        instances = 1;
        if (target == "peaks") {
            const auto& li = require_lines(inst);
            queries = check_lines_instance(canonicalize(li.lines), k_flag, interval, mismatches,
                                           path);
        } else {
            const auto& gi = require_graph(inst);
            queries = check_graph_instance(ParamGraph(gi.nodes, gi.edges), interval, mismatches,
                                           path);
        }
    } else {
        std::mt19937_64 rng(seed);
        for (int i = 0; i < count; ++i) {
            const std::string label = "instance#" + std::to_string(i);
            ++instances;
            if (target == "peaks") {
                queries += check_lines_instance(random_lines(rng, {.n_min = 3, .n_max = 14}),
                                                k_flag, interval, mismatches, label);
            } else {
                const GraphSpec g = random_graph(rng, {.nodes_min = 3, .nodes_max = 9});
                queries += check_graph_instance(ParamGraph(g.nodes, g.edges), interval,
                                                mismatches, label);
            }
        }
    }

    ordered_json doc;
    doc["op"] = "oracle-check";
    doc["target"] = target;
    doc["instances"] = instances;
    doc["queries"] = queries;
    doc["match"] = mismatches.empty();
    doc["mismatches"] = mismatches;
    emit(doc);
    return mismatches.empty() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local peaks of arrangement k-levels and parametric MST bottleneck trajectories"};
    app.require_subcommand(1);

    std::string instance_path, from, to, at, svg_path, target;
    std::optional<int> k_flag;
    int tau = 1, c = 1, count = 20;
    std::uint64_t seed = 1;

    const auto add_common = [&](CLI::App* sub, bool needs_instance) {
        if (needs_instance) {
            sub->add_option("instance", instance_path, "instance JSON file")->required();
        }
        return sub;
    };

    CLI::App* peaks = add_common(app.add_subcommand("peaks", "all local peaks of the k-level"), true);
    peaks->add_option("--k", k_flag);
    peaks->add_option("--from", from);
    peaks->add_option("--to", to);
    peaks->add_option("--svg", svg_path);

    CLI::App* top = add_common(app.add_subcommand("top-peaks", "tau largest maximal peaks"), true);
    top->add_option("--k", k_flag);
    top->add_option("--tau", tau);
    top->add_option("--from", from);
    top->add_option("--to", to);
    top->add_option("--svg", svg_path);

    CLI::App* bottom =
        add_common(app.add_subcommand("bottom-peaks", "tau smallest minimal peaks"), true);
    bottom->add_option("--k", k_flag);
    bottom->add_option("--tau", tau);
    bottom->add_option("--from", from);
    bottom->add_option("--to", to);
    bottom->add_option("--svg", svg_path);

    CLI::App* lq = add_common(app.add_subcommand("level-query", "point of the k-level at --at"), true);
    lq->add_option("--k", k_flag);
    lq->add_option("--at", at);

    CLI::App* cp =
        add_common(app.add_subcommand("count-peaks", "peak counts inside an interval"), true);
    cp->add_option("--k", k_flag);
    cp->add_option("--from", from);
    cp->add_option("--to", to);

    CLI::App* sq =
        add_common(app.add_subcommand("sbe-query", "bottleneck edge of the MST at --at"), true);
    sq->add_option("--at", at);

    CLI::App* se = add_common(
        app.add_subcommand("sbe-extrema", "extrema of the bottleneck weight over an interval"),
        true);
    se->add_option("--from", from);
    se->add_option("--to", to);
    se->add_option("--c", c);

    CLI::App* sp = add_common(
        app.add_subcommand("sbe-peaks", "all interior peaks of the bottleneck trajectory"), true);
    sp->add_option("--from", from);
    sp->add_option("--to", to);
    sp->add_option("--svg", svg_path);

    CLI::App* oc = app.add_subcommand("oracle-check", "fast path versus brute-force oracle");
    oc->add_option("target", target, "peaks | sbe")->required();
    oc->add_option("instance", instance_path, "instance JSON file (omit to run a seeded corpus)");
    oc->add_option("--k", k_flag);
    oc->add_option("--from", from);
    oc->add_option("--to", to);
    oc->add_option("--seed", seed);
    oc->add_option("--count", count);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (peaks->parsed()) return run_peaks(instance_path, k_flag, from, to, svg_path, "peaks", 0);
        if (top->parsed()) {
            if (tau < 1) throw UsageError("--tau must be >= 1");
            return run_peaks(instance_path, k_flag, from, to, svg_path, "top-peaks", tau);
        }
        if (bottom->parsed()) {
            if (tau < 1) throw UsageError("--tau must be >= 1");
            return run_peaks(instance_path, k_flag, from, to, svg_path, "bottom-peaks", tau);
        }
        if (lq->parsed()) return run_level_query(instance_path, k_flag, at);
        if (cp->parsed()) return run_count_peaks(instance_path, k_flag, from, to);
        if (sq->parsed()) return run_sbe_query(instance_path, at);
        if (se->parsed()) {
            if (c < 1) throw UsageError("--c must be >= 1");
            return run_sbe_extrema(instance_path, from, to, c);
        }
        if (sp->parsed()) return run_sbe_peaks(instance_path, from, to, svg_path);
        if (oc->parsed()) {
            return run_oracle_check(target, instance_path, k_flag, from, to, seed, count);
        }
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const InvalidInstance& e) {
        std::cerr << "invalid instance: " << e.what() << "\n";
        return 2;
    } catch (const VerticalLineUnrepresentable& e) {
        std::cerr << "invalid instance: " << e.what() << "\n";
        return 2;
    } catch (const EmptyInput& e) {
        std::cerr << "invalid instance: " << e.what() << "\n";
        return 2;
    } catch (const Disconnected& e) {
        std::cerr << "invalid instance: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid instance: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
