#pragma once

#include "specgraph/export.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace specgraph {

enum class InputFormat { Snap, Csv };
enum class Scope { Full, LargestScc };
enum class GammaSource { Fixed, Expectation, Max };

inline const char *to_string(InputFormat f) { return f == InputFormat::Snap ? "snap" : "csv"; }
inline const char *to_string(Scope s) { return s == Scope::Full ? "full" : "largest_scc"; }
inline const char *to_string(GammaSource g) {
    switch (g) {
    case GammaSource::Fixed: return "fixed";
    case GammaSource::Expectation: return "expectation";
    case GammaSource::Max: return "max";
    }
    return "?";
}

struct AnalysisConfig {
    std::filesystem::path input;
    InputFormat format = InputFormat::Snap;
    std::optional<std::filesystem::path> node_weights;
    Scope scope = Scope::LargestScc;
    ZeroEigPolicy zero_policy = ZeroEigPolicy::ExcludeZeros;
    ToleranceConfig tolerances;
    double W = kInfiniteWeight;
    GammaSource gamma_source = GammaSource::Fixed;
    double gamma = 1.0;
    std::size_t gamma_samples = 10; ///< random graphs drawn when gamma is estimated
    BetaMode beta_mode = BetaMode::RemovedEdges;
    double trim_step = 0.001;
    TrimRank trim_rank = TrimRank::MagnitudeDescending;
    std::size_t k_cap = 50;
    double component_zero_tol = 1e-8;
    std::uint64_t seed = 1;
    bool symmetrize = false;
    bool fiedler_comparison = true;
    std::filesystem::path out_dir = ".";

    // baseline sweep
    std::size_t sweep_n = 1000;
    std::vector<double> sweep_degrees;
    std::size_t sweep_realizations = 10;
    unsigned threads = 0;

    void validate() const {
        tolerances.validate();
        if (!(W >= 0.0))
            throw ValidationError("W must be >= 0 or inf");
        if (!(gamma > 0.0))
            throw ValidationError("gamma must be positive");
        if (!(trim_step > 0.0) || trim_step > 1.0)
            throw ValidationError("trim step must lie in (0, 1]");
        if (k_cap < 2)
            throw ValidationError("K search cap must be >= 2");
        if (!(component_zero_tol > 0.0))
            throw ValidationError("component zero tolerance must be positive");
    }
};

inline Json config_json(const AnalysisConfig &c) {
    Json j{{"input", c.input.generic_string()},
           {"format", to_string(c.format)},
           {"node_weights", c.node_weights ? Json(c.node_weights->generic_string()) : Json(nullptr)},
           {"scope", to_string(c.scope)},
           {"zero_policy", to_string(c.zero_policy)},
           {"tolerances", to_json(c.tolerances)},
           {"W", num(c.W)},
           {"gamma_source", to_string(c.gamma_source)},
           {"gamma", num(c.gamma)},
           {"beta_mode", c.beta_mode == BetaMode::RemovedEdges ? "removed_edges" : "all_edges"},
           {"trim_step", num(c.trim_step)},
           {"trim_rank", c.trim_rank == TrimRank::MagnitudeDescending ? "magnitude_desc" : "real_asc"},
           {"k_cap", c.k_cap},
           {"component_zero_tol", num(c.component_zero_tol)},
           {"seed", c.seed}};
    return j;
}

namespace detail {

inline std::ifstream open_input(const std::filesystem::path &p) {
    std::ifstream in(p);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open " + p.string());
    return in;
}

inline void write_output(const std::filesystem::path &p, const std::function<void(std::ostream &)> &body) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write " + p.string());
    body(out);
    if (!out)
        throw Error(ErrorKind::Io, "write failed for " + p.string());
}

inline void write_json(const std::filesystem::path &p, const Json &j) {
    write_output(p, [&](std::ostream &o) { o << j.dump(2) << '\n'; });
}

inline void ensure_dir(const std::filesystem::path &p) {
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec)
        throw Error(ErrorKind::Io, "cannot create output directory " + p.string() + ": " + ec.message());
}

} // namespace detail

inline DirectedGraph load_graph(const AnalysisConfig &c) {
    auto in = detail::open_input(c.input);
    DirectedGraph g = c.format == InputFormat::Snap ? parse_snap_edge_list(in) : parse_weighted_csv(in);
    if (c.node_weights) {
        auto win = detail::open_input(*c.node_weights);
        g = with_node_weights(g, parse_node_weights(win));
    }
    return g;
}

/// Estimated over random digraphs with the input's node count and average degree, unit node weights.
inline double resolve_gamma(const AnalysisConfig &c, const DirectedGraph &g) {
    if (c.gamma_source == GammaSource::Fixed)
        return c.gamma;
    const double degree = std::clamp(static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count()),
                                     1e-9, static_cast<double>(g.node_count()));
    std::vector<ComplexitySample> samples;
    for (std::size_t i = 0; i < std::max<std::size_t>(1, c.gamma_samples); ++i) {
        const auto rg = random_digraph(g.node_count(), degree, realization_seed(c.seed, i));
        const auto a = analyze_complexity(rg, c.tolerances, c.zero_policy);
        samples.push_back({a.report.F, sum_node_weights(rg) + a.reduced.removed_weight()});
    }
    return estimate_gamma(samples, c.gamma_source == GammaSource::Max ? GammaMode::Max : GammaMode::Expectation);
}

/// Complexity pipeline; writes report.json, eigenvalues.csv and spectrum.svg.
inline Json cmd_complexity(const AnalysisConfig &c) {
    c.validate();
    const DirectedGraph g = load_graph(c);
    const auto a = analyze_complexity(g, c.tolerances, c.zero_policy);
    const double gamma = resolve_gamma(c, g);
    const auto total = total_complexity(a.report.F, g, a.reduced, gamma, c.W, c.beta_mode);

    Json report{{"command", "complexity"},
                {"config", config_json(c)},
                {"graph", to_json(graph_stats(g))},
                {"reduction", reduction_summary_json(a.reduced)},
                {"spectrum", to_json(a.polar)},
                {"complexity", to_json(a.report)},
                {"total_complexity", to_json(total)}};

    detail::ensure_dir(c.out_dir);
    detail::write_json(c.out_dir / "report.json", report);
    detail::write_output(c.out_dir / "eigenvalues.csv",
                         [&](std::ostream &o) { write_eigenvalues_csv(o, a.spectrum, c.tolerances); });
    detail::write_output(c.out_dir / "spectrum.svg",
                         [&](std::ostream &o) { write_spectrum_svg(o, a.spectrum, c.tolerances); });
    return report;
}

/// Cycle clustering pipeline; writes report.json, clusters.json, clusters.dot, ratios.csv and curve.csv.
inline Json cmd_cluster(const AnalysisConfig &c) {
    c.validate();
    const DirectedGraph g = load_graph(c);
    const auto a = analyze_complexity(g, c.tolerances, c.zero_policy, true);

    ClusterOptions copt;
    copt.component_zero_tol = c.component_zero_tol;
    std::optional<std::vector<NodeId>> scc_nodes;
    if (c.scope == Scope::LargestScc) {
        const auto dec = scc(a.reduced.graph);
        scc_nodes = dec.components[dec.largest()];
        copt.restrict_to = scc_nodes;
    }
    const auto ca = cluster_by_cycles(a.spectrum, a.recurrence, a.reduced, c.tolerances, KminOptions{c.k_cap}, copt);
    const auto full_per_node = ratio_table(g, ca.clustering, RatioMode::EdgesPerNode);
    const auto full_per_edge = ratio_table(g, ca.clustering, RatioMode::EdgesPerInternalEdge);
    const auto trim = trim_clusters(g, ca.clustering, TrimOptions{c.trim_step, c.trim_rank});

    Json report{{"command", "cluster"},
                {"config", config_json(c)},
                {"graph", to_json(graph_stats(g))},
                {"reduction", reduction_summary_json(a.reduced)},
                {"spectrum", to_json(a.polar)},
                {"complexity", to_json(a.report)}};
    Json clustering{{"scope", to_string(c.scope)},
                    {"clustered_nodes", scc_nodes ? scc_nodes->size() : a.reduced.kept.size()},
                    {"k_min", ca.kmin.k_min},
                    {"kmin_search", to_json(ca.kmin)},
                    {"generators", to_json(ca.generators)},
                    {"cluster_sizes", full_per_node.cluster_sizes},
                    {"sink_cluster_size", ca.clustering.sink_cluster.size()},
                    {"disconnected_cluster_size", ca.clustering.disconnected_cluster.size()},
                    {"near_zero_flagged", ca.clustering.near_zero_flagged.size()},
                    {"ratios_per_node", to_json(full_per_node)},
                    {"ratios_per_internal_edge", to_json(full_per_edge)},
                    {"trim", trim_summary_json(trim)}};
    report["clustering"] = std::move(clustering);

    std::optional<RatioTable> fiedler_table;
    if (c.fiedler_comparison) {
        std::vector<NodeId> nodes;
        for (const auto &members : ca.clustering.sector_clusters())
            nodes.insert(nodes.end(), members.begin(), members.end());
        std::sort(nodes.begin(), nodes.end());
        try {
            const auto sub = induced_subgraph(g, nodes);
            const auto f = fiedler_partition(sub);
            fiedler_table = ratio_table(g, {f.cluster_pos, f.cluster_neg}, RatioMode::EdgesPerNode);
            Json fj = to_json(f);
            fj.erase("clusters");
            fj["ratios_per_node"] = to_json(*fiedler_table);
            report["baseline_comparison"] = Json{{"fiedler", std::move(fj)}};
        } catch (const ValidationError &e) {
            report["baseline_comparison"] = Json{{"fiedler", Json{{"skipped", e.what()}}}};
        }
    }

    detail::ensure_dir(c.out_dir);
    detail::write_json(c.out_dir / "report.json", report);
    detail::write_json(c.out_dir / "clusters.json", to_json(ca.clustering));
    detail::write_output(c.out_dir / "clusters.dot",
                         [&](std::ostream &o) { write_clusters_dot(o, g, ca.clustering.sector_clusters()); });
    detail::write_output(c.out_dir / "clusters_trimmed.dot",
                         [&](std::ostream &o) { write_clusters_dot(o, g, trim.trimmed_clusters); });
    detail::write_output(c.out_dir / "ratios.csv", [&](std::ostream &o) {
        write_ratio_csv(o, full_per_node, "full");
        write_ratio_csv(o, full_per_edge, "full");
        write_ratio_csv(o, trim.table, "trimmed");
        if (fiedler_table)
            write_ratio_csv(o, *fiedler_table, "fiedler");
    });
    detail::write_output(c.out_dir / "curve.csv", [&](std::ostream &o) { write_trim_curve_csv(o, trim); });
    detail::write_output(c.out_dir / "eigenvalues.csv",
                         [&](std::ostream &o) { write_eigenvalues_csv(o, a.spectrum, c.tolerances); });
    detail::write_output(c.out_dir / "spectrum.svg", [&](std::ostream &o) {
        write_spectrum_svg(o, a.spectrum, c.tolerances, ca.generators.primary());
    });
    return report;
}

inline Json cmd_energy(const AnalysisConfig &c) {
    c.validate();
    const DirectedGraph g = load_graph(c);
    const auto e = graph_energy(g, c.symmetrize);
    Json report{{"command", "energy"},
                {"config", config_json(c)},
                {"graph", to_json(graph_stats(g))},
                {"energy", to_json(e)}};
    detail::ensure_dir(c.out_dir);
    detail::write_json(c.out_dir / "report.json", report);
    return report;
}

/// Fiedler bipartition of the largest SCC (or the whole graph); directed ratio tables use the original edges.
inline Json cmd_fiedler(const AnalysisConfig &c) {
    c.validate();
    const DirectedGraph g = load_graph(c);
    DirectedGraph sub = g;
    if (c.scope == Scope::LargestScc) {
        const auto dec = scc(g);
        sub = induced_subgraph(g, dec.components[dec.largest()]);
    }
    const auto f = fiedler_partition(sub);
    const auto table = ratio_table(g, {f.cluster_pos, f.cluster_neg}, RatioMode::EdgesPerNode);
    Json fj = to_json(f);
    Json report{{"command", "fiedler"},
                {"config", config_json(c)},
                {"graph", to_json(graph_stats(g))},
                {"partitioned_nodes", sub.node_count()},
                {"fiedler", fj},
                {"ratios_per_node", to_json(table)}};
    detail::ensure_dir(c.out_dir);
    detail::write_json(c.out_dir / "report.json", report);
    detail::write_json(c.out_dir / "clusters.json", Json{{"clusters", fj["clusters"]}});
    detail::write_output(c.out_dir / "ratios.csv", [&](std::ostream &o) { write_ratio_csv(o, table, "fiedler"); });
    return report;
}

/// Degree-vs-F curve over random digraphs; writes baseline.csv, baseline.svg and report.json.
inline Json cmd_baseline_sweep(const AnalysisConfig &c) {
    c.validate();
    if (c.sweep_realizations == 0)
        throw ValidationError("realizations must be >= 1");
    if (c.sweep_degrees.empty())
        throw ValidationError("degree list is empty");
    std::vector<BaselineResult> rows;
    for (std::size_t i = 0; i < c.sweep_degrees.size(); ++i)
        rows.push_back(random_baseline(c.sweep_n, c.sweep_degrees[i], c.sweep_realizations,
                                       realization_seed(c.seed, 1000003 * (i + 1)), c.tolerances, c.zero_policy,
                                       c.threads));
    Json sweep = Json::array();
    for (const auto &r : rows)
        sweep.push_back(to_json(r));
    std::vector<double> deg, f;
    for (const auto &r : rows) {
        deg.push_back(r.avg_degree);
        f.push_back(r.F.mean);
    }
    Json report{{"command", "baseline-sweep"},
                {"config", config_json(c)},
                {"n", c.sweep_n},
                {"realizations", c.sweep_realizations},
                {"sweep", std::move(sweep)}};
    if (rows.size() >= 2)
        report["spearman_degree_F"] = num(spearman(deg, f));
    detail::ensure_dir(c.out_dir);
    detail::write_json(c.out_dir / "report.json", report);
    detail::write_output(c.out_dir / "baseline.csv", [&](std::ostream &o) { write_baseline_csv(o, rows); });
    detail::write_output(c.out_dir / "baseline.svg", [&](std::ostream &o) { write_baseline_svg(o, rows); });
    return report;
}

} // namespace specgraph
