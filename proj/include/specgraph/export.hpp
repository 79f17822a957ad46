#pragma once

#include "specgraph/baselines.hpp"
#include "specgraph/cycleclust.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <string>

namespace specgraph {

using Json = nlohmann::ordered_json;

/// Seven significant digits, the precision every report uses.
inline std::string fmt7(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.7g", x);
    return buf;
}

/// JSON number rounded to seven significant digits; non-finite values become strings.
inline Json num(double x) {
    if (!std::isfinite(x))
        return fmt7(x);
    double r = std::strtod(fmt7(x).c_str(), nullptr);
    if (r == 0.0)
        r = 0.0; // drop negative zero
    return r;
}

inline Json ids_json(const auto &ids) {
    Json a = Json::array();
    for (NodeId id : ids)
        a.push_back(id.value);
    return a;
}

inline Json to_json(const ToleranceConfig &t) {
    return Json{{"zero_mod_tol", num(t.zero_mod_tol)},
                {"one_tol", num(t.one_tol)},
                {"real_axis_tol", num(t.real_axis_tol)},
                {"generator_match_tol", num(t.generator_match_tol)}};
}

inline Json to_json(const GraphStats &s) {
    return Json{{"node_count", s.node_count},     {"edge_count", s.edge_count},
                {"average_degree", num(s.average_degree)}, {"source_count", s.source_count},
                {"sink_count", s.sink_count},     {"disconnected_count", s.disconnected_count}};
}

inline Json reduction_summary_json(const ReducedGraph &rg) {
    return Json{{"kept_count", rg.kept.size()},
                {"removed_source_count", rg.removed_sources.size()},
                {"removed_edge_count", rg.removed_edges.size()},
                {"removed_edge_weight", num(rg.removed_weight())},
                {"sink_count", rg.sink_selfloops_added.size()},
                {"disconnected_count", rg.disconnected.size()}};
}

/// Full audit record: kept ids and every removed edge in removal order.
inline Json to_json(const ReducedGraph &rg) {
    Json j = reduction_summary_json(rg);
    j["kept"] = ids_json(rg.kept);
    j["removed_sources"] = ids_json(rg.removed_sources);
    Json edges = Json::array();
    for (const Edge &e : rg.removed_edges)
        edges.push_back(Json::array({e.src.value, e.dst.value, num(e.weight)}));
    j["removed_edges"] = std::move(edges);
    j["sink_selfloops_added"] = ids_json(rg.sink_selfloops_added);
    j["disconnected"] = ids_json(rg.disconnected);
    return j;
}

inline Json to_json(const PolarSummary &p) {
    return Json{{"dim", p.eigen.size()},
                {"n_zero", p.n_zero},
                {"n_one", p.n_one},
                {"n_theta_nonzero", p.n_theta_nonzero},
                {"max_modulus", num(p.max_modulus)},
                {"min_nonzero_modulus", num(p.min_nonzero_modulus)}};
}

inline Json to_json(const ComplexityReport &r) {
    return Json{{"F", num(r.F)},
                {"radial_term", num(r.radial_term)},
                {"angular_term", num(r.angular_term)},
                {"K", r.K},
                {"policy", to_string(r.policy)},
                {"tolerances", to_json(r.tolerances)}};
}

inline Json to_json(const TotalComplexityReport &t) {
    return Json{{"C", num(t.C)},     {"W", num(t.W)},           {"gamma", num(t.gamma)},
                {"sum_alpha", num(t.sum_alpha)}, {"sum_beta", num(t.sum_beta)}, {"F", num(t.F)}};
}

inline Json to_json(const EnergyReport &e) {
    Json j{{"energy", num(e.energy)},
           {"singular_value_sum", num(e.singular_value_sum)},
           {"mean_edge_weight", num(e.mean_edge_weight)},
           {"symmetrized", e.symmetrized}};
    if (!e.warning.empty())
        j["warning"] = e.warning;
    return j;
}

inline Json complex_json(Complex z) { return Json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

inline Json to_json(const KminSearchResult &k) {
    Json obj = Json::object();
    for (const auto &[K, v] : k.objective)
        obj[std::to_string(K)] = num(v);
    return Json{{"k_min", k.k_min}, {"n_candidates", k.n_candidates}, {"objective", std::move(obj)}};
}

inline Json to_json(const GeneratingSet &g) {
    Json vals = Json::array();
    for (Complex z : g.generating_eigenvalues)
        vals.push_back(complex_json(z));
    return Json{{"primary", complex_json(g.primary())}, {"generating_eigenvalues", std::move(vals)}};
}

inline Json to_json(const RatioTable &t) {
    Json cells = Json::array(), counts = Json::array();
    for (std::size_t x = 0; x < t.cells.size(); ++x) {
        Json row = Json::array(), crow = Json::array();
        for (std::size_t y = 0; y < t.cells[x].size(); ++y) {
            row.push_back(num(t.cells[x][y]));
            crow.push_back(t.counts[x][y]);
        }
        cells.push_back(std::move(row));
        counts.push_back(std::move(crow));
    }
    Json j{{"mode", to_string(t.mode)}, {"cluster_sizes", t.cluster_sizes}, {"cells", cells}, {"counts", counts}};
    if (!t.warnings.empty())
        j["warnings"] = t.warnings;
    return j;
}

/// Cluster membership by original node id.
inline Json to_json(const Clustering &c) {
    Json clusters = Json::array();
    for (const auto &members : c.sector_clusters())
        clusters.push_back(ids_json(members));
    Json phi = Json::object();
    for (const auto &[id, a] : c.phi)
        phi[std::to_string(id.value)] = num(a);
    return Json{{"k", c.k},
                {"cluster_sizes",
                 [&] {
                     Json s = Json::array();
                     for (const auto &m : c.sector_clusters())
                         s.push_back(m.size());
                     return s;
                 }()},
                {"clusters", std::move(clusters)},
                {"sink_cluster", ids_json(c.sink_cluster)},
                {"disconnected_cluster", ids_json(c.disconnected_cluster)},
                {"near_zero_flagged", ids_json(c.near_zero_flagged)},
                {"sinks_with_nonzero_component", c.sinks_with_nonzero_component},
                {"phi", std::move(phi)}};
}

inline Json trim_summary_json(const TrimResult &t) {
    Json clusters = Json::array();
    for (const auto &c : t.trimmed_clusters)
        clusters.push_back(ids_json(c));
    return Json{{"fraction", num(t.fraction)},
                {"objective", num(t.objective)},
                {"fraction_after_drop", num(t.fraction_after_drop)},
                {"dropped_disjoint", ids_json(t.dropped_disjoint)},
                {"trimmed_clusters", std::move(clusters)},
                {"table", to_json(t.table)}};
}

inline Json to_json(const FiedlerResult &f) {
    return Json{{"cut_found", f.cut_found},
                {"fiedler_value", num(f.fiedler_value)},
                {"smallest_eigenvalue", num(f.smallest_eigenvalue)},
                {"cluster_sizes", Json::array({f.cluster_pos.size(), f.cluster_neg.size()})},
                {"clusters", Json::array({ids_json(f.cluster_pos), ids_json(f.cluster_neg)})}};
}

inline Json to_json(const BaselineResult &b) {
    return Json{{"n", b.n},
                {"avg_degree", num(b.avg_degree)},
                {"realizations", b.realizations.size()},
                {"mean_F", num(b.F.mean)},
                {"std_F", num(b.F.stddev)},
                {"mean_radial", num(b.radial.mean)},
                {"std_radial", num(b.radial.stddev)},
                {"mean_angular", num(b.angular.mean)},
                {"std_angular", num(b.angular.stddev)}};
}

inline void write_eigenvalues_csv(std::ostream &out, const Spectrum &s, const ToleranceConfig &tol) {
    out << "re,im,r,theta,class\n";
    for (const Complex &z : s.eigenvalues) {
        const PolarEigen p = classify(z, tol);
        out << fmt7(z.real()) << ',' << fmt7(z.imag()) << ',' << fmt7(p.r) << ',' << fmt7(p.theta) << ','
            << to_string(p.cls) << '\n';
    }
}

/// Eigenvalues scattered over the unit disk; zero-classified ones are omitted.
inline void write_spectrum_svg(std::ostream &out, const Spectrum &s, const ToleranceConfig &tol,
                               std::optional<Complex> highlight = std::nullopt) {
    constexpr double size = 480.0, pad = 40.0, scale = (size - 2 * pad) / 2.0, c = size / 2.0;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<circle cx=\"" << c << "\" cy=\"" << c << "\" r=\"" << scale
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << pad / 2 << "\" y1=\"" << c << "\" x2=\"" << size - pad / 2 << "\" y2=\"" << c
        << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
    out << "<line x1=\"" << c << "\" y1=\"" << pad / 2 << "\" x2=\"" << c << "\" y2=\"" << size - pad / 2
        << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
    for (const Complex &z : s.eigenvalues) {
        if (classify(z, tol).cls == EigenClass::Zero)
            continue;
        out << "<circle cx=\"" << fmt7(c + scale * z.real()) << "\" cy=\"" << fmt7(c - scale * z.imag())
            << "\" r=\"2\" fill=\"red\"/>\n";
    }
    if (highlight)
        out << "<circle cx=\"" << fmt7(c + scale * highlight->real()) << "\" cy=\""
            << fmt7(c - scale * highlight->imag()) << "\" r=\"6\" fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\"/>\n";
    out << "</svg>\n";
}

namespace detail {

inline const char *palette(std::size_t i) {
    static constexpr const char *colors[] = {"#e41a1c", "#4daf4a", "#377eb8", "#984ea3", "#ff7f00",
                                             "#a65628", "#f781bf", "#999999", "#66c2a5", "#fc8d62"};
    return colors[i % (sizeof colors / sizeof colors[0])];
}

inline const char *pale(std::size_t i) {
    static constexpr const char *colors[] = {"#fbb4ae", "#ccebc5", "#b3cde3", "#decbe4", "#fed9a6",
                                             "#e5d8bd", "#fddaec", "#f2f2f2", "#d9f0e9", "#fee0d2"};
    return colors[i % (sizeof colors / sizeof colors[0])];
}

} // namespace detail

/// Nodes filled by cluster; cross edges take the source cluster's colour, internal edges are black.
inline void write_clusters_dot(std::ostream &out, const DirectedGraph &g, const std::vector<std::vector<NodeId>> &clusters) {
    std::unordered_map<NodeId, std::size_t> label;
    for (std::size_t c = 0; c < clusters.size(); ++c)
        for (NodeId id : clusters[c])
            label.emplace(id, c);
    out << "digraph clusters {\n  node [style=filled];\n";
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        out << "  subgraph cluster_" << c + 1 << " {\n    label=\"C" << c + 1 << "\";\n    style=filled;\n    color=\""
            << detail::pale(c) << "\";\n";
        for (NodeId id : clusters[c])
            out << "    n" << id.value << " [label=\"" << id.value << "\", fillcolor=\"" << detail::pale(c) << "\"];\n";
        out << "  }\n";
    }
    for (const Edge &e : g.edges()) {
        auto a = label.find(e.src), b = label.find(e.dst);
        if (a == label.end() || b == label.end())
            continue;
        const char *color = a->second == b->second ? "black" : detail::palette(a->second);
        out << "  n" << e.src.value << " -> n" << e.dst.value << " [color=\"" << color << "\"];\n";
    }
    out << "}\n";
}

inline void write_ratio_csv(std::ostream &out, const RatioTable &t, const std::string &label) {
    out << "table,mode,from,size";
    for (std::size_t y = 0; y < t.cells.size(); ++y)
        out << ",to_C" << y + 1;
    out << '\n';
    for (std::size_t x = 0; x < t.cells.size(); ++x) {
        out << label << ',' << to_string(t.mode) << ",C" << x + 1 << ',' << t.cluster_sizes[x];
        for (double v : t.cells[x])
            out << ',' << fmt7(v);
        out << '\n';
    }
}

/// One row per grid point: fraction, objective, then every X->Y ratio.
inline void write_trim_curve_csv(std::ostream &out, const TrimResult &t) {
    const std::size_t k = t.trimmed_clusters.size();
    out << "fraction,objective";
    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < k; ++y)
            out << ",C" << x + 1 << "_to_C" << y + 1;
    out << '\n';
    for (const TrimPoint &p : t.curve) {
        out << fmt7(p.fraction) << ',' << fmt7(p.objective);
        for (const auto &row : p.ratios)
            for (double v : row)
                out << ',' << fmt7(v);
        out << '\n';
    }
}

inline void write_baseline_csv(std::ostream &out, const std::vector<BaselineResult> &rows) {
    out << "degree,mean_F,std_F,mean_radial,mean_angular\n";
    for (const auto &b : rows)
        out << fmt7(b.avg_degree) << ',' << fmt7(b.F.mean) << ',' << fmt7(b.F.stddev) << ',' << fmt7(b.radial.mean)
            << ',' << fmt7(b.angular.mean) << '\n';
}

/// F (red), angular term (blue) and radial term (green) against average degree.
inline void write_baseline_svg(std::ostream &out, const std::vector<BaselineResult> &rows) {
    constexpr double w = 640, h = 400, pad = 50;
    double dmax = 1.0;
    for (const auto &b : rows)
        dmax = std::max(dmax, b.avg_degree);
    auto px = [&](double d) { return pad + (w - 2 * pad) * d / dmax; };
    auto py = [&](double v) { return h - pad - (h - 2 * pad) * v / 2.0; };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\"" << h - pad
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">average degree</text>\n";
    out << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 " << h / 2
        << ")\" text-anchor=\"middle\">complexity</text>\n";
    auto series = [&](auto value, const char *color) {
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto &b : rows)
            out << fmt7(px(b.avg_degree)) << ',' << fmt7(py(value(b))) << ' ';
        out << "\"/>\n";
    };
    series([](const BaselineResult &b) { return b.F.mean; }, "red");
    series([](const BaselineResult &b) { return b.angular.mean; }, "blue");
    series([](const BaselineResult &b) { return b.radial.mean; }, "green");
    out << "</svg>\n";
}

} // namespace specgraph
