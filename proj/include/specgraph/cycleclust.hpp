#pragma once

#include "specgraph/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace specgraph {

struct KminOptions {
    std::size_t k_cap = 50;
    /// Objectives this close count as equal; the larger K wins so a pure d-cycle reports d, not a divisor of d.
    double tie_tol = 1e-9;
};

struct KminSearchResult {
    std::size_t k_min = 0;
    std::map<std::size_t, double> objective;
    std::size_t n_candidates = 0; ///< number of nonzero eigenvalues
};

namespace detail {

inline std::vector<std::size_t> nonzero_indices(const Spectrum &s, const ToleranceConfig &tol) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < s.size(); ++j)
        if (std::abs(s.eigenvalues[j]) >= tol.zero_mod_tol)
            out.push_back(j);
    return out;
}

} // namespace detail

/**
 * Distance of the spectrum from a pure K-cycle, sector by sector:
 * for t = 2..K the sector [(2pi/K)(t-1.5), (2pi/K)(t-0.5)] contributes
 * min |exp(2pi i (t-1)/K) - lambda_j| over the nonzero eigenvalues inside
 * it, or 1 when it is empty. A sector term never exceeds the empty-sector
 * value of 1. The objective is the mean over t.
 */
inline double kmin_objective(std::span<const Complex> lambdas, std::size_t K) {
    const double w = 2.0 * std::numbers::pi / static_cast<double>(K);
    std::vector<double> alpha(lambdas.size());
    for (std::size_t j = 0; j < lambdas.size(); ++j)
        alpha[j] = angle_0_2pi(lambdas[j]);
    double total = 0.0;
    for (std::size_t t = 2; t <= K; ++t) {
        const double lo = w * (static_cast<double>(t) - 1.5);
        const double hi = w * (static_cast<double>(t) - 0.5);
        const Complex center = std::polar(1.0, w * static_cast<double>(t - 1));
        double best = 1.0;
        for (std::size_t j = 0; j < lambdas.size(); ++j)
            if (alpha[j] >= lo && alpha[j] <= hi)
                best = std::min(best, std::abs(center - lambdas[j]));
        total += best;
    }
    return total / static_cast<double>(K - 1);
}

inline KminSearchResult find_kmin(const Spectrum &s, const ToleranceConfig &tol, const KminOptions &opt = {}) {
    tol.validate();
    const auto idx = detail::nonzero_indices(s, tol);
    if (idx.size() < 2)
        throw DegenerateError("no cycle structure: fewer than two nonzero eigenvalues");
    std::vector<Complex> lambdas;
    for (std::size_t j : idx)
        lambdas.push_back(s.eigenvalues[j]);

    KminSearchResult res;
    res.n_candidates = idx.size();
    const std::size_t k_hi = std::min(idx.size(), std::max<std::size_t>(opt.k_cap, 2));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t K = 2; K <= k_hi; ++K) {
        const double obj = kmin_objective(lambdas, K);
        res.objective[K] = obj;
        if (obj <= best + opt.tie_tol) {
            res.k_min = K;
            best = std::min(best, obj);
        }
    }
    return res;
}

struct GeneratingSet {
    std::size_t primary_index = 0;
    std::vector<std::size_t> indices; ///< primary first, then the rest in spectrum order
    std::vector<Complex> generating_eigenvalues;
    Eigen::MatrixXcd generating_eigenvectors; ///< one column per generating eigenvalue

    Complex primary() const { return generating_eigenvalues.front(); }
};

/**
 * Primary generator: the nonzero eigenvalue with angle in [pi/K, 3pi/K]
 * closest to exp(2pi i/K). Equal distances prefer non-negative imaginary
 * part, then the lower index. Further generators lie within
 * generator_match_tol of the primary.
 */
inline GeneratingSet select_generators(const Spectrum &s, std::size_t k_min, const ToleranceConfig &tol) {
    if (k_min < 2)
        throw ValidationError("select_generators: k_min must be >= 2");
    if (!s.has_vectors())
        throw ValidationError("select_generators: spectrum was computed without eigenvectors");
    const double K = static_cast<double>(k_min);
    const double lo = std::numbers::pi / K, hi = 3.0 * std::numbers::pi / K;
    const Complex target = std::polar(1.0, 2.0 * std::numbers::pi / K);

    std::optional<std::size_t> best;
    double best_dist = 0.0;
    for (std::size_t j : detail::nonzero_indices(s, tol)) {
        const double a = angle_0_2pi(s.eigenvalues[j]);
        if (a < lo || a > hi)
            continue;
        const double d = std::abs(s.eigenvalues[j] - target);
        const bool better = !best || d < best_dist ||
                            (d == best_dist && s.eigenvalues[j].imag() >= 0.0 && s.eigenvalues[*best].imag() < 0.0);
        if (better) {
            best = j;
            best_dist = d;
        }
    }
    if (!best)
        throw DegenerateError("degenerate spectrum: no nonzero eigenvalue in the generating band for K=" +
                              std::to_string(k_min));

    GeneratingSet gs;
    gs.primary_index = *best;
    gs.indices.push_back(*best);
    const Complex primary = s.eigenvalues[*best];
    for (std::size_t j = 0; j < s.size(); ++j)
        if (j != *best && std::abs(s.eigenvalues[j] - primary) <= tol.generator_match_tol)
            gs.indices.push_back(j);
    const auto &v = *s.right_eigenvectors;
    gs.generating_eigenvectors.resize(v.rows(), static_cast<Eigen::Index>(gs.indices.size()));
    for (std::size_t c = 0; c < gs.indices.size(); ++c) {
        gs.generating_eigenvalues.push_back(s.eigenvalues[gs.indices[c]]);
        gs.generating_eigenvectors.col(static_cast<Eigen::Index>(c)) = v.col(static_cast<Eigen::Index>(gs.indices[c]));
    }
    return gs;
}

struct ClusterOptions {
    double component_zero_tol = 1e-8;
    /// Cluster only these nodes (e.g. the largest SCC); all matrix nodes when unset.
    std::optional<std::vector<NodeId>> restrict_to;
};

struct Clustering {
    std::size_t k = 0;
    std::map<NodeId, std::size_t> labels; ///< sector cluster per node
    std::set<NodeId> sink_cluster;
    std::set<NodeId> disconnected_cluster;
    std::map<NodeId, double> phi;        ///< component angle in [0, 2pi)
    std::map<NodeId, Complex> component; ///< eigenvector entry the label came from
    std::set<NodeId> near_zero_flagged;  ///< non-sink nodes labelled from a numerically meaningless angle
    std::size_t sinks_with_nonzero_component = 0;

    /// Sector clusters as sorted node lists, index = label.
    std::vector<std::vector<NodeId>> sector_clusters() const {
        std::vector<std::vector<NodeId>> out(k);
        for (const auto &[id, c] : labels)
            out[c].push_back(id);
        return out;
    }
};

/// Sector index for an angle: sectors are centred on the K-th roots of unity; boundary angles go to the lower index.
inline std::size_t sector_of(double phi, std::size_t K) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double w = two_pi / static_cast<double>(K);
    const double x = std::fmod(phi + 0.5 * w, two_pi);
    const double q = x / w;
    auto s = static_cast<std::size_t>(std::floor(q));
    if (s > 0 && q == std::floor(q))
        --s;
    return std::min(s, K - 1);
}

/**
 * Labels each node by the angle of its generating-eigenvector component.
 * Each generating vector is phase-normalized first, so labels do not
 * depend on the vector's global phase. A node takes its component from
 * the first generating vector where it is not numerically zero. Sinks and
 * isolated nodes of the reduced graph go to their own clusters.
 */
inline Clustering assign_clusters(const GeneratingSet &gen, const RecurrenceMatrix &r, const ReducedGraph &rg,
                                  std::size_t k_min, const ClusterOptions &opt = {}) {
    if (k_min < 2)
        throw ValidationError("assign_clusters: k_min must be >= 2");
    if (static_cast<std::size_t>(gen.generating_eigenvectors.rows()) != r.dim())
        throw ValidationError("assign_clusters: eigenvector length does not match matrix dimension");

    Eigen::MatrixXcd vecs = gen.generating_eigenvectors;
    for (Eigen::Index c = 0; c < vecs.cols(); ++c)
        normalize_phase(vecs.col(c));

    std::vector<NodeId> nodes;
    if (opt.restrict_to)
        nodes = *opt.restrict_to;
    else
        nodes.assign(r.ids().begin(), r.ids().end());
    std::sort(nodes.begin(), nodes.end());

    Clustering cl;
    cl.k = k_min;
    std::size_t nonzero_nodes = 0, candidates = 0;
    for (NodeId id : nodes) {
        const auto row = static_cast<Eigen::Index>(r.index_of(id));
        std::optional<Complex> comp;
        for (Eigen::Index c = 0; c < vecs.cols() && !comp; ++c)
            if (std::abs(vecs(row, c)) > opt.component_zero_tol)
                comp = vecs(row, c);

        if (rg.sink_selfloops_added.contains(id)) {
            cl.sink_cluster.insert(id);
            if (comp)
                ++cl.sinks_with_nonzero_component;
            continue;
        }
        if (rg.disconnected.contains(id)) {
            cl.disconnected_cluster.insert(id);
            continue;
        }
        ++candidates;
        const Complex z = comp.value_or(vecs(row, 0));
        if (comp)
            ++nonzero_nodes;
        else
            cl.near_zero_flagged.insert(id);
        const double phi = angle_0_2pi(z);
        cl.phi[id] = phi;
        cl.component[id] = z;
        cl.labels[id] = sector_of(phi, k_min);
    }
    if (candidates > 0 && nonzero_nodes == 0)
        throw DegenerateError("degenerate eigenvector: every component is numerically zero");
    return cl;
}

enum class RatioMode {
    EdgesPerNode,         ///< |X->Y| / |X|
    EdgesPerInternalEdge, ///< |X->Y| / max(1, |X->X|)
};

inline const char *to_string(RatioMode m) {
    return m == RatioMode::EdgesPerNode ? "edges_per_node" : "edges_per_internal_edge";
}

struct RatioTable {
    RatioMode mode = RatioMode::EdgesPerNode;
    std::vector<std::vector<std::size_t>> counts; ///< edges from cluster X to cluster Y
    std::vector<std::vector<double>> cells;
    std::vector<std::size_t> cluster_sizes;
    std::vector<std::string> warnings;
};

/// Edge counts between the given clusters over g's edges whose endpoints are both clustered.
inline RatioTable ratio_table(const DirectedGraph &g, const std::vector<std::vector<NodeId>> &clusters, RatioMode mode) {
    const std::size_t k = clusters.size();
    std::unordered_map<NodeId, std::size_t> label;
    for (std::size_t c = 0; c < k; ++c)
        for (NodeId id : clusters[c])
            label.emplace(id, c);

    RatioTable t;
    t.mode = mode;
    t.counts.assign(k, std::vector<std::size_t>(k, 0));
    t.cells.assign(k, std::vector<double>(k, 0.0));
    for (const auto &c : clusters)
        t.cluster_sizes.push_back(c.size());
    for (const Edge &e : g.edges()) {
        auto a = label.find(e.src), b = label.find(e.dst);
        if (a != label.end() && b != label.end())
            ++t.counts[a->second][b->second];
    }
    for (std::size_t x = 0; x < k; ++x) {
        if (clusters[x].empty()) {
            t.warnings.push_back("cluster " + std::to_string(x + 1) + " is empty");
            continue;
        }
        const double den = mode == RatioMode::EdgesPerNode
                               ? static_cast<double>(clusters[x].size())
                               : static_cast<double>(std::max<std::size_t>(1, t.counts[x][x]));
        for (std::size_t y = 0; y < k; ++y)
            t.cells[x][y] = static_cast<double>(t.counts[x][y]) / den;
    }
    return t;
}

inline RatioTable ratio_table(const DirectedGraph &g, const Clustering &cl, RatioMode mode) {
    return ratio_table(g, cl.sector_clusters(), mode);
}

enum class TrimRank {
    MagnitudeDescending, ///< keep the largest |v_i| first
    RealPartAscending,   ///< keep the smallest Re v_i first
};

struct TrimOptions {
    double grid_step = 0.001;
    TrimRank rank = TrimRank::MagnitudeDescending;
};

struct TrimPoint {
    double fraction = 0.0;
    double objective = 0.0;
    std::vector<std::vector<double>> ratios; ///< |X->Y| / max(1, |X->X|)
};

struct TrimResult {
    double fraction = 0.0;
    double objective = 0.0;
    std::vector<std::vector<NodeId>> trimmed_clusters;
    std::vector<TrimPoint> curve;
    std::set<NodeId> dropped_disjoint; ///< trimmed nodes with no edge to another trimmed node
    double fraction_after_drop = 0.0;  ///< share of clustered nodes left after dropping them
    RatioTable table;                  ///< edges-per-node table of the trimmed clusters, dropped nodes removed
};

/**
 * Sweeps the kept fraction rho over a grid. Within each cluster the
 * ceil(rho * |C|) highest-ranked nodes survive; the objective is the sum
 * over cyclic successor pairs X -> X+1 of |X->Y| / max(1, |X->X|).
 * The best rho maximizes the objective; ties go to the larger rho.
 */
inline TrimResult trim_clusters(const DirectedGraph &g, const Clustering &cl, const TrimOptions &opt = {}) {
    if (cl.k < 2)
        throw ValidationError("trim_clusters: need at least two clusters");
    if (!(opt.grid_step > 0.0) || opt.grid_step > 1.0)
        throw ValidationError("trim_clusters: grid step must lie in (0, 1]");
    const std::size_t k = cl.k;
    const auto steps = static_cast<std::size_t>(std::llround(1.0 / opt.grid_step));
    if (steps == 0)
        throw ValidationError("trim_clusters: grid step too coarse");

    auto clusters = cl.sector_clusters();
    for (auto &c : clusters) {
        std::stable_sort(c.begin(), c.end(), [&](NodeId a, NodeId b) {
            const Complex za = cl.component.at(a), zb = cl.component.at(b);
            if (opt.rank == TrimRank::MagnitudeDescending)
                return std::abs(za) > std::abs(zb);
            return za.real() < zb.real();
        });
    }

    // Grid index m (1..steps) keeps ceil(m * |C| / steps) nodes, so rank r first appears at floor(r * steps / |C|) + 1.
    std::unordered_map<NodeId, std::pair<std::size_t, std::size_t>> first_step; // node -> (cluster, grid index)
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t r = 0; r < clusters[c].size(); ++r)
            first_step.emplace(clusters[c][r], std::pair{c, r * steps / clusters[c].size() + 1});

    std::vector<std::vector<std::vector<long>>> delta(steps + 2,
                                                      std::vector<std::vector<long>>(k, std::vector<long>(k, 0)));
    for (const Edge &e : g.edges()) {
        auto a = first_step.find(e.src), b = first_step.find(e.dst);
        if (a == first_step.end() || b == first_step.end())
            continue;
        const std::size_t m = std::max(a->second.second, b->second.second);
        ++delta[m][a->second.first][b->second.first];
    }

    TrimResult res;
    std::vector<std::vector<long>> count(k, std::vector<long>(k, 0));
    std::size_t best_m = steps;
    double best_obj = -1.0;
    for (std::size_t m = 1; m <= steps; ++m) {
        TrimPoint p;
        p.fraction = static_cast<double>(m) / static_cast<double>(steps);
        p.ratios.assign(k, std::vector<double>(k, 0.0));
        for (std::size_t x = 0; x < k; ++x)
            for (std::size_t y = 0; y < k; ++y)
                count[x][y] += delta[m][x][y];
        for (std::size_t x = 0; x < k; ++x) {
            const double den = static_cast<double>(std::max<long>(1, count[x][x]));
            for (std::size_t y = 0; y < k; ++y)
                p.ratios[x][y] = static_cast<double>(count[x][y]) / den;
            p.objective += p.ratios[x][(x + 1) % k];
        }
        if (p.objective >= best_obj) {
            best_obj = p.objective;
            best_m = m;
        }
        res.curve.push_back(std::move(p));
    }

    res.fraction = static_cast<double>(best_m) / static_cast<double>(steps);
    res.objective = best_obj;
    std::size_t total = 0, kept = 0;
    for (auto &c : clusters) {
        total += c.size();
        const std::size_t keep = (best_m * c.size() + steps - 1) / steps;
        res.trimmed_clusters.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(keep));
        std::sort(res.trimmed_clusters.back().begin(), res.trimmed_clusters.back().end());
        kept += keep;
    }

    std::set<NodeId> trimmed;
    for (const auto &c : res.trimmed_clusters)
        trimmed.insert(c.begin(), c.end());
    std::set<NodeId> touched;
    for (const Edge &e : g.edges())
        if (e.src != e.dst && trimmed.contains(e.src) && trimmed.contains(e.dst)) {
            touched.insert(e.src);
            touched.insert(e.dst);
        }
    for (NodeId id : trimmed)
        if (!touched.contains(id))
            res.dropped_disjoint.insert(id);
    res.fraction_after_drop =
        total ? static_cast<double>(kept - res.dropped_disjoint.size()) / static_cast<double>(total) : 0.0;

    auto surviving = res.trimmed_clusters;
    for (auto &c : surviving)
        std::erase_if(c, [&](NodeId id) { return res.dropped_disjoint.contains(id); });
    res.table = ratio_table(g, surviving, RatioMode::EdgesPerNode);
    return res;
}

/// Everything the clustering pipeline produces.
struct ClusterAnalysis {
    KminSearchResult kmin;
    GeneratingSet generators;
    Clustering clustering;
};

/// find_kmin -> select_generators -> assign_clusters on an eigen-decomposed recurrence matrix.
inline ClusterAnalysis cluster_by_cycles(const Spectrum &s, const RecurrenceMatrix &r, const ReducedGraph &rg,
                                         const ToleranceConfig &tol, const KminOptions &kopt = {},
                                         const ClusterOptions &copt = {}) {
    ClusterAnalysis a;
    a.kmin = find_kmin(s, tol, kopt);
    a.generators = select_generators(s, a.kmin.k_min, tol);
    a.clustering = assign_clusters(a.generators, r, rg, a.kmin.k_min, copt);
    return a;
}

} // namespace specgraph
