#pragma once

#include "specgraph/spectra.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace specgraph {

enum class ZeroEigPolicy {
    ExcludeZeros, ///< K counts eigenvalues with |lambda| >= zero_mod_tol
    IncludeZeros, ///< K = dim; each zero contributes (1 - 0) + 1
};

inline const char *to_string(ZeroEigPolicy p) {
    return p == ZeroEigPolicy::ExcludeZeros ? "exclude_zeros" : "include_zeros";
}

struct ComplexityReport {
    double F = 0.0;
    double radial_term = 0.0;  ///< mean of (1 - r_i)
    double angular_term = 0.0; ///< fraction of selected eigenvalues with theta != 0
    std::size_t K = 0;
    ZeroEigPolicy policy = ZeroEigPolicy::ExcludeZeros;
    ToleranceConfig tolerances;
};

/**
 * Spectral complexity: F = (1/K) * sum_i [(1 - r_i) + 1{theta_i != 0}].
 *
 * Eigenvalues classified as one contribute exactly 0 and zeros (when
 * included) exactly 2, so F = 0 iff every selected eigenvalue is one
 * within tolerance. Moduli marginally above 1 are clamped.
 */
inline ComplexityReport spectral_complexity(const Spectrum &s, const ToleranceConfig &tol,
                                            ZeroEigPolicy policy = ZeroEigPolicy::ExcludeZeros) {
    const PolarSummary polar = polar_classify(s, tol);
    double radial = 0.0, angular = 0.0;
    std::size_t k = 0;
    for (const PolarEigen &p : polar.eigen) {
        switch (p.cls) {
        case EigenClass::Zero:
            if (policy == ZeroEigPolicy::ExcludeZeros)
                continue;
            radial += 1.0;
            angular += 1.0;
            break;
        case EigenClass::One: break;
        case EigenClass::ThetaZero: radial += std::clamp(1.0 - p.r, 0.0, 1.0); break;
        case EigenClass::ThetaNonzero:
            radial += std::clamp(1.0 - p.r, 0.0, 1.0);
            angular += 1.0;
            break;
        }
        ++k;
    }
    if (k == 0)
        throw DegenerateError("empty spectrum: no eigenvalues remain after zero exclusion");
    ComplexityReport rep;
    rep.K = k;
    rep.radial_term = radial / static_cast<double>(k);
    rep.angular_term = angular / static_cast<double>(k);
    rep.F = rep.radial_term + rep.angular_term;
    rep.policy = policy;
    rep.tolerances = tol;
    return rep;
}

/// Everything the complexity pipeline produces for one graph.
struct ComplexityAnalysis {
    ReducedGraph reduced;
    RecurrenceMatrix recurrence;
    Spectrum spectrum;
    PolarSummary polar;
    ComplexityReport report;
};

/// strip sources -> recurrence matrix -> eigenvalues -> F.
inline ComplexityAnalysis analyze_complexity(const DirectedGraph &g, const ToleranceConfig &tol,
                                             ZeroEigPolicy policy = ZeroEigPolicy::ExcludeZeros,
                                             bool want_vectors = false) {
    if (g.empty())
        throw ValidationError("graph has no nodes");
    ComplexityAnalysis a;
    a.reduced = strip_sources(g);
    a.recurrence = build_recurrence_matrix(a.reduced);
    a.spectrum = eig(a.recurrence, want_vectors);
    a.polar = polar_classify(a.spectrum, tol);
    a.report = spectral_complexity(a.spectrum, tol, policy);
    return a;
}

inline constexpr double kInfiniteWeight = std::numeric_limits<double>::infinity();

struct TotalComplexityReport {
    double C = 0.0;
    double W = kInfiniteWeight; ///< infinity means C = F
    double gamma = 1.0;
    double sum_alpha = 0.0;
    double sum_beta = 0.0;
    double F = 0.0;
};

/// C = (gamma * (sum_alpha + sum_beta) + W * F) / (1 + W); W = inf gives C = F.
inline TotalComplexityReport total_complexity(double F, double sum_alpha, double sum_beta, double gamma, double W) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw ValidationError("gamma must be positive and finite");
    if (!(W >= 0.0))
        throw ValidationError("W must be >= 0 or infinite");
    TotalComplexityReport t;
    t.F = F;
    t.W = W;
    t.gamma = gamma;
    t.sum_alpha = sum_alpha;
    t.sum_beta = sum_beta;
    t.C = std::isinf(W) ? F : (gamma * (sum_alpha + sum_beta) + W * F) / (1.0 + W);
    return t;
}

inline TotalComplexityReport total_complexity(double F, std::span<const double> node_weights,
                                              std::span<const Edge> removed_edges, double gamma, double W) {
    double alpha = 0.0, beta = 0.0;
    for (double a : node_weights) {
        if (!(a >= 0.0))
            throw ValidationError("node weights must be non-negative");
        alpha += a;
    }
    for (const Edge &e : removed_edges)
        beta += e.weight;
    return total_complexity(F, alpha, beta, gamma, W);
}

/// Which edge weights enter the beta sum.
enum class BetaMode {
    RemovedEdges, ///< only edges deleted during source stripping
    AllEdges,     ///< every edge of the original graph
};

inline double sum_node_weights(const DirectedGraph &g) {
    double s = 0.0;
    for (NodeId id : g.nodes())
        s += g.node_weight(id);
    return s;
}

inline TotalComplexityReport total_complexity(double F, const DirectedGraph &original, const ReducedGraph &rg,
                                              double gamma, double W, BetaMode beta = BetaMode::RemovedEdges) {
    const double alpha = sum_node_weights(original);
    double b = 0.0;
    if (beta == BetaMode::RemovedEdges)
        b = rg.removed_weight();
    else
        for (const Edge &e : original.edges())
            b += e.weight;
    return total_complexity(F, alpha, b, gamma, W);
}

struct ComplexitySample {
    double F = 0.0;
    double weight_sum = 0.0; ///< sum_alpha + sum_beta
};

enum class GammaMode { Expectation, Max };

/// gamma = E[F] / E[sum_alpha + sum_beta], or the same ratio with max replacing both expectations.
inline double estimate_gamma(std::span<const ComplexitySample> samples, GammaMode mode) {
    if (samples.empty())
        throw ValidationError("estimate_gamma: empty collection");
    double num = 0.0, den = 0.0;
    if (mode == GammaMode::Expectation) {
        for (const auto &s : samples) {
            num += s.F;
            den += s.weight_sum;
        }
        num /= static_cast<double>(samples.size());
        den /= static_cast<double>(samples.size());
    } else {
        num = -std::numeric_limits<double>::infinity();
        den = -std::numeric_limits<double>::infinity();
        for (const auto &s : samples) {
            num = std::max(num, s.F);
            den = std::max(den, s.weight_sum);
        }
    }
    if (!(den > 0.0))
        throw ValidationError("estimate_gamma: zero denominator (all node and edge weights are zero)");
    return num / den;
}

inline double estimate_gamma(std::span<const DirectedGraph> graphs, GammaMode mode, const ToleranceConfig &tol = {},
                             ZeroEigPolicy policy = ZeroEigPolicy::ExcludeZeros) {
    std::vector<ComplexitySample> samples;
    samples.reserve(graphs.size());
    for (const DirectedGraph &g : graphs) {
        auto a = analyze_complexity(g, tol, policy);
        samples.push_back({a.report.F, sum_node_weights(g) + a.reduced.removed_weight()});
    }
    return estimate_gamma(samples, mode);
}

struct EnergyReport {
    double energy = 0.0;
    double singular_value_sum = 0.0;
    double mean_edge_weight = 0.0;
    bool symmetrized = false;
    std::string warning;
};

/// 0/1 adjacency without self-loops, optionally OR-ed with its transpose.
inline Eigen::MatrixXd binary_adjacency(const DirectedGraph &g, bool symmetrize) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const Edge &e : g.edges()) {
        if (e.src == e.dst)
            continue;
        const auto i = static_cast<Eigen::Index>(g.index_of(e.src));
        const auto j = static_cast<Eigen::Index>(g.index_of(e.dst));
        m(i, j) = 1.0;
        if (symmetrize)
            m(j, i) = 1.0;
    }
    return m;
}

/**
 * Graph energy: (mean weight over all edges of g) * (sum of singular values
 * of the binary adjacency). Self-loops are dropped from the adjacency but
 * their weights stay in the mean, which is taken over the original edge set.
 */
inline EnergyReport graph_energy(const DirectedGraph &g, bool symmetrize) {
    EnergyReport rep;
    rep.symmetrized = symmetrize;
    if (g.edge_count() == 0) {
        rep.warning = "graph has no edges; energy is 0";
        return rep;
    }
    double total = 0.0;
    for (const Edge &e : g.edges())
        total += e.weight;
    rep.mean_edge_weight = total / static_cast<double>(g.edge_count());
    const Eigen::MatrixXd m = binary_adjacency(g, symmetrize);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    rep.singular_value_sum = svd.singularValues().sum();
    rep.energy = rep.mean_edge_weight * rep.singular_value_sum;
    return rep;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace detail

/// Seed of the RNG stream for one realization; independent of scheduling.
inline std::uint64_t realization_seed(std::uint64_t seed, std::size_t index) {
    return detail::splitmix64(seed ^ detail::splitmix64(static_cast<std::uint64_t>(index) + 1));
}

/// Every ordered pair (i, j), i != j, becomes an edge with probability avg_degree / n.
inline DirectedGraph random_digraph(std::size_t n, double avg_degree, std::uint64_t seed) {
    if (n == 0)
        throw ValidationError("random_digraph: n must be positive");
    if (!(avg_degree > 0.0) || avg_degree > static_cast<double>(n))
        throw ValidationError("random_digraph: average degree must lie in (0, n]");
    const double p = avg_degree / static_cast<double>(n);
    std::mt19937_64 rng(seed);
    GraphBuilder b;
    for (std::size_t i = 0; i < n; ++i)
        b.add_node(NodeId{i});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            if (detail::unit_uniform(rng) < p)
                b.add_edge(NodeId{i}, NodeId{j}, 1.0);
        }
    return b.build();
}

/// Complete digraph with self-loops and i.i.d. uniform (0, 1] weights; its recurrence matrix is a random Markov matrix.
inline DirectedGraph random_weighted_complete_digraph(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GraphBuilder b;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b.add_edge(NodeId{i}, NodeId{j}, 1.0 - detail::unit_uniform(rng));
    return b.build();
}

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0; ///< sample standard deviation; 0 for a single value
};

inline MeanStd mean_std(std::span<const double> xs) {
    MeanStd out;
    if (xs.empty())
        return out;
    out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs)
            ss += (x - out.mean) * (x - out.mean);
        out.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

struct BaselineResult {
    std::size_t n = 0;
    double avg_degree = 0.0;
    std::vector<ComplexityReport> realizations;
    MeanStd F, radial, angular;
};

/**
 * Mean and spread of F over random digraphs. Realization i draws from
 * realization_seed(seed, i), so the result does not depend on `threads`.
 */
inline BaselineResult random_baseline(std::size_t n, double avg_degree, std::size_t realizations, std::uint64_t seed,
                                      const ToleranceConfig &tol = {},
                                      ZeroEigPolicy policy = ZeroEigPolicy::ExcludeZeros, unsigned threads = 0) {
    if (realizations == 0)
        throw ValidationError("random_baseline: realizations must be >= 1");
    BaselineResult res;
    res.n = n;
    res.avg_degree = avg_degree;
    res.realizations.resize(realizations);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < realizations; i = next++) {
            try {
                const auto g = random_digraph(n, avg_degree, realization_seed(seed, i));
                res.realizations[i] = analyze_complexity(g, tol, policy).report;
            } catch (const Error &e) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::make_exception_ptr(
                        Error(e.kind(), "realization " + std::to_string(i) + ": " + e.what()));
            }
        }
    };
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, realizations));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    std::vector<double> f, rad, ang;
    for (const auto &r : res.realizations) {
        f.push_back(r.F);
        rad.push_back(r.radial_term);
        ang.push_back(r.angular_term);
    }
    res.F = mean_std(f);
    res.radial = mean_std(rad);
    res.angular = mean_std(ang);
    return res;
}

/// Spearman rank correlation; tied values share their average rank.
inline double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("spearman: need two equal-length series of length >= 2");
    auto ranks = [](std::span<const double> v) {
        std::vector<std::size_t> order(v.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < order.size();) {
            std::size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
                ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k)
                r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(rx.size());
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(ry.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

} // namespace specgraph
