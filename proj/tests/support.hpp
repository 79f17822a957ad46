#pragma once

#include "specgraph/specgraph.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

using namespace specgraph;

inline DirectedGraph snap(const std::string &text) {
    std::istringstream in(text);
    return parse_snap_edge_list(in);
}

inline DirectedGraph csv(const std::string &text) {
    std::istringstream in(text);
    return parse_weighted_csv(in);
}

/// Directed cycle offset -> offset+1 -> ... -> offset+d-1 -> offset.
inline void add_cycle(GraphBuilder &b, std::uint64_t offset, std::uint64_t d) {
    for (std::uint64_t i = 0; i < d; ++i)
        b.add_edge({offset + i}, {offset + (i + 1) % d});
}

inline DirectedGraph cycle(std::uint64_t d) {
    GraphBuilder b;
    add_cycle(b, 0, d);
    return b.build();
}

inline Eigen::MatrixXd two_graph(double p) {
    Eigen::MatrixXd m(2, 2);
    m << p, 1.0 - p, 1.0 - p, p;
    return m;
}

/// Erdos-Renyi style digraph with self-loops allowed, ids 0..n-1, every node present.
inline DirectedGraph random_small(std::mt19937_64 &rng, std::size_t n, double p, bool weighted = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GraphBuilder b;
    for (std::size_t i = 0; i < n; ++i)
        b.add_node({i});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (u(rng) < p)
                b.add_edge({i}, {j}, weighted ? 0.1 + u(rng) : 1.0);
    return b.build();
}

/// Strongly connected classes from the transitive closure (Floyd-Warshall on booleans).
inline std::set<std::set<std::uint64_t>> scc_by_reachability(const DirectedGraph &g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        reach[i][i] = 1;
    for (const Edge &e : g.edges())
        reach[g.index_of(e.src)][g.index_of(e.dst)] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j])
                        reach[i][j] = 1;
    std::set<std::set<std::uint64_t>> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::set<std::uint64_t> cls;
        for (std::size_t j = 0; j < n; ++j)
            if (reach[i][j] && reach[j][i])
                cls.insert(g.nodes()[j].value);
        out.insert(cls);
    }
    return out;
}

/// Exact rank of a small integer matrix by fraction-free (Bareiss) elimination.
inline std::size_t integer_rank(const Eigen::MatrixXd &m) {
    const auto rows = static_cast<std::size_t>(m.rows()), cols = static_cast<std::size_t>(m.cols());
    std::vector<std::vector<long long>> a(rows, std::vector<long long>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            a[i][j] = std::llround(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    std::size_t rank = 0;
    long long prev = 1;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot][col] == 0)
            ++pivot;
        if (pivot == rows)
            continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

/// Sum of singular values of a 0/1 matrix as square roots of the eigenvalues of M^T M.
/// The n - rank(M) smallest Gram eigenvalues are exactly zero; rounding noise there is discarded.
inline double singular_sum_via_gram(const Eigen::MatrixXd &m) {
    if (m.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.transpose() * m);
    const std::size_t zeros = static_cast<std::size_t>(m.cols()) - integer_rank(m);
    double s = 0.0;
    for (std::size_t i = zeros; i < static_cast<std::size_t>(es.eigenvalues().size()); ++i)
        s += std::sqrt(std::max(0.0, es.eigenvalues()(static_cast<Eigen::Index>(i))));
    return s;
}

/// 0/1 adjacency built straight from the edge list, self-loops dropped.
inline Eigen::MatrixXd adjacency_oracle(const DirectedGraph &g, bool sym) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const Edge &e : g.edges()) {
        if (e.src == e.dst)
            continue;
        const auto a = static_cast<Eigen::Index>(g.index_of(e.src));
        const auto b = static_cast<Eigen::Index>(g.index_of(e.dst));
        m(a, b) = 1.0;
        if (sym)
            m(b, a) = 1.0;
    }
    return m;
}

/// Distance from each root of unity of order d to the nearest eigenvalue, maximized over roots.
inline double roots_of_unity_gap(const std::vector<Complex> &eigs, std::size_t d) {
    double worst = 0.0;
    std::vector<char> used(eigs.size(), 0);
    for (std::size_t k = 0; k < d; ++k) {
        const Complex root = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d));
        double best = 1e300;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < eigs.size(); ++j)
            if (!used[j] && std::abs(eigs[j] - root) < best) {
                best = std::abs(eigs[j] - root);
                arg = j;
            }
        used[arg] = 1;
        worst = std::max(worst, best);
    }
    return worst;
}

inline std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path fixture(const std::string &name) {
    return std::filesystem::path(SPECGRAPH_FIXTURE_DIR) / name;
}

inline std::filesystem::path scratch_dir(const std::string &name) {
    auto p = std::filesystem::temp_directory_path() / ("specgraph_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace testsupport
