#pragma once

#include "specgraph/complexity.hpp"

#include <Eigen/Dense>
#include <lapacke.h>

#include <queue>
#include <vector>

namespace specgraph {

struct FiedlerResult {
    std::vector<NodeId> cluster_pos;
    std::vector<NodeId> cluster_neg;
    double fiedler_value = 0.0;
    double smallest_eigenvalue = 0.0;
    Eigen::VectorXd fiedler_vector; ///< aligned with g.nodes(); largest-magnitude entry positive
    bool cut_found = true;          ///< false when every component has the same sign
};

/// L = D - M_sym for the OR-symmetrized binary adjacency (self-loops dropped).
inline Eigen::MatrixXd symmetric_laplacian(const DirectedGraph &g) {
    Eigen::MatrixXd m = binary_adjacency(g, true);
    Eigen::MatrixXd l = -m;
    l.diagonal() += m.rowwise().sum();
    return l;
}

namespace detail {

inline bool weakly_connected(const DirectedGraph &g) {
    const std::size_t n = g.node_count();
    if (n == 0)
        return true;
    std::vector<std::vector<std::size_t>> adj(n);
    for (const Edge &e : g.edges()) {
        const auto a = g.index_of(e.src), b = g.index_of(e.dst);
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<char> seen(n, 0);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
        const auto v = q.front();
        q.pop();
        for (auto w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                q.push(w);
            }
    }
    return reached == n;
}

} // namespace detail

/**
 * Sign split of the eigenvector for the second-smallest eigenvalue of the
 * symmetrized Laplacian. The vector is oriented so its largest-magnitude
 * entry is positive; entries within 1e-12 of zero join the positive side.
 */
inline FiedlerResult fiedler_partition(const DirectedGraph &g) {
    const std::size_t n = g.node_count();
    if (n < 2)
        throw ValidationError("fiedler_partition: need at least two nodes");
    if (!detail::weakly_connected(g))
        throw ValidationError("fiedler_partition: graph is disconnected after symmetrization (eigenvalue 0 is "
                              "repeated); restrict to the largest strongly connected component");

    Eigen::MatrixXd l = symmetric_laplacian(g);
    const auto ln = static_cast<lapack_int>(n);
    lapack_int found = 0;
    std::vector<double> w(n);
    Eigen::MatrixXd z(static_cast<Eigen::Index>(n), 2);
    std::vector<lapack_int> isuppz(4);
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', ln, l.data(), ln, 0.0, 0.0, 1, 2, 0.0,
                                           &found, w.data(), z.data(), ln, isuppz.data());
    if (info != 0 || found != 2)
        throw NumericalError("fiedler_partition: symmetric eigensolver failed (dsyevr info=" + std::to_string(info) +
                             ")");

    FiedlerResult res;
    res.smallest_eigenvalue = w[0];
    res.fiedler_value = w[1];
    if (res.fiedler_value <= 1e-9)
        throw ValidationError("fiedler_partition: eigenvalue 0 is repeated; restrict to a connected subgraph");
    Eigen::VectorXd v = z.col(1);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0)
        v = -v;
    for (std::size_t i = 0; i < n; ++i) {
        if (v(static_cast<Eigen::Index>(i)) >= -1e-12)
            res.cluster_pos.push_back(g.nodes()[i]);
        else
            res.cluster_neg.push_back(g.nodes()[i]);
    }
    res.cut_found = !res.cluster_neg.empty();
    res.fiedler_vector = std::move(v);
    return res;
}

} // namespace specgraph
