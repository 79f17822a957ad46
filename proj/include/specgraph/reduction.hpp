#pragma once

#include "specgraph/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

namespace specgraph {

/// Result of iterated source stripping.
struct ReducedGraph {
    std::vector<NodeId> kept;            ///< ascending; reduced index = position
    std::vector<NodeId> removed_sources; ///< removal order (sweep by sweep, ascending id within a sweep)
    std::vector<Edge> removed_edges;     ///< out-edges of removed sources, same order
    std::set<NodeId> sink_selfloops_added;
    std::set<NodeId> disconnected;
    DirectedGraph graph; ///< subgraph induced on kept

    double removed_weight() const {
        double total = 0.0;
        for (const Edge &e : removed_edges)
            total += e.weight;
        return total;
    }
};

/**
 * Repeatedly deletes every node with zero in-degree and positive out-degree,
 * with its out-edges, until none remain. Nodes with no edges at all are not
 * sources and stay. A removed source has no in-edges, so out-degrees of the
 * surviving nodes never change; only in-degrees drop. A kept node without
 * out-edges is a sink if it had in-edges in g, otherwise disconnected.
 */
inline ReducedGraph strip_sources(const DirectedGraph &g) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> in_deg(n);
    std::vector<char> removed(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        in_deg[i] = g.in_degree(i);

    ReducedGraph rg;
    std::vector<std::size_t> sweep;
    for (std::size_t i = 0; i < n; ++i)
        if (in_deg[i] == 0 && g.out_degree(i) > 0)
            sweep.push_back(i);

    while (!sweep.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : sweep) {
            removed[i] = 1;
            rg.removed_sources.push_back(g.nodes()[i]);
            for (const Edge &e : g.out_edges(i)) {
                rg.removed_edges.push_back(e);
                const std::size_t j = g.index_of(e.dst);
                if (--in_deg[j] == 0 && g.out_degree(j) > 0 && !removed[j])
                    next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        sweep = std::move(next);
    }

    for (std::size_t i = 0; i < n; ++i)
        if (!removed[i])
            rg.kept.push_back(g.nodes()[i]);
    rg.graph = induced_subgraph(g, rg.kept);

    for (std::size_t i = 0; i < rg.graph.node_count(); ++i) {
        const NodeId id = rg.graph.nodes()[i];
        if (rg.graph.out_degree(i) > 0)
            continue;
        if (g.in_degree(g.index_of(id)) > 0)
            rg.sink_selfloops_added.insert(id);
        else
            rg.disconnected.insert(id);
    }
    return rg;
}

/// Dense row-stochastic matrix over an ordered node set.
class RecurrenceMatrix {
public:
    RecurrenceMatrix() = default;

    /// Wraps an explicit matrix; rows must be non-negative and sum to one.
    static RecurrenceMatrix from_dense(Eigen::MatrixXd entries, std::vector<NodeId> ids = {}) {
        const auto k = entries.rows();
        if (entries.cols() != k)
            throw ValidationError("recurrence matrix must be square");
        if (ids.empty())
            for (Eigen::Index i = 0; i < k; ++i)
                ids.push_back(NodeId{static_cast<std::uint64_t>(i)});
        if (static_cast<Eigen::Index>(ids.size()) != k)
            throw ValidationError("index map size does not match matrix dimension");
        if (!entries.allFinite())
            throw ValidationError("recurrence matrix has NaN or Inf entries");
        for (Eigen::Index i = 0; i < k; ++i) {
            if ((entries.row(i).array() < 0.0).any())
                throw ValidationError("recurrence matrix has negative entries in row " + std::to_string(i));
            if (std::abs(entries.row(i).sum() - 1.0) > 1e-12)
                throw ValidationError("row " + std::to_string(i) + " does not sum to one");
        }
        RecurrenceMatrix r;
        r.entries_ = std::move(entries);
        r.ids_ = std::move(ids);
        for (std::size_t i = 0; i < r.ids_.size(); ++i)
            r.index_.emplace(r.ids_[i], i);
        return r;
    }

    std::size_t dim() const noexcept { return ids_.size(); }
    const Eigen::MatrixXd &entries() const noexcept { return entries_; }
    std::span<const NodeId> ids() const noexcept { return ids_; }
    NodeId id_at(std::size_t i) const { return ids_.at(i); }
    std::size_t index_of(NodeId id) const { return index_.at(id); }

private:
    Eigen::MatrixXd entries_;
    std::vector<NodeId> ids_;
    std::unordered_map<NodeId, std::size_t> index_;
};

/// Row i holds out-edge weights of node i over their sum; rows without out-edges get a unit diagonal.
inline RecurrenceMatrix build_recurrence_matrix(const DirectedGraph &g) {
    const std::size_t k = g.node_count();
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        const auto out = g.out_edges(i);
        const auto row = static_cast<Eigen::Index>(i);
        if (out.empty()) {
            r(row, row) = 1.0;
            continue;
        }
        double total = 0.0;
        for (const Edge &e : out)
            total += e.weight;
        for (const Edge &e : out)
            r(row, static_cast<Eigen::Index>(g.index_of(e.dst))) += e.weight / total;
    }
    return RecurrenceMatrix::from_dense(std::move(r), std::vector<NodeId>(g.nodes().begin(), g.nodes().end()));
}

inline RecurrenceMatrix build_recurrence_matrix(const ReducedGraph &rg) { return build_recurrence_matrix(rg.graph); }

struct SccDecomposition {
    /// Each component sorted ascending; components ordered by their smallest id.
    std::vector<std::vector<NodeId>> components;
    std::unordered_map<NodeId, std::size_t> component_of;

    /// Index of the component with the most nodes (first such in component order).
    std::size_t largest() const {
        std::size_t best = 0;
        for (std::size_t c = 1; c < components.size(); ++c)
            if (components[c].size() > components[best].size())
                best = c;
        return best;
    }
};

/// Tarjan's algorithm, iterative.
inline SccDecomposition scc(const DirectedGraph &g) {
    const std::size_t n = g.node_count();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call; // (node, next out-edge position)
    std::vector<std::vector<NodeId>> comps;
    std::size_t counter = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited)
            continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto &[v, pos] = call.back();
            const auto out = g.out_edges(v);
            if (pos < out.size()) {
                const std::size_t w = g.index_of(out[pos].dst);
                ++pos;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::size_t done = v;
            call.pop_back();
            if (!call.empty())
                low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                std::vector<NodeId> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(g.nodes()[w]);
                } while (w != done);
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
        }
    }

    std::sort(comps.begin(), comps.end(), [](const auto &a, const auto &b) { return a.front() < b.front(); });
    SccDecomposition out;
    out.components = std::move(comps);
    for (std::size_t c = 0; c < out.components.size(); ++c)
        for (NodeId id : out.components[c])
            out.component_of.emplace(id, c);
    return out;
}

} // namespace specgraph
