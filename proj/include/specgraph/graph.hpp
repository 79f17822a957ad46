#pragma once

#include "specgraph/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace specgraph {

/// External node label, preserved verbatim through every reduction.
struct NodeId {
    std::uint64_t value = 0;

    friend constexpr auto operator<=>(const NodeId &, const NodeId &) = default;
};

inline std::ostream &operator<<(std::ostream &os, NodeId id) { return os << id.value; }

} // namespace specgraph

template <>
struct std::hash<specgraph::NodeId> {
    std::size_t operator()(specgraph::NodeId id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};

namespace specgraph {

struct Edge {
    NodeId src;
    NodeId dst;
    double weight = 1.0;

    friend bool operator==(const Edge &, const Edge &) = default;
};

/**
 * Immutable weighted digraph G = (V, A, B) with optional per-node weights.
 *
 * Nodes are kept sorted by id; edges are sorted by (src, dst) and unique.
 * Dense indices (position in nodes()) are an internal convenience for
 * matrix builders and are never part of any exported artifact.
 */
class DirectedGraph {
public:
    DirectedGraph() = default;

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    std::span<const NodeId> nodes() const noexcept { return nodes_; }
    std::span<const Edge> edges() const noexcept { return edges_; }

    bool contains(NodeId id) const { return index_.contains(id); }

    std::size_t index_of(NodeId id) const {
        auto it = index_.find(id);
        if (it == index_.end())
            throw ValidationError("unknown node id " + std::to_string(id.value));
        return it->second;
    }

    /// Out-edges of the node at dense index i, sorted by destination id.
    std::span<const Edge> out_edges(std::size_t i) const {
        return std::span<const Edge>(edges_).subspan(out_offsets_[i], out_offsets_[i + 1] - out_offsets_[i]);
    }

    std::size_t in_degree(std::size_t i) const noexcept { return in_degree_[i]; }
    std::size_t out_degree(std::size_t i) const noexcept { return out_offsets_[i + 1] - out_offsets_[i]; }

    /// Node weight alpha_i; 1.0 unless set explicitly.
    double node_weight(NodeId id) const {
        auto it = node_weight_.find(id);
        return it == node_weight_.end() ? 1.0 : it->second;
    }

    bool has_explicit_node_weights() const noexcept { return !node_weight_.empty(); }
    const std::map<NodeId, double> &explicit_node_weights() const noexcept { return node_weight_; }

    friend bool operator==(const DirectedGraph &a, const DirectedGraph &b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.node_weight_ == b.node_weight_;
    }

private:
    friend class GraphBuilder;

    std::vector<NodeId> nodes_;
    std::unordered_map<NodeId, std::size_t> index_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<std::size_t> in_degree_;
    std::map<NodeId, double> node_weight_;
};

/// Accumulates nodes and edges; duplicate (src, dst) rows merge by weight sum in insertion order.
class GraphBuilder {
public:
    GraphBuilder &add_node(NodeId id) {
        node_set_.emplace(id, 0);
        return *this;
    }

    GraphBuilder &add_edge(NodeId src, NodeId dst, double weight = 1.0) {
        if (!(weight > 0.0) || !std::isfinite(weight))
            throw ValidationError("edge " + std::to_string(src.value) + "->" + std::to_string(dst.value) +
                                  " has non-positive or non-finite weight");
        add_node(src);
        add_node(dst);
        auto [it, inserted] = edge_weight_.emplace(std::pair{src, dst}, weight);
        if (!inserted)
            it->second += weight;
        return *this;
    }

    GraphBuilder &set_node_weight(NodeId id, double alpha) {
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw ValidationError("node " + std::to_string(id.value) + " has negative or non-finite weight");
        add_node(id);
        node_weight_[id] = alpha;
        return *this;
    }

    DirectedGraph build() const {
        DirectedGraph g;
        g.nodes_.reserve(node_set_.size());
        for (const auto &[id, unused] : node_set_)
            g.nodes_.push_back(id);
        g.index_.reserve(g.nodes_.size());
        for (std::size_t i = 0; i < g.nodes_.size(); ++i)
            g.index_.emplace(g.nodes_[i], i);

        g.edges_.reserve(edge_weight_.size());
        g.out_offsets_.assign(g.nodes_.size() + 1, 0);
        g.in_degree_.assign(g.nodes_.size(), 0);
        for (const auto &[key, w] : edge_weight_) {
            g.edges_.push_back({key.first, key.second, w});
            ++g.out_offsets_[g.index_.at(key.first) + 1];
            ++g.in_degree_[g.index_.at(key.second)];
        }
        for (std::size_t i = 0; i < g.nodes_.size(); ++i)
            g.out_offsets_[i + 1] += g.out_offsets_[i];
        g.node_weight_ = node_weight_;
        return g;
    }

private:
    std::map<NodeId, int> node_set_;
    std::map<std::pair<NodeId, NodeId>, double> edge_weight_;
    std::map<NodeId, double> node_weight_;
};

/// Subgraph on the given nodes, keeping edges with both endpoints inside and their node weights.
inline DirectedGraph induced_subgraph(const DirectedGraph &g, std::span<const NodeId> keep) {
    GraphBuilder b;
    std::unordered_map<NodeId, bool> member;
    member.reserve(keep.size());
    for (NodeId id : keep) {
        if (!g.contains(id))
            throw ValidationError("induced_subgraph: unknown node id " + std::to_string(id.value));
        member.emplace(id, true);
        b.add_node(id);
    }
    for (const Edge &e : g.edges())
        if (member.contains(e.src) && member.contains(e.dst))
            b.add_edge(e.src, e.dst, e.weight);
    for (const auto &[id, alpha] : g.explicit_node_weights())
        if (member.contains(id))
            b.set_node_weight(id, alpha);
    return b.build();
}

struct GraphStats {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double average_degree = 0.0;
    std::size_t source_count = 0;
    std::size_t sink_count = 0;
    std::size_t disconnected_count = 0;
};

/// Self-loops count toward both in- and out-degree, so a self-looped node is never a source or sink.
inline GraphStats graph_stats(const DirectedGraph &g) {
    GraphStats s;
    s.node_count = g.node_count();
    s.edge_count = g.edge_count();
    s.average_degree = s.node_count ? static_cast<double>(s.edge_count) / static_cast<double>(s.node_count) : 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const bool in = g.in_degree(i) > 0;
        const bool out = g.out_degree(i) > 0;
        if (out && !in)
            ++s.source_count;
        else if (in && !out)
            ++s.sink_count;
        else if (!in && !out)
            ++s.disconnected_count;
    }
    return s;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\v\f";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline bool parse_u64(std::string_view tok, std::uint64_t &out) {
    if (tok.empty())
        return false;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

inline bool parse_real(std::string_view tok, double &out) {
    if (tok.empty())
        return false;
    if (tok.front() == '+')
        tok.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

} // namespace detail

/// SNAP edge list: '#' comments, "src dst" integer pairs separated by whitespace. Blank lines are skipped;
/// repeated pairs collapse to one edge of weight 1.
inline DirectedGraph parse_snap_edge_list(std::istream &in) {
    GraphBuilder b;
    std::string line;
    std::size_t lineno = 0;
    bool any = false;
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = detail::trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        std::istringstream fields{std::string(body)};
        std::string a, c, extra;
        std::uint64_t src = 0, dst = 0;
        if (!(fields >> a >> c) || (fields >> extra) || !detail::parse_u64(a, src) || !detail::parse_u64(c, dst))
            throw ParseError(lineno, "expected two non-negative integers, got '" + std::string(body) + "'");
        if (seen.emplace(src, dst).second)
            b.add_edge(NodeId{src}, NodeId{dst}, 1.0);
        any = true;
    }
    if (!any)
        throw ParseError(0, "empty graph: no edges in input");
    return b.build();
}

/// Weighted CSV "src,dst,weight". A first row whose first field is not an integer is a header.
inline DirectedGraph parse_weighted_csv(std::istream &in) {
    GraphBuilder b;
    std::string line;
    std::size_t lineno = 0;
    bool first = true, any = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = detail::trim(line);
        if (body.empty())
            continue;
        auto fields = detail::split_csv(body);
        std::uint64_t src = 0, dst = 0;
        const bool src_ok = detail::parse_u64(fields[0], src);
        if (first && !src_ok) {
            first = false;
            continue;
        }
        first = false;
        double w = 0.0;
        if (fields.size() != 3 || !src_ok || !detail::parse_u64(fields[1], dst) || !detail::parse_real(fields[2], w))
            throw ParseError(lineno, "expected 'src,dst,weight', got '" + std::string(body) + "'");
        if (!(w > 0.0) || !std::isfinite(w))
            throw ValidationError("line " + std::to_string(lineno) + ": edge weight must be positive, got " +
                                  std::string(fields[2]));
        b.add_edge(NodeId{src}, NodeId{dst}, w);
        any = true;
    }
    if (!any)
        throw ParseError(0, "empty graph: no edges in input");
    return b.build();
}

/// Node-weight CSV "node,alpha" (optional header).
inline std::map<NodeId, double> parse_node_weights(std::istream &in) {
    std::map<NodeId, double> out;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = detail::trim(line);
        if (body.empty())
            continue;
        auto fields = detail::split_csv(body);
        std::uint64_t id = 0;
        const bool id_ok = detail::parse_u64(fields[0], id);
        if (first && !id_ok) {
            first = false;
            continue;
        }
        first = false;
        double alpha = 0.0;
        if (fields.size() != 2 || !id_ok || !detail::parse_real(fields[1], alpha))
            throw ParseError(lineno, "expected 'node,alpha', got '" + std::string(body) + "'");
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw ValidationError("line " + std::to_string(lineno) + ": node weight must be non-negative");
        out[NodeId{id}] = alpha;
    }
    return out;
}

/// Copy of g with node weights attached; ids absent from g are added as isolated nodes.
inline DirectedGraph with_node_weights(const DirectedGraph &g, const std::map<NodeId, double> &alphas) {
    GraphBuilder b;
    for (NodeId id : g.nodes())
        b.add_node(id);
    for (const Edge &e : g.edges())
        b.add_edge(e.src, e.dst, e.weight);
    for (const auto &[id, alpha] : g.explicit_node_weights())
        b.set_node_weight(id, alpha);
    for (const auto &[id, alpha] : alphas)
        b.set_node_weight(id, alpha);
    return b.build();
}

/// Writes unit-weight SNAP text. Edge weights and isolated nodes are not representable.
inline void write_snap_edge_list(std::ostream &out, const DirectedGraph &g) {
    out << "# Nodes: " << g.node_count() << " Edges: " << g.edge_count() << '\n';
    out << "# FromNodeId\tToNodeId\n";
    for (const Edge &e : g.edges())
        out << e.src.value << '\t' << e.dst.value << '\n';
}

inline void write_weighted_csv(std::ostream &out, const DirectedGraph &g) {
    out << "src,dst,weight\n";
    char buf[32];
    for (const Edge &e : g.edges()) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.weight);
        out << e.src.value << ',' << e.dst.value << ',' << std::string_view(buf, ptr - buf) << '\n';
    }
}

} // namespace specgraph
