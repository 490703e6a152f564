#include "compas/sample_graph.hpp"

#include <algorithm>
#include <string>

namespace compas {

namespace {

[[noreturn]] void missing(NodeId x) {
    throw GraphError("node " + std::to_string(x) + " is not in the sample");
}

}  // namespace

const SampleGraph::NeighborSet& SampleGraph::neighbors(NodeId x) const {
    auto it = adj_.find(x);
    if (it == adj_.end()) missing(x);
    return it->second;
}

bool SampleGraph::has_edge(NodeId u, NodeId v) const {
    auto it = adj_.find(u);
    return it != adj_.end() && it->second.contains(v);
}

void SampleGraph::add_node(NodeId x) {
    if (adj_.contains(x)) throw GraphError("node " + std::to_string(x) + " already sampled");
    if (full()) throw GraphError("sample capacity " + std::to_string(capacity_) + " reached");
    adj_.emplace(x, NeighborSet{});
    by_degree_.emplace(0, x);
}

SampleGraph::AddEdgeResult SampleGraph::add_edge(NodeId u, NodeId v) {
    if (u == v) throw GraphError("self-loop on node " + std::to_string(u));
    auto iu = adj_.find(u);
    auto iv = adj_.find(v);
    if (iu == adj_.end()) missing(u);
    if (iv == adj_.end()) missing(v);
    if (!iu->second.insert(v).second) return AddEdgeResult::kDuplicate;
    iv->second.insert(u);
    reindex(u, iu->second.size() - 1, iu->second.size());
    reindex(v, iv->second.size() - 1, iv->second.size());
    ++edge_count_;
    return AddEdgeResult::kAdded;
}

std::vector<Edge> SampleGraph::remove_node(NodeId x) {
    auto it = adj_.find(x);
    if (it == adj_.end()) missing(x);
    std::vector<NodeId> nbrs(it->second.begin(), it->second.end());
    std::sort(nbrs.begin(), nbrs.end());
    std::vector<Edge> removed;
    removed.reserve(nbrs.size());
    for (NodeId w : nbrs) {
        auto& ws = adj_.at(w);
        ws.erase(x);
        reindex(w, ws.size() + 1, ws.size());
        removed.emplace_back(x, w);
    }
    by_degree_.erase({it->second.size(), x});
    edge_count_ -= nbrs.size();
    adj_.erase(it);
    return removed;
}

std::size_t SampleGraph::triangles_through(NodeId x) const {
    const auto& nx = neighbors(x);
    std::size_t links = 0;
    for (NodeId a : nx) {
        const auto& na = adj_.at(a);
        // Iterate the smaller side.
        if (na.size() < nx.size()) {
            for (NodeId b : na) links += nx.contains(b);
        } else {
            for (NodeId b : nx) links += na.contains(b);
        }
    }
    return links / 2;
}

double SampleGraph::clustering_coefficient(NodeId x) const {
    const std::size_t d = degree(x);
    if (d < 2) return 0.0;
    return 2.0 * static_cast<double>(triangles_through(x)) /
           (static_cast<double>(d) * static_cast<double>(d - 1));
}

std::vector<NodeId> SampleGraph::nodes() const {
    std::vector<NodeId> out;
    out.reserve(adj_.size());
    for (const auto& [x, _] : adj_) out.push_back(x);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Edge> SampleGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (const auto& [x, nbrs] : adj_) {
        for (NodeId w : nbrs) {
            if (x < w) out.emplace_back(x, w);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t SampleGraph::degree_sum() const {
    std::size_t s = 0;
    for (const auto& [_, nbrs] : adj_) s += nbrs.size();
    return s;
}

void SampleGraph::reindex(NodeId x, std::size_t old_degree, std::size_t new_degree) {
    by_degree_.erase({old_degree, x});
    by_degree_.emplace(new_degree, x);
}

}  // namespace compas
