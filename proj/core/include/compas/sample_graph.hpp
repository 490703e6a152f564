#ifndef COMPAS_SAMPLE_GRAPH_HPP
#define COMPAS_SAMPLE_GRAPH_HPP

#include <cstddef>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "compas/types.hpp"

namespace compas {

/// Simple undirected graph with a node capacity. Keeps a (degree, id) index so
/// the lowest-degree nodes can be found without a scan.
class SampleGraph {
  public:
    using NeighborSet = std::unordered_set<NodeId>;
    static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

    enum class AddEdgeResult { kAdded, kDuplicate };

    explicit SampleGraph(std::size_t capacity = kUnbounded) : capacity_(capacity) {}

    std::size_t capacity() const { return capacity_; }
    std::size_t node_count() const { return adj_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    bool full() const { return adj_.size() >= capacity_; }
    bool empty() const { return adj_.empty(); }

    bool contains(NodeId x) const { return adj_.contains(x); }
    bool has_edge(NodeId u, NodeId v) const;
    std::size_t degree(NodeId x) const { return neighbors(x).size(); }
    const NeighborSet& neighbors(NodeId x) const;

    void add_node(NodeId x);
    AddEdgeResult add_edge(NodeId u, NodeId v);

    /// Removes `x` with its incident edges and returns those edges.
    std::vector<Edge> remove_node(NodeId x);

    /// Edges among the neighbours of `x`.
    std::size_t triangles_through(NodeId x) const;
    /// 2T / (d(d-1)); 0 when d < 2.
    double clustering_coefficient(NodeId x) const;

    std::vector<NodeId> nodes() const;  // ascending
    std::vector<Edge> edges() const;    // ascending, u < v

    /// Nodes ordered by (degree, id).
    const std::set<std::pair<std::size_t, NodeId>>& degree_index() const { return by_degree_; }

    /// Sum of degrees; equals 2 * edge_count() when the graph is consistent.
    std::size_t degree_sum() const;

  private:
    void reindex(NodeId x, std::size_t old_degree, std::size_t new_degree);

    std::size_t capacity_;
    std::size_t edge_count_ = 0;
    std::unordered_map<NodeId, NeighborSet> adj_;
    std::set<std::pair<std::size_t, NodeId>> by_degree_;
};

}  // namespace compas

#endif  // COMPAS_SAMPLE_GRAPH_HPP
