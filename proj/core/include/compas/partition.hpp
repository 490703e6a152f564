#ifndef COMPAS_PARTITION_HPP
#define COMPAS_PARTITION_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "compas/sample_graph.hpp"
#include "compas/types.hpp"

namespace compas {

/// Disjoint community assignment over the nodes of a SampleGraph, with the
/// per-community aggregates modularity needs: internal edges m_c and total
/// member degree D_c. The partition mirrors graph mutations through the
/// on_* hooks; it never reads the graph except where a method takes one.
class Partition {
  public:
    struct Community {
        std::unordered_set<NodeId> members;
        std::size_t internal_edges = 0;  // m_c
        std::size_t total_degree = 0;    // D_c
    };

    Partition() = default;

    /// Builds the aggregates from scratch. Every graph node must be assigned.
    static Partition from_assignment(const SampleGraph& graph,
                                     const std::unordered_map<NodeId, CommunityId>& assignment);

    /// Every node in its own community.
    static Partition singletons(const SampleGraph& graph);

    bool contains(NodeId x) const { return of_.contains(x); }
    CommunityId community_of(NodeId x) const;
    bool has_community(CommunityId c) const { return comms_.contains(c); }
    const Community& community(CommunityId c) const;
    const std::map<CommunityId, Community>& communities() const { return comms_; }
    std::size_t community_count() const { return comms_.size(); }
    std::size_t node_count() const { return of_.size(); }
    std::size_t edge_count() const { return edge_count_; }  // M
    const std::unordered_map<NodeId, CommunityId>& assignment() const { return of_; }

    /// Identifier never used before in this partition.
    CommunityId fresh_id() { return next_id_++; }

    /// Registers a node that has no edges in the graph yet.
    void add_isolated(NodeId x, CommunityId c);
    /// Call after graph.add_edge(u, v) returned kAdded.
    void on_edge_added(NodeId u, NodeId v);
    /// Call after graph.remove_node(x) with the edges it returned.
    void on_node_removed(NodeId x, std::span<const Edge> removed_edges);

    /// Moves `x` to `target`, creating the community if it does not exist.
    /// `graph` must be the graph this partition mirrors.
    void move(const SampleGraph& graph, NodeId x, CommunityId target);

    /// Sum over c of (m_c / M - D_c^2 / (4 M^2)); throws when M = 0.
    double modularity() const;

    /// Empty string when aggregates equal a recount over `graph`, otherwise a
    /// description of the first mismatch.
    std::string reconcile(const SampleGraph& graph) const;

    /// Community ids renumbered 0..k-1 by smallest member; handy for comparisons.
    std::unordered_map<NodeId, CommunityId> canonical_assignment() const;

  private:
    Community& mutable_community(CommunityId c);
    void drop_if_empty(CommunityId c);

    std::unordered_map<NodeId, CommunityId> of_;
    std::map<CommunityId, Community> comms_;
    std::size_t edge_count_ = 0;
    CommunityId next_id_ = 0;
};

}  // namespace compas

#endif  // COMPAS_PARTITION_HPP
