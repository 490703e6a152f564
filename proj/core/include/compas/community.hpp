#ifndef COMPAS_COMMUNITY_HPP
#define COMPAS_COMMUNITY_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "compas/partition.hpp"
#include "compas/sample_graph.hpp"
#include "compas/types.hpp"

namespace compas {

/// Target meaning "a community that does not exist yet".
inline constexpr CommunityId kNewCommunity = std::numeric_limits<CommunityId>::max();

struct MoveProposal {
    std::vector<NodeId> subject;           // one node, a pair, or a fragment
    std::vector<CommunityId> sources;      // community of each subject node
    CommunityId target = kNewCommunity;    // resolved id once applied
    double delta_q = 0.0;
};

/// What a community operation did to a partition.
struct PartitionChange {
    std::vector<MoveProposal> moves;
    double delta_q = 0.0;   // sum of applied move gains
    std::size_t waves = 0;  // cascade waves run (both_in_sample only)

    bool changed() const { return !moves.empty(); }
};

/// Modularity recomputed from the edge list and the node assignment alone,
/// ignoring the partition's cached aggregates.
double modularity(const SampleGraph& graph, const Partition& partition);

/// Gain of moving `u` into `target` (kNewCommunity for a fresh singleton).
/// Zero when target is u's own community.
double delta_q_node_move(const SampleGraph& graph, const Partition& partition, NodeId u,
                         CommunityId target);

/// Gain of detaching u and v (adjacent) into a fresh community of their own.
double delta_q_pair_new_community(const SampleGraph& graph, const Partition& partition, NodeId u,
                                  NodeId v);

/// Gain of moving every node of `block` into `target` (kNewCommunity allowed).
double delta_q_block_move(const SampleGraph& graph, const Partition& partition,
                          std::span<const NodeId> block, CommunityId target);

/// Applies a block move and returns the id the block ended up in.
CommunityId apply_block_move(const SampleGraph& graph, Partition& partition,
                             std::span<const NodeId> block, CommunityId target);

/// Reacts to a freshly inserted edge (u, v) between sampled nodes. The edge must
/// already be in `graph` and registered with `partition.on_edge_added`.
///
/// Intra-community edges leave the partition untouched. For an inter-community
/// edge the three candidates u->C(v), v->C(u) and {u,v}->C* are scored; if all
/// are negative nothing happens, otherwise the best one (ties in that order) is
/// applied and the neighbours of moved nodes get to pick their best community,
/// wave by wave, while that strictly improves modularity. A node moves at most
/// once per call and at most |V_s| waves run.
PartitionChange both_in_sample(const SampleGraph& graph, Partition& partition, NodeId u, NodeId v);

/// Best single-node move for `x` among its neighbours' communities; returns the
/// target and gain, or kNewCommunity with 0 gain when x has no other option.
MoveProposal best_neighbor_move(const SampleGraph& graph, const Partition& partition, NodeId x);

/// Re-partitions what is left of `old_community` after one of its members was
/// removed from `graph`. From each former neighbour still in the community
/// (ascending id) a 3-clique percolation collects every member reachable by
/// rolling triangles across shared edges; already-claimed members are skipped
/// and a neighbour in no new triangle becomes a singleton. Members not reached
/// from any neighbour form one trailing fragment. Every remaining member ends up
/// in exactly one fragment. Fragments are returned with sorted members.
std::vector<std::vector<NodeId>> split_after_removal(const SampleGraph& graph,
                                                     const Partition& partition,
                                                     std::span<const NodeId> removed_neighbors,
                                                     CommunityId old_community);

/// Vertex set reached by 3-clique percolation from `seed` inside `members`.
/// Empty when `seed` lies in no triangle of the induced subgraph.
std::vector<NodeId> clique_percolation_from(const SampleGraph& graph,
                                            const std::unordered_set<NodeId>& members,
                                            NodeId seed);

/// Gives each fragment of `old_community` its own community, then, largest
/// fragment first, moves it into the neighbouring community with the largest
/// positive block gain. One pass. A single fragment leaves the partition as is.
PartitionChange merge_fragments(const SampleGraph& graph, Partition& partition,
                                std::vector<std::vector<NodeId>> fragments,
                                CommunityId old_community);

struct LouvainOptions {
    std::uint64_t seed = 0;
    double min_gain = 1e-12;
    std::size_t max_levels = 64;
};

/// Two-phase modularity maximisation (local moves, then aggregation), with the
/// node visiting order shuffled by `seed`. Throws on a graph without edges.
Partition louvain(const SampleGraph& graph, const LouvainOptions& options = {});

}  // namespace compas

#endif  // COMPAS_COMMUNITY_HPP
