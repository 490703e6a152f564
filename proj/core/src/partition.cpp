#include "compas/partition.hpp"

#include <algorithm>
#include <sstream>

namespace compas {

Partition Partition::from_assignment(const SampleGraph& graph,
                                     const std::unordered_map<NodeId, CommunityId>& assignment) {
    Partition p;
    for (NodeId x : graph.nodes()) {
        auto it = assignment.find(x);
        if (it == assignment.end()) {
            throw GraphError("assignment misses node " + std::to_string(x));
        }
        p.of_[x] = it->second;
        auto& c = p.comms_[it->second];
        c.members.insert(x);
        c.total_degree += graph.degree(x);
        p.next_id_ = std::max(p.next_id_, it->second + 1);
    }
    for (const Edge& e : graph.edges()) {
        const CommunityId cu = p.of_.at(e.u);
        if (cu == p.of_.at(e.v)) ++p.comms_.at(cu).internal_edges;
    }
    p.edge_count_ = graph.edge_count();
    return p;
}

Partition Partition::singletons(const SampleGraph& graph) {
    std::unordered_map<NodeId, CommunityId> a;
    CommunityId next = 0;
    for (NodeId x : graph.nodes()) a[x] = next++;
    return from_assignment(graph, a);
}

CommunityId Partition::community_of(NodeId x) const {
    auto it = of_.find(x);
    if (it == of_.end()) throw GraphError("node " + std::to_string(x) + " has no community");
    return it->second;
}

const Partition::Community& Partition::community(CommunityId c) const {
    auto it = comms_.find(c);
    if (it == comms_.end()) throw GraphError("unknown community " + std::to_string(c));
    return it->second;
}

Partition::Community& Partition::mutable_community(CommunityId c) {
    auto it = comms_.find(c);
    if (it == comms_.end()) throw GraphError("unknown community " + std::to_string(c));
    return it->second;
}

void Partition::drop_if_empty(CommunityId c) {
    auto it = comms_.find(c);
    if (it != comms_.end() && it->second.members.empty()) comms_.erase(it);
}

void Partition::add_isolated(NodeId x, CommunityId c) {
    if (!of_.emplace(x, c).second) {
        throw GraphError("node " + std::to_string(x) + " already has a community");
    }
    comms_[c].members.insert(x);
    next_id_ = std::max(next_id_, c + 1);
}

void Partition::on_edge_added(NodeId u, NodeId v) {
    const CommunityId cu = community_of(u);
    const CommunityId cv = community_of(v);
    auto& a = mutable_community(cu);
    ++a.total_degree;
    if (cu == cv) {
        ++a.total_degree;
        ++a.internal_edges;
    } else {
        ++mutable_community(cv).total_degree;
    }
    ++edge_count_;
}

void Partition::on_node_removed(NodeId x, std::span<const Edge> removed_edges) {
    const CommunityId cx = community_of(x);
    for (const Edge& e : removed_edges) {
        const NodeId w = e.u == x ? e.v : e.u;
        const CommunityId cw = community_of(w);
        auto& a = mutable_community(cx);
        --a.total_degree;
        if (cw == cx) {
            --a.total_degree;
            --a.internal_edges;
        } else {
            --mutable_community(cw).total_degree;
        }
        --edge_count_;
    }
    mutable_community(cx).members.erase(x);
    of_.erase(x);
    drop_if_empty(cx);
}

void Partition::move(const SampleGraph& graph, NodeId x, CommunityId target) {
    const CommunityId source = community_of(x);
    if (source == target) return;
    std::size_t to_source = 0;
    std::size_t to_target = 0;
    for (NodeId w : graph.neighbors(x)) {
        const CommunityId cw = community_of(w);
        to_source += cw == source;
        to_target += cw == target;
    }
    const std::size_t d = graph.degree(x);
    auto& src = mutable_community(source);
    src.internal_edges -= to_source;
    src.total_degree -= d;
    src.members.erase(x);
    auto& dst = comms_[target];
    dst.internal_edges += to_target;
    dst.total_degree += d;
    dst.members.insert(x);
    of_[x] = target;
    next_id_ = std::max(next_id_, target + 1);
    drop_if_empty(source);
}

double Partition::modularity() const {
    if (edge_count_ == 0) throw GraphError("modularity is undefined on a graph with no edges");
    const double m = static_cast<double>(edge_count_);
    double q = 0.0;
    for (const auto& [_, c] : comms_) {
        const double dc = static_cast<double>(c.total_degree);
        q += static_cast<double>(c.internal_edges) / m - dc * dc / (4.0 * m * m);
    }
    return q;
}

std::string Partition::reconcile(const SampleGraph& graph) const {
    std::ostringstream err;
    if (of_.size() != graph.node_count()) {
        err << "partition covers " << of_.size() << " nodes, graph has " << graph.node_count();
        return err.str();
    }
    if (edge_count_ != graph.edge_count()) {
        err << "partition M=" << edge_count_ << ", graph |E|=" << graph.edge_count();
        return err.str();
    }
    std::unordered_map<NodeId, CommunityId> a;
    for (NodeId x : graph.nodes()) {
        auto it = of_.find(x);
        if (it == of_.end()) {
            err << "node " << x << " unassigned";
            return err.str();
        }
        a[x] = it->second;
    }
    const Partition fresh = from_assignment(graph, a);
    if (fresh.comms_.size() != comms_.size()) {
        err << "community count " << comms_.size() << " vs recount " << fresh.comms_.size();
        return err.str();
    }
    for (const auto& [id, c] : fresh.comms_) {
        auto it = comms_.find(id);
        if (it == comms_.end()) {
            err << "community " << id << " missing";
            return err.str();
        }
        if (it->second.internal_edges != c.internal_edges ||
            it->second.total_degree != c.total_degree || it->second.members != c.members) {
            err << "community " << id << " aggregates m=" << it->second.internal_edges
                << " D=" << it->second.total_degree << " vs recount m=" << c.internal_edges
                << " D=" << c.total_degree;
            return err.str();
        }
    }
    return {};
}

std::unordered_map<NodeId, CommunityId> Partition::canonical_assignment() const {
    std::vector<std::pair<NodeId, CommunityId>> firsts;
    for (const auto& [id, c] : comms_) {
        firsts.emplace_back(*std::min_element(c.members.begin(), c.members.end()), id);
    }
    std::sort(firsts.begin(), firsts.end());
    std::unordered_map<CommunityId, CommunityId> relabel;
    for (std::size_t i = 0; i < firsts.size(); ++i) relabel[firsts[i].second] = i;
    std::unordered_map<NodeId, CommunityId> out;
    for (const auto& [x, c] : of_) out[x] = relabel.at(c);
    return out;
}

}  // namespace compas
