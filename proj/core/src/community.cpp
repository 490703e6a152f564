#include "compas/community.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace compas {

namespace {

constexpr double kMinGain = 1e-12;

double edge_total(const Partition& partition) {
    if (partition.edge_count() == 0) {
        throw GraphError("modularity gain is undefined on a graph with no edges");
    }
    return static_cast<double>(partition.edge_count());
}

double community_term(double m_c, double d_c, double m) {
    return m_c / m - d_c * d_c / (4.0 * m * m);
}

void require_target(const Partition& partition, CommunityId target) {
    if (target != kNewCommunity && !partition.has_community(target)) {
        throw GraphError("unknown community " + std::to_string(target));
    }
}

}  // namespace

double modularity(const SampleGraph& graph, const Partition& partition) {
    if (graph.edge_count() == 0) {
        throw GraphError("modularity is undefined on a graph with no edges");
    }
    std::unordered_map<CommunityId, double> internal;
    std::unordered_map<CommunityId, double> degree;
    for (NodeId x : graph.nodes()) {
        degree[partition.community_of(x)] += static_cast<double>(graph.degree(x));
    }
    for (const Edge& e : graph.edges()) {
        const CommunityId c = partition.community_of(e.u);
        if (c == partition.community_of(e.v)) internal[c] += 1.0;
    }
    const double m = static_cast<double>(graph.edge_count());
    double q = 0.0;
    for (const auto& [c, d] : degree) q += community_term(internal[c], d, m);
    return q;
}

double delta_q_node_move(const SampleGraph& graph, const Partition& partition, NodeId u,
                         CommunityId target) {
    const CommunityId source = partition.community_of(u);
    if (target == source) return 0.0;
    require_target(partition, target);
    const double m = edge_total(partition);
    double k_source = 0.0;
    double k_target = 0.0;
    for (NodeId w : graph.neighbors(u)) {
        const CommunityId cw = partition.community_of(w);
        if (cw == source) k_source += 1.0;
        else if (cw == target) k_target += 1.0;
    }
    const double d = static_cast<double>(graph.degree(u));
    const double d_source = static_cast<double>(partition.community(source).total_degree);
    const double d_target =
        target == kNewCommunity ? 0.0 : static_cast<double>(partition.community(target).total_degree);
    return (k_target - k_source) / m - d * (d_target - d_source + d) / (2.0 * m * m);
}

double delta_q_block_move(const SampleGraph& graph, const Partition& partition,
                          std::span<const NodeId> block, CommunityId target) {
    require_target(partition, target);
    const double m = edge_total(partition);
    const std::unordered_set<NodeId> in_block(block.begin(), block.end());

    // Per affected community: change in internal edges and total degree.
    std::map<CommunityId, std::pair<long long, long long>> delta;
    delta[target];
    for (NodeId s : in_block) {
        const CommunityId cs = partition.community_of(s);
        const auto d = static_cast<long long>(graph.degree(s));
        delta[cs].second -= d;
        delta[target].second += d;
        for (NodeId w : graph.neighbors(s)) {
            const bool w_in_block = in_block.contains(w);
            if (w_in_block && w < s) continue;  // count each block-internal edge once
            const CommunityId cw = partition.community_of(w);
            if (cw == cs) --delta[cs].first;
            const CommunityId cw_after = w_in_block ? target : cw;
            if (cw_after == target) ++delta[target].first;
        }
    }
    double dq = 0.0;
    for (const auto& [c, dd] : delta) {
        double m_c = 0.0;
        double d_c = 0.0;
        if (c != kNewCommunity) {
            const auto& comm = partition.community(c);
            m_c = static_cast<double>(comm.internal_edges);
            d_c = static_cast<double>(comm.total_degree);
        }
        dq += community_term(m_c + static_cast<double>(dd.first), d_c + static_cast<double>(dd.second), m) -
              community_term(m_c, d_c, m);
    }
    return dq;
}

double delta_q_pair_new_community(const SampleGraph& graph, const Partition& partition, NodeId u,
                                  NodeId v) {
    if (!graph.has_edge(u, v)) {
        throw GraphError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") is absent");
    }
    const std::array<NodeId, 2> pair{u, v};
    return delta_q_block_move(graph, partition, pair, kNewCommunity);
}

CommunityId apply_block_move(const SampleGraph& graph, Partition& partition,
                             std::span<const NodeId> block, CommunityId target) {
    if (target == kNewCommunity) target = partition.fresh_id();
    for (NodeId x : block) partition.move(graph, x, target);
    return target;
}

MoveProposal best_neighbor_move(const SampleGraph& graph, const Partition& partition, NodeId x) {
    const CommunityId own = partition.community_of(x);
    MoveProposal best;
    best.subject = {x};
    best.sources = {own};
    std::map<CommunityId, double> links;
    double k_own = 0.0;
    for (NodeId w : graph.neighbors(x)) {
        const CommunityId cw = partition.community_of(w);
        if (cw == own) k_own += 1.0;
        else links[cw] += 1.0;
    }
    if (links.empty()) return best;
    const double m = edge_total(partition);
    const double d = static_cast<double>(graph.degree(x));
    const double d_own = static_cast<double>(partition.community(own).total_degree);
    bool first = true;
    for (const auto& [c, k] : links) {
        const double d_c = static_cast<double>(partition.community(c).total_degree);
        const double dq = (k - k_own) / m - d * (d_c - d_own + d) / (2.0 * m * m);
        if (first || dq > best.delta_q) {
            best.target = c;
            best.delta_q = dq;
            first = false;
        }
    }
    return best;
}

PartitionChange both_in_sample(const SampleGraph& graph, Partition& partition, NodeId u, NodeId v) {
    if (!graph.contains(u) || !graph.contains(v)) {
        throw GraphError("both_in_sample: endpoint outside the sample");
    }
    PartitionChange change;
    const CommunityId cu = partition.community_of(u);
    const CommunityId cv = partition.community_of(v);
    if (cu == cv) return change;

    const std::array<double, 3> gains{
        delta_q_node_move(graph, partition, u, cv),
        delta_q_node_move(graph, partition, v, cu),
        delta_q_pair_new_community(graph, partition, u, v),
    };
    if (gains[0] < 0.0 && gains[1] < 0.0 && gains[2] < 0.0) return change;
    std::size_t pick = 0;
    for (std::size_t i = 1; i < gains.size(); ++i) {
        if (gains[i] > gains[pick]) pick = i;
    }

    MoveProposal first;
    first.delta_q = gains[pick];
    std::vector<NodeId> wave;
    switch (pick) {
        case 0:
            first.subject = {u};
            first.sources = {cu};
            first.target = cv;
            partition.move(graph, u, cv);
            wave = {u};
            break;
        case 1:
            first.subject = {v};
            first.sources = {cv};
            first.target = cu;
            partition.move(graph, v, cu);
            wave = {v};
            break;
        default: {
            first.subject = {u, v};
            first.sources = {cu, cv};
            const std::array<NodeId, 2> pair{u, v};
            first.target = apply_block_move(graph, partition, pair, kNewCommunity);
            wave = {std::min(u, v), std::max(u, v)};
            break;
        }
    }
    change.delta_q += first.delta_q;
    change.moves.push_back(std::move(first));

    std::unordered_set<NodeId> moved(wave.begin(), wave.end());
    const std::size_t wave_cap = graph.node_count();
    while (!wave.empty() && change.waves < wave_cap) {
        ++change.waves;
        std::set<NodeId> candidates;
        for (NodeId w : wave) {
            for (NodeId t : graph.neighbors(w)) {
                if (!moved.contains(t)) candidates.insert(t);
            }
        }
        std::vector<NodeId> next;
        for (NodeId t : candidates) {
            MoveProposal prop = best_neighbor_move(graph, partition, t);
            if (prop.target == kNewCommunity || prop.delta_q <= kMinGain) continue;
            partition.move(graph, t, prop.target);
            moved.insert(t);
            next.push_back(t);
            change.delta_q += prop.delta_q;
            change.moves.push_back(std::move(prop));
        }
        wave = std::move(next);
    }
    return change;
}

std::vector<NodeId> clique_percolation_from(const SampleGraph& graph,
                                            const std::unordered_set<NodeId>& members,
                                            NodeId seed) {
    using Triangle = std::array<NodeId, 3>;
    auto make = [](NodeId a, NodeId b, NodeId c) {
        Triangle t{a, b, c};
        std::sort(t.begin(), t.end());
        return t;
    };
    std::set<Triangle> seen;
    std::vector<Triangle> queue;

    std::vector<NodeId> local;
    for (NodeId w : graph.neighbors(seed)) {
        if (members.contains(w)) local.push_back(w);
    }
    std::sort(local.begin(), local.end());
    for (std::size_t i = 0; i < local.size(); ++i) {
        for (std::size_t j = i + 1; j < local.size(); ++j) {
            if (graph.has_edge(local[i], local[j])) {
                Triangle t = make(seed, local[i], local[j]);
                if (seen.insert(t).second) queue.push_back(t);
            }
        }
    }

    std::set<NodeId> reached;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Triangle t = queue[head];
        reached.insert(t.begin(), t.end());
        const std::array<std::pair<NodeId, NodeId>, 3> sides{
            std::pair{t[0], t[1]}, std::pair{t[0], t[2]}, std::pair{t[1], t[2]}};
        for (const auto& [a, b] : sides) {
            const auto& na = graph.neighbors(a);
            const auto& nb = graph.neighbors(b);
            const auto& small = na.size() <= nb.size() ? na : nb;
            const auto& large = na.size() <= nb.size() ? nb : na;
            for (NodeId z : small) {
                if (!large.contains(z) || !members.contains(z)) continue;
                Triangle next = make(a, b, z);
                if (seen.insert(next).second) queue.push_back(next);
            }
        }
    }
    return {reached.begin(), reached.end()};
}

std::vector<std::vector<NodeId>> split_after_removal(const SampleGraph& graph,
                                                     const Partition& partition,
                                                     std::span<const NodeId> removed_neighbors,
                                                     CommunityId old_community) {
    std::vector<std::vector<NodeId>> fragments;
    if (!partition.has_community(old_community)) return fragments;
    const auto& members = partition.community(old_community).members;

    std::vector<NodeId> seeds;
    for (NodeId v : removed_neighbors) {
        if (members.contains(v)) seeds.push_back(v);
    }
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    if (seeds.empty()) return fragments;

    std::unordered_set<NodeId> assigned;
    for (NodeId v : seeds) {
        if (assigned.contains(v)) continue;
        std::vector<NodeId> fragment;
        for (NodeId x : clique_percolation_from(graph, members, v)) {
            if (!assigned.contains(x)) fragment.push_back(x);
        }
        if (fragment.empty()) fragment = {v};
        assigned.insert(fragment.begin(), fragment.end());
        fragments.push_back(std::move(fragment));
    }
    std::vector<NodeId> rest;
    for (NodeId x : members) {
        if (!assigned.contains(x)) rest.push_back(x);
    }
    if (!rest.empty()) {
        std::sort(rest.begin(), rest.end());
        fragments.push_back(std::move(rest));
    }
    return fragments;
}

PartitionChange merge_fragments(const SampleGraph& graph, Partition& partition,
                                std::vector<std::vector<NodeId>> fragments,
                                CommunityId old_community) {
    PartitionChange change;
    std::erase_if(fragments, [](const auto& f) { return f.empty(); });
    if (fragments.size() <= 1) return change;
    for (auto& f : fragments) std::sort(f.begin(), f.end());
    std::stable_sort(fragments.begin(), fragments.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });

    // The largest fragment keeps the old id, the others are split off.
    for (std::size_t i = 1; i < fragments.size(); ++i) {
        MoveProposal split;
        split.subject = fragments[i];
        split.sources.assign(fragments[i].size(), old_community);
        split.delta_q = delta_q_block_move(graph, partition, fragments[i], kNewCommunity);
        split.target = apply_block_move(graph, partition, fragments[i], kNewCommunity);
        change.delta_q += split.delta_q;
        change.moves.push_back(std::move(split));
    }

    const double m = static_cast<double>(partition.edge_count());
    for (const auto& fragment : fragments) {
        const CommunityId own = partition.community_of(fragment.front());
        const std::unordered_set<NodeId> in_fragment(fragment.begin(), fragment.end());
        // Links from the fragment to each community, counted once per fragment.
        std::map<CommunityId, double> links;
        double inner_twice = 0.0;
        double degree = 0.0;
        bool single_source = true;
        for (NodeId x : fragment) {
            single_source = single_source && partition.community_of(x) == own;
            degree += static_cast<double>(graph.degree(x));
            for (NodeId w : graph.neighbors(x)) {
                if (in_fragment.contains(w)) inner_twice += 1.0;
                else links[partition.community_of(w)] += 1.0;
            }
        }
        CommunityId best = kNewCommunity;
        double best_gain = kMinGain;
        for (const auto& [c, k] : links) {
            if (c == own) continue;
            double gain;
            if (single_source) {
                const auto& src = partition.community(own);
                const auto& dst = partition.community(c);
                const double ms = static_cast<double>(src.internal_edges);
                const double ds = static_cast<double>(src.total_degree);
                const double mt = static_cast<double>(dst.internal_edges);
                const double dt = static_cast<double>(dst.total_degree);
                const double inner = inner_twice / 2.0;
                const double to_rest = links.contains(own) ? links.at(own) : 0.0;
                gain = community_term(ms - inner - to_rest, ds - degree, m) - community_term(ms, ds, m) +
                       community_term(mt + inner + k, dt + degree, m) - community_term(mt, dt, m);
            } else {
                gain = delta_q_block_move(graph, partition, fragment, c);
            }
            if (gain > best_gain) {
                best = c;
                best_gain = gain;
            }
        }
        if (best == kNewCommunity) continue;
        MoveProposal merge;
        merge.subject = fragment;
        for (NodeId x : fragment) merge.sources.push_back(partition.community_of(x));
        merge.target = best;
        merge.delta_q = best_gain;
        apply_block_move(graph, partition, fragment, best);
        change.delta_q += best_gain;
        change.moves.push_back(std::move(merge));
    }
    return change;
}

// ---------------------------------------------------------------------------
// Louvain

namespace {

// Weighted graph over dense indices. A self-loop of weight w stores w in
// loops[i]; it contributes w to the node's strength (loop counted twice for
// an aggregated community, see aggregate()).
struct DenseGraph {
    std::vector<std::vector<std::pair<std::size_t, double>>> adj;
    std::vector<double> loops;
    std::vector<double> strength;
    double total = 0.0;  // sum of strengths = 2m

    std::size_t size() const { return adj.size(); }
};

// One round of local moves. Returns true when any node changed community.
bool local_moves(const DenseGraph& g, std::vector<std::size_t>& comm, Rng& rng, double min_gain) {
    const std::size_t n = g.size();
    std::vector<double> tot(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += g.strength[i];

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(order[i - 1], order[pick(rng)]);
    }

    std::vector<double> link(n, 0.0);
    std::vector<std::size_t> touched;
    bool any = false;
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i : order) {
            const std::size_t own = comm[i];
            const double k = g.strength[i];
            touched.clear();
            for (const auto& [j, w] : g.adj[i]) {
                if (link[comm[j]] == 0.0) touched.push_back(comm[j]);
                link[comm[j]] += w;
            }
            tot[own] -= k;
            std::size_t best = own;
            double best_gain = link[own] - tot[own] * k / g.total;
            for (std::size_t c : touched) {
                const double gain = link[c] - tot[c] * k / g.total;
                if (gain > best_gain + min_gain) {
                    best = c;
                    best_gain = gain;
                }
            }
            tot[best] += k;
            for (std::size_t c : touched) link[c] = 0.0;
            link[own] = 0.0;
            if (best != own) {
                comm[i] = best;
                improved = true;
                any = true;
            }
        }
    }
    return any;
}

DenseGraph aggregate(const DenseGraph& g, const std::vector<std::size_t>& comm, std::size_t k) {
    DenseGraph out;
    out.adj.resize(k);
    out.loops.assign(k, 0.0);
    out.strength.assign(k, 0.0);
    out.total = g.total;
    std::vector<std::map<std::size_t, double>> w(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t ci = comm[i];
        out.loops[ci] += g.loops[i];
        out.strength[ci] += g.strength[i];
        for (const auto& [j, wt] : g.adj[i]) {
            const std::size_t cj = comm[j];
            if (ci == cj) out.loops[ci] += wt;  // seen from both ends: 2x internal weight
            else w[ci][cj] += wt;
        }
    }
    for (std::size_t c = 0; c < k; ++c) out.adj[c].assign(w[c].begin(), w[c].end());
    return out;
}

}  // namespace

Partition louvain(const SampleGraph& graph, const LouvainOptions& options) {
    if (graph.edge_count() == 0) throw GraphError("louvain: graph has no edges");
    const std::vector<NodeId> nodes = graph.nodes();
    std::unordered_map<NodeId, std::size_t> index;
    for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;

    DenseGraph g;
    g.adj.resize(nodes.size());
    g.loops.assign(nodes.size(), 0.0);
    g.strength.assign(nodes.size(), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::vector<std::size_t> nbrs;
        for (NodeId w : graph.neighbors(nodes[i])) nbrs.push_back(index.at(w));
        std::sort(nbrs.begin(), nbrs.end());
        for (std::size_t j : nbrs) g.adj[i].emplace_back(j, 1.0);
        g.strength[i] = static_cast<double>(nbrs.size());
        g.total += g.strength[i];
    }

    Rng rng(options.seed);
    std::vector<std::size_t> membership(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) membership[i] = i;

    for (std::size_t level = 0; level < options.max_levels; ++level) {
        std::vector<std::size_t> comm(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) comm[i] = i;
        if (!local_moves(g, comm, rng, options.min_gain)) break;
        // Renumber in order of first appearance.
        std::vector<std::size_t> renum(g.size(), g.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (renum[comm[i]] == g.size()) renum[comm[i]] = k++;
            comm[i] = renum[comm[i]];
        }
        for (auto& m : membership) m = comm[m];
        if (k == g.size()) break;
        g = aggregate(g, comm, k);
    }

    std::unordered_map<NodeId, CommunityId> assignment;
    for (std::size_t i = 0; i < nodes.size(); ++i) assignment[nodes[i]] = membership[i];
    return Partition::from_assignment(graph, assignment);
}

}  // namespace compas
