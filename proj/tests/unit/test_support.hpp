#ifndef COMPAS_TEST_SUPPORT_HPP
#define COMPAS_TEST_SUPPORT_HPP

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "compas/evaluation.hpp"
#include "compas/partition.hpp"
#include "compas/sample_graph.hpp"
#include "compas/stream_io.hpp"

namespace testing_support {

using compas::CommunityId;
using compas::NodeId;

inline compas::SampleGraph graph_of(std::size_t nodes, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    compas::SampleGraph g;
    for (NodeId x = 0; x < nodes; ++x) g.add_node(x);
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
}

/// Graph made of exactly the endpoints of `edges`.
inline compas::SampleGraph edges_graph(const std::vector<std::pair<NodeId, NodeId>>& edges) {
    compas::SampleGraph g;
    for (const auto& [u, v] : edges) {
        if (!g.contains(u)) g.add_node(u);
        if (!g.contains(v)) g.add_node(v);
        g.add_edge(u, v);
    }
    return g;
}

inline compas::SampleGraph clique(NodeId first, NodeId size) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId a = first; a < first + size; ++a)
        for (NodeId b = a + 1; b < first + size; ++b) e.emplace_back(a, b);
    return edges_graph(e);
}

inline compas::SampleGraph random_graph(std::mt19937_64& rng, std::size_t nodes, double p) {
    compas::SampleGraph g;
    for (NodeId x = 0; x < nodes; ++x) g.add_node(x);
    std::bernoulli_distribution coin(p);
    for (NodeId u = 0; u < nodes; ++u) {
        for (NodeId v = u + 1; v < nodes; ++v) {
            if (coin(rng)) g.add_edge(u, v);
        }
    }
    return g;
}

inline std::unordered_map<NodeId, CommunityId> random_assignment(std::mt19937_64& rng,
                                                                 const compas::SampleGraph& g,
                                                                 std::size_t communities) {
    std::uniform_int_distribution<CommunityId> pick(0, communities - 1);
    std::unordered_map<NodeId, CommunityId> a;
    for (NodeId x : g.nodes()) a[x] = pick(rng);
    return a;
}

/// Newman's pairwise form: (1/2M) sum_ij [A_ij - k_i k_j / 2M] delta(c_i, c_j).
inline double pairwise_modularity(const compas::SampleGraph& g,
                                  const std::unordered_map<NodeId, CommunityId>& a) {
    const auto nodes = g.nodes();
    const double two_m = 2.0 * static_cast<double>(g.edge_count());
    double q = 0.0;
    for (NodeId i : nodes) {
        for (NodeId j : nodes) {
            if (a.at(i) != a.at(j)) continue;
            const double aij = g.has_edge(i, j) ? 1.0 : 0.0;
            q += aij - static_cast<double>(g.degree(i)) * static_cast<double>(g.degree(j)) / two_m;
        }
    }
    return q / two_m;
}

inline std::unordered_map<NodeId, CommunityId> assignment_of(const compas::Partition& p) {
    return {p.assignment().begin(), p.assignment().end()};
}

/// Maps each node to the smallest node id sharing its community.
inline std::map<NodeId, NodeId> normalize(const std::unordered_map<NodeId, CommunityId>& a) {
    std::map<CommunityId, NodeId> rep;
    for (const auto& [x, c] : a) {
        auto it = rep.find(c);
        if (it == rep.end() || x < it->second) rep[c] = x;
    }
    std::map<NodeId, NodeId> out;
    for (const auto& [x, c] : a) out[x] = rep[c];
    return out;
}

inline compas::EdgeStream stream_of(const std::vector<std::pair<NodeId, NodeId>>& edges) {
    compas::EdgeStream s;
    std::uint64_t t = 0;
    for (const auto& [u, v] : edges) s.events.push_back({u, v, t++});
    return s;
}


/// Vertices covered by the triangle-adjacency components (triangles linked when
/// they share two vertices) of the subgraph induced by `members` that contain `seed`.
inline std::set<NodeId> percolation_oracle(const compas::SampleGraph& g, const std::set<NodeId>& members,
                                           NodeId seed) {
    const std::vector<NodeId> m(members.begin(), members.end());
    std::vector<std::array<NodeId, 3>> tri;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            for (std::size_t k = j + 1; k < m.size(); ++k)
                if (g.has_edge(m[i], m[j]) && g.has_edge(m[i], m[k]) && g.has_edge(m[j], m[k]))
                    tri.push_back({m[i], m[j], m[k]});
    std::vector<std::size_t> parent(tri.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    auto shared = [](const std::array<NodeId, 3>& a, const std::array<NodeId, 3>& b) {
        int c = 0;
        for (NodeId x : a) c += std::count(b.begin(), b.end(), x);
        return c;
    };
    for (std::size_t i = 0; i < tri.size(); ++i)
        for (std::size_t j = i + 1; j < tri.size(); ++j)
            if (shared(tri[i], tri[j]) >= 2) parent[find(i)] = find(j);
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < tri.size(); ++i)
        if (std::count(tri[i].begin(), tri[i].end(), seed)) roots.insert(find(i));
    std::set<NodeId> out;
    for (std::size_t i = 0; i < tri.size(); ++i)
        if (roots.contains(find(i))) out.insert(tri[i].begin(), tri[i].end());
    return out;
}

/// Fragments after a member of `members` was removed: per former neighbour in
/// ascending order its unclaimed percolation set (or itself), then the rest.
inline std::vector<std::set<NodeId>> split_oracle(const compas::SampleGraph& g, const std::set<NodeId>& members,
                                                  std::set<NodeId> seeds) {
    std::vector<std::set<NodeId>> out;
    std::set<NodeId> claimed;
    for (NodeId s : seeds) {
        if (!members.contains(s) || claimed.contains(s)) continue;
        std::set<NodeId> frag;
        for (NodeId x : percolation_oracle(g, members, s))
            if (!claimed.contains(x)) frag.insert(x);
        if (frag.empty()) frag = {s};
        claimed.insert(frag.begin(), frag.end());
        out.push_back(frag);
    }
    if (out.empty()) return out;
    std::set<NodeId> rest;
    for (NodeId x : members)
        if (!claimed.contains(x)) rest.insert(x);
    if (!rest.empty()) out.push_back(rest);
    return out;
}

/// Contribution m_c/M - D_c^2/(4M^2) of one community.
inline double community_term(double m_c, double d_c, double m) { return m_c / m - d_c * d_c / (4.0 * m * m); }

/// Largest modularity gain over every split of `members` into two non-empty
/// parts, computed from the community terms alone.
inline double best_bipartition_gain(const compas::SampleGraph& g, const std::vector<NodeId>& members) {
    const std::size_t k = members.size();
    const double m = static_cast<double>(g.edge_count());
    auto term = [&](const std::vector<NodeId>& part) {
        double inner = 0.0, deg = 0.0;
        for (std::size_t i = 0; i < part.size(); ++i) {
            deg += static_cast<double>(g.degree(part[i]));
            for (std::size_t j = i + 1; j < part.size(); ++j) inner += g.has_edge(part[i], part[j]);
        }
        return community_term(inner, deg, m);
    };
    const double whole = term(members);
    double best = -1e300;
    // Fix members[0] in part A so each split is seen once.
    for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << (k - 1)); ++mask) {
        std::vector<NodeId> a{members[0]}, b;
        for (std::size_t i = 1; i < k; ++i) ((mask >> (i - 1)) & 1 ? a : b).push_back(members[i]);
        best = std::max(best, term(a) + term(b) - whole);
    }
    return best;
}


/// The 13 measures of community `c`, counted directly from the edge list.
inline std::array<double, compas::kMeasureCount> naive_measures(const compas::SampleGraph& g,
                                                                 const std::unordered_map<NodeId, CommunityId>& a,
                                                                 CommunityId c) {
    std::vector<NodeId> s;
    for (NodeId x : g.nodes())
        if (a.at(x) == c) s.push_back(x);
    const auto edges = g.edges();
    auto in_s = [&](NodeId x) { return a.at(x) == c; };
    double m_s = 0, c_s = 0, d_s = 0;
    for (const auto& e : edges) {
        if (in_s(e.u) && in_s(e.v)) m_s += 1;
        else if (in_s(e.u) || in_s(e.v)) c_s += 1;
    }
    std::vector<double> deg;
    for (NodeId x : g.nodes()) deg.push_back(static_cast<double>(g.degree(x)));
    std::sort(deg.begin(), deg.end());
    const std::size_t h = deg.size() / 2;
    const double median = deg.size() % 2 ? deg[h] : (deg[h - 1] + deg[h]) / 2.0;
    double fomd = 0, tpr = 0, odf_max = 0, odf_sum = 0, flake = 0;
    for (NodeId x : s) {
        double din = 0, dout = 0;
        for (const auto& e : edges) {
            if (e.u != x && e.v != x) continue;
            const NodeId o = e.u == x ? e.v : e.u;
            (in_s(o) ? din : dout) += 1;
        }
        d_s += din + dout;
        if (din > median) fomd += 1;
        if (din < (din + dout) / 2.0) flake += 1;
        const double odf = din + dout > 0 ? dout / (din + dout) : 0.0;
        odf_max = std::max(odf_max, odf);
        odf_sum += odf;
        bool tri = false;
        for (NodeId y : s)
            for (NodeId z : s)
                if (y < z && y != x && z != x && g.has_edge(x, y) && g.has_edge(x, z) && g.has_edge(y, z)) tri = true;
        tpr += tri;
    }
    const double n = static_cast<double>(s.size());
    const double nv = static_cast<double>(g.node_count());
    const double mm = static_cast<double>(edges.size());
    auto div = [](double x, double y) { return y == 0 ? 0.0 : x / y; };
    const double con = div(c_s, 2 * m_s + c_s);
    return {n < 2 ? 0.0 : m_s / (n * (n - 1) / 2),
            m_s,
            div(2 * m_s, n),
            div(fomd, n),
            div(tpr, n),
            div(c_s, n),
            div(c_s, n * (nv - n)),
            con,
            con + div(c_s, 2 * (mm - m_s) + c_s),
            odf_max,
            div(odf_sum, n),
            div(flake, n),
            mm == 0 ? 0.0 : m_s / mm - (d_s / (2 * mm)) * (d_s / (2 * mm))};
}

/// sup |F_a - F_b| evaluated at every sample point by counting.
inline double naive_ks(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0;
    for (const auto* src : {&a, &b})
        for (double x : *src) {
            const double fa = std::count_if(a.begin(), a.end(), [&](double v) { return v <= x; }) / double(a.size());
            const double fb = std::count_if(b.begin(), b.end(), [&](double v) { return v <= x; }) / double(b.size());
            d = std::max(d, std::abs(fa - fb));
        }
    return d;
}

struct NaiveAgreement {
    double nmi = 0, ari = 0, purity = 0;
};

/// NMI (arithmetic-mean normalisation), ARI by pair counting and purity of p
/// against q, over the nodes both labelings cover.
inline NaiveAgreement naive_agreement(const compas::Labeling& p, const compas::Labeling& q) {
    std::vector<NodeId> common;
    for (const auto& [x, _] : p)
        if (q.contains(x)) common.push_back(x);
    const double n = static_cast<double>(common.size());
    std::map<CommunityId, std::vector<NodeId>> pc, qc;
    for (NodeId x : common) {
        pc[p.at(x)].push_back(x);
        qc[q.at(x)].push_back(x);
    }
    auto overlap = [&](const std::vector<NodeId>& s, const std::vector<NodeId>& t) {
        double k = 0;
        for (NodeId x : s) k += std::count(t.begin(), t.end(), x);
        return k;
    };
    NaiveAgreement r;
    double hp = 0, hq = 0, mi = 0;
    for (const auto& [_, s] : pc) hp -= s.size() / n * std::log(s.size() / n);
    for (const auto& [_, t] : qc) hq -= t.size() / n * std::log(t.size() / n);
    double pure = 0;
    for (const auto& [_, s] : pc) {
        double best = 0;
        for (const auto& [__, t] : qc) {
            const double k = overlap(s, t);
            best = std::max(best, k);
            if (k > 0) mi += k / n * std::log(k * n / (double(s.size()) * double(t.size())));
        }
        pure += best;
    }
    r.purity = pure / n;
    const bool same = std::all_of(common.begin(), common.end(), [&](NodeId x) {
        return std::all_of(common.begin(), common.end(),
                           [&](NodeId y) { return (p.at(x) == p.at(y)) == (q.at(x) == q.at(y)); });
    });
    if (same) r.nmi = 1.0;
    else if (hp == 0 || hq == 0) r.nmi = 0.0;
    else r.nmi = mi / ((hp + hq) / 2);
    // Pair counting: a = together in both, b = only in p, c = only in q.
    double both = 0, only_p = 0, only_q = 0, pairs = 0;
    for (std::size_t i = 0; i < common.size(); ++i)
        for (std::size_t j = i + 1; j < common.size(); ++j) {
            const bool sp = p.at(common[i]) == p.at(common[j]);
            const bool sq = q.at(common[i]) == q.at(common[j]);
            both += sp && sq;
            only_p += sp && !sq;
            only_q += !sp && sq;
            pairs += 1;
        }
    const double tp = both + only_p, tq = both + only_q;
    const double expected = pairs == 0 ? 0 : tp * tq / pairs;
    const double top = (tp + tq) / 2;
    r.ari = top == expected ? (same ? 1.0 : 0.0) : (both - expected) / (top - expected);
    return r;
}

}  // namespace testing_support

#endif  // COMPAS_TEST_SUPPORT_HPP
