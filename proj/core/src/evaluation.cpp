#include "compas/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "compas/community.hpp"

namespace compas {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double median_degree(const SampleGraph& graph) {
    std::vector<std::size_t> deg;
    deg.reserve(graph.node_count());
    for (const auto& [d, _] : graph.degree_index()) deg.push_back(d);  // already sorted
    if (deg.empty()) return 0.0;
    const std::size_t mid = deg.size() / 2;
    if (deg.size() % 2 == 1) return static_cast<double>(deg[mid]);
    return 0.5 * static_cast<double>(deg[mid - 1] + deg[mid]);
}

CommunityScores score_one(const SampleGraph& graph, const Partition& partition, CommunityId id,
                          double median) {
    const auto& comm = partition.community(id);
    const auto& members = comm.members;
    CommunityScores s;
    s.community = id;
    s.n_s = members.size();

    std::size_t inside_twice = 0;
    std::size_t above_median = 0;
    std::size_t in_triangle = 0;
    std::size_t flake = 0;
    double odf_max = 0.0;
    double odf_sum = 0.0;
    for (NodeId x : members) {
        const auto& nbrs = graph.neighbors(x);
        std::vector<NodeId> inner;
        for (NodeId w : nbrs) {
            if (members.contains(w)) inner.push_back(w);
        }
        const std::size_t d = nbrs.size();
        const std::size_t d_in = inner.size();
        const std::size_t d_out = d - d_in;
        inside_twice += d_in;
        s.c_s += d_out;
        if (static_cast<double>(d_in) > median) ++above_median;
        if (2 * d_in < d) ++flake;
        const double odf = ratio(static_cast<double>(d_out), static_cast<double>(d));
        odf_max = std::max(odf_max, odf);
        odf_sum += odf;
        bool tri = false;
        for (std::size_t i = 0; i < inner.size() && !tri; ++i) {
            for (std::size_t j = i + 1; j < inner.size(); ++j) {
                if (graph.has_edge(inner[i], inner[j])) {
                    tri = true;
                    break;
                }
            }
        }
        in_triangle += tri;
    }
    s.m_s = inside_twice / 2;

    const double n = static_cast<double>(s.n_s);
    const double m = static_cast<double>(s.m_s);
    const double c = static_cast<double>(s.c_s);
    const double total_v = static_cast<double>(graph.node_count());
    const double total_m = static_cast<double>(graph.edge_count());
    const double d_s = static_cast<double>(comm.total_degree);

    auto set = [&](Measure k, double v) { s.values[static_cast<std::size_t>(k)] = v; };
    set(Measure::kInternalDensity, s.n_s < 2 ? 0.0 : m / (n * (n - 1.0) / 2.0));
    set(Measure::kEdgesInside, m);
    set(Measure::kAverageDegree, ratio(2.0 * m, n));
    set(Measure::kFractionOverMedianDegree, ratio(static_cast<double>(above_median), n));
    set(Measure::kTriangleParticipation, ratio(static_cast<double>(in_triangle), n));
    set(Measure::kExpansion, ratio(c, n));
    set(Measure::kCutRatio, ratio(c, n * (total_v - n)));
    const double con = ratio(c, 2.0 * m + c);
    set(Measure::kConductance, con);
    set(Measure::kNormalizedCut, con + ratio(c, 2.0 * (total_m - m) + c));
    set(Measure::kMaxOdf, odf_max);
    set(Measure::kAverageOdf, ratio(odf_sum, n));
    set(Measure::kFlakeOdf, ratio(static_cast<double>(flake), n));
    set(Measure::kModularity,
        total_m == 0.0 ? 0.0 : m / total_m - std::pow(d_s / (2.0 * total_m), 2.0));
    return s;
}

Labeling labeling_of(const Partition& p) {
    return Labeling(p.assignment().begin(), p.assignment().end());
}

// Contingency table over the nodes present in both labelings.
struct Contingency {
    std::map<std::pair<CommunityId, CommunityId>, double> cells;
    std::map<CommunityId, double> rows;
    std::map<CommunityId, double> cols;
    double n = 0.0;
};

Contingency contingency(const Labeling& p, const Labeling& q) {
    Contingency t;
    for (const auto& [x, a] : p) {
        auto it = q.find(x);
        if (it == q.end()) continue;
        t.cells[{a, it->second}] += 1.0;
        t.rows[a] += 1.0;
        t.cols[it->second] += 1.0;
        t.n += 1.0;
    }
    if (t.n == 0.0) throw DataError("partitions share no nodes");
    return t;
}

double entropy(const std::map<CommunityId, double>& counts, double n) {
    double h = 0.0;
    for (const auto& [_, c] : counts) h -= (c / n) * std::log(c / n);
    return h;
}

bool same_clustering(const Contingency& t) {
    return t.cells.size() == t.rows.size() && t.cells.size() == t.cols.size();
}

}  // namespace

CommunityScores community_scores(const SampleGraph& graph, const Partition& partition,
                                 CommunityId community) {
    return score_one(graph, partition, community, median_degree(graph));
}

std::vector<CommunityScores> all_community_scores(const SampleGraph& graph,
                                                  const Partition& partition) {
    const double median = median_degree(graph);
    std::vector<CommunityScores> out;
    out.reserve(partition.community_count());
    for (const auto& [id, _] : partition.communities()) {
        out.push_back(score_one(graph, partition, id, median));
    }
    return out;
}

double ks_d(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DataError("ks_d: empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() || j < y.size()) {
        double point;
        if (j == y.size() || (i < x.size() && x[i] <= y[j])) point = x[i];
        else point = y[j];
        while (i < x.size() && x[i] <= point) ++i;
        while (j < y.size() && y[j] <= point) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

double nmi(const Labeling& p, const Labeling& q, NmiNorm norm) {
    const Contingency t = contingency(p, q);
    if (same_clustering(t)) return 1.0;
    const double hp = entropy(t.rows, t.n);
    const double hq = entropy(t.cols, t.n);
    if (hp == 0.0 || hq == 0.0) return 0.0;
    double mi = 0.0;
    for (const auto& [key, c] : t.cells) {
        const double pr = t.rows.at(key.first) / t.n;
        const double pc = t.cols.at(key.second) / t.n;
        mi += (c / t.n) * std::log((c / t.n) / (pr * pc));
    }
    const double denom = norm == NmiNorm::kArithmeticMean ? 0.5 * (hp + hq) : std::max(hp, hq);
    return std::clamp(mi / denom, 0.0, 1.0);
}

double ari(const Labeling& p, const Labeling& q) {
    const Contingency t = contingency(p, q);
    auto pairs = [](double c) { return c * (c - 1.0) / 2.0; };
    double index = 0.0;
    for (const auto& [_, c] : t.cells) index += pairs(c);
    double rows = 0.0;
    for (const auto& [_, c] : t.rows) rows += pairs(c);
    double cols = 0.0;
    for (const auto& [_, c] : t.cols) cols += pairs(c);
    const double total = pairs(t.n);
    const double expected = total == 0.0 ? 0.0 : rows * cols / total;
    const double max_index = 0.5 * (rows + cols);
    if (max_index == expected) return same_clustering(t) ? 1.0 : 0.0;
    return (index - expected) / (max_index - expected);
}

double purity(const Labeling& p, const Labeling& q) {
    const Contingency t = contingency(p, q);
    std::map<CommunityId, double> best;
    for (const auto& [key, c] : t.cells) best[key.first] = std::max(best[key.first], c);
    double s = 0.0;
    for (const auto& [_, c] : best) s += c;
    return s / t.n;
}

MetricReport metric_report(const SampleGraph& sample, const Partition& sample_partition,
                           const SampleGraph& truth_graph, const Partition& truth_partition,
                           NmiNorm norm, std::string run_id) {
    MetricReport r;
    r.run_id = std::move(run_id);
    const auto s_scores = all_community_scores(sample, sample_partition);
    const auto t_scores = all_community_scores(truth_graph, truth_partition);
    r.sample_communities = s_scores.size();
    r.truth_communities = t_scores.size();
    if (s_scores.empty() || t_scores.empty()) throw DataError("metric_report: empty partition");
    for (std::size_t k = 0; k < kMeasureCount; ++k) {
        std::vector<double> a;
        std::vector<double> b;
        for (const auto& s : s_scores) a.push_back(s.values[k]);
        for (const auto& s : t_scores) b.push_back(s.values[k]);
        r.d_stats[k] = ks_d(a, b);
    }
    r.avg_d = std::accumulate(r.d_stats.begin(), r.d_stats.end(), 0.0) / kMeasureCount;
    double var = 0.0;
    for (double d : r.d_stats) var += (d - r.avg_d) * (d - r.avg_d);
    r.sd_d = std::sqrt(var / kMeasureCount);

    const Labeling sp = labeling_of(sample_partition);
    const Labeling tp = labeling_of(truth_partition);
    for (const auto& [x, _] : sp) r.common_nodes += tp.contains(x);
    r.nmi = nmi(sp, tp, norm);
    r.ari = ari(sp, tp);
    r.purity = purity(sp, tp);
    return r;
}

SampleGraph aggregate_graph(const EdgeStream& stream) {
    SampleGraph g;
    for (const auto& e : stream.events) {
        if (e.u == e.v) continue;
        if (!g.contains(e.u)) g.add_node(e.u);
        if (!g.contains(e.v)) g.add_node(e.v);
        g.add_edge(e.u, e.v);
    }
    return g;
}

GroundTruth ground_truth(const EdgeStream& stream, std::uint64_t seed) {
    if (stream.empty()) throw DataError("ground_truth: empty stream");
    SampleGraph g = aggregate_graph(stream);
    LouvainOptions opts;
    opts.seed = seed;
    Partition p = louvain(g, opts);
    return {std::move(g), std::move(p)};
}

GroundTruth ground_truth_from_labels(const EdgeStream& stream, const GroundTruthLabels& labels) {
    if (stream.empty()) throw DataError("ground_truth: empty stream");
    SampleGraph g = aggregate_graph(stream);
    std::unordered_map<NodeId, CommunityId> a;
    CommunityId next = 0;
    for (const auto& [_, c] : labels) next = std::max(next, c + 1);
    for (NodeId x : g.nodes()) {
        auto it = labels.find(x);
        a[x] = it != labels.end() ? it->second : next++;
    }
    Partition p = Partition::from_assignment(g, a);
    return {std::move(g), std::move(p)};
}

}  // namespace compas
