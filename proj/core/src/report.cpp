#include "compas/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace compas {

using nlohmann::json;

double intra_edge_fraction(const SampleGraph& graph, const Partition& partition) {
    if (graph.edge_count() == 0) return 0.0;
    std::size_t inside = 0;
    for (const Edge& e : graph.edges()) {
        inside += partition.community_of(e.u) == partition.community_of(e.v);
    }
    return static_cast<double>(inside) / static_cast<double>(graph.edge_count());
}

double edge_retention(const SampleGraph& sample, const SampleGraph& original) {
    std::size_t induced = 0;
    for (NodeId x : sample.nodes()) {
        if (!original.contains(x)) continue;
        for (NodeId w : original.neighbors(x)) {
            if (x < w && sample.contains(w)) ++induced;
        }
    }
    return induced == 0 ? 0.0
                        : static_cast<double>(sample.edge_count()) / static_cast<double>(induced);
}

std::vector<DegreeBucket> arrival_degree_profile(const EdgeStream& stream,
                                                 const SampleGraph& original,
                                                 const SampleGraph& sample, std::size_t buckets) {
    if (buckets == 0) throw ConfigError("bucket count must be positive");
    std::vector<NodeId> order;
    std::unordered_set<NodeId> seen;
    for (const auto& e : stream.events) {
        if (e.u == e.v) continue;
        for (NodeId x : {e.u, e.v}) {
            if (seen.insert(x).second) order.push_back(x);
        }
    }
    const std::size_t k = std::min(buckets, order.size());
    std::vector<DegreeBucket> out(k);
    for (std::size_t b = 0; b < k; ++b) {
        const std::size_t lo = b * order.size() / k;
        const std::size_t hi = (b + 1) * order.size() / k;
        DegreeBucket& row = out[b];
        row.index = b;
        row.nodes = hi - lo;
        double deg = 0.0;
        std::size_t kept = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            deg += static_cast<double>(original.degree(order[i]));
            kept += sample.contains(order[i]);
        }
        row.mean_degree = deg / static_cast<double>(row.nodes);
        row.sampled_fraction = static_cast<double>(kept) / static_cast<double>(row.nodes);
    }
    return out;
}

Diagnostics diagnostics(const EdgeStream& stream, const GroundTruth& truth,
                        const SampleGraph& sample, const Partition& sample_partition,
                        const std::vector<TracePoint>& trace, std::size_t buckets) {
    Diagnostics d;
    d.trace = trace;
    d.sample_intra_fraction = intra_edge_fraction(sample, sample_partition);
    d.original_intra_fraction = intra_edge_fraction(truth.graph, truth.partition);
    d.edge_retention = edge_retention(sample, truth.graph);
    d.profile = arrival_degree_profile(stream, truth.graph, sample, buckets);
    return d;
}

std::string to_json(const MetricReport& r) {
    json d = json::object();
    for (std::size_t k = 0; k < kMeasureCount; ++k) d[std::string(kMeasureNames[k])] = r.d_stats[k];
    json j{{"run_id", r.run_id},
           {"d_stats", d},
           {"avg_d", r.avg_d},
           {"sd_d", r.sd_d},
           {"nmi", r.nmi},
           {"ari", r.ari},
           {"purity", r.purity},
           {"common_nodes", r.common_nodes},
           {"sample_communities", r.sample_communities},
           {"truth_communities", r.truth_communities},
           {"notes", r.notes}};
    return j.dump(2);
}

MetricReport metric_report_from_json(const std::string& text) {
    MetricReport r;
    try {
        const json j = json::parse(text);
        r.run_id = j.value("run_id", "");
        for (std::size_t k = 0; k < kMeasureCount; ++k) {
            r.d_stats[k] = j.at("d_stats").at(std::string(kMeasureNames[k])).get<double>();
        }
        r.avg_d = j.at("avg_d").get<double>();
        r.sd_d = j.at("sd_d").get<double>();
        r.nmi = j.at("nmi").get<double>();
        r.ari = j.at("ari").get<double>();
        r.purity = j.at("purity").get<double>();
        r.common_nodes = j.value("common_nodes", std::size_t{0});
        r.sample_communities = j.value("sample_communities", std::size_t{0});
        r.truth_communities = j.value("truth_communities", std::size_t{0});
        r.notes = j.value("notes", std::vector<std::string>{});
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed metric report: ") + e.what());
    }
    return r;
}

std::string to_json(const Diagnostics& d) {
    json trace = json::array();
    for (const auto& p : d.trace) {
        trace.push_back({{"t", p.t},
                         {"nodes", p.nodes},
                         {"edges", p.edges},
                         {"modularity", p.modularity},
                         {"mean_clustering", p.mean_clustering},
                         {"mean_degree", p.mean_degree}});
    }
    json profile = json::array();
    for (const auto& b : d.profile) {
        profile.push_back({{"bucket", b.index},
                           {"nodes", b.nodes},
                           {"mean_degree", b.mean_degree},
                           {"sampled_fraction", b.sampled_fraction}});
    }
    json j{{"trace", trace},
           {"sample_intra_fraction", d.sample_intra_fraction},
           {"original_intra_fraction", d.original_intra_fraction},
           {"edge_retention", d.edge_retention},
           {"arrival_profile", profile}};
    return j.dump(2);
}

ReportSummary summarize_reports(std::span<const MetricReport> reports) {
    if (reports.empty()) throw DataError("no reports to summarize");
    ReportSummary out;
    out.runs = reports.size();
    const double k = static_cast<double>(reports.size());
    auto fields = [](const MetricReport& r) {
        std::vector<double> f(r.d_stats.begin(), r.d_stats.end());
        f.insert(f.end(), {r.avg_d, r.sd_d, r.nmi, r.ari, r.purity,
                           static_cast<double>(r.common_nodes)});
        return f;
    };
    std::vector<double> mean(fields(reports.front()).size(), 0.0);
    for (const auto& r : reports) {
        const auto f = fields(r);
        for (std::size_t i = 0; i < f.size(); ++i) mean[i] += f[i] / k;
    }
    std::vector<double> var(mean.size(), 0.0);
    for (const auto& r : reports) {
        const auto f = fields(r);
        for (std::size_t i = 0; i < f.size(); ++i) var[i] += (f[i] - mean[i]) * (f[i] - mean[i]) / k;
    }
    auto fill = [](MetricReport& r, const std::vector<double>& f) {
        std::copy_n(f.begin(), kMeasureCount, r.d_stats.begin());
        r.avg_d = f[kMeasureCount];
        r.sd_d = f[kMeasureCount + 1];
        r.nmi = f[kMeasureCount + 2];
        r.ari = f[kMeasureCount + 3];
        r.purity = f[kMeasureCount + 4];
        r.common_nodes = static_cast<std::size_t>(std::llround(f[kMeasureCount + 5]));
    };
    for (double& v : var) v = std::sqrt(v);
    fill(out.mean, mean);
    fill(out.sd, var);
    out.mean.run_id = "mean";
    out.sd.run_id = "sd";
    return out;
}

std::string to_json(const ReportSummary& summary) {
    json j{{"runs", summary.runs},
           {"mean", json::parse(to_json(summary.mean))},
           {"sd", json::parse(to_json(summary.sd))}};
    return j.dump(2);
}

std::string compare_csv(std::vector<std::pair<std::string, MetricReport>> rows) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second.avg_d < b.second.avg_d; });
    std::ostringstream out;
    out << "algorithm";
    for (auto name : kMeasureNames) out << ',' << name;
    out << ",Avg,SD,NMI,ARI,Purity\n";
    out << std::setprecision(6) << std::fixed;
    for (const auto& [label, r] : rows) {
        out << label;
        for (double d : r.d_stats) out << ',' << d;
        out << ',' << r.avg_d << ',' << r.sd_d << ',' << r.nmi << ',' << r.ari << ',' << r.purity
            << '\n';
    }
    return out.str();
}

std::string scores_csv(const std::vector<CommunityScores>& scores) {
    std::ostringstream out;
    out << "community,n_s,m_s,c_s";
    for (auto name : kMeasureNames) out << ',' << name;
    out << '\n' << std::setprecision(10);
    for (const auto& s : scores) {
        out << s.community << ',' << s.n_s << ',' << s.m_s << ',' << s.c_s;
        for (double v : s.values) out << ',' << v;
        out << '\n';
    }
    return out.str();
}

std::string assignment_text(const Partition& partition) {
    const auto canon = partition.canonical_assignment();
    std::vector<std::pair<NodeId, CommunityId>> rows(canon.begin(), canon.end());
    std::sort(rows.begin(), rows.end());
    std::ostringstream out;
    for (const auto& [x, c] : rows) out << x << ' ' << c << '\n';
    return out.str();
}

std::string config_header(const std::map<std::string, std::string>& config) {
    std::ostringstream out;
    for (const auto& [k, v] : config) out << "# " << k << '=' << v << '\n';
    return out.str();
}

}  // namespace compas
