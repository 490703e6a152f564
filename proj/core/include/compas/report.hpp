#ifndef COMPAS_REPORT_HPP
#define COMPAS_REPORT_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "compas/compas_sampler.hpp"
#include "compas/evaluation.hpp"

namespace compas {

/// Fraction of sampled edges whose endpoints share a community.
double intra_edge_fraction(const SampleGraph& graph, const Partition& partition);

/// |E_s| divided by the number of original edges between sampled nodes.
double edge_retention(const SampleGraph& sample, const SampleGraph& original);

struct DegreeBucket {
    std::size_t index = 0;
    std::size_t nodes = 0;
    double mean_degree = 0.0;       // degree in the original graph
    double sampled_fraction = 0.0;  // share of the bucket present in the sample
};

/// Nodes ordered by first arrival and cut into `buckets` contiguous groups of
/// near-equal size.
std::vector<DegreeBucket> arrival_degree_profile(const EdgeStream& stream,
                                                 const SampleGraph& original,
                                                 const SampleGraph& sample,
                                                 std::size_t buckets = 500);

struct Diagnostics {
    std::vector<TracePoint> trace;
    double sample_intra_fraction = 0.0;
    double original_intra_fraction = 0.0;
    double edge_retention = 0.0;
    std::vector<DegreeBucket> profile;
};

Diagnostics diagnostics(const EdgeStream& stream, const GroundTruth& truth,
                        const SampleGraph& sample, const Partition& sample_partition,
                        const std::vector<TracePoint>& trace, std::size_t buckets = 500);

std::string to_json(const MetricReport& report);
MetricReport metric_report_from_json(const std::string& text);
std::string to_json(const Diagnostics& d);
struct ReportSummary {
    std::size_t runs = 0;
    MetricReport mean;
    MetricReport sd;  // population standard deviation of each field across runs
};

ReportSummary summarize_reports(std::span<const MetricReport> reports);
std::string to_json(const ReportSummary& summary);

/// One row per labelled report, sorted by Avg ascending.
std::string compare_csv(std::vector<std::pair<std::string, MetricReport>> rows);

/// Community scores of a partition, one row per community.
std::string scores_csv(const std::vector<CommunityScores>& scores);

/// "node community" lines.
std::string assignment_text(const Partition& partition);

/// Header comment lines ("# key=value") recording a run configuration.
std::string config_header(const std::map<std::string, std::string>& config);

}  // namespace compas

#endif  // COMPAS_REPORT_HPP
