#ifndef COMPAS_EVALUATION_HPP
#define COMPAS_EVALUATION_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "compas/partition.hpp"
#include "compas/sample_graph.hpp"
#include "compas/stream_io.hpp"

namespace compas {

// Community quality measures, in report column order.
enum class Measure : std::size_t {
    kInternalDensity = 0,     // ID
    kEdgesInside,             // EI
    kAverageDegree,           // AD
    kFractionOverMedianDegree,  // FOMD
    kTriangleParticipation,   // TPR
    kExpansion,               // EX
    kCutRatio,                // CR
    kConductance,             // CON
    kNormalizedCut,           // NC
    kMaxOdf,                  // MODF
    kAverageOdf,              // AODF
    kFlakeOdf,                // FODF
    kModularity,              // MOD
};

inline constexpr std::size_t kMeasureCount = 13;
inline constexpr std::array<std::string_view, kMeasureCount> kMeasureNames{
    "ID", "EI", "AD", "FOMD", "TPR", "EX", "CR", "CON", "NC", "MODF", "AODF", "FODF", "MOD"};

struct CommunityScores {
    CommunityId community = 0;
    std::size_t n_s = 0;  // members
    std::size_t m_s = 0;  // internal edges
    std::size_t c_s = 0;  // boundary edges
    std::array<double, kMeasureCount> values{};

    double operator[](Measure m) const { return values[static_cast<std::size_t>(m)]; }
};

/// Scores of one community. Ratios with a zero denominator are 0; a singleton
/// has internal density 0. FOMD compares against the median degree of `graph`.
CommunityScores community_scores(const SampleGraph& graph, const Partition& partition,
                                 CommunityId community);

/// Scores of every community, ordered by community id.
std::vector<CommunityScores> all_community_scores(const SampleGraph& graph,
                                                  const Partition& partition);

/// Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b| over the merged
/// sample points, using right-continuous empirical CDFs.
double ks_d(std::span<const double> a, std::span<const double> b);

using Labeling = std::unordered_map<NodeId, CommunityId>;

enum class NmiNorm { kArithmeticMean, kMax };

/// Agreement measures are computed over the nodes both labelings cover; an
/// empty intersection throws DataError.
double nmi(const Labeling& p, const Labeling& q, NmiNorm norm = NmiNorm::kArithmeticMean);
double ari(const Labeling& p, const Labeling& q);
/// (1/N) * sum over clusters of p of the largest overlap with a cluster of q.
double purity(const Labeling& p, const Labeling& q);

struct MetricReport {
    std::string run_id;
    std::array<double, kMeasureCount> d_stats{};
    double avg_d = 0.0;
    double sd_d = 0.0;  // population standard deviation over the 13 D values
    double nmi = 0.0;
    double ari = 0.0;
    double purity = 0.0;
    std::size_t common_nodes = 0;
    std::size_t sample_communities = 0;
    std::size_t truth_communities = 0;
    std::vector<std::string> notes;
};

MetricReport metric_report(const SampleGraph& sample, const Partition& sample_partition,
                           const SampleGraph& truth_graph, const Partition& truth_partition,
                           NmiNorm norm = NmiNorm::kArithmeticMean, std::string run_id = {});

/// Deduplicated union of all arrivals.
SampleGraph aggregate_graph(const EdgeStream& stream);

struct GroundTruth {
    SampleGraph graph;
    Partition partition;
};

/// Louvain on the aggregate graph.
GroundTruth ground_truth(const EdgeStream& stream, std::uint64_t seed);
/// Aggregate graph partitioned by external labels. Nodes without a label get a
/// singleton community each.
GroundTruth ground_truth_from_labels(const EdgeStream& stream, const GroundTruthLabels& labels);

}  // namespace compas

#endif  // COMPAS_EVALUATION_HPP
