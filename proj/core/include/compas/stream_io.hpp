#ifndef COMPAS_STREAM_IO_HPP
#define COMPAS_STREAM_IO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "compas/types.hpp"

namespace compas {

/// A single arrival. `t` is the dense 0-based position in the stream.
struct EdgeEvent {
    NodeId u = 0;
    NodeId v = 0;
    std::uint64_t t = 0;

    friend bool operator==(const EdgeEvent&, const EdgeEvent&) = default;
};

/// Ordered, replayable sequence of arrivals. Duplicate (u, v) pairs are kept.
struct EdgeStream {
    std::vector<EdgeEvent> events;
    std::optional<std::size_t> node_count_hint;
    std::size_t dropped_self_loops = 0;

    std::size_t size() const { return events.size(); }
    bool empty() const { return events.empty(); }

    /// Number of distinct node identifiers (uses the hint when present).
    std::size_t node_count() const;

    /// Distinct undirected edges in first-arrival order.
    std::vector<Edge> distinct_edges() const;
};

using GroundTruthLabels = std::unordered_map<NodeId, CommunityId>;

enum class EdgeFileFormat { kAuto, kPlain, kTimestamped };

class ParseError : public DataError {
  public:
    ParseError(const std::string& path, std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Reads "u v" or "u v t" lines; '#' starts a comment line. Timestamped input
/// is stably sorted by t, so equal timestamps keep line order.
EdgeStream load_edge_stream(const std::filesystem::path& path,
                            EdgeFileFormat format = EdgeFileFormat::kAuto);

/// Same rules as load_edge_stream, applied to in-memory text.
EdgeStream parse_edge_stream(const std::string& text, EdgeFileFormat format,
                             const std::string& source_name = "<memory>");

/// "node community" per line.
GroundTruthLabels load_labels(const std::filesystem::path& path);
GroundTruthLabels parse_labels(const std::string& text,
                               const std::string& source_name = "<memory>");

/// Uniform permutation (Fisher-Yates) fixed by `seed`; timestamps reassigned.
EdgeStream randomize_order(const EdgeStream& stream, std::uint64_t seed);

/// floor(y * |S|) swaps of uniformly chosen position pairs.
EdgeStream perturb_order(const EdgeStream& stream, double y, std::uint64_t seed);

struct PlantedPartitionParams {
    std::size_t n_nodes = 0;
    std::size_t k_comms = 1;
    double p_in = 0.0;
    double p_out = 0.0;
    std::uint64_t seed = 0;
};

struct PlantedPartition {
    EdgeStream stream;
    GroundTruthLabels labels;
};

/// Nodes 0..n-1 split into k near-equal blocks under a seeded relabelling;
/// edges emitted in random order. Labels cover nodes with at least one edge.
PlantedPartition generate_planted_partition(const PlantedPartitionParams& params);

/// Block index of the node at position `node` of the near-equal split; the
/// generator maps positions to shuffled identifiers.
std::size_t planted_block_of(std::size_t node, std::size_t n_nodes, std::size_t k_comms);

void write_edge_file(const std::filesystem::path& path, std::span<const Edge> edges,
                     const std::string& header_comment = {});
void write_stream_file(const std::filesystem::path& path, const EdgeStream& stream,
                       const std::string& header_comment = {});
void write_labels(const std::filesystem::path& path, const GroundTruthLabels& labels,
                  const std::string& header_comment = {});

}  // namespace compas

#endif  // COMPAS_STREAM_IO_HPP
