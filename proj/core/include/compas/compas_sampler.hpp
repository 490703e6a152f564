#ifndef COMPAS_COMPAS_SAMPLER_HPP
#define COMPAS_COMPAS_SAMPLER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "compas/buffer.hpp"
#include "compas/partition.hpp"
#include "compas/sample_graph.hpp"
#include "compas/sampler.hpp"
#include "compas/stream_io.hpp"

namespace compas {

struct SamplerConfig {
    std::size_t n = 0;                // sample size in nodes
    double alpha = 0.4;               // warm-up fraction of n
    std::size_t buffer_capacity = 1;  // n_d
    std::uint64_t seed = 0;
    /// Drop the event that triggers initial detection instead of dispatching it.
    bool strict_line12 = false;
    PromotionBias promotion_bias = PromotionBias::kProportional;
    /// Record a TracePoint every this many steady-phase events (0 = off).
    std::size_t trace_every = 0;

    /// ceil(0.0075 * n), at least 1.
    static std::size_t default_buffer_capacity(std::size_t n);
    /// ceil(0.4 * |V|), at least 2.
    static std::size_t default_sample_size(std::size_t total_nodes);
    /// Config with the default alpha and buffer for a sample of `n` nodes.
    static SamplerConfig with_defaults(std::size_t n, std::uint64_t seed);

    void validate() const;
};

/// Snapshot of the sample while the stream is running.
struct TracePoint {
    std::uint64_t t = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double modularity = 0.0;
    double mean_clustering = 0.0;
    double mean_degree = 0.0;
};

enum class EventCase : std::size_t {
    kBothInSample = 0,
    kBothInBuffer,
    kSampleAndBuffer,
    kSampleAndNew,
    kBufferAndNew,
    kBothNew,
};

struct SamplerStats {
    std::uint64_t events = 0;
    std::uint64_t warmup_events = 0;
    std::optional<std::uint64_t> transition_event;
    std::array<std::uint64_t, 6> cases{};
    std::uint64_t duplicate_edges = 0;
    std::uint64_t promotions = 0;
    std::uint64_t evictions = 0;
    std::uint64_t drops = 0;                // buffered nodes discarded for lack of a sampled parent
    std::uint64_t aborted_insertions = 0;   // parent evicted while making room
    std::uint64_t cascade_moves = 0;
    std::uint64_t fragment_moves = 0;
};

/// Community-preserving streaming sampler. Owns the sample graph, the buffer and
/// the partition; one instance per run.
///
/// While |V_s| < ceil(alpha * n) every edge goes straight into the sample. The
/// next event triggers Louvain on the warm-up graph and, unless strict_line12 is
/// set, is then dispatched like any other steady-phase event by where its two
/// endpoints live (sample, buffer, or neither).
class CompasSampler : public StreamSampler {
  public:
    enum class Phase { kWarmup, kSteady };

    explicit CompasSampler(const SamplerConfig& config);

    std::string_view name() const override { return "compas"; }
    void process(const EdgeEvent& e) override;
    using StreamSampler::process;
    SampleResult finish() override;

    std::size_t warmup_threshold() const { return warmup_threshold_; }
    const SamplerConfig& config() const { return config_; }
    Phase phase() const { return phase_; }
    const SampleGraph& graph() const { return graph_; }
    const Buffer& buffer() const { return buffer_; }
    const Partition& partition() const { return partition_; }
    const SamplerStats& stats() const { return stats_; }
    const std::vector<TracePoint>& trace() const { return trace_; }

    // Steps of the event dispatch, public so tests can drive them directly.

    /// Buffers `x` with count 1, promoting or discarding a buffered node first
    /// when the buffer is full.
    void node_is_new(NodeId x, NodeId parent);
    /// Promotes a count-weighted buffered node whose parent is sampled; when no
    /// such node exists the lowest-count node is discarded instead.
    void remove_node_from_buffer();
    /// Adds `x` and edge (x, parent) to the sample in parent's community,
    /// evicting first when the sample is full. Returns false when the eviction
    /// removed `parent`, in which case nothing is inserted.
    bool insert_node_in_sample(NodeId x, NodeId parent);
    /// When the sample is full, evicts up to `m` lowest-degree nodes (ties by
    /// lowest clustering coefficient, then id) and repairs their communities.
    void check_resize_sample(std::size_t m);
    std::optional<NodeId> select_eviction_victim() const;

    /// Empty when every state invariant holds; `full` adds an aggregate recount.
    std::string audit(bool full) const;

    /// Runs Louvain on the current sample and enters the steady phase.
    void start_steady_phase();

  private:
    void dispatch(const EdgeEvent& e);
    void add_sample_edge(NodeId u, NodeId v);
    void evict(NodeId victim);
    void record_trace();

    SamplerConfig config_;
    std::size_t warmup_threshold_;
    Rng rng_;
    Phase phase_ = Phase::kWarmup;
    SampleGraph graph_;
    Buffer buffer_;
    Partition partition_;
    SamplerStats stats_;
    std::vector<TracePoint> trace_;
    std::uint64_t steady_events_ = 0;
};

/// Mean clustering coefficient over all nodes of `graph` (0 for an empty graph).
double mean_clustering(const SampleGraph& graph);

}  // namespace compas

#endif  // COMPAS_COMPAS_SAMPLER_HPP
