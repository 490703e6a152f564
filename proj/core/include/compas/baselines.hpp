#ifndef COMPAS_BASELINES_HPP
#define COMPAS_BASELINES_HPP

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "compas/sample_graph.hpp"
#include "compas/sampler.hpp"

namespace compas {

struct BaselineConfig {
    /// Node budget for SN, SBFS and PIES; edge budget for SE.
    std::size_t budget = 0;
    /// SBFS sliding-window length in edges; 0 means 10 * budget.
    std::size_t window = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Streaming node sampling: uniform reservoir over first appearances of nodes;
/// an edge is kept when both endpoints sit in the reservoir as it arrives. A
/// replaced node takes its stored edges with it.
class StreamingNodeSampler : public StreamSampler {
  public:
    explicit StreamingNodeSampler(const BaselineConfig& config);
    std::string_view name() const override { return "sn"; }
    void process(const EdgeEvent& e) override;
    using StreamSampler::process;
    SampleResult finish() override;

    const SampleGraph& graph() const { return graph_; }

  private:
    void arrive(NodeId x);

    BaselineConfig config_;
    Rng rng_;
    SampleGraph graph_;
    std::vector<NodeId> slots_;
    std::unordered_set<NodeId> seen_;
    std::uint64_t replacements_ = 0;
};

/// Streaming edge sampling: uniform reservoir over edge arrivals (duplicates are
/// separate candidates). The sample is the set of retained edges.
class StreamingEdgeSampler : public StreamSampler {
  public:
    explicit StreamingEdgeSampler(const BaselineConfig& config);
    std::string_view name() const override { return "se"; }
    void process(const EdgeEvent& e) override;
    using StreamSampler::process;
    SampleResult finish() override;

    const std::vector<Edge>& reservoir() const { return slots_; }
    std::size_t budget() const { return config_.budget; }

  private:
    BaselineConfig config_;
    Rng rng_;
    std::vector<Edge> slots_;
    std::uint64_t arrivals_ = 0;
};

/// Streaming BFS: keeps the last W edges. Once the window is full (or the
/// stream ends) and the node budget is unmet, a breadth-first search over the
/// window graph admits nodes, restarting from a random unadmitted window node
/// whenever the frontier runs dry. Edges between admitted nodes are kept.
class StreamingBfsSampler : public StreamSampler {
  public:
    explicit StreamingBfsSampler(const BaselineConfig& config);
    std::string_view name() const override { return "sbfs"; }
    void process(const EdgeEvent& e) override;
    using StreamSampler::process;
    SampleResult finish() override;

    const SampleGraph& graph() const { return graph_; }
    std::size_t window_length() const { return window_len_; }
    /// Nodes in the order they were admitted.
    const std::vector<NodeId>& admission_order() const { return admitted_; }

  private:
    void slide(const Edge& e);
    void expand();
    void admit(NodeId x);

    BaselineConfig config_;
    std::size_t window_len_;
    Rng rng_;
    SampleGraph graph_;
    std::deque<Edge> window_;
    std::unordered_map<NodeId, std::unordered_map<NodeId, std::size_t>> window_adj_;
    std::deque<NodeId> frontier_;
    std::vector<NodeId> admitted_;
    std::uint64_t restarts_ = 0;
};

/// PIES: edge-based node sampling until the node budget is met, then partial
/// induction (keep an edge only when both endpoints are sampled). No evictions.
class PiesSampler : public StreamSampler {
  public:
    explicit PiesSampler(const BaselineConfig& config);
    std::string_view name() const override { return "pies"; }
    void process(const EdgeEvent& e) override;
    using StreamSampler::process;
    SampleResult finish() override;

    const SampleGraph& graph() const { return graph_; }

  private:
    BaselineConfig config_;
    SampleGraph graph_;
};

std::unique_ptr<StreamSampler> make_baseline(Algorithm algorithm, const BaselineConfig& config);

/// Smallest edge budget whose expected node coverage under uniform edge
/// sampling, sum_v 1 - (1 - B/|E|)^deg(v), reaches `target_nodes`.
std::size_t edge_budget_for_nodes(const std::vector<std::size_t>& degrees, std::size_t edge_count,
                                  std::size_t target_nodes);

}  // namespace compas

#endif  // COMPAS_BASELINES_HPP
