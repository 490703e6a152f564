#include "compas/compas_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "compas/community.hpp"

namespace compas {

std::size_t SamplerConfig::default_buffer_capacity(std::size_t n) {
    const auto nd = static_cast<std::size_t>(std::ceil(0.0075 * static_cast<double>(n) - 1e-9));
    return std::max<std::size_t>(nd, 1);
}

std::size_t SamplerConfig::default_sample_size(std::size_t total_nodes) {
    const auto n = static_cast<std::size_t>(std::ceil(0.4 * static_cast<double>(total_nodes) - 1e-9));
    return std::max<std::size_t>(n, 2);
}

SamplerConfig SamplerConfig::with_defaults(std::size_t n, std::uint64_t seed) {
    SamplerConfig c;
    c.n = n;
    c.buffer_capacity = default_buffer_capacity(n);
    c.seed = seed;
    return c;
}

void SamplerConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (n < 2) throw ConfigError("sample size n must be at least 2");
    if (buffer_capacity < 1) throw ConfigError("buffer capacity must be at least 1");
}

namespace {

std::size_t threshold_for(const SamplerConfig& c) {
    c.validate();
    return static_cast<std::size_t>(std::ceil(c.alpha * static_cast<double>(c.n) - 1e-9));
}

}  // namespace

CompasSampler::CompasSampler(const SamplerConfig& config)
    : config_(config),
      warmup_threshold_(threshold_for(config)),
      rng_(config.seed),
      graph_(config.n),
      buffer_(config.buffer_capacity) {}

void CompasSampler::process(const EdgeEvent& e) {
    if (e.u == e.v) return;
    ++stats_.events;
    if (phase_ == Phase::kWarmup) {
        const std::size_t missing = !graph_.contains(e.u) + !graph_.contains(e.v);
        if (graph_.node_count() < warmup_threshold_ &&
            graph_.node_count() + missing <= graph_.capacity()) {
            ++stats_.warmup_events;
            if (!graph_.contains(e.u)) graph_.add_node(e.u);
            if (!graph_.contains(e.v)) graph_.add_node(e.v);
            if (graph_.add_edge(e.u, e.v) == SampleGraph::AddEdgeResult::kDuplicate) {
                ++stats_.duplicate_edges;
            }
            return;
        }
        stats_.transition_event = stats_.events - 1;
        start_steady_phase();
        if (config_.strict_line12) return;
    }
    dispatch(e);
    ++steady_events_;
    if (config_.trace_every > 0 && steady_events_ % config_.trace_every == 0) record_trace();
}

void CompasSampler::start_steady_phase() {
    if (phase_ == Phase::kSteady) return;
    if (graph_.edge_count() > 0) {
        LouvainOptions opts;
        opts.seed = rng_();
        partition_ = louvain(graph_, opts);
    } else {
        partition_ = Partition::singletons(graph_);
    }
    phase_ = Phase::kSteady;
}

void CompasSampler::dispatch(const EdgeEvent& e) {
    enum Where { kSample, kBuffer, kNew };
    auto where = [&](NodeId x) {
        if (graph_.contains(x)) return kSample;
        if (buffer_.contains(x)) return kBuffer;
        return kNew;
    };
    NodeId u = e.u;
    NodeId v = e.v;
    Where wu = where(u);
    Where wv = where(v);
    if (wu > wv) {  // order so that u is the "more established" endpoint
        std::swap(u, v);
        std::swap(wu, wv);
    }

    auto count = [&](EventCase c) { ++stats_.cases[static_cast<std::size_t>(c)]; };
    if (wu == kSample && wv == kSample) {
        count(EventCase::kBothInSample);
        add_sample_edge(u, v);
    } else if (wu == kBuffer && wv == kBuffer) {
        count(EventCase::kBothInBuffer);
        buffer_.touch(u);
        buffer_.touch(v);
    } else if (wu == kSample && wv == kBuffer) {
        count(EventCase::kSampleAndBuffer);
        buffer_.touch(v);
    } else if (wu == kSample && wv == kNew) {
        count(EventCase::kSampleAndNew);
        node_is_new(v, u);
    } else if (wu == kBuffer && wv == kNew) {
        count(EventCase::kBufferAndNew);
        buffer_.touch(u);
        node_is_new(v, u);
    } else {
        count(EventCase::kBothNew);
        // Original endpoint order: u buffered first with parent v.
        node_is_new(e.u, e.v);
        node_is_new(e.v, e.u);
    }
}

void CompasSampler::add_sample_edge(NodeId u, NodeId v) {
    if (graph_.add_edge(u, v) == SampleGraph::AddEdgeResult::kDuplicate) {
        ++stats_.duplicate_edges;
        return;
    }
    partition_.on_edge_added(u, v);
    const PartitionChange change = both_in_sample(graph_, partition_, u, v);
    if (change.moves.size() > 1) stats_.cascade_moves += change.moves.size() - 1;
}

void CompasSampler::node_is_new(NodeId x, NodeId parent) {
    if (buffer_.full()) remove_node_from_buffer();
    buffer_.insert(x, parent);
}

void CompasSampler::remove_node_from_buffer() {
    if (buffer_.size() == 0) return;
    if (auto x = buffer_pick_promotable(buffer_, graph_, rng_, config_.promotion_bias)) {
        const NodeId parent = buffer_.at(*x).parent;
        buffer_.erase(*x);
        ++stats_.promotions;
        insert_node_in_sample(*x, parent);
        return;
    }
    const NodeId victim = *buffer_.min_count_node();
    buffer_.erase(victim);
    ++stats_.drops;
}

bool CompasSampler::insert_node_in_sample(NodeId x, NodeId parent) {
    if (!graph_.contains(parent)) {
        throw InvariantError("insert_node_in_sample: parent " + std::to_string(parent) +
                             " is not sampled");
    }
    if (graph_.full()) check_resize_sample(1);
    if (!graph_.contains(parent)) {
        ++stats_.aborted_insertions;
        return false;
    }
    graph_.add_node(x);
    partition_.add_isolated(x, partition_.community_of(parent));
    graph_.add_edge(x, parent);
    partition_.on_edge_added(x, parent);
    return true;
}

std::optional<NodeId> CompasSampler::select_eviction_victim() const {
    const auto& index = graph_.degree_index();
    if (index.empty()) return std::nullopt;
    const std::size_t min_degree = index.begin()->first;
    if (min_degree < 2) return index.begin()->second;  // clustering is 0 for all of them
    // Same degree, so comparing triangle counts orders the clustering coefficients.
    std::optional<NodeId> best;
    std::size_t best_triangles = 0;
    for (auto it = index.begin(); it != index.end() && it->first == min_degree; ++it) {
        const std::size_t t = graph_.triangles_through(it->second);
        if (!best || t < best_triangles) {
            best = it->second;
            best_triangles = t;
            if (t == 0) break;
        }
    }
    return best;
}

void CompasSampler::check_resize_sample(std::size_t m) {
    if (!graph_.full()) return;
    for (std::size_t i = 0; i < m; ++i) {
        const auto victim = select_eviction_victim();
        if (!victim) return;
        evict(*victim);
    }
}

void CompasSampler::evict(NodeId victim) {
    const CommunityId old = partition_.community_of(victim);
    const std::vector<Edge> removed = graph_.remove_node(victim);
    partition_.on_node_removed(victim, removed);
    ++stats_.evictions;
    if (removed.empty() || graph_.edge_count() == 0) return;
    std::vector<NodeId> neighbors;
    neighbors.reserve(removed.size());
    for (const Edge& e : removed) neighbors.push_back(e.u == victim ? e.v : e.u);
    auto fragments = split_after_removal(graph_, partition_, neighbors, old);
    const PartitionChange change = merge_fragments(graph_, partition_, std::move(fragments), old);
    stats_.fragment_moves += change.moves.size();
}

SampleResult CompasSampler::finish() {
    if (phase_ == Phase::kWarmup) start_steady_phase();
    SampleResult out{graph_, partition_, {}};
    out.counters["events"] = static_cast<double>(stats_.events);
    out.counters["warmup_events"] = static_cast<double>(stats_.warmup_events);
    out.counters["transition_event"] =
        stats_.transition_event ? static_cast<double>(*stats_.transition_event) : -1.0;
    out.counters["duplicate_edges"] = static_cast<double>(stats_.duplicate_edges);
    out.counters["promotions"] = static_cast<double>(stats_.promotions);
    out.counters["evictions"] = static_cast<double>(stats_.evictions);
    out.counters["drops"] = static_cast<double>(stats_.drops);
    out.counters["aborted_insertions"] = static_cast<double>(stats_.aborted_insertions);
    out.counters["cascade_moves"] = static_cast<double>(stats_.cascade_moves);
    out.counters["fragment_moves"] = static_cast<double>(stats_.fragment_moves);
    static constexpr std::array<const char*, 6> kCaseNames{
        "case_both_in_sample", "case_both_in_buffer", "case_sample_and_buffer",
        "case_sample_and_new", "case_buffer_and_new", "case_both_new"};
    for (std::size_t i = 0; i < kCaseNames.size(); ++i) {
        out.counters[kCaseNames[i]] = static_cast<double>(stats_.cases[i]);
    }
    out.counters["buffered_discarded"] = static_cast<double>(buffer_.size());
    return out;
}

std::string CompasSampler::audit(bool full) const {
    std::ostringstream err;
    if (graph_.node_count() > config_.n) {
        err << "|V_s|=" << graph_.node_count() << " exceeds n=" << config_.n;
    } else if (buffer_.size() > buffer_.capacity()) {
        err << "buffer holds " << buffer_.size() << " > n_d=" << buffer_.capacity();
    } else if (graph_.degree_sum() != 2 * graph_.edge_count()) {
        err << "degree sum " << graph_.degree_sum() << " != 2|E_s|=" << 2 * graph_.edge_count();
    } else {
        for (const auto& [x, _] : buffer_.entries()) {
            if (graph_.contains(x)) {
                err << "node " << x << " is both sampled and buffered";
                break;
            }
        }
    }
    if (err.tellp() > 0) return err.str();
    if (full) {
        for (const Edge& e : graph_.edges()) {
            if (!graph_.contains(e.u) || !graph_.contains(e.v)) {
                err << "dangling edge (" << e.u << "," << e.v << ")";
                return err.str();
            }
        }
    }
    if (phase_ == Phase::kSteady) {
        if (partition_.node_count() != graph_.node_count()) {
            err << "partition covers " << partition_.node_count() << " of " << graph_.node_count()
                << " nodes";
            return err.str();
        }
        if (full) return partition_.reconcile(graph_);
    }
    return {};
}

void CompasSampler::record_trace() {
    TracePoint p;
    p.t = stats_.events;
    p.nodes = graph_.node_count();
    p.edges = graph_.edge_count();
    p.modularity = graph_.edge_count() > 0 ? partition_.modularity() : 0.0;
    p.mean_clustering = mean_clustering(graph_);
    p.mean_degree = p.nodes > 0 ? 2.0 * static_cast<double>(p.edges) / static_cast<double>(p.nodes) : 0.0;
    trace_.push_back(p);
}

double mean_clustering(const SampleGraph& graph) {
    if (graph.empty()) return 0.0;
    double s = 0.0;
    for (NodeId x : graph.nodes()) s += graph.clustering_coefficient(x);
    return s / static_cast<double>(graph.node_count());
}

}  // namespace compas
