#include "compas/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace compas {

void BaselineConfig::validate() const {
    if (budget < 1) throw ConfigError("baseline budget must be at least 1");
}

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::kCompas: return "compas";
        case Algorithm::kStreamingNode: return "sn";
        case Algorithm::kStreamingEdge: return "se";
        case Algorithm::kStreamingBfs: return "sbfs";
        case Algorithm::kPies: return "pies";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "compas") return Algorithm::kCompas;
    if (name == "sn") return Algorithm::kStreamingNode;
    if (name == "se") return Algorithm::kStreamingEdge;
    if (name == "sbfs") return Algorithm::kStreamingBfs;
    if (name == "pies") return Algorithm::kPies;
    throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

StreamingNodeSampler::StreamingNodeSampler(const BaselineConfig& config)
    : config_(config), rng_(config.seed), graph_(config.budget) {
    config_.validate();
    slots_.reserve(config.budget);
}

void StreamingNodeSampler::arrive(NodeId x) {
    if (!seen_.insert(x).second) return;
    if (slots_.size() < config_.budget) {
        slots_.push_back(x);
        graph_.add_node(x);
        return;
    }
    std::uniform_int_distribution<std::uint64_t> pick(0, seen_.size() - 1);
    const std::uint64_t j = pick(rng_);
    if (j >= slots_.size()) return;
    graph_.remove_node(slots_[j]);
    slots_[j] = x;
    graph_.add_node(x);
    ++replacements_;
}

void StreamingNodeSampler::process(const EdgeEvent& e) {
    if (e.u == e.v) return;
    arrive(e.u);
    arrive(e.v);
    if (graph_.contains(e.u) && graph_.contains(e.v)) graph_.add_edge(e.u, e.v);
}

SampleResult StreamingNodeSampler::finish() {
    SampleResult out{graph_, std::nullopt, {}};
    out.counters["distinct_nodes_seen"] = static_cast<double>(seen_.size());
    out.counters["replacements"] = static_cast<double>(replacements_);
    return out;
}

// ---------------------------------------------------------------------------

StreamingEdgeSampler::StreamingEdgeSampler(const BaselineConfig& config)
    : config_(config), rng_(config.seed) {
    config_.validate();
    slots_.reserve(config.budget);
}

void StreamingEdgeSampler::process(const EdgeEvent& e) {
    if (e.u == e.v) return;
    ++arrivals_;
    if (slots_.size() < config_.budget) {
        slots_.emplace_back(e.u, e.v);
        return;
    }
    std::uniform_int_distribution<std::uint64_t> pick(0, arrivals_ - 1);
    const std::uint64_t j = pick(rng_);
    if (j < slots_.size()) slots_[j] = Edge(e.u, e.v);
}

SampleResult StreamingEdgeSampler::finish() {
    SampleGraph g;
    for (const Edge& e : slots_) {
        if (!g.contains(e.u)) g.add_node(e.u);
        if (!g.contains(e.v)) g.add_node(e.v);
        g.add_edge(e.u, e.v);
    }
    SampleResult out{std::move(g), std::nullopt, {}};
    out.counters["arrivals"] = static_cast<double>(arrivals_);
    out.counters["reservoir_edges"] = static_cast<double>(slots_.size());
    return out;
}

// ---------------------------------------------------------------------------

StreamingBfsSampler::StreamingBfsSampler(const BaselineConfig& config)
    : config_(config),
      window_len_(config.window > 0 ? config.window : 10 * config.budget),
      rng_(config.seed),
      graph_(config.budget) {
    config_.validate();
}

void StreamingBfsSampler::slide(const Edge& e) {
    window_.push_back(e);
    ++window_adj_[e.u][e.v];
    ++window_adj_[e.v][e.u];
    if (window_.size() <= window_len_) return;
    const Edge old = window_.front();
    window_.pop_front();
    auto drop = [&](NodeId a, NodeId b) {
        auto& row = window_adj_[a];
        if (--row[b] == 0) row.erase(b);
        if (row.empty()) window_adj_.erase(a);
    };
    drop(old.u, old.v);
    drop(old.v, old.u);
}

void StreamingBfsSampler::admit(NodeId x) {
    graph_.add_node(x);
    admitted_.push_back(x);
    frontier_.push_back(x);
    auto it = window_adj_.find(x);
    if (it == window_adj_.end()) return;
    for (const auto& [w, _] : it->second) {
        if (graph_.contains(w)) graph_.add_edge(x, w);
    }
}

void StreamingBfsSampler::expand() {
    while (!graph_.full()) {
        if (frontier_.empty()) {
            std::vector<NodeId> fresh;
            for (const auto& [x, _] : window_adj_) {
                if (!graph_.contains(x)) fresh.push_back(x);
            }
            if (fresh.empty()) return;
            std::sort(fresh.begin(), fresh.end());
            std::uniform_int_distribution<std::size_t> pick(0, fresh.size() - 1);
            admit(fresh[pick(rng_)]);
            ++restarts_;
            continue;
        }
        const NodeId x = frontier_.front();
        frontier_.pop_front();
        auto it = window_adj_.find(x);
        if (it == window_adj_.end()) continue;
        std::vector<NodeId> next;
        for (const auto& [w, _] : it->second) {
            if (!graph_.contains(w)) next.push_back(w);
        }
        std::sort(next.begin(), next.end());
        for (NodeId w : next) {
            if (graph_.full()) return;
            admit(w);
        }
    }
}

void StreamingBfsSampler::process(const EdgeEvent& e) {
    if (e.u == e.v) return;
    const Edge edge(e.u, e.v);
    slide(edge);
    if (graph_.contains(edge.u) && graph_.contains(edge.v)) graph_.add_edge(edge.u, edge.v);
    if (!graph_.full() && window_.size() >= window_len_) expand();
}

SampleResult StreamingBfsSampler::finish() {
    if (!graph_.full()) expand();
    SampleResult out{graph_, std::nullopt, {}};
    out.counters["window"] = static_cast<double>(window_len_);
    out.counters["restarts"] = static_cast<double>(restarts_);
    return out;
}

// ---------------------------------------------------------------------------

PiesSampler::PiesSampler(const BaselineConfig& config) : config_(config), graph_(config.budget) {
    config_.validate();
}

void PiesSampler::process(const EdgeEvent& e) {
    if (e.u == e.v) return;
    for (NodeId x : {e.u, e.v}) {
        if (!graph_.contains(x) && !graph_.full()) graph_.add_node(x);
    }
    if (graph_.contains(e.u) && graph_.contains(e.v)) graph_.add_edge(e.u, e.v);
}

SampleResult PiesSampler::finish() { return SampleResult{graph_, std::nullopt, {}}; }

// ---------------------------------------------------------------------------

std::unique_ptr<StreamSampler> make_baseline(Algorithm algorithm, const BaselineConfig& config) {
    switch (algorithm) {
        case Algorithm::kStreamingNode: return std::make_unique<StreamingNodeSampler>(config);
        case Algorithm::kStreamingEdge: return std::make_unique<StreamingEdgeSampler>(config);
        case Algorithm::kStreamingBfs: return std::make_unique<StreamingBfsSampler>(config);
        case Algorithm::kPies: return std::make_unique<PiesSampler>(config);
        case Algorithm::kCompas: break;
    }
    throw ConfigError("make_baseline: compas is not a baseline");
}

std::size_t edge_budget_for_nodes(const std::vector<std::size_t>& degrees, std::size_t edge_count,
                                  std::size_t target_nodes) {
    if (edge_count == 0) throw ConfigError("edge_budget_for_nodes: no edges");
    auto coverage = [&](std::size_t budget) {
        const double keep = std::min(1.0, static_cast<double>(budget) / static_cast<double>(edge_count));
        double s = 0.0;
        for (std::size_t d : degrees) s += 1.0 - std::pow(1.0 - keep, static_cast<double>(d));
        return s;
    };
    std::size_t lo = 1;
    std::size_t hi = edge_count;
    if (coverage(hi) < static_cast<double>(target_nodes)) return hi;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (coverage(mid) >= static_cast<double>(target_nodes)) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

}  // namespace compas
