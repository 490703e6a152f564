#include "compas/buffer.hpp"

#include <string>
#include <vector>

namespace compas {

Buffer::Buffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw ConfigError("buffer capacity must be at least 1");
}

const Buffer::Entry& Buffer::at(NodeId x) const {
    auto it = entries_.find(x);
    if (it == entries_.end()) throw GraphError("node " + std::to_string(x) + " is not buffered");
    return it->second;
}

void Buffer::insert(NodeId x, NodeId parent) {
    if (full()) throw GraphError("buffer is full; evict before inserting");
    if (!entries_.emplace(x, Entry{1, parent}).second) {
        throw GraphError("node " + std::to_string(x) + " already buffered");
    }
}

void Buffer::touch(NodeId x) {
    auto it = entries_.find(x);
    if (it == entries_.end()) throw GraphError("node " + std::to_string(x) + " is not buffered");
    ++it->second.count;
}

void Buffer::erase(NodeId x) {
    if (entries_.erase(x) == 0) {
        throw GraphError("node " + std::to_string(x) + " is not buffered");
    }
}

std::optional<NodeId> Buffer::min_count_node() const {
    std::optional<NodeId> best;
    std::uint64_t best_count = 0;
    for (const auto& [x, e] : entries_) {
        if (!best || e.count < best_count) {
            best = x;
            best_count = e.count;
        }
    }
    return best;
}

std::optional<NodeId> buffer_pick_promotable(const Buffer& buffer, const SampleGraph& graph,
                                             Rng& rng, PromotionBias bias) {
    std::vector<NodeId> eligible;
    std::vector<double> weights;
    for (const auto& [x, e] : buffer.entries()) {
        if (!graph.contains(e.parent)) continue;
        eligible.push_back(x);
        const double c = static_cast<double>(e.count);
        weights.push_back(bias == PromotionBias::kProportional ? c : 1.0 / c);
    }
    if (eligible.empty()) return std::nullopt;
    if (eligible.size() == 1) return eligible.front();
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    return eligible[pick(rng)];
}

}  // namespace compas
