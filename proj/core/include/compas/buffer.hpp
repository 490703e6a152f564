#ifndef COMPAS_BUFFER_HPP
#define COMPAS_BUFFER_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>

#include "compas/sample_graph.hpp"
#include "compas/types.hpp"

namespace compas {

/// Staging area for candidate nodes. Each entry carries how often the node has
/// been seen since it was buffered and the node it first arrived with.
class Buffer {
  public:
    struct Entry {
        std::uint64_t count = 1;
        NodeId parent = 0;
    };

    explicit Buffer(std::size_t capacity);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return entries_.size(); }
    bool full() const { return entries_.size() >= capacity_; }
    bool contains(NodeId x) const { return entries_.contains(x); }

    const Entry& at(NodeId x) const;
    const std::map<NodeId, Entry>& entries() const { return entries_; }

    void insert(NodeId x, NodeId parent);
    void touch(NodeId x);
    void erase(NodeId x);

    /// Lowest count, ties broken by the smaller identifier.
    std::optional<NodeId> min_count_node() const;

  private:
    std::size_t capacity_;
    std::map<NodeId, Entry> entries_;
};

enum class PromotionBias {
    kProportional,  // weight = count
    kInverse,       // weight = 1 / count
};

/// Draws a buffered node whose parent is sampled, weighted by its count.
/// Returns nullopt when no buffered node has its parent in `graph`.
std::optional<NodeId> buffer_pick_promotable(const Buffer& buffer, const SampleGraph& graph,
                                             Rng& rng,
                                             PromotionBias bias = PromotionBias::kProportional);

}  // namespace compas

#endif  // COMPAS_BUFFER_HPP
