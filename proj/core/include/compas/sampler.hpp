#ifndef COMPAS_SAMPLER_HPP
#define COMPAS_SAMPLER_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "compas/partition.hpp"
#include "compas/sample_graph.hpp"
#include "compas/stream_io.hpp"

namespace compas {

/// Output of any streaming sampler. Baselines leave `partition` empty; the
/// caller runs Louvain on their sample.
struct SampleResult {
    SampleGraph graph;
    std::optional<Partition> partition;
    std::map<std::string, double> counters;  // run statistics for the metadata document
};

class StreamSampler {
  public:
    virtual ~StreamSampler() = default;
    virtual std::string_view name() const = 0;
    virtual void process(const EdgeEvent& e) = 0;
    /// Call once, after the last event.
    virtual SampleResult finish() = 0;

    void process(const EdgeStream& stream) {
        for (const auto& e : stream.events) process(e);
    }
};

enum class Algorithm { kCompas, kStreamingNode, kStreamingEdge, kStreamingBfs, kPies };

std::string_view algorithm_name(Algorithm a);
/// Accepts "compas", "sn", "se", "sbfs", "pies".
Algorithm parse_algorithm(std::string_view name);

}  // namespace compas

#endif  // COMPAS_SAMPLER_HPP
