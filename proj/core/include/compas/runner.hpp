#ifndef COMPAS_RUNNER_HPP
#define COMPAS_RUNNER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "compas/compas_sampler.hpp"
#include "compas/evaluation.hpp"
#include "compas/sampler.hpp"
#include "compas/stream_io.hpp"

namespace compas {

struct RunConfig {
    Algorithm algorithm = Algorithm::kCompas;
    std::size_t sample_n = 0;     // absolute n; 0 means use sample_frac
    double sample_frac = 0.4;
    double alpha = 0.4;
    double buffer_frac = 0.0075;
    std::size_t window = 0;       // SBFS window; 0 means 10 * n
    std::uint64_t seed = 0;
    bool strict_line12 = false;
    std::size_t trace_every = 0;  // ComPAS trace interval in steady events; 0 disables

    /// n for a stream with `total_nodes` distinct nodes.
    std::size_t resolve_n(std::size_t total_nodes) const;
    void validate() const;
    std::map<std::string, std::string> describe() const;
};

struct RunOutput {
    SampleGraph graph;
    Partition partition;
    std::size_t n = 0;
    std::size_t budget = 0;  // what the sampler was given (edges for SE, nodes otherwise)
    bool louvain_applied = false;
    std::map<std::string, double> counters;
    std::vector<TracePoint> trace;
    double seconds = 0.0;
};

/// Runs one sampler over the whole stream. Samples without their own
/// partition are partitioned by Louvain seeded with the run seed. SE needs the
/// aggregate graph to size its edge budget; it is built when not supplied.
RunOutput run_sampler(const EdgeStream& stream, const RunConfig& config,
                      const SampleGraph* aggregate = nullptr);

/// Builds the sampler a run config describes, for a stream of `total_nodes`
/// nodes. SE requires `aggregate`.
std::unique_ptr<StreamSampler> make_sampler(const RunConfig& config, std::size_t total_nodes,
                                            const SampleGraph* aggregate);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs two or more distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct ScalePoint {
    double multiplier = 0.0;
    std::size_t events = 0;
    std::size_t nodes = 0;
    double seconds = 0.0;  // median over repetitions
};

/// Times `factory()` over prefixes of `stream` of length multiplier * base_events.
std::vector<ScalePoint> scale_study(const EdgeStream& stream, std::size_t base_events,
                                    std::span<const double> multipliers, std::size_t repetitions,
                                    const std::function<std::unique_ptr<StreamSampler>()>& factory);

}  // namespace compas

#endif  // COMPAS_RUNNER_HPP
