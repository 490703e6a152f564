#include "compas/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_set>

#include "compas/baselines.hpp"
#include "compas/community.hpp"

namespace compas {

namespace {

std::string fmt_double(double v) {
    std::string s = std::to_string(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

double elapsed(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

std::size_t RunConfig::resolve_n(std::size_t total_nodes) const {
    if (sample_n > 0) return sample_n;
    const auto n = static_cast<std::size_t>(
        std::ceil(sample_frac * static_cast<double>(total_nodes) - 1e-9));
    return std::max<std::size_t>(n, 2);
}

void RunConfig::validate() const {
    if (sample_n == 0 && !(sample_frac > 0.0 && sample_frac <= 1.0)) {
        throw ConfigError("sample fraction must lie in (0, 1]");
    }
    if (sample_n == 1) throw ConfigError("sample size must be at least 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (!(buffer_frac > 0.0)) throw ConfigError("buffer fraction must be positive");
}

std::map<std::string, std::string> RunConfig::describe() const {
    std::map<std::string, std::string> d{
        {"algo", std::string(algorithm_name(algorithm))},
        {"seed", std::to_string(seed)},
    };
    if (sample_n > 0) d["sample_n"] = std::to_string(sample_n);
    else d["sample_frac"] = fmt_double(sample_frac);
    if (algorithm == Algorithm::kCompas) {
        d["alpha"] = fmt_double(alpha);
        d["buffer_frac"] = fmt_double(buffer_frac);
        d["strict_line12"] = strict_line12 ? "true" : "false";
    }
    if (algorithm == Algorithm::kStreamingBfs) d["window"] = std::to_string(window);
    return d;
}

std::unique_ptr<StreamSampler> make_sampler(const RunConfig& config, std::size_t total_nodes,
                                            const SampleGraph* aggregate) {
    config.validate();
    const std::size_t n = config.resolve_n(total_nodes);
    if (config.algorithm == Algorithm::kCompas) {
        SamplerConfig sc;
        sc.n = n;
        sc.alpha = config.alpha;
        sc.buffer_capacity = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::ceil(config.buffer_frac * static_cast<double>(n) - 1e-9)));
        sc.seed = config.seed;
        sc.strict_line12 = config.strict_line12;
        sc.trace_every = config.trace_every;
        return std::make_unique<CompasSampler>(sc);
    }
    BaselineConfig bc;
    bc.seed = config.seed;
    bc.window = config.window;
    bc.budget = n;
    if (config.algorithm == Algorithm::kStreamingEdge) {
        if (aggregate == nullptr) throw ConfigError("se budget needs the aggregate graph");
        std::vector<std::size_t> degrees;
        degrees.reserve(aggregate->node_count());
        for (const auto& [d, _] : aggregate->degree_index()) degrees.push_back(d);
        bc.budget = edge_budget_for_nodes(degrees, aggregate->edge_count(), n);
    }
    return make_baseline(config.algorithm, bc);
}

RunOutput run_sampler(const EdgeStream& stream, const RunConfig& config,
                      const SampleGraph* aggregate) {
    if (stream.empty()) throw DataError("empty stream");
    std::optional<SampleGraph> built;
    if (config.algorithm == Algorithm::kStreamingEdge && aggregate == nullptr) {
        built = aggregate_graph(stream);
        aggregate = &*built;
    }
    const std::size_t total = stream.node_count();
    auto sampler = make_sampler(config, total, aggregate);
    RunOutput out;
    out.n = config.resolve_n(total);
    const auto start = std::chrono::steady_clock::now();
    sampler->process(stream);
    SampleResult r = sampler->finish();
    out.seconds = elapsed(start);
    if (auto* c = dynamic_cast<CompasSampler*>(sampler.get())) {
        out.trace = c->trace();
        out.budget = out.n;
    } else if (auto* se = dynamic_cast<StreamingEdgeSampler*>(sampler.get())) {
        out.budget = se->budget();
    } else {
        out.budget = out.n;
    }
    out.counters = std::move(r.counters);
    out.graph = std::move(r.graph);
    if (r.partition) {
        out.partition = std::move(*r.partition);
    } else if (out.graph.edge_count() > 0) {
        LouvainOptions opts;
        opts.seed = config.seed;
        out.partition = louvain(out.graph, opts);
        out.louvain_applied = true;
    } else {
        out.partition = Partition::singletons(out.graph);
        out.louvain_applied = true;
    }
    return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ConfigError("linear_fit: length mismatch");
    if (x.size() < 2) throw ConfigError("linear_fit: need at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw ConfigError("linear_fit: x values are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

std::vector<ScalePoint> scale_study(const EdgeStream& stream, std::size_t base_events,
                                    std::span<const double> multipliers, std::size_t repetitions,
                                    const std::function<std::unique_ptr<StreamSampler>()>& factory) {
    if (base_events == 0) throw ConfigError("scale study: base size must be positive");
    if (repetitions == 0) throw ConfigError("scale study: need at least one repetition");
    std::vector<ScalePoint> out;
    for (double m : multipliers) {
        if (!(m > 0.0)) throw ConfigError("scale study: multipliers must be positive");
        const auto len = static_cast<std::size_t>(std::llround(m * static_cast<double>(base_events)));
        if (len > stream.size()) {
            throw DataError("scale study: stream has " + std::to_string(stream.size()) +
                            " events, multiplier needs " + std::to_string(len));
        }
        ScalePoint p;
        p.multiplier = m;
        p.events = len;
        std::unordered_set<NodeId> nodes;
        for (std::size_t i = 0; i < len; ++i) {
            nodes.insert(stream.events[i].u);
            nodes.insert(stream.events[i].v);
        }
        p.nodes = nodes.size();
        std::vector<double> times;
        for (std::size_t r = 0; r < repetitions; ++r) {
            auto sampler = factory();
            const auto start = std::chrono::steady_clock::now();
            for (std::size_t i = 0; i < len; ++i) sampler->process(stream.events[i]);
            sampler->finish();
            times.push_back(elapsed(start));
        }
        std::sort(times.begin(), times.end());
        const std::size_t mid = times.size() / 2;
        p.seconds = times.size() % 2 == 1 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
        out.push_back(p);
    }
    return out;
}

}  // namespace compas
