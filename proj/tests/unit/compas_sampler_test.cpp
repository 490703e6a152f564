#include <gtest/gtest.h>

#include "compas/community.hpp"
#include "compas/compas_sampler.hpp"
#include "compas/evaluation.hpp"
#include "compas/report.hpp"
#include "test_support.hpp"

using namespace compas;
using testing_support::stream_of;

namespace {

SamplerConfig config(std::size_t n, double alpha, std::size_t buffer, std::uint64_t seed = 1) {
    SamplerConfig c;
    c.n = n;
    c.alpha = alpha;
    c.buffer_capacity = buffer;
    c.seed = seed;
    return c;
}

void feed(CompasSampler& s, const std::vector<std::pair<NodeId, NodeId>>& edges) {
    for (const auto& e : stream_of(edges).events) s.process(e);
}

std::uint64_t cases(const CompasSampler& s, EventCase c) {
    return s.stats().cases[static_cast<std::size_t>(c)];
}

// Warm-up sample {0,1,2,3} with edges 0-1, 2-3, then in the steady phase.
CompasSampler warmed(std::size_t n, std::size_t buffer, bool strict = false) {
    auto c = config(n, 0.4, buffer);
    c.strict_line12 = strict;
    CompasSampler s(c);
    feed(s, {{0, 1}, {2, 3}});
    return s;
}

}  // namespace

TEST(SamplerConfig, Defaults) {
    EXPECT_EQ(SamplerConfig::default_buffer_capacity(400), 3u);
    EXPECT_EQ(SamplerConfig::default_buffer_capacity(100), 1u);
    EXPECT_EQ(SamplerConfig::default_buffer_capacity(10), 1u);
    EXPECT_EQ(SamplerConfig::default_sample_size(1000), 400u);
    EXPECT_EQ(SamplerConfig::default_sample_size(3), 2u);
    const auto c = SamplerConfig::with_defaults(400, 5);
    EXPECT_DOUBLE_EQ(c.alpha, 0.4);
    EXPECT_EQ(c.buffer_capacity, 3u);
    EXPECT_THROW(config(1, 0.4, 1).validate(), ConfigError);
    EXPECT_THROW(config(10, 0.0, 1).validate(), ConfigError);
    EXPECT_THROW(config(10, 1.0, 1).validate(), ConfigError);
    EXPECT_THROW(config(10, 0.4, 0).validate(), ConfigError);
    EXPECT_THROW(CompasSampler(config(1, 0.4, 1)), ConfigError);
}

TEST(CompasSampler, WarmupAdmitsEverythingUntilThreshold) {
    CompasSampler s(config(10, 0.4, 2));
    EXPECT_EQ(s.warmup_threshold(), 4u);
    feed(s, {{0, 1}, {1, 0}, {2, 3}});
    EXPECT_EQ(s.phase(), CompasSampler::Phase::kWarmup);
    EXPECT_EQ(s.graph().node_count(), 4u);
    EXPECT_EQ(s.graph().edge_count(), 2u);
    EXPECT_EQ(s.stats().duplicate_edges, 1u);
    EXPECT_EQ(s.stats().warmup_events, 3u);
}

TEST(CompasSampler, TransitionDispatchesTriggeringEvent) {
    auto s = warmed(10, 2);
    feed(s, {{0, 2}});
    EXPECT_EQ(s.phase(), CompasSampler::Phase::kSteady);
    EXPECT_EQ(*s.stats().transition_event, 2u);
    EXPECT_TRUE(s.graph().has_edge(0, 2));
    EXPECT_EQ(cases(s, EventCase::kBothInSample), 1u);
    EXPECT_EQ(s.partition().node_count(), 4u);
}

TEST(CompasSampler, StrictModeDropsTriggeringEvent) {
    auto s = warmed(10, 2, true);
    feed(s, {{0, 2}});
    EXPECT_EQ(s.phase(), CompasSampler::Phase::kSteady);
    EXPECT_FALSE(s.graph().has_edge(0, 2));
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(s.stats().cases[i], 0u);
}

TEST(CompasSampler, SixCases) {
    auto s = warmed(10, 3);
    feed(s, {{0, 2}});  // both sampled
    feed(s, {{0, 10}});  // sampled + new: 10 buffered under 0
    ASSERT_TRUE(s.buffer().contains(10));
    EXPECT_EQ(s.buffer().at(10).parent, 0u);
    feed(s, {{10, 11}});  // buffered + new
    EXPECT_EQ(s.buffer().at(10).count, 2u);
    EXPECT_EQ(s.buffer().at(11).parent, 10u);
    feed(s, {{11, 10}});  // both buffered
    EXPECT_EQ(s.buffer().at(10).count, 3u);
    EXPECT_EQ(s.buffer().at(11).count, 2u);
    feed(s, {{11, 1}});  // buffered + sampled
    EXPECT_EQ(s.buffer().at(11).count, 3u);
    EXPECT_EQ(s.buffer().at(11).parent, 10u);  // touching keeps the parent
    feed(s, {{20, 21}});  // both new, one slot left: 20 in, then 21 forces a promotion
    EXPECT_EQ(cases(s, EventCase::kBothInSample), 1u);
    EXPECT_EQ(cases(s, EventCase::kSampleAndNew), 1u);
    EXPECT_EQ(cases(s, EventCase::kBufferAndNew), 1u);
    EXPECT_EQ(cases(s, EventCase::kBothInBuffer), 1u);
    EXPECT_EQ(cases(s, EventCase::kSampleAndBuffer), 1u);
    EXPECT_EQ(cases(s, EventCase::kBothNew), 1u);
    // Only 10 had a sampled parent.
    EXPECT_TRUE(s.graph().contains(10));
    EXPECT_TRUE(s.graph().has_edge(10, 0));
    EXPECT_EQ(s.partition().community_of(10), s.partition().community_of(0));
    EXPECT_TRUE(s.buffer().contains(20));
    EXPECT_TRUE(s.buffer().contains(21));
    EXPECT_EQ(s.buffer().at(20).parent, 21u);
    EXPECT_EQ(s.stats().promotions, 1u);
    EXPECT_EQ(s.audit(true), "");
}

TEST(CompasSampler, FallbackDiscardsLowestCountWhenNothingPromotable) {
    auto s = warmed(10, 2);
    feed(s, {{20, 21}});  // fills the buffer with orphans
    feed(s, {{21, 30}});  // 21 count 2; 30 needs room, nothing promotable
    EXPECT_EQ(s.stats().drops, 1u);
    EXPECT_EQ(s.stats().promotions, 0u);
    EXPECT_FALSE(s.buffer().contains(20));
    EXPECT_TRUE(s.buffer().contains(21));
    EXPECT_TRUE(s.buffer().contains(30));
}

TEST(CompasSampler, EvictionPrefersLowDegreeThenLowClusteringThenId) {
    // Triangle 0-1-2 and square 3-4-5-6: every degree is 2, the square has no triangles.
    CompasSampler s(config(7, 0.99, 1));
    feed(s, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {5, 6}, {6, 3}});
    EXPECT_EQ(s.select_eviction_victim(), NodeId{3});
    CompasSampler t(config(7, 0.99, 1));
    feed(t, {{0, 1}, {1, 2}, {0, 2}, {2, 6}, {6, 4}, {4, 5}});
    EXPECT_EQ(t.select_eviction_victim(), NodeId{5});
}

TEST(CompasSampler, InsertionAbortsWhenParentIsEvicted) {
    CompasSampler s(config(4, 0.99, 1));
    feed(s, {{0, 1}, {0, 2}, {1, 2}, {0, 3}});
    s.start_steady_phase();
    ASSERT_TRUE(s.graph().full());
    EXPECT_FALSE(s.insert_node_in_sample(9, 3));
    EXPECT_EQ(s.stats().aborted_insertions, 1u);
    EXPECT_FALSE(s.graph().contains(9));
    EXPECT_FALSE(s.graph().contains(3));
    EXPECT_EQ(s.audit(true), "");
    EXPECT_THROW(s.insert_node_in_sample(9, 3), InvariantError);
}

TEST(CompasSampler, InsertionEvictsThenJoinsParentCommunity) {
    CompasSampler s(config(4, 0.99, 1));
    feed(s, {{0, 1}, {0, 2}, {1, 2}, {0, 3}});
    s.start_steady_phase();
    EXPECT_TRUE(s.insert_node_in_sample(9, 1));
    EXPECT_FALSE(s.graph().contains(3));
    EXPECT_TRUE(s.graph().has_edge(9, 1));
    EXPECT_EQ(s.partition().community_of(9), s.partition().community_of(1));
    EXPECT_EQ(s.stats().evictions, 1u);
    EXPECT_EQ(s.audit(true), "");
}

TEST(CompasSampler, FinishDuringWarmupRunsDetection) {
    CompasSampler s(config(100, 0.4, 1));
    feed(s, {{0, 1}, {1, 2}, {0, 2}, {3, 4}});
    const auto out = s.finish();
    ASSERT_TRUE(out.partition.has_value());
    EXPECT_EQ(out.partition->node_count(), 5u);
    EXPECT_EQ(out.partition->community_count(), 2u);
    EXPECT_EQ(out.counters.at("transition_event"), -1.0);
}

TEST(CompasSampler, SelfLoopsAreIgnored) {
    CompasSampler s(config(10, 0.4, 1));
    s.process(EdgeEvent{3, 3, 0});
    EXPECT_EQ(s.stats().events, 0u);
    EXPECT_TRUE(s.graph().empty());
}

namespace {

PlantedPartition planted(std::uint64_t seed) {
    return generate_planted_partition({.n_nodes = 300, .k_comms = 6, .p_in = 0.3, .p_out = 0.01, .seed = seed});
}

}  // namespace

TEST(CompasSampler, StateInvariantsHoldThroughoutRun) {
    const auto g = planted(2);
    auto c = SamplerConfig::with_defaults(120, 3);
    c.buffer_capacity = 4;
    CompasSampler s(c);
    for (std::size_t i = 0; i < g.stream.size(); ++i) {
        s.process(g.stream.events[i]);
        if (i % 97 == 0) ASSERT_EQ(s.audit(true), "") << "event " << i;
        if (s.phase() == CompasSampler::Phase::kSteady && i % 251 == 0 && s.graph().edge_count() > 0) {
            ASSERT_NEAR(s.partition().modularity(), modularity(s.graph(), s.partition()), 1e-9);
        }
    }
    EXPECT_EQ(s.audit(true), "");
    EXPECT_EQ(s.graph().node_count(), 120u);
    EXPECT_GT(s.stats().evictions, 0u);
    EXPECT_GT(s.stats().promotions, 0u);
}

TEST(CompasSampler, DeterministicUnderSeed) {
    const auto g = planted(4);
    auto run = [&] {
        CompasSampler s(SamplerConfig::with_defaults(100, 7));
        s.process(g.stream);
        return s.finish();
    };
    const auto a = run();
    const auto b = run();
    EXPECT_EQ(a.graph.edges(), b.graph.edges());
    EXPECT_EQ(a.partition->canonical_assignment(), b.partition->canonical_assignment());
    EXPECT_EQ(a.counters, b.counters);
}

TEST(CompasSampler, SampleKeepsCommunityStructure) {
    const auto g = planted(5);
    auto c = SamplerConfig::with_defaults(120, 1);
    c.trace_every = 500;
    CompasSampler s(c);
    s.process(g.stream);
    const auto out = s.finish();
    EXPECT_FALSE(s.trace().empty());
    EXPECT_GT(out.partition->modularity(), 0.3);
    const auto truth = ground_truth_from_labels(g.stream, g.labels);
    EXPECT_GE(intra_edge_fraction(out.graph, truth.partition),
              intra_edge_fraction(truth.graph, truth.partition));
}

TEST(MeanClustering, Examples) {
    EXPECT_DOUBLE_EQ(mean_clustering(SampleGraph{}), 0.0);
    EXPECT_DOUBLE_EQ(mean_clustering(testing_support::clique(0, 4)), 1.0);
    EXPECT_DOUBLE_EQ(mean_clustering(testing_support::edges_graph({{0, 1}, {1, 2}})), 0.0);
}
