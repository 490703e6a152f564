#include <gtest/gtest.h>

#include <sstream>

#include "compas/baselines.hpp"
#include "compas/report.hpp"
#include "compas/runner.hpp"
#include "test_support.hpp"

using namespace compas;
using testing_support::graph_of;

namespace {

MetricReport report_with(double base) {
    MetricReport r;
    r.run_id = "run" + std::to_string(base);
    for (std::size_t k = 0; k < kMeasureCount; ++k) r.d_stats[k] = base + 0.01 * static_cast<double>(k);
    r.avg_d = base + 0.06;
    r.sd_d = 0.1;
    r.nmi = 1.0 - base;
    r.ari = 0.5;
    r.purity = 0.75;
    r.common_nodes = 10;
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(Report, JsonRoundTrip) {
    auto r = report_with(0.2);
    r.notes = {"louvain applied"};
    r.sample_communities = 3;
    r.truth_communities = 4;
    const auto back = metric_report_from_json(to_json(r));
    EXPECT_EQ(back.run_id, r.run_id);
    EXPECT_EQ(back.d_stats, r.d_stats);
    EXPECT_EQ(back.avg_d, r.avg_d);
    EXPECT_EQ(back.nmi, r.nmi);
    EXPECT_EQ(back.purity, r.purity);
    EXPECT_EQ(back.notes, r.notes);
    EXPECT_EQ(back.truth_communities, 4u);
    EXPECT_NE(to_json(r).find("\"CON\""), std::string::npos);
    EXPECT_THROW(metric_report_from_json("{\"avg_d\": 1}"), DataError);
    EXPECT_THROW(metric_report_from_json("not json"), DataError);
}

TEST(Report, CompareCsvSortsByAverage) {
    const auto csv = compare_csv({{"se", report_with(0.5)}, {"compas", report_with(0.1)}, {"pies", report_with(0.3)}});
    const auto rows = lines(csv);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "algorithm,ID,EI,AD,FOMD,TPR,EX,CR,CON,NC,MODF,AODF,FODF,MOD,Avg,SD,NMI,ARI,Purity");
    EXPECT_EQ(rows[1].rfind("compas,0.100000,", 0), 0u);
    EXPECT_EQ(rows[2].rfind("pies,", 0), 0u);
    EXPECT_EQ(rows[3].rfind("se,", 0), 0u);
}

TEST(Report, SummaryUsesPopulationSd) {
    const std::vector<MetricReport> rs{report_with(0.1), report_with(0.3)};
    const auto s = summarize_reports(rs);
    EXPECT_EQ(s.runs, 2u);
    EXPECT_NEAR(s.mean.avg_d, 0.26, 1e-12);
    EXPECT_NEAR(s.sd.avg_d, 0.1, 1e-12);
    EXPECT_NEAR(s.mean.nmi, 0.8, 1e-12);
    EXPECT_NEAR(s.sd.ari, 0.0, 1e-12);
    EXPECT_THROW(summarize_reports({}), DataError);
    EXPECT_NE(to_json(s).find("\"runs\": 2"), std::string::npos);
}

TEST(Report, IntraFractionAndRetention) {
    const auto g = graph_of(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
    const auto p = Partition::from_assignment(g, {{0, 0}, {1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 1}});
    EXPECT_DOUBLE_EQ(intra_edge_fraction(g, p), 6.0 / 7.0);
    EXPECT_DOUBLE_EQ(edge_retention(g, g), 1.0);
    const auto half = graph_of(3, {{0, 1}});
    EXPECT_DOUBLE_EQ(edge_retention(half, g), 1.0 / 3.0);
}

TEST(Report, ArrivalProfileBuckets) {
    const auto s = testing_support::stream_of({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    const auto original = aggregate_graph(s);
    const auto sample = graph_of(2, {{0, 1}});
    const auto profile = arrival_degree_profile(s, original, sample, 3);
    ASSERT_EQ(profile.size(), 3u);
    EXPECT_EQ(profile[0].nodes, 2u);
    EXPECT_DOUBLE_EQ(profile[0].mean_degree, 1.5);
    EXPECT_DOUBLE_EQ(profile[0].sampled_fraction, 1.0);
    EXPECT_DOUBLE_EQ(profile[2].sampled_fraction, 0.0);
    EXPECT_EQ(arrival_degree_profile(s, original, sample).size(), 6u);
    EXPECT_THROW(arrival_degree_profile(s, original, sample, 0), ConfigError);
}

TEST(Report, TextOutputs) {
    const auto g = graph_of(4, {{0, 1}, {2, 3}});
    const auto p = Partition::from_assignment(g, {{0, 5}, {1, 5}, {2, 2}, {3, 2}});
    EXPECT_EQ(assignment_text(p), "0 0\n1 0\n2 1\n3 1\n");
    EXPECT_EQ(config_header({{"seed", "3"}, {"algo", "sn"}}), "# algo=sn\n# seed=3\n");
    const auto csv = lines(scores_csv(all_community_scores(g, p)));
    EXPECT_EQ(csv.size(), 3u);
    EXPECT_EQ(csv[0].rfind("community,n_s,m_s,c_s,ID", 0), 0u);
}

TEST(Runner, ConfigResolution) {
    RunConfig c;
    EXPECT_EQ(c.resolve_n(1000), 400u);
    EXPECT_EQ(c.resolve_n(2), 2u);
    c.sample_n = 17;
    EXPECT_EQ(c.resolve_n(1000), 17u);
    c.sample_n = 1;
    EXPECT_THROW(c.validate(), ConfigError);
    RunConfig bad;
    bad.sample_frac = 0.0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = RunConfig{};
    bad.alpha = 1.0;
    EXPECT_THROW(bad.validate(), ConfigError);
    EXPECT_EQ(RunConfig{}.describe().at("algo"), "compas");
    EXPECT_EQ(RunConfig{}.describe().at("sample_frac"), "0.4");
}

TEST(Runner, EveryAlgorithmProducesAPartitionedSample) {
    const auto g = generate_planted_partition({.n_nodes = 200, .k_comms = 4, .p_in = 0.25, .p_out = 0.01, .seed = 2});
    for (auto a : {Algorithm::kCompas, Algorithm::kStreamingNode, Algorithm::kStreamingEdge,
                   Algorithm::kStreamingBfs, Algorithm::kPies}) {
        RunConfig c;
        c.algorithm = a;
        c.seed = 3;
        const auto out = run_sampler(g.stream, c);
        EXPECT_EQ(out.n, 80u);
        EXPECT_EQ(out.partition.node_count(), out.graph.node_count()) << algorithm_name(a);
        EXPECT_EQ(out.partition.reconcile(out.graph), "");
        EXPECT_EQ(out.louvain_applied, a != Algorithm::kCompas);
        if (a == Algorithm::kStreamingEdge) EXPECT_GT(out.budget, 0u);
        else EXPECT_EQ(out.graph.node_count(), 80u) << algorithm_name(a);
    }
    EXPECT_THROW(run_sampler(EdgeStream{}, RunConfig{}), DataError);
}

TEST(Runner, LinearFit) {
    const std::vector<double> x{1, 2, 4, 8};
    const std::vector<double> y{3, 5, 9, 17};
    const auto f = linear_fit(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.intercept, 1.0, 1e-12);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
    const std::vector<double> noisy{1, 3, 2, 4};
    const auto g = linear_fit(x, noisy);
    double mx = 3.75, my = 2.5, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < 4; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (noisy[i] - my);
        syy += (noisy[i] - my) * (noisy[i] - my);
    }
    EXPECT_NEAR(g.r2, sxy * sxy / (sxx * syy), 1e-12);
    EXPECT_THROW(linear_fit(std::vector<double>{1, 1}, std::vector<double>{1, 2}), ConfigError);
    EXPECT_THROW(linear_fit(std::vector<double>{1}, std::vector<double>{1}), ConfigError);
}

TEST(Runner, ScaleStudyUsesPrefixes) {
    const auto g = generate_planted_partition({.n_nodes = 300, .k_comms = 6, .p_in = 0.2, .p_out = 0.01, .seed = 4});
    const std::vector<double> mult{1, 2};
    const auto pts = scale_study(g.stream, 100, mult, 3, [] {
        return make_baseline(Algorithm::kPies, {.budget = 50});
    });
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[0].events, 100u);
    EXPECT_EQ(pts[1].events, 200u);
    EXPECT_LE(pts[0].nodes, pts[1].nodes);
    EXPECT_GE(pts[0].seconds, 0.0);
    const std::vector<double> huge{1e6};
    EXPECT_THROW(scale_study(g.stream, 100, huge, 1, [] { return make_baseline(Algorithm::kPies, {.budget = 5}); }),
                 DataError);
}
