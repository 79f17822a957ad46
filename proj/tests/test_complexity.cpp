#include "support.hpp"

#include <gtest/gtest.h>

using namespace specgraph;
using namespace testsupport;

namespace {

/// Closed form for the 2-graph family: eigenvalues 1 and 2p - 1.
double two_graph_F(double p) { return p <= 0.5 ? (1.0 + 2.0 * p) / 2.0 : 1.0 - p; }

ComplexityReport F_of(const Eigen::MatrixXd &m, ZeroEigPolicy policy) {
    return spectral_complexity(eig(m, false), ToleranceConfig{}, policy);
}

} // namespace

TEST(SpectralComplexity, IdentityIsZero) {
    for (int k : {1, 2, 5, 40}) {
        const auto r = F_of(Eigen::MatrixXd::Identity(k, k), ZeroEigPolicy::ExcludeZeros);
        EXPECT_EQ(r.F, 0.0);
        EXPECT_EQ(r.K, static_cast<std::size_t>(k));
    }
}

TEST(SpectralComplexity, DisconnectedNodesHaveZeroComplexity) {
    GraphBuilder b;
    for (std::uint64_t i = 0; i < 6; ++i)
        b.add_node({i});
    EXPECT_EQ(analyze_complexity(b.build(), {}).report.F, 0.0);
}

TEST(SpectralComplexity, TwoGraphExamples) {
    EXPECT_NEAR(F_of(two_graph(0.25), ZeroEigPolicy::ExcludeZeros).F, 0.75, 1e-12);
    EXPECT_NEAR(F_of(two_graph(0.75), ZeroEigPolicy::ExcludeZeros).F, 0.25, 1e-12);
}

TEST(SpectralComplexity, TwoGraphClosedFormOnGrid) {
    for (int k = 0; k <= 20; ++k) {
        const double p = k / 20.0;
        const auto r = F_of(two_graph(p), ZeroEigPolicy::IncludeZeros);
        EXPECT_NEAR(r.F, two_graph_F(p), 1e-12) << "p=" << p;
        EXPECT_EQ(r.F, r.radial_term + r.angular_term);
    }
}

TEST(SpectralComplexity, TwoGraphJumpAtOneHalf) {
    const double eps = 1e-3;
    const double left = F_of(two_graph(0.5 - eps), ZeroEigPolicy::ExcludeZeros).F;
    const double right = F_of(two_graph(0.5 + eps), ZeroEigPolicy::ExcludeZeros).F;
    EXPECT_NEAR(left, 1.0 - eps, 1e-12);
    EXPECT_NEAR(right, 0.5 - eps, 1e-12);
    EXPECT_GT(left - right, 0.49);
}

TEST(SpectralComplexity, ConstantMatrixReachesBound) {
    for (int k = 2; k <= 50; ++k) {
        const Eigen::MatrixXd m = Eigen::MatrixXd::Constant(k, k, 1.0 / k);
        const auto r = F_of(m, ZeroEigPolicy::IncludeZeros);
        EXPECT_NEAR(r.F, 2.0 * (k - 1) / k, 1e-9) << "K=" << k;
        EXPECT_EQ(r.K, static_cast<std::size_t>(k));
    }
}

TEST(SpectralComplexity, PureCycleUnderBothPolicies) {
    for (std::uint64_t d = 2; d <= 12; ++d) {
        const auto g = cycle(d);
        const double want = static_cast<double>(d - 1) / static_cast<double>(d);
        EXPECT_NEAR(analyze_complexity(g, {}, ZeroEigPolicy::ExcludeZeros).report.F, want, 1e-9);
        EXPECT_NEAR(analyze_complexity(g, {}, ZeroEigPolicy::IncludeZeros).report.F, want, 1e-9);
    }
}

TEST(SpectralComplexity, BoundsOnRandomGraphs) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_small(rng, 25, 0.1, true);
        for (auto policy : {ZeroEigPolicy::ExcludeZeros, ZeroEigPolicy::IncludeZeros}) {
            ComplexityReport r;
            try {
                r = analyze_complexity(g, {}, policy).report;
            } catch (const DegenerateError &) {
                continue;
            }
            EXPECT_GE(r.F, 0.0);
            EXPECT_LT(r.F, 2.0);
            EXPECT_GE(r.radial_term, 0.0);
            EXPECT_LE(r.radial_term, 1.0);
            EXPECT_GE(r.angular_term, 0.0);
            EXPECT_LE(r.angular_term, 1.0);
        }
    }
}

TEST(SpectralComplexity, EmptySelectionIsDegenerate) {
    Spectrum s;
    s.eigenvalues = {Complex(0.0, 0.0), Complex(1e-9, 0.0)};
    EXPECT_THROW(spectral_complexity(s, {}, ZeroEigPolicy::ExcludeZeros), DegenerateError);
    EXPECT_NEAR(spectral_complexity(s, {}, ZeroEigPolicy::IncludeZeros).F, 2.0, 0.0);
}

TEST(SpectralComplexity, RandomMarkovMatricesApproachTwo) {
    std::vector<double> means;
    for (std::size_t n : {50, 100, 200, 400}) {
        double sum = 0.0;
        const int seeds = 10;
        for (int s = 0; s < seeds; ++s)
            sum += analyze_complexity(random_weighted_complete_digraph(n, 1000 + s), {}).report.F;
        means.push_back(sum / seeds);
    }
    for (std::size_t i = 1; i < means.size(); ++i)
        EXPECT_GT(means[i], means[i - 1]);
    EXPECT_GT(means.back(), 1.9);
}

TEST(TotalComplexity, InfiniteWeightGivesF) {
    EXPECT_EQ(total_complexity(0.7, 10.0, 3.0, 2.0, kInfiniteWeight).C, 0.7);
}

TEST(TotalComplexity, ZeroWeightGivesScaledSum) {
    EXPECT_DOUBLE_EQ(total_complexity(0.7, 10.0, 3.0, 1.0, 0.0).C, 13.0);
}

TEST(TotalComplexity, HandEvaluatedBlend) {
    // gamma * 2.0 = 0.9981 and W = 1 give (0.9981 + F) / 2
    const double gamma = 0.9981 / 2.0;
    EXPECT_NEAR(total_complexity(1.4043, 1.5, 0.5, gamma, 1.0).C, (0.9981 + 1.4043) / 2.0, 1e-15);
    EXPECT_NEAR(total_complexity(0.3, 1.5, 0.5, gamma, 3.0).C, (0.9981 + 3.0 * 0.3) / 4.0, 1e-15);
}

TEST(TotalComplexity, SumsComeFromAllNodesAndRemovedEdges) {
    auto g = csv("0,1,2\n1,2,0.5\n2,1,0.25\n");
    g = with_node_weights(g, {{NodeId{0}, 3.0}});
    const auto rg = strip_sources(g);
    const auto t = total_complexity(0.0, g, rg, 1.0, 0.0);
    EXPECT_DOUBLE_EQ(t.sum_alpha, 5.0);
    EXPECT_DOUBLE_EQ(t.sum_beta, 2.0);
    const std::vector<double> alphas{1.0, -1.0};
    EXPECT_THROW(total_complexity(0.0, alphas, rg.removed_edges, 1.0, 1.0), ValidationError);
    EXPECT_THROW(total_complexity(0.0, 1.0, 1.0, 0.0, 1.0), ValidationError);
    EXPECT_THROW(total_complexity(0.0, 1.0, 1.0, 1.0, -1.0), ValidationError);
}

TEST(TotalComplexity, UnicyclicGraph) {
    const std::uint64_t n = 6;
    const double W = 2.0;
    const auto g = cycle(n);
    const auto a = analyze_complexity(g, {});
    const double F = static_cast<double>(n - 1) / static_cast<double>(n);
    EXPECT_NEAR(a.report.F, F, 1e-12);
    const auto literal = total_complexity(a.report.F, g, a.reduced, 1.0, W);
    EXPECT_NEAR(literal.C, (n + W * F) / (1.0 + W), 1e-12);
    const auto all_edges = total_complexity(a.report.F, g, a.reduced, 1.0, W, BetaMode::AllEdges);
    EXPECT_NEAR(all_edges.C, (2.0 * n + W * F) / (1.0 + W), 1e-12);
}

TEST(EstimateGamma, SingleGraph) {
    const std::vector<ComplexitySample> one{{0.8, 4.0}};
    EXPECT_DOUBLE_EQ(estimate_gamma(one, GammaMode::Expectation), 0.2);
    EXPECT_DOUBLE_EQ(estimate_gamma(one, GammaMode::Max), 0.2);
}

TEST(EstimateGamma, HandComputedCollections) {
    const std::vector<ComplexitySample> same{{1.0, 2.0}, {1.0, 2.0}};
    EXPECT_DOUBLE_EQ(estimate_gamma(same, GammaMode::Expectation), 0.5);
    EXPECT_DOUBLE_EQ(estimate_gamma(same, GammaMode::Max), 0.5);
    const std::vector<ComplexitySample> mixed{{0.5, 1.0}, {1.5, 3.0}};
    EXPECT_DOUBLE_EQ(estimate_gamma(mixed, GammaMode::Expectation), 0.5);
    EXPECT_DOUBLE_EQ(estimate_gamma(mixed, GammaMode::Max), 0.5);
}

TEST(EstimateGamma, Errors) {
    EXPECT_THROW(estimate_gamma(std::span<const ComplexitySample>{}, GammaMode::Max), ValidationError);
    const std::vector<ComplexitySample> zero{{1.0, 0.0}};
    EXPECT_THROW(estimate_gamma(zero, GammaMode::Expectation), ValidationError);
}

TEST(EstimateGamma, FromGraphs) {
    const std::vector<DirectedGraph> graphs{cycle(3)};
    // F = 2/3, three nodes of weight 1, nothing removed
    EXPECT_NEAR(estimate_gamma(graphs, GammaMode::Expectation), (2.0 / 3.0) / 3.0, 1e-12);
}

TEST(GraphEnergy, SingleEdge) {
    const auto e = graph_energy(snap("0 1\n"), false);
    EXPECT_NEAR(e.singular_value_sum, 1.0, 1e-12);
    EXPECT_NEAR(e.energy, 1.0, 1e-12);
}

TEST(GraphEnergy, TwoCycle) {
    EXPECT_NEAR(graph_energy(cycle(2), false).energy, 2.0, 1e-12);
}

TEST(GraphEnergy, CompleteThreeGraph) {
    const auto e = graph_energy(snap("0 1\n0 2\n1 0\n1 2\n2 0\n2 1\n"), false);
    EXPECT_NEAR(e.singular_value_sum, 4.0, 1e-12);
    EXPECT_NEAR(e.energy, 4.0, 1e-12);
}

TEST(GraphEnergy, SelfLoopsLeaveAdjacencyButStayInTheMean) {
    const auto e = graph_energy(csv("0,1,1\n1,1,3\n"), false);
    EXPECT_DOUBLE_EQ(e.mean_edge_weight, 2.0);
    EXPECT_NEAR(e.singular_value_sum, 1.0, 1e-12);
    EXPECT_NEAR(e.energy, 2.0, 1e-12);
}

TEST(GraphEnergy, SymmetrizingChangesTheSum) {
    // path 0->1->2: singular values {1,1,0}; OR-symmetrized: eigenvalues {sqrt2, 0, -sqrt2}
    const auto g = snap("0 1\n1 2\n");
    EXPECT_NEAR(graph_energy(g, false).singular_value_sum, 2.0, 1e-12);
    EXPECT_NEAR(graph_energy(g, true).singular_value_sum, 2.0 * std::sqrt(2.0), 1e-12);
}

TEST(GraphEnergy, EdgelessGraphWarns) {
    GraphBuilder b;
    b.add_node({0});
    const auto e = graph_energy(b.build(), false);
    EXPECT_EQ(e.energy, 0.0);
    EXPECT_FALSE(e.warning.empty());
}

TEST(GraphEnergy, MatchesGramOracleOnSmallGraphs) {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::size_t> size(1, 8);
    std::uniform_real_distribution<double> dens(0.05, 0.6);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto g = random_small(rng, size(rng), dens(rng), true);
        if (g.edge_count() == 0)
            continue;
        double total = 0.0;
        for (const Edge &e : g.edges())
            total += e.weight;
        const double mean = total / static_cast<double>(g.edge_count());
        for (bool sym : {false, true}) {
            const auto e = graph_energy(g, sym);
            const double want = singular_sum_via_gram(adjacency_oracle(g, sym));
            ASSERT_NEAR(e.singular_value_sum, want, 1e-9);
            ASSERT_NEAR(e.energy, mean * want, 1e-9);
            EXPECT_GE(e.energy, 0.0);
        }
    }
}

TEST(GraphEnergy, InvariantUnderPermutation) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = random_small(rng, 10, 0.3, true);
        if (g.edge_count() == 0)
            continue;
        std::vector<std::uint64_t> perm(10);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        GraphBuilder b;
        for (const Edge &e : g.edges())
            b.add_edge({perm[e.src.value]}, {perm[e.dst.value]}, e.weight);
        for (NodeId id : g.nodes())
            b.add_node({perm[id.value]});
        EXPECT_NEAR(graph_energy(g, false).energy, graph_energy(b.build(), false).energy, 1e-9);
    }
}

TEST(RandomDigraph, DeterministicUnderSeed) {
    EXPECT_EQ(random_digraph(200, 5.0, 7), random_digraph(200, 5.0, 7));
    EXPECT_FALSE(random_digraph(200, 5.0, 7) == random_digraph(200, 5.0, 8));
}

TEST(RandomDigraph, EdgeCountMatchesBinomialExpectation) {
    const double expected = 1000.0 * 999.0 * 0.02;
    const double sd = std::sqrt(expected * 0.98);
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto g = random_digraph(1000, 20.0, seed);
        EXPECT_NEAR(static_cast<double>(g.edge_count()), expected, 5.0 * sd);
        for (const Edge &e : g.edges())
            ASSERT_NE(e.src, e.dst);
    }
}

TEST(RandomDigraph, FullDegreeIsComplete) {
    const auto g = random_digraph(12, 12.0, 3);
    EXPECT_EQ(g.edge_count(), 12u * 11u);
}

TEST(RandomDigraph, RejectsBadDegree) {
    EXPECT_THROW(random_digraph(10, 11.0, 1), ValidationError);
    EXPECT_THROW(random_digraph(10, 0.0, 1), ValidationError);
}

TEST(RandomBaseline, IndependentOfThreadCount) {
    const auto a = random_baseline(80, 3.0, 6, 99, {}, ZeroEigPolicy::ExcludeZeros, 1);
    const auto b = random_baseline(80, 3.0, 6, 99, {}, ZeroEigPolicy::ExcludeZeros, 4);
    ASSERT_EQ(a.realizations.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i)
        EXPECT_EQ(a.realizations[i].F, b.realizations[i].F);
    EXPECT_EQ(a.F.mean, b.F.mean);
    EXPECT_EQ(a.F.stddev, b.F.stddev);
}

TEST(RandomBaseline, RealizationMatchesDirectPipeline) {
    const auto a = random_baseline(60, 4.0, 3, 5, {}, ZeroEigPolicy::ExcludeZeros, 2);
    const auto g = random_digraph(60, 4.0, realization_seed(5, 2));
    EXPECT_EQ(a.realizations[2].F, analyze_complexity(g, {}).report.F);
}

TEST(RandomBaseline, ZeroRealizationsIsValidationError) {
    EXPECT_THROW(random_baseline(50, 2.0, 0, 1), ValidationError);
}

TEST(Statistics, MeanStdAndSpearman) {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    const auto m = mean_std(xs);
    EXPECT_DOUBLE_EQ(m.mean, 2.5);
    EXPECT_NEAR(m.stddev, std::sqrt(5.0 / 3.0), 1e-15);
    const std::vector<double> up{10.0, 20.0, 25.0, 100.0}, down{4.0, 3.0, 2.0, 1.0}, tied{1.0, 1.0, 2.0, 3.0};
    EXPECT_DOUBLE_EQ(spearman(xs, up), 1.0);
    EXPECT_DOUBLE_EQ(spearman(xs, down), -1.0);
    // ranks of tied: 1.5 1.5 3 4
    EXPECT_NEAR(spearman(xs, tied), 0.9486832980505138, 1e-12);
}

TEST(Oracles, IntegerRank) {
    Eigen::MatrixXd m(3, 3);
    m << 1, 1, 0, 0, 1, 1, 1, 2, 1;
    EXPECT_EQ(integer_rank(m), 2u);
    EXPECT_EQ(integer_rank(Eigen::MatrixXd::Identity(4, 4)), 4u);
    EXPECT_EQ(integer_rank(Eigen::MatrixXd::Zero(2, 2)), 0u);
}
