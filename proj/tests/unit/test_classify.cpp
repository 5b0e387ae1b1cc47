#include "support.hpp"

#include <gtest/gtest.h>

using namespace extcoop;
using support::load;

namespace {

ClassificationReport classify_file(const std::string& f, const FlowProfile* flows = nullptr) {
    const auto net = load(f);
    return classify_system(net, flows ? *flows : FlowProfile::batch(net.num_inlets()));
}

}  // namespace

TEST(Classify, ParallelIsCompetitive) {
    const auto rep = classify_file("parallel.json");
    EXPECT_EQ(rep.system_verdict, SystemVerdict::Competitive);
    EXPECT_EQ(rep.pair(0, 1).verdict, Verdict::Competitive);
    EXPECT_EQ(rep.pair(1, 0).basis, Rule::SharedReactantsDisjointProducts);
}

TEST(Classify, ReversingOneParallelReactionMakesItCooperative) {
    const auto net = load("parallel.json");
    const auto flipped = reverse_reaction(net, 1);
    const auto rep = classify_system(flipped, FlowProfile::batch(0));
    EXPECT_EQ(rep.system_verdict, SystemVerdict::Cooperative);
    const auto file = classify_file("flipped_parallel.json");
    EXPECT_EQ(file.system_verdict, SystemVerdict::Cooperative);
    EXPECT_EQ(file.pair(0, 1).basis, rep.pair(0, 1).basis);
}

TEST(Classify, SeriesUsesSeriesRule) {
    const auto rep = classify_file("series.json");
    EXPECT_EQ(rep.system_verdict, SystemVerdict::Cooperative);
    EXPECT_EQ(rep.pair(0, 1).basis, Rule::SeriesReactions);
    EXPECT_EQ(basis_label(rep.pair(0, 1).basis), "Corollary 1");
}

TEST(Classify, ConditionalPairCarriesInequalities) {
    const auto rep = classify_file("conditional.json");
    EXPECT_EQ(rep.system_verdict, SystemVerdict::Conditional);
    const auto& pc = rep.pair(0, 1);
    EXPECT_EQ(pc.verdict, Verdict::ConditionallyCooperative);
    EXPECT_EQ(pc.basis, Rule::ReactantsMeetProducts);
    ASSERT_EQ(pc.conditions.size(), 2u);
    std::set<std::string> texts{pc.conditions[0].text(), pc.conditions[1].text()};
    EXPECT_EQ(texts, (std::set<std::string>{"k_b1*c_D >= k_f1*c_B", "k_f2*c_A >= k_f2*c_C"}));
}

TEST(Classify, FutileCycleAllDisjointReactants) {
    const auto rep = classify_file("example2_futile_cycle.json");
    EXPECT_EQ(rep.system_verdict, SystemVerdict::Cooperative);
    ASSERT_EQ(rep.pairs.size(), 6u);
    for (const auto& pc : rep.pairs) {
        EXPECT_EQ(pc.verdict, Verdict::Cooperative);
        EXPECT_EQ(basis_label(pc.basis), "Proposition 3");
    }
}

TEST(Classify, ChemostatInletFeedsReactant) {
    const auto net = load("example1_chemostat.json");
    const auto flows = support::load_flows("example1_flows.json", net);
    const auto rep = classify_system(net, flows);
    EXPECT_EQ(rep.system_verdict, SystemVerdict::Cooperative);
    EXPECT_EQ(rep.inlet_effects[0][0], Sign::Positive);
    EXPECT_EQ(rep.ic_effects[0], Sign::Positive);
    EXPECT_EQ(inlet_effect(net, 0, 0), Sign::Positive);
    EXPECT_THROW(inlet_effect(net, 0, 3), IndexError);
}

TEST(Classify, OutflowOfProductChargeIsNegative) {
    auto spec = load("parallel_cstr.json").spec();
    spec.inlet_weight_fractions(0, 0) = 0.0;
    spec.inlet_weight_fractions(2, 0) = 1.0;  // inlet 1 now feeds C, a product of R1
    const auto net = build_network(spec);
    EXPECT_EQ(inlet_effect(net, 0, 0), Sign::Negative);
    EXPECT_EQ(inlet_effect(net, 1, 0), Sign::Zero);
}

TEST(Classify, VerdictInvariantUnderReactionRelabeling) {
    const auto net = load("conditional.json");
    auto spec = net.spec();
    spec.stoich.row(0).swap(spec.stoich.row(1));
    std::swap(spec.rate_laws[0], spec.rate_laws[1]);
    const auto swapped = build_network(spec);
    const auto a = classify_system(net, FlowProfile::batch(0));
    const auto b = classify_system(swapped, FlowProfile::batch(0));
    EXPECT_EQ(a.system_verdict, b.system_verdict);
    EXPECT_EQ(a.pair(0, 1).verdict, b.pair(0, 1).verdict);
}

TEST(Classify, FailedGradientSignsGiveIndeterminate) {
    auto spec = load("series.json").spec();
    spec.rate_laws[0].denom = {{0, {0.1, 2.0}}};
    const auto net = build_network(spec);
    const auto pc = classify_pair(net, 0, 1);
    EXPECT_EQ(pc.verdict, Verdict::Indeterminate);
    EXPECT_EQ(pc.basis, Rule::GradientSignsUnverified);
    EXPECT_EQ(classify_system(net, FlowProfile::batch(0)).system_verdict, SystemVerdict::Indeterminate);
}

TEST(Classify, SharedSensitiveProductBlocksDisjointRule) {
    // A <=> C and B <=> C: disjoint reactants, but each consumes nothing the other produces
    // while both are inhibited by C.
    NetworkSpec spec;
    spec.species = {{"A", 1.0}, {"B", 1.0}, {"C", 1.0}};
    spec.stoich = Matrix(2, 3);
    spec.stoich << -1, 0, 1, 0, -1, 1;
    spec.inlet_weight_fractions = Matrix::Zero(3, 0);
    spec.n0 = Vector::Ones(3);
    RateLaw r1, r2;
    r1.k_f = r2.k_f = 1.0;
    r1.k_b = r2.k_b = 1.0;
    r1.fwd_exponents = {{0, 1.0}};
    r1.bwd_exponents = {{2, 1.0}};
    r2.fwd_exponents = {{1, 1.0}};
    r2.bwd_exponents = {{2, 1.0}};
    spec.rate_laws = {r1, r2};
    const auto net = build_network(spec);
    const auto pc = classify_pair(net, 0, 1);
    EXPECT_EQ(pc.verdict, Verdict::Indeterminate);
    EXPECT_FALSE(pc.note.empty());
    const auto rep = assemble_jacobian(net, ExtentState::origin(net), FlowProfile::batch(0), 1.0, 0.0);
    EXPECT_LT(rep.J(0, 1), 0.0);
}

TEST(Classify, ConditionalMarginsMatchJacobianEntries) {
    const auto net = load("conditional.json");
    std::mt19937_64 rng(17);
    for (int k = 0; k < 50; ++k) {
        const auto xs = support::random_admissible_state(net, rng);
        const auto chk = check_conditional(net, 0, 1, xs, 1.0);
        const auto rep = assemble_jacobian(net, xs, FlowProfile::batch(0), 1.0, 0.0);
        EXPECT_NEAR(chk.margin_ij, rep.J(0, 1), 1e-12);
        EXPECT_NEAR(chk.margin_ji, rep.J(1, 0), 1e-12);
        EXPECT_EQ(chk.satisfied, rep.J(0, 1) >= 0.0 && rep.J(1, 0) >= 0.0);
    }
}

TEST(Classify, ConditionalMarginByHand) {
    const auto net = load("conditional.json");
    Vector c(5);
    c << 0.5, 0.4, 1.2, 0.3, 0.1;
    const auto chk = check_conditional(net, 0, 1, c);
    // d r1/d x2 = k_b1 c_D - k_f1 c_B, d r2/d x1 = k_f2 (c_A - c_C)
    EXPECT_NEAR(chk.margin_ij, 2.0 * 0.3 - 1.0 * 0.4, 1e-15);
    EXPECT_NEAR(chk.margin_ji, 1.5 * (0.5 - 1.2), 1e-15);
    EXPECT_FALSE(chk.satisfied);
}

TEST(Classify, SaturatingLawKeepsSymbolicPartials) {
    auto spec = load("conditional.json").spec();
    spec.rate_laws[1].denom = {{0, {1.0, 1.0}}};
    const auto net = build_network(spec);
    const auto pc = classify_pair(net, 0, 1);
    ASSERT_EQ(pc.verdict, Verdict::ConditionallyCooperative);
    std::set<std::string> texts{pc.conditions[0].text(), pc.conditions[1].text()};
    EXPECT_TRUE(texts.count("dr2/dc_C >= dr2/dc_A")) << *texts.begin();
}

TEST(Classify, EnumStrings) {
    EXPECT_EQ(to_string(Sign::Mixed), "+/-");
    EXPECT_EQ(to_string(Sign::Zero), "0");
    EXPECT_EQ(basis_label(Rule::SharedReactantsDisjointProducts), "Proposition 2");
    EXPECT_EQ(basis_label(Rule::ReactantsMeetProducts), "Proposition 4");
}
