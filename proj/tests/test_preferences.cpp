#include <doctest.h>

#include <cmath>

#include "presale/preferences.hpp"
#include "test_support.hpp"

using namespace presale;

namespace {

const ModelParams reference_params = validate_params(10, 4, 0.5, 1.0, 0.5);

// Independent risk-neutral oracle: plain expected material payoff.
double expected_material_payoff(const GameNode& node, const Plan& plan,
                                std::string_view action) {
    double value = 0.0;
    for (const auto& [prob, outcome] : outcome_lottery(node, plan, action)) {
        value += prob * (outcome->consumer.value + outcome->consumer.money);
    }
    return value;
}

} // namespace

TEST_CASE("riskless utility: reference equal to the payoff leaves no loss") {
    const UtilityReport report = riskless_utility(
        Payoff2D{10, -7}, degenerate_reference(Payoff2D{10, -7}), reference_params);
    CHECK(report.total == doctest::Approx(3.0));
    CHECK(report.loss_value == 0.0);
    CHECK(report.loss_money == 0.0);
}

TEST_CASE("riskless utility: mixed value losses under a stochastic reference") {
    ReferenceDistribution ref{{{0.5, 10.0}, {0.5, 4.0}}, {{1.0, -7.0}}};
    const UtilityReport report = riskless_utility(Payoff2D{4, -7}, ref, reference_params);
    CHECK(report.value_part == doctest::Approx(1.0));  // 4 - 1 * 0.5 * 6
    CHECK(report.money_part == doctest::Approx(-7.0));
    CHECK(report.total == doctest::Approx(-6.0));
}

TEST_CASE("riskless utility: empty-handed consumer against a consumption reference") {
    ReferenceDistribution ref{{{0.5, 10.0}, {0.5, 4.0}}, {{1.0, 0.0}}};
    const UtilityReport report = riskless_utility(Payoff2D{0, 0}, ref, reference_params);
    CHECK(report.total == doctest::Approx(-7.0));  // -lambda_v * E[value]
}

TEST_CASE("canonical marginals merge equal support points and check weights") {
    const auto merged = canonical_marginal({{0.25, 4.0}, {0.5, 10.0}, {0.25, 4.0}});
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].point == 4.0);
    CHECK(merged[0].prob == doctest::Approx(0.5));
    CHECK_THROWS_AS(canonical_marginal({{0.5, 1.0}}), DomainError);
    CHECK_THROWS_AS(canonical_marginal({{-0.2, 1.0}, {1.2, 2.0}}), DomainError);
}

TEST_CASE("reference from a prepurchase plan at the advance node") {
    const GameNode tree = build_game_tree(reference_params, PriceOffer::committed(7, 10));
    const Plan plan{1, 1, 0};
    const ReferenceDistribution ref = reference_from_plan(
        plan, tree, *find_node(tree, node_advance), ReferenceTiming::recent_belief);
    REQUIRE(ref.value_marginal.size() == 2);
    CHECK(ref.value_marginal[0].point == 4.0);
    CHECK(ref.value_marginal[0].prob == doctest::Approx(0.5));
    CHECK(ref.value_marginal[1].point == 10.0);
    REQUIRE(ref.money_marginal.size() == 1);
    CHECK(ref.money_marginal[0].point == -7.0);
}

TEST_CASE("recent-belief reference at a spot node is the sub-plan lottery") {
    const GameNode tree = build_game_tree(reference_params, PriceOffer::committed(7, 10));
    const Plan plan{0, 1, 0};
    const ReferenceDistribution ref = reference_from_plan(
        plan, tree, *find_node(tree, node_spot_high), ReferenceTiming::recent_belief);
    REQUIRE(ref.value_marginal.size() == 1);
    CHECK(ref.value_marginal[0].point == 10.0);
    REQUIRE(ref.money_marginal.size() == 1);
    CHECK(ref.money_marginal[0].point == -10.0);
}

TEST_CASE("initial-belief reference at a spot node is the root lottery") {
    const GameNode tree = build_game_tree(reference_params, PriceOffer::committed(7, 10));
    const Plan plan{0, 1, 0};
    const ReferenceDistribution ref = reference_from_plan(
        plan, tree, *find_node(tree, node_spot_low), ReferenceTiming::initial_belief);
    REQUIRE(ref.value_marginal.size() == 2);
    CHECK(ref.value_marginal[0].point == 0.0);
    CHECK(ref.value_marginal[0].prob == doctest::Approx(0.5));
    CHECK(ref.value_marginal[1].point == 10.0);
    REQUIRE(ref.money_marginal.size() == 2);
    CHECK(ref.money_marginal[0].point == -10.0);
    CHECK(ref.money_marginal[1].point == 0.0);
}

TEST_CASE("expected utility reproduces the worked advance-stage values") {
    const GameNode tree = build_game_tree(reference_params, PriceOffer::committed(7, 10));
    const GameNode& advance = *find_node(tree, node_advance);
    const Plan plan{1, 1, 0};
    const double prepurchase = expected_utility(action_prepurchase, tree, advance, plan,
                                                reference_params,
                                                ReferenceTiming::recent_belief);
    CHECK(prepurchase == doctest::Approx(-1.5));
    const double wait = expected_utility(action_wait, tree, advance, plan, reference_params,
                                         ReferenceTiming::recent_belief);
    CHECK(wait == doctest::Approx(-4.25));
}

TEST_CASE("expected utility reproduces the worked spot-stage values") {
    const GameNode tree = build_game_tree(reference_params, PriceOffer::committed(7, 10));
    const GameNode& spot_high = *find_node(tree, node_spot_high);
    const Plan plan{0, 1, 0};
    CHECK(expected_utility(action_buy, tree, spot_high, plan, reference_params,
                           ReferenceTiming::recent_belief) == doctest::Approx(0.0));
    CHECK(expected_utility(action_reject, tree, spot_high, plan, reference_params,
                           ReferenceTiming::recent_belief) == doctest::Approx(-10.0));
    CHECK_THROWS_AS(expected_utility(action_wait, tree, spot_high, plan, reference_params,
                                     ReferenceTiming::recent_belief),
                    InvalidAction);
}

TEST_CASE("advance-stage utility of a prepurchase plan matches its closed form") {
    test::TestRng rng(21);
    for (int i = 0; i < 40; ++i) {
        const ModelParams params = test::random_params(rng);
        const double p1 = rng.uniform(0, 1.5 * params.high_value);
        const double p2 = rng.uniform(0, 2.0 * params.high_value);
        const GameNode tree = build_game_tree(params, PriceOffer::committed(p1, p2));
        const GameNode& advance = *find_node(tree, node_advance);
        const double q = params.prob_high;
        const double closed = params.expected_value() - p1 -
                              (1 - q) * q * params.lambda_value *
                                  (params.high_value - params.low_value);
        for (double buy_high : {0.0, 1.0}) {
            for (double buy_low : {0.0, 1.0}) {
                const Plan plan{1.0, buy_high, buy_low};
                const double got =
                    expected_utility(action_prepurchase, tree, advance, plan, params,
                                     ReferenceTiming::recent_belief);
                CHECK(std::abs(got - closed) <= 1e-9);
            }
        }
    }
}

TEST_CASE("advance-stage utility of wait plans matches the per-region closed forms") {
    test::TestRng rng(22);
    for (int i = 0; i < 40; ++i) {
        const ModelParams params = test::random_params(rng);
        const double q = params.prob_high;
        const double high = params.high_value;
        const double low = params.low_value;
        const double lv = params.lambda_value;
        const double lm = params.lambda_money;
        const double p1 = rng.uniform(0, 1.5 * high);

        // spot price under L: wait-then-always-buy
        const double cheap = rng.uniform(0, low);
        GameNode tree = build_game_tree(params, PriceOffer::committed(p1, cheap));
        double got = expected_utility(action_wait, tree, *find_node(tree, node_advance),
                                      Plan{0, 1, 1}, params, ReferenceTiming::recent_belief);
        double closed = params.expected_value() - cheap - (1 - q) * q * lv * (high - low);
        CHECK(std::abs(got - closed) <= 1e-9);

        // spot price in (L, H]: wait-then-buy-only-at-H
        const double mid = rng.uniform(std::nextafter(low, high), high);
        tree = build_game_tree(params, PriceOffer::committed(p1, mid));
        got = expected_utility(action_wait, tree, *find_node(tree, node_advance),
                               Plan{0, 1, 0}, params, ReferenceTiming::recent_belief);
        closed = q * high - q * mid - lv * (1 - q) * q * high - lm * (1 - q) * q * mid;
        CHECK(std::abs(got - closed) <= 1e-9);

        // spot price above H: never purchase
        const double steep = rng.uniform(high * 1.001, high * 3);
        tree = build_game_tree(params, PriceOffer::committed(p1, steep));
        got = expected_utility(action_wait, tree, *find_node(tree, node_advance),
                               Plan{0, 0, 0}, params, ReferenceTiming::recent_belief);
        CHECK(std::abs(got) <= 1e-9);
    }
}

TEST_CASE("zero loss aversion collapses to expected material payoff") {
    test::TestRng rng(23);
    for (int i = 0; i < 30; ++i) {
        const ModelParams base = test::random_params(rng);
        const ModelParams neutral =
            validate_params(base.high_value, base.low_value, base.prob_high, 0, 0);
        const PriceOffer offer = PriceOffer::committed(rng.uniform(0, 15), rng.uniform(0, 15));
        const GameNode tree = build_game_tree(neutral, offer);
        const Plan plan = test::random_plan(rng);
        for (const char* id : {"T1", "T2H", "T2L"}) {
            const GameNode& node = *find_node(tree, id);
            for (std::string_view action : node.actions()) {
                for (ReferenceTiming timing :
                     {ReferenceTiming::recent_belief, ReferenceTiming::initial_belief}) {
                    const double got =
                        expected_utility(action, tree, node, plan, neutral, timing);
                    CHECK(std::abs(got - expected_material_payoff(node, plan, action)) <=
                          1e-12);
                }
            }
        }
    }
}

TEST_CASE("expected utility is weakly decreasing in each loss-aversion coefficient") {
    test::TestRng rng(24);
    for (int i = 0; i < 25; ++i) {
        const ModelParams base = test::random_params(rng);
        const PriceOffer offer = PriceOffer::committed(rng.uniform(0, 15), rng.uniform(0, 15));
        const Plan plan = test::random_plan(rng);
        double previous_value = 1e300;
        double previous_money = 1e300;
        for (double lambda : {0.0, 0.7, 1.9, 3.0}) {
            const ModelParams more_value = validate_params(
                base.high_value, base.low_value, base.prob_high, lambda, base.lambda_money);
            const ModelParams more_money = validate_params(
                base.high_value, base.low_value, base.prob_high, base.lambda_value, lambda);
            const GameNode tree_value = build_game_tree(more_value, offer);
            const GameNode tree_money = build_game_tree(more_money, offer);
            const GameNode& advance_value = *find_node(tree_value, node_advance);
            const GameNode& advance_money = *find_node(tree_money, node_advance);
            const double eu_value = node_expected_utility(
                tree_value, advance_value, plan, more_value, ReferenceTiming::recent_belief);
            const double eu_money = node_expected_utility(
                tree_money, advance_money, plan, more_money, ReferenceTiming::recent_belief);
            CHECK(eu_value <= previous_value + 1e-12);
            CHECK(eu_money <= previous_money + 1e-12);
            previous_value = eu_value;
            previous_money = eu_money;
        }
    }
}

TEST_CASE("recent and initial references agree at the advance node") {
    test::TestRng rng(25);
    for (int i = 0; i < 30; ++i) {
        const ModelParams params = test::random_params(rng);
        const PriceOffer offer = PriceOffer::committed(rng.uniform(0, 15), rng.uniform(0, 15));
        const GameNode tree = build_game_tree(params, offer);
        const GameNode& advance = *find_node(tree, node_advance);
        const Plan plan = test::random_plan(rng);
        for (std::string_view action : {action_prepurchase, action_wait}) {
            const double recent = expected_utility(action, tree, advance, plan, params,
                                                   ReferenceTiming::recent_belief);
            const double initial = expected_utility(action, tree, advance, plan, params,
                                                    ReferenceTiming::initial_belief);
            CHECK(std::abs(recent - initial) <= 1e-12);
        }
    }
}

TEST_CASE("initial-belief utility of waiting chains through the spot nodes") {
    test::TestRng rng(26);
    for (int i = 0; i < 30; ++i) {
        const ModelParams params = test::random_params(rng);
        const PriceOffer offer = PriceOffer::committed(rng.uniform(0, 15), rng.uniform(0, 15));
        const GameNode tree = build_game_tree(params, offer);
        const GameNode& advance = *find_node(tree, node_advance);
        const Plan plan{0.0, rng.uniform01(), rng.uniform01()};
        const double at_advance = node_expected_utility(tree, advance, plan, params,
                                                        ReferenceTiming::initial_belief);
        const double chained =
            params.prob_high * node_expected_utility(tree, *find_node(tree, node_spot_high),
                                                     plan, params,
                                                     ReferenceTiming::initial_belief) +
            (1 - params.prob_high) *
                node_expected_utility(tree, *find_node(tree, node_spot_low), plan, params,
                                      ReferenceTiming::initial_belief);
        CHECK(std::abs(at_advance - chained) <= 1e-9);
    }
}

TEST_CASE("narrow bracketing: money rescaling moves the money part linearly") {
    test::TestRng rng(27);
    for (int i = 0; i < 30; ++i) {
        const ModelParams params = test::random_params(rng);
        const Payoff2D payoff{rng.uniform(0, 10), -rng.uniform(0, 10)};
        ReferenceDistribution ref{
            canonical_marginal({{0.4, rng.uniform(0, 12)}, {0.6, rng.uniform(0, 12)}}),
            canonical_marginal({{0.3, -rng.uniform(0, 12)}, {0.7, -rng.uniform(0, 12)}})};
        const double scale = rng.uniform(0.1, 5.0);
        ReferenceDistribution scaled = ref;
        for (auto& entry : scaled.money_marginal) {
            entry.point *= scale;
        }
        const UtilityReport base = riskless_utility(payoff, ref, params);
        const UtilityReport rescaled =
            riskless_utility(Payoff2D{payoff.value, payoff.money * scale}, scaled, params);
        CHECK(std::abs(rescaled.money_part - scale * base.money_part) <= 1e-9);
        CHECK(std::abs(rescaled.value_part - base.value_part) <= 1e-12);
        CHECK(base.loss_value >= 0.0);
        CHECK(base.loss_money >= 0.0);
    }
}

TEST_CASE("standard utilities: risk-neutral sums, CARA transforms") {
    TerminalOutcome outcome;
    outcome.consumer = Payoff2D{10, -7};
    CHECK(standard_utility(outcome, RiskNeutral{}) == doctest::Approx(3.0));
    outcome.consumer = Payoff2D{0, 0};
    CHECK(standard_utility(outcome, RiskAverse{1.0}) == doctest::Approx(0.0));
    outcome.consumer = Payoff2D{4, -7};
    CHECK(standard_utility(outcome, RiskAverse{1.0}) ==
          doctest::Approx(1.0 - std::exp(3.0)));  // ~ -19.0855
    CHECK_THROWS_AS(standard_utility(outcome, KRRecentBelief{}), DomainError);
    CHECK(cara_value(2.0, 0.0) == 0.0);
    CHECK(cara_value(2.0, 1.0) > cara_value(2.0, 0.5));
    CHECK_THROWS_AS(cara_value(0.0, 1.0), DomainError);
}
