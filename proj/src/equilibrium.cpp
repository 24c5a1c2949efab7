#include "presale/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace presale {

namespace {

// Expected utility of one action against an already-built reference.
double action_utility(const GameNode& node, std::string_view action, const Plan& plan,
                      const ReferenceDistribution& ref, const ModelParams& params) {
    double eu = 0.0;
    for (const auto& [prob, outcome] : outcome_lottery(node, plan, action)) {
        eu += prob * riskless_utility(outcome->consumer, ref, params).total;
    }
    return eu;
}

// Purchase rank for tie-breaking: buying at the advance stage beats buying
// on the spot market, which beats never buying.
int purchase_rank(const Plan& plan) {
    if (plan.prepurchase_prob > comparison_epsilon) {
        return 0;
    }
    if (plan.buy_high_prob > comparison_epsilon || plan.buy_low_prob > comparison_epsilon) {
        return 1;
    }
    return 2;
}

struct Candidate {
    Plan plan;
    double t1_utility;
};

// Best candidate by advance-stage utility; ties within tolerance go to the
// purchasing plan, then to the earlier purchase, then to enumeration order.
const Candidate* pick_preferred(const std::vector<Candidate>& candidates) {
    const Candidate* best = nullptr;
    for (const auto& candidate : candidates) {
        if (best == nullptr || candidate.t1_utility > best->t1_utility + comparison_epsilon ||
            (candidate.t1_utility >= best->t1_utility - comparison_epsilon &&
             purchase_rank(candidate.plan) < purchase_rank(best->plan))) {
            best = &candidate;
        }
    }
    return best;
}

EquilibriumResult finish_result(const GameNode& tree, const Plan& plan, double t1_utility,
                                const ModelParams& params, ReferenceTiming timing,
                                const PreferenceModel& pref) {
    EquilibriumResult result;
    result.plan = plan;
    result.t1_expected_utility = t1_utility;
    result.spot_action_high =
        plan.buy_high_prob > comparison_epsilon ? SpotAction::buy : SpotAction::reject;
    result.spot_action_low =
        plan.buy_low_prob > comparison_epsilon ? SpotAction::buy : SpotAction::reject;
    result.seller_expected_profit = expected_seller_profit(tree, plan);
    result.preference = pref;
    for (std::string_view id : {node_advance, node_spot_high, node_spot_low}) {
        if (is_credible_at(tree, *find_node(tree, id), plan, params, timing)) {
            result.credible_nodes.emplace_back(id);
        }
    }
    return result;
}

std::string describe_instance(const ModelParams& params, const PriceOffer& offer) {
    std::ostringstream text;
    text << "H=" << params.high_value << " L=" << params.low_value << " q=" << params.prob_high
         << " lambda_v=" << params.lambda_value << " lambda_m=" << params.lambda_money
         << " p1=" << offer.advance_price << " p2_H=" << offer.spot_price(State::high)
         << " p2_L=" << offer.spot_price(State::low);
    return text.str();
}

} // namespace

bool is_credible_at(const GameNode& root, const GameNode& node, const Plan& plan,
                    const ModelParams& params, ReferenceTiming timing) {
    if (!node.is_decision()) {
        throw InvalidAction("credibility is defined at consumer decision nodes only");
    }
    const ReferenceDistribution ref = reference_from_plan(plan, root, node, timing);
    const auto actions = node.actions();
    double best = -std::numeric_limits<double>::infinity();
    std::array<double, 2> utilities{};
    for (std::size_t i = 0; i < actions.size(); ++i) {
        utilities[i] = action_utility(node, actions[i], plan, ref, params);
        best = std::max(best, utilities[i]);
    }
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (plan.action_prob(node, actions[i]) > comparison_epsilon &&
            utilities[i] < best - comparison_epsilon) {
            return false;
        }
    }
    return true;
}

SpotAction spot_ppe_action(State state, double spot_price, const ModelParams& params) {
    const SpotActionSet credible = spot_credible_action_set(state, spot_price, params);
    if (credible.buy_credible) {
        // Utility of carrying out a degenerate sub-plan equals the material
        // payoff, so buy beats reject exactly when the price is covered by
        // the realized value; the tie goes to the purchase.
        const double buy_value = params.state_value(state) - spot_price;
        if (!credible.reject_credible || buy_value >= -comparison_epsilon) {
            return SpotAction::buy;
        }
    }
    return SpotAction::reject;
}

SpotActionSet spot_credible_action_set(State state, double spot_price,
                                       const ModelParams& params) {
    const GameNode tree = build_game_tree(params, PriceOffer::committed(0.0, spot_price));
    const GameNode& node =
        *find_node(tree, state == State::high ? node_spot_high : node_spot_low);
    const double buy = 1.0;
    Plan buy_plan{0.0, buy, buy};
    Plan reject_plan{0.0, 0.0, 0.0};
    return SpotActionSet{is_credible_at(tree, node, buy_plan, params,
                                        ReferenceTiming::recent_belief),
                         is_credible_at(tree, node, reject_plan, params,
                                        ReferenceTiming::recent_belief)};
}

EquilibriumResult solve_ppe(const ModelParams& params, const PriceOffer& offer,
                            ReferenceTiming timing) {
    const GameNode tree = build_game_tree(params, offer);
    const GameNode& advance = *find_node(tree, node_advance);
    std::vector<Candidate> survivors;

    if (timing == ReferenceTiming::recent_belief) {
        // The spot consumer rebuilds her reference when she moves, so her
        // sub-plan is pinned state by state before the advance stage is
        // examined.
        const double buy_high =
            spot_ppe_action(State::high, offer.spot_price(State::high), params) ==
                    SpotAction::buy
                ? 1.0
                : 0.0;
        const double buy_low =
            spot_ppe_action(State::low, offer.spot_price(State::low), params) == SpotAction::buy
                ? 1.0
                : 0.0;
        for (double advance_prob : {1.0, 0.0}) {
            Plan plan{advance_prob, buy_high, buy_low};
            if (is_credible_at(tree, advance, plan, params, timing)) {
                survivors.push_back(
                    {plan, node_expected_utility(tree, advance, plan, params, timing)});
            }
        }
    } else {
        // Frozen root reference: a preferred plan is simply the credible-
        // everywhere plan with the highest advance-stage expected utility.
        for (const Plan& plan : enumerate_degenerate_plans()) {
            bool credible = true;
            for (std::string_view id : {node_advance, node_spot_high, node_spot_low}) {
                if (!is_credible_at(tree, *find_node(tree, id), plan, params, timing)) {
                    credible = false;
                    break;
                }
            }
            if (credible) {
                survivors.push_back(
                    {plan, node_expected_utility(tree, advance, plan, params, timing)});
            }
        }
    }

    if (survivors.empty()) {
        throw NoEquilibrium("no degenerate plan is credible at every decision node (" +
                            describe_instance(params, offer) + ")");
    }
    const Candidate* best = pick_preferred(survivors);
    PreferenceModel pref = timing == ReferenceTiming::recent_belief
                               ? PreferenceModel{KRRecentBelief{}}
                               : PreferenceModel{KRInitialBelief{}};
    return finish_result(tree, best->plan, best->t1_utility, params, timing, pref);
}

EquilibriumResult solve_standard(const ModelParams& params, const PriceOffer& offer,
                                 const PreferenceModel& pref) {
    if (is_loss_averse(pref)) {
        throw DomainError("solve_standard expects a risk_neutral or risk_averse preference");
    }
    const GameNode tree = build_game_tree(params, offer);

    // Spot stage: buy whenever it is weakly better than walking away.
    Plan plan{0.0, 0.0, 0.0};
    double wait_value = 0.0;
    for (State state : {State::high, State::low}) {
        const GameNode& node =
            *find_node(tree, state == State::high ? node_spot_high : node_spot_low);
        const double buy_utility = standard_utility(node.edges[0].child->outcome(), pref);
        const double reject_utility = standard_utility(node.edges[1].child->outcome(), pref);
        const bool buy = buy_utility >= reject_utility - comparison_epsilon;
        (state == State::high ? plan.buy_high_prob : plan.buy_low_prob) = buy ? 1.0 : 0.0;
        wait_value += params.state_prob(state) * std::max(buy_utility, reject_utility);
    }

    // Advance stage: compare against the wait continuation, ties to purchase.
    double prepurchase_value = 0.0;
    const GameNode& advance = *find_node(tree, node_advance);
    for (const auto& [prob, outcome] : outcome_lottery(advance, plan, action_prepurchase)) {
        prepurchase_value += prob * standard_utility(*outcome, pref);
    }
    const bool prepurchase = prepurchase_value >= wait_value - comparison_epsilon;
    plan.prepurchase_prob = prepurchase ? 1.0 : 0.0;

    EquilibriumResult result;
    result.plan = plan;
    result.t1_expected_utility = prepurchase ? prepurchase_value : wait_value;
    result.spot_action_high =
        plan.buy_high_prob > 0.5 ? SpotAction::buy : SpotAction::reject;
    result.spot_action_low = plan.buy_low_prob > 0.5 ? SpotAction::buy : SpotAction::reject;
    result.seller_expected_profit = expected_seller_profit(tree, plan);
    result.preference = pref;
    result.credible_nodes = {std::string(node_advance), std::string(node_spot_high),
                             std::string(node_spot_low)};
    return result;
}

EquilibriumResult solve_offer(const ModelParams& params, const PriceOffer& offer,
                              const PreferenceModel& pref) {
    if (is_loss_averse(pref)) {
        return solve_ppe(params, offer, timing_of(pref));
    }
    return solve_standard(params, offer, pref);
}

double bisect_cutoff_p1(const SpotRegime& spot, const ModelParams& params,
                        const PreferenceModel& pref) {
    const double upper =
        params.high_value * (2.0 + params.lambda_value + params.lambda_money);
    auto purchases = [&](double p1) {
        return solve_offer(params, PriceOffer::with_regime(p1, spot), pref)
            .prescribes_prepurchase();
    };

    // Coarse scan: the purchase region must be downward closed in p1.
    constexpr int scan_points = 9;
    std::array<bool, scan_points> scan{};
    for (int i = 0; i < scan_points; ++i) {
        scan[i] = purchases(upper * i / (scan_points - 1));
    }
    for (int i = 0; i + 1 < scan_points; ++i) {
        for (int j = i + 1; j < scan_points; ++j) {
            if (!scan[i] && scan[j]) {
                std::ostringstream detail;
                detail << "purchase region is not downward closed: no purchase at p1="
                       << upper * i / (scan_points - 1) << " but purchase at p1="
                       << upper * j / (scan_points - 1);
                throw NotMonotone(detail.str());
            }
        }
    }
    if (!scan.front()) {
        return 0.0;
    }
    if (scan.back()) {
        throw NotMonotone("purchase persists at the top of the bisection bracket p1=" +
                          std::to_string(upper));
    }

    double lo = 0.0, hi = upper;
    for (int iteration = 0; iteration < 60 && hi - lo > 1e-12; ++iteration) {
        const double mid = 0.5 * (lo + hi);
        (purchases(mid) ? lo : hi) = mid;
    }
    return lo;
}

bool grid_mixed_plan_check(const ModelParams& params, const PriceOffer& offer, double step,
                           ReferenceTiming timing) {
    if (!(step > 0.0) || step > 0.5) {
        throw DomainError("grid step must lie in (0, 0.5]");
    }
    const EquilibriumResult ppe = solve_ppe(params, offer, timing);
    const GameNode tree = build_game_tree(params, offer);
    const GameNode& advance = *find_node(tree, node_advance);
    const GameNode& spot_high = *find_node(tree, node_spot_high);
    const GameNode& spot_low = *find_node(tree, node_spot_low);

    std::vector<double> grid;
    for (int i = 0; i * step < 1.0 - 1e-9; ++i) {
        grid.push_back(i * step);
    }
    grid.push_back(1.0);

    auto degenerate = [](double p) { return p <= 1e-12 || p >= 1.0 - 1e-12; };
    for (double advance_prob : grid) {
        for (double buy_high : grid) {
            for (double buy_low : grid) {
                const Plan plan{advance_prob, buy_high, buy_low};
                // Degenerate corners are the solver's own candidate set; the
                // audit targets plans that mix somewhere.  (A degenerate
                // never-purchase equilibrium can legitimately carry a higher
                // utility than the equilibrium actually played.)
                if (degenerate(advance_prob) && degenerate(buy_high) &&
                    degenerate(buy_low)) {
                    continue;
                }
                if (!is_credible_at(tree, advance, plan, params, timing) ||
                    !is_credible_at(tree, spot_high, plan, params, timing) ||
                    !is_credible_at(tree, spot_low, plan, params, timing)) {
                    continue;
                }
                const double utility =
                    node_expected_utility(tree, advance, plan, params, timing);
                if (utility > ppe.t1_expected_utility + comparison_epsilon) {
                    return false;
                }
            }
        }
    }
    return true;
}

} // namespace presale
