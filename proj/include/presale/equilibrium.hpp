#pragma once

#include <string>
#include <vector>

#include "presale/model.hpp"
#include "presale/preferences.hpp"

namespace presale {

enum class SpotAction { buy, reject };

inline std::string_view to_string(SpotAction a) {
    return a == SpotAction::buy ? action_buy : action_reject;
}

/// Which spot actions can be supported by a credible degenerate sub-plan.
struct SpotActionSet {
    bool buy_credible = false;
    bool reject_credible = false;
};

/// A solved consumer plan for one offer.
struct EquilibriumResult {
    Plan plan;
    double t1_expected_utility = 0.0;
    std::vector<std::string> credible_nodes;  ///< decision nodes where the plan is credible
    SpotAction spot_action_high = SpotAction::reject;
    SpotAction spot_action_low = SpotAction::reject;
    double seller_expected_profit = 0.0;
    PreferenceModel preference;

    bool prescribes_prepurchase() const {
        return plan.prepurchase_prob > 1.0 - comparison_epsilon;
    }
};

/// True iff every action the plan takes with positive probability at `node`
/// maximizes expected utility there (within tolerance), with the reference
/// distribution generated by the plan itself under `timing`.
bool is_credible_at(const GameNode& root, const GameNode& node, const Plan& plan,
                    const ModelParams& params, ReferenceTiming timing);

/// The spot-stage consumer's preferred credible action after learning the
/// state: the best credible degenerate sub-plan, ties to buy.  Works out to
/// "buy iff the spot price does not exceed the realized value", independent
/// of both loss-aversion coefficients.
SpotAction spot_ppe_action(State state, double spot_price, const ModelParams& params);

/// Credibility of each degenerate sub-plan at a spot node, by direct
/// utility comparison against the deviation.
SpotActionSet spot_credible_action_set(State state, double spot_price,
                                       const ModelParams& params);

/// Preferred Personal Equilibrium over degenerate plans.
///
/// recent_belief: the spot sub-plan is fixed state by state to the spot
/// consumer's preferred credible action; of the two remaining plans, those
/// credible at the advance node survive, and the one with the higher
/// advance-stage expected utility wins (ties to the purchasing, then the
/// earlier-purchasing plan).
///
/// initial_belief: all eight degenerate plans are screened for credibility
/// at every decision node under the root reference; the survivor with the
/// highest advance-stage expected utility wins, same tie-break.
///
/// Throws NoEquilibrium when no candidate survives the credibility screen.
EquilibriumResult solve_ppe(const ModelParams& params, const PriceOffer& offer,
                            ReferenceTiming timing);

/// Backward induction for a standard risk-neutral or CARA risk-averse
/// consumer on material payoffs; ties resolve to purchase.
EquilibriumResult solve_standard(const ModelParams& params, const PriceOffer& offer,
                                 const PreferenceModel& pref);

/// Dispatches to solve_ppe or solve_standard on the preference tag.
EquilibriumResult solve_offer(const ModelParams& params, const PriceOffer& offer,
                              const PreferenceModel& pref);

/// Largest advance price (within 1e-7) at which the solved plan prescribes
/// prepurchase, holding the spot regime fixed; bisection over
/// [0, H*(2 + lambda_value + lambda_money)].  Throws NotMonotone when the
/// sampled purchase region is not downward closed.
double bisect_cutoff_p1(const SpotRegime& spot, const ModelParams& params,
                        const PreferenceModel& pref);

/// Audits the claim that mixing never helps: true iff no non-degenerate
/// plan on the step-spaced probability grid is credible at every decision
/// node *and* strictly exceeds the PPE's advance-stage expected utility.
/// Degenerate corners are skipped (they are the solver's own candidates,
/// and a never-purchase equilibrium may legitimately sit above the played
/// one).  Requires step in (0, 0.5].
bool grid_mixed_plan_check(const ModelParams& params, const PriceOffer& offer, double step,
                           ReferenceTiming timing);

} // namespace presale
