#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "presale/model.hpp"

namespace presale {

/// When the consumer's reference distribution is (re)built.
///   recent_belief  - from the belief held at the start of the current stage
///   initial_belief - frozen at the belief formed at the advance stage
enum class ReferenceTiming { recent_belief, initial_belief };

struct KRRecentBelief {};
struct KRInitialBelief {};
struct RiskNeutral {};
/// Exponential (CARA) utility v(x) = (1 - exp(-a x)) / a: strictly
/// increasing, strictly concave, v(0) = 0, defined on all reals.
struct RiskAverse {
    double curvature = 1.0;
};

using PreferenceModel = std::variant<KRRecentBelief, KRInitialBelief, RiskNeutral, RiskAverse>;

bool is_loss_averse(const PreferenceModel& pref);
/// Reference timing of a KR preference; throws DomainError for standard ones.
ReferenceTiming timing_of(const PreferenceModel& pref);
std::string_view preference_name(const PreferenceModel& pref);

struct WeightedPoint {
    double prob;
    double point;
};

/// Per-dimension marginal distributions over reference points.  Losses are
/// narrow-bracketed, so the two marginals are all the utility ever needs.
/// Canonical form: support ascending, equal points merged, probabilities
/// summing to one.
struct ReferenceDistribution {
    std::vector<WeightedPoint> value_marginal;
    std::vector<WeightedPoint> money_marginal;
};

/// Sorts, merges equal support points and checks that probabilities are
/// non-negative and sum to 1 (within tolerance).  Throws DomainError.
std::vector<WeightedPoint> canonical_marginal(std::vector<WeightedPoint> marginal);

/// Reference distribution with both marginals degenerate at `point`.
ReferenceDistribution degenerate_reference(const Payoff2D& point);

/// Marginals of a terminal-outcome lottery.
ReferenceDistribution reference_from_lottery(const std::vector<WeightedOutcome>& lottery);

/// Decomposition of Equation-style riskless utility:
///   total = value_part + money_part
///   value_part = k_value - lambda_value * loss_value
///   money_part = k_money - lambda_money * loss_money
struct UtilityReport {
    double total = 0.0;
    double value_part = 0.0;
    double money_part = 0.0;
    double loss_value = 0.0;
    double loss_money = 0.0;
};

/// Riskless utility of payoff `k` against a stochastic reference point:
/// in each dimension, k minus lambda times the expected shortfall
/// max(r - k, 0) over the reference marginal.  There is no gain term.
UtilityReport riskless_utility(const Payoff2D& k, const ReferenceDistribution& ref,
                               const ModelParams& params);

/// Reference distribution the plan generates at a decision node.
///
/// recent_belief: the marginals of the plan's outcome distribution
/// conditional on the queried node.  At a spot node this is the plan's own
/// sub-plan there, which also serves as the conditional belief after an
/// off-path "wait" (the consumer is assumed to keep her sub-plan rather
/// than invent a new one after her own deviation).
///
/// initial_belief: the marginals conditional on the root advance node,
/// whatever node is queried.
ReferenceDistribution reference_from_plan(const Plan& plan, const GameNode& root,
                                          const GameNode& node, ReferenceTiming timing);

/// Expected utility of taking `action` at `node` when the plan governs all
/// onward behavior and pins the reference distribution per `timing`.
/// Throws InvalidAction when the action is not available at the node.
double expected_utility(std::string_view action, const GameNode& root, const GameNode& node,
                        const Plan& plan, const ModelParams& params, ReferenceTiming timing);

/// Expected utility at the node itself: the plan's own action mixture fed
/// through expected_utility.
double node_expected_utility(const GameNode& root, const GameNode& node, const Plan& plan,
                             const ModelParams& params, ReferenceTiming timing);

/// v(x) = (1 - exp(-a x)) / a.
double cara_value(double curvature, double x);

/// Utility a standard (risk-neutral or risk-averse) consumer attaches to a
/// terminal outcome: value + money, or v(value + money).
double standard_utility(const TerminalOutcome& outcome, const PreferenceModel& pref);

} // namespace presale
