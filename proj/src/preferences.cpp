#include "presale/preferences.hpp"

#include <algorithm>
#include <cmath>

namespace presale {

namespace {

// Support points closer than this are treated as the same reference point
// when collapsing marginals to canonical form.
constexpr double merge_tolerance = 1e-12;

} // namespace

bool is_loss_averse(const PreferenceModel& pref) {
    return std::holds_alternative<KRRecentBelief>(pref) ||
           std::holds_alternative<KRInitialBelief>(pref);
}

ReferenceTiming timing_of(const PreferenceModel& pref) {
    if (std::holds_alternative<KRRecentBelief>(pref)) {
        return ReferenceTiming::recent_belief;
    }
    if (std::holds_alternative<KRInitialBelief>(pref)) {
        return ReferenceTiming::initial_belief;
    }
    throw DomainError("standard preferences carry no reference timing");
}

std::string_view preference_name(const PreferenceModel& pref) {
    if (std::holds_alternative<KRRecentBelief>(pref)) return "kr_recent";
    if (std::holds_alternative<KRInitialBelief>(pref)) return "kr_initial";
    if (std::holds_alternative<RiskNeutral>(pref)) return "risk_neutral";
    return "risk_averse";
}

std::vector<WeightedPoint> canonical_marginal(std::vector<WeightedPoint> marginal) {
    std::sort(marginal.begin(), marginal.end(),
              [](const WeightedPoint& a, const WeightedPoint& b) { return a.point < b.point; });
    std::vector<WeightedPoint> merged;
    merged.reserve(marginal.size());
    double total = 0.0;
    for (const auto& entry : marginal) {
        if (!(entry.prob >= 0.0) || !std::isfinite(entry.point)) {
            throw DomainError("reference marginal needs finite points and non-negative weights");
        }
        total += entry.prob;
        if (!merged.empty() && entry.point - merged.back().point <= merge_tolerance) {
            merged.back().prob += entry.prob;
        } else {
            merged.push_back(entry);
        }
    }
    if (std::abs(total - 1.0) > comparison_epsilon) {
        throw DomainError("reference marginal weights must sum to one");
    }
    return merged;
}

ReferenceDistribution degenerate_reference(const Payoff2D& point) {
    return ReferenceDistribution{{{1.0, point.value}}, {{1.0, point.money}}};
}

ReferenceDistribution reference_from_lottery(const std::vector<WeightedOutcome>& lottery) {
    std::vector<WeightedPoint> value, money;
    value.reserve(lottery.size());
    money.reserve(lottery.size());
    for (const auto& [prob, outcome] : lottery) {
        value.push_back({prob, outcome->consumer.value});
        money.push_back({prob, outcome->consumer.money});
    }
    return ReferenceDistribution{canonical_marginal(std::move(value)),
                                 canonical_marginal(std::move(money))};
}

namespace {

// Expected shortfall of k against the marginal: sum of p * max(r - k, 0).
double expected_loss(double k, const std::vector<WeightedPoint>& marginal) {
    double loss = 0.0;
    for (const auto& [prob, point] : marginal) {
        if (point > k) {
            loss += prob * (point - k);
        }
    }
    return loss;
}

} // namespace

UtilityReport riskless_utility(const Payoff2D& k, const ReferenceDistribution& ref,
                               const ModelParams& params) {
    UtilityReport report;
    report.loss_value = expected_loss(k.value, ref.value_marginal);
    report.loss_money = expected_loss(k.money, ref.money_marginal);
    report.value_part = k.value - params.lambda_value * report.loss_value;
    report.money_part = k.money - params.lambda_money * report.loss_money;
    report.total = report.value_part + report.money_part;
    return report;
}

ReferenceDistribution reference_from_plan(const Plan& plan, const GameNode& root,
                                          const GameNode& node, ReferenceTiming timing) {
    if (!node.is_decision()) {
        throw InvalidAction("reference is defined at consumer decision nodes only");
    }
    const GameNode& anchor = timing == ReferenceTiming::initial_belief ? root : node;
    return reference_from_lottery(outcome_lottery(anchor, plan));
}

double expected_utility(std::string_view action, const GameNode& root, const GameNode& node,
                        const Plan& plan, const ModelParams& params, ReferenceTiming timing) {
    const ReferenceDistribution ref = reference_from_plan(plan, root, node, timing);
    double eu = 0.0;
    for (const auto& [prob, outcome] : outcome_lottery(node, plan, action)) {
        eu += prob * riskless_utility(outcome->consumer, ref, params).total;
    }
    return eu;
}

double node_expected_utility(const GameNode& root, const GameNode& node, const Plan& plan,
                             const ModelParams& params, ReferenceTiming timing) {
    const ReferenceDistribution ref = reference_from_plan(plan, root, node, timing);
    double eu = 0.0;
    for (std::string_view action : node.actions()) {
        const double weight = plan.action_prob(node, action);
        if (weight <= 0.0) {
            continue;
        }
        double action_eu = 0.0;
        for (const auto& [prob, outcome] : outcome_lottery(node, plan, action)) {
            action_eu += prob * riskless_utility(outcome->consumer, ref, params).total;
        }
        eu += weight * action_eu;
    }
    return eu;
}

double cara_value(double curvature, double x) {
    if (curvature <= 0.0) {
        throw DomainError("CARA curvature must be positive");
    }
    return (1.0 - std::exp(-curvature * x)) / curvature;
}

double standard_utility(const TerminalOutcome& outcome, const PreferenceModel& pref) {
    const double material = outcome.consumer.value + outcome.consumer.money;
    if (std::holds_alternative<RiskNeutral>(pref)) {
        return material;
    }
    if (const auto* averse = std::get_if<RiskAverse>(&pref)) {
        return cara_value(averse->curvature, material);
    }
    throw DomainError("standard_utility expects a risk_neutral or risk_averse preference");
}

} // namespace presale
