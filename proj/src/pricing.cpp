#include "presale/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "presale/preferences.hpp"

namespace presale {

std::string_view to_string(CutoffRegion region) {
    switch (region) {
        case CutoffRegion::below_low: return "below_L";
        case CutoffRegion::mid_low: return "mid_low";
        case CutoffRegion::mid_high: return "mid_high";
        case CutoffRegion::above_high: return "above_H";
    }
    return "unknown";
}

double credible_prepurchase_bound(double spot_price, const ModelParams& params) {
    const double q = params.prob_high;
    const double low = params.low_value;
    const double lv = params.lambda_value;
    const double lm = params.lambda_money;
    if (spot_price <= low) {
        return spot_price;
    }
    if (spot_price > params.high_value) {
        const double q2 = q * q;
        return params.expected_value() + lv * q2 * params.high_value +
               lv * (1.0 - q2) * low;
    }
    // Mid-low branch: (lv+1)(1-q)L + q p2.  A circulating variant carries an
    // extra factor of L on the first term; it is dimensionally inconsistent
    // and the bisection oracle rejects it, so this form is authoritative.
    // When (lv+1)L > H this branch runs all the way up to H.
    if (spot_price <= (lv + 1.0) * low) {
        return (lv + 1.0) * (1.0 - q) * low + q * spot_price;
    }
    return ((lv + 1.0) * (1.0 - q) * low + (lm + 1.0) * q * spot_price) / (lm * q + 1.0);
}

double preferred_prepurchase_bound(double spot_price, const ModelParams& params) {
    const double q = params.prob_high;
    const double low = params.low_value;
    const double lv = params.lambda_value;
    const double lm = params.lambda_money;
    if (spot_price <= low) {
        return spot_price;
    }
    if (spot_price <= params.high_value) {
        return (1.0 - q) * low + lv * q * (1.0 - q) * low + q * spot_price +
               lm * (1.0 - q) * q * spot_price;
    }
    return params.expected_value() -
           lv * (1.0 - q) * q * (params.high_value - params.low_value);
}

CutoffBreakdown cutoff_advance_price(double spot_price, const ModelParams& params) {
    CutoffBreakdown breakdown;
    breakdown.pe_bound = credible_prepurchase_bound(spot_price, params);
    breakdown.preferred_bound = preferred_prepurchase_bound(spot_price, params);
    breakdown.cutoff = std::min(breakdown.pe_bound, breakdown.preferred_bound);
    if (spot_price <= params.low_value) {
        breakdown.region = CutoffRegion::below_low;
    } else if (spot_price > params.high_value) {
        breakdown.region = CutoffRegion::above_high;
    } else if (spot_price <= (params.lambda_value + 1.0) * params.low_value) {
        breakdown.region = CutoffRegion::mid_low;
    } else {
        breakdown.region = CutoffRegion::mid_high;
    }
    return breakdown;
}

PricingRecommendation optimal_pricing_commit(const ModelParams& params) {
    const double q = params.prob_high;
    const double high = params.high_value;
    const double low = params.low_value;
    const double lv = params.lambda_value;
    const double lm = params.lambda_money;
    const double expected = params.expected_value();
    const double credible_cap = (expected + q * lm * high + (1.0 - q) * lv * low) /
                                (1.0 + q * lm);
    const double preferred_cap =
        expected + lv * q * (1.0 - q) * low + lm * q * (1.0 - q) * high;
    const double advance = std::min(credible_cap, preferred_cap);
    return PricingRecommendation{PriceOffer::committed(advance, high), advance};
}

PricingRecommendation optimal_pricing_flexible(const ModelParams& params) {
    const double q = params.prob_high;
    const double lm = params.lambda_money;
    const double advance =
        (params.expected_value() + q * lm * params.high_value) / (1.0 + q * lm);
    return PricingRecommendation{
        PriceOffer::flexible(advance, params.high_value, params.low_value), advance};
}

CommitmentDecision commitment_decision(const ModelParams& params) {
    CommitmentDecision decision;
    decision.committed_profit = optimal_pricing_commit(params).expected_profit;
    decision.flexible_profit = optimal_pricing_flexible(params).expected_profit;
    decision.choice = decision.gap() > comparison_epsilon ? CommitmentChoice::commit
                                                          : CommitmentChoice::indifferent;
    return decision;
}

double static_reference_bound(const ModelParams& params) {
    const double q = params.prob_high;
    return params.expected_value() -
           q * (1.0 - q) * params.lambda_value * (params.high_value - params.low_value);
}

double single_stage_cutoff(const ModelParams& params) {
    const double q = params.prob_high;
    return params.expected_value() -
           (1.0 - q) * params.lambda_value * q * (params.high_value - params.low_value);
}

double risk_averse_cutoff(const ModelParams& params, double curvature) {
    const double q = params.prob_high;
    auto indifference = [&](double p1) {
        return q * cara_value(curvature, params.high_value - p1) +
               (1.0 - q) * cara_value(curvature, params.low_value - p1);
    };
    double lo = 0.0, hi = params.high_value;
    const double at_lo = indifference(lo);
    const double at_hi = indifference(hi);
    if (!(at_lo >= 0.0) || !(at_hi <= 0.0)) {
        throw BracketError("risk-averse indifference equation has no sign change on [0, H]");
    }
    // f is strictly decreasing in p1, so plain bisection converges.
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (indifference(mid) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace presale
