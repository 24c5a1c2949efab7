#pragma once

#include <string_view>

#include "presale/model.hpp"

namespace presale {

/// Spot-price region of the piecewise cutoff function.
enum class CutoffRegion { below_low, mid_low, mid_high, above_high };

std::string_view to_string(CutoffRegion region);

/// The two advance-price constraints and their minimum.
struct CutoffBreakdown {
    double pe_bound = 0.0;         ///< highest p1 at which prepurchase stays credible
    double preferred_bound = 0.0;  ///< highest p1 at which prepurchase stays preferred
    double cutoff = 0.0;           ///< min of the two
    CutoffRegion region = CutoffRegion::below_low;
};

/// Highest advance price at which the plan to prepurchase is credible,
/// as a function of the committed spot price:
///   p2 <= L:                    p2
///   L < p2 <= (1+lv)L:          (1+lv)(1-q)L + q p2
///   (1+lv)L < p2 <= H:          [(1+lv)(1-q)L + (1+lm) q p2] / (1 + q lm)
///   p2 > H:                     E + lv q^2 H + lv (1-q^2) L
/// Boundary points belong to the lower region; adjacent branches agree at
/// (1+lv)L.
double credible_prepurchase_bound(double spot_price, const ModelParams& params);

/// Highest advance price at which prepurchasing, as a credible plan, is
/// weakly preferred to the credible waiting plan:
///   p2 <= L:       p2
///   L < p2 <= H:   (1-q)L + lv q(1-q)L + q p2 + lm (1-q) q p2
///   p2 > H:        E - lv (1-q) q (H-L)
double preferred_prepurchase_bound(double spot_price, const ModelParams& params);

/// Cutoff advance price: the minimum of the two bounds, with its region.
CutoffBreakdown cutoff_advance_price(double spot_price, const ModelParams& params);

/// A recommended offer together with the profit it earns.
struct PricingRecommendation {
    PriceOffer offer;
    double expected_profit = 0.0;
};

/// Profit-maximizing committed offer: spot price H and advance price
///   min{ (E + q lm H + (1-q) lv L) / (1 + q lm),
///        E + lv q (1-q) L + lm q (1-q) H }.
/// Strictly above E exactly when some loss-aversion coefficient is positive.
PricingRecommendation optimal_pricing_commit(const ModelParams& params);

/// Profit-maximizing offer without a spot commitment: state-contingent spot
/// prices (H, L) and advance price (E + q lm H) / (1 + q lm); strictly above
/// E exactly when lambda_money > 0.
PricingRecommendation optimal_pricing_flexible(const ModelParams& params);

enum class CommitmentChoice { commit, indifferent };

struct CommitmentDecision {
    CommitmentChoice choice = CommitmentChoice::indifferent;
    double committed_profit = 0.0;
    double flexible_profit = 0.0;
    double gap() const { return committed_profit - flexible_profit; }
};

/// Commit iff committing earns strictly more, which happens exactly when
/// lambda_value > 0.
CommitmentDecision commitment_decision(const ModelParams& params);

/// Upper bound on the cutoff advance price when the reference stays frozen
/// at the initial belief: E - q (1-q) lv (H-L).
double static_reference_bound(const ModelParams& params);

/// Cutoff when no spot market exists (equivalently, any committed spot
/// price above H): E - (1-q) lv q (H-L).
double single_stage_cutoff(const ModelParams& params);

/// Advance price at which a CARA consumer is indifferent between
/// prepurchasing and a zero-utility wait:
///   q v(H-p) + (1-q) v(L-p) = v(0),
/// solved by bisection on [0, H] to 1e-9.  Always strictly below E.
double risk_averse_cutoff(const ModelParams& params, double curvature);

} // namespace presale
