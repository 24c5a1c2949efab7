#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "presale/errors.hpp"

namespace presale {

/// Tolerance used for every price and utility comparison in the library.
/// Ties within this tolerance are resolved by the purchase-preference rule
/// (the consumer buys when indifferent; an earlier purchase beats a later
/// one).
inline constexpr double comparison_epsilon = 1e-9;

/// The two states of nature: the good is worth H (high) or L (low).
enum class State { high, low };

/// Primitives of the advance-purchase environment.
///
/// Invariants (enforced by validate_params): H > L > 0, q in (0,1), both
/// loss-aversion coefficients non-negative.
struct ModelParams {
    double high_value;    ///< H, consumption value in the high state
    double low_value;     ///< L, consumption value in the low state
    double prob_high;     ///< q, probability of the high state
    double lambda_value;  ///< loss-aversion weight on the consumption-value dimension
    double lambda_money;  ///< loss-aversion weight on the monetary dimension

    /// q*H + (1-q)*L; lies strictly inside (L, H) for valid params.
    double expected_value() const {
        return prob_high * high_value + (1.0 - prob_high) * low_value;
    }

    double state_value(State s) const { return s == State::high ? high_value : low_value; }
    double state_prob(State s) const { return s == State::high ? prob_high : 1.0 - prob_high; }
};

/// Validates raw primitives and returns them as ModelParams.  Throws
/// DomainError naming the violated constraint.
ModelParams validate_params(double high_value, double low_value, double prob_high,
                            double lambda_value, double lambda_money);

/// Spot-price regime: one committed price, or state-contingent prices the
/// seller picks after learning the state.
struct CommittedSpot {
    double spot_price;
};
struct FlexibleSpot {
    double spot_price_high;
    double spot_price_low;
};
using SpotRegime = std::variant<CommittedSpot, FlexibleSpot>;

/// The seller's action: an advance price plus the spot regime.
struct PriceOffer {
    double advance_price = 0.0;
    SpotRegime regime = CommittedSpot{0.0};

    /// Spot price the consumer faces once the state is known.
    double spot_price(State s) const;
    bool is_committed() const { return std::holds_alternative<CommittedSpot>(regime); }

    /// Factories validate that all prices are finite and non-negative.
    static PriceOffer committed(double advance_price, double spot_price);
    static PriceOffer flexible(double advance_price, double spot_price_high,
                               double spot_price_low);
    static PriceOffer with_regime(double advance_price, const SpotRegime& regime);
};

/// Consumer material payoff: consumption-value dimension and (non-positive)
/// monetary dimension.
struct Payoff2D {
    double value = 0.0;
    double money = 0.0;
};

/// Everything attached to a terminal node: the consumer's two-dimensional
/// payoff, the seller's profit, and the path of node labels from the root.
struct TerminalOutcome {
    Payoff2D consumer;
    double seller_profit = 0.0;
    std::string path;
};

inline constexpr std::string_view action_prepurchase = "prepurchase";
inline constexpr std::string_view action_wait = "wait";
inline constexpr std::string_view action_buy = "buy";
inline constexpr std::string_view action_reject = "reject";

/// A node of the advance-purchase game tree.  Decision nodes carry the
/// consumer's action edges; chance nodes split (q, 1-q); terminals carry
/// outcomes.  Node ids are stable strings ("T1", "T2H", "T2L", terminal
/// paths) so results are reproducible across runs.
struct GameNode {
    struct Advance {};
    struct Chance {};
    struct Spot {
        State state;
    };
    struct Terminal {
        TerminalOutcome outcome;
    };
    using Stage = std::variant<Advance, Chance, Spot, Terminal>;

    struct Edge {
        std::string action;  ///< action label, or state label under a chance node
        double chance_prob;  ///< probability under a chance node; 1.0 otherwise
        std::unique_ptr<GameNode> child;
    };

    std::string id;
    Stage stage;
    std::vector<Edge> edges;

    bool is_advance() const { return std::holds_alternative<Advance>(stage); }
    bool is_chance() const { return std::holds_alternative<Chance>(stage); }
    bool is_spot() const { return std::holds_alternative<Spot>(stage); }
    bool is_terminal() const { return std::holds_alternative<Terminal>(stage); }
    bool is_decision() const { return is_advance() || is_spot(); }
    State spot_state() const { return std::get<Spot>(stage).state; }
    const TerminalOutcome& outcome() const { return std::get<Terminal>(stage).outcome; }

    /// Action labels available to the consumer at this (decision) node.
    std::vector<std::string_view> actions() const;
};

/// Builds the two-stage tree for one observed offer.  Root "T1" is the
/// advance stage; "prepurchase" leads to a chance split over (H,-p1)/(L,-p1)
/// terminals; "wait" leads to a chance split into the spot nodes "T2H" and
/// "T2L", each with buy/reject terminals at the state's spot price.
GameNode build_game_tree(const ModelParams& params, const PriceOffer& offer);

/// Finds a node by id anywhere in the tree; nullptr when absent.
const GameNode* find_node(const GameNode& root, std::string_view id);

inline constexpr std::string_view node_advance = "T1";
inline constexpr std::string_view node_spot_high = "T2H";
inline constexpr std::string_view node_spot_low = "T2L";

/// The consumer's behavior strategy: action probabilities at the advance
/// node and at each spot node.  The plan doubles as her belief about her own
/// onward behavior, so it also generates her reference distribution.
struct Plan {
    double prepurchase_prob = 0.0;  ///< probability of prepurchase at T1
    double buy_high_prob = 0.0;     ///< probability of buy at T2H
    double buy_low_prob = 0.0;      ///< probability of buy at T2L

    bool is_degenerate() const;
    /// Probability the plan assigns to `action` at decision node `node`.
    double action_prob(const GameNode& node, std::string_view action) const;
};

/// The 8 degenerate plans in lexicographic order on
/// (prepurchase, buy_high, buy_low): (0,0,0) first, (1,1,1) last.
std::array<Plan, 8> enumerate_degenerate_plans();

/// One entry of a terminal-outcome lottery.  Pointers refer into the tree
/// that produced them.
struct WeightedOutcome {
    double prob;
    const TerminalOutcome* outcome;
};

/// Distribution over terminals induced by the plan from `node` (conditional
/// on reaching it).  The forced-action overload conditions on taking
/// `action` at `node` first, with the plan governing all onward moves;
/// it throws InvalidAction when the action is not available at `node`.
std::vector<WeightedOutcome> outcome_lottery(const GameNode& node, const Plan& plan);
std::vector<WeightedOutcome> outcome_lottery(const GameNode& node, const Plan& plan,
                                             std::string_view forced_action);

/// Expected seller profit under the plan's outcome distribution from `node`.
double expected_seller_profit(const GameNode& node, const Plan& plan);

} // namespace presale
