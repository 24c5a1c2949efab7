#include "presale/model.hpp"

#include <cmath>
#include <utility>

namespace presale {

namespace {

void require_finite_price(double price, std::string_view name) {
    if (!std::isfinite(price)) {
        throw DomainError(std::string(name) + " must be finite");
    }
    if (price < 0.0) {
        throw DomainError(std::string(name) + " must be non-negative");
    }
}

} // namespace

ModelParams validate_params(double high_value, double low_value, double prob_high,
                            double lambda_value, double lambda_money) {
    if (!std::isfinite(high_value) || !std::isfinite(low_value) || !std::isfinite(prob_high) ||
        !std::isfinite(lambda_value) || !std::isfinite(lambda_money)) {
        throw DomainError("model primitives must be finite");
    }
    if (low_value <= 0.0) {
        throw DomainError("L must be positive (violated: L <= 0)");
    }
    if (high_value <= low_value) {
        throw DomainError("H must exceed L (violated: H <= L)");
    }
    if (prob_high <= 0.0 || prob_high >= 1.0) {
        throw DomainError("q must lie strictly inside (0,1)");
    }
    if (lambda_value < 0.0) {
        throw DomainError("lambda_v must be non-negative");
    }
    if (lambda_money < 0.0) {
        throw DomainError("lambda_m must be non-negative");
    }
    return ModelParams{high_value, low_value, prob_high, lambda_value, lambda_money};
}

double PriceOffer::spot_price(State s) const {
    if (const auto* committed = std::get_if<CommittedSpot>(&regime)) {
        return committed->spot_price;
    }
    const auto& flexible = std::get<FlexibleSpot>(regime);
    return s == State::high ? flexible.spot_price_high : flexible.spot_price_low;
}

PriceOffer PriceOffer::committed(double advance_price, double spot_price) {
    require_finite_price(advance_price, "p1");
    require_finite_price(spot_price, "p2");
    return PriceOffer{advance_price, CommittedSpot{spot_price}};
}

PriceOffer PriceOffer::flexible(double advance_price, double spot_price_high,
                                double spot_price_low) {
    require_finite_price(advance_price, "p1");
    require_finite_price(spot_price_high, "p2_H");
    require_finite_price(spot_price_low, "p2_L");
    return PriceOffer{advance_price, FlexibleSpot{spot_price_high, spot_price_low}};
}

PriceOffer PriceOffer::with_regime(double advance_price, const SpotRegime& regime) {
    if (const auto* committed = std::get_if<CommittedSpot>(&regime)) {
        return PriceOffer::committed(advance_price, committed->spot_price);
    }
    const auto& flexible = std::get<FlexibleSpot>(regime);
    return PriceOffer::flexible(advance_price, flexible.spot_price_high,
                                flexible.spot_price_low);
}

std::vector<std::string_view> GameNode::actions() const {
    if (is_advance()) {
        return {action_prepurchase, action_wait};
    }
    if (is_spot()) {
        return {action_buy, action_reject};
    }
    throw InvalidAction("node '" + id + "' is not a consumer decision node");
}

namespace {

GameNode make_terminal(std::string id, double value, double price_paid) {
    TerminalOutcome outcome;
    outcome.consumer = Payoff2D{value, -price_paid};
    outcome.seller_profit = price_paid;
    outcome.path = id;
    return GameNode{std::move(id), GameNode::Terminal{std::move(outcome)}, {}};
}

GameNode make_spot_node(std::string id, State state, double value, double spot_price) {
    GameNode node{std::move(id), GameNode::Spot{state}, {}};
    node.edges.push_back({std::string(action_buy), 1.0,
                          std::make_unique<GameNode>(
                              make_terminal(node.id + "/buy", value, spot_price))});
    node.edges.push_back({std::string(action_reject), 1.0,
                          std::make_unique<GameNode>(
                              make_terminal(node.id + "/reject", 0.0, 0.0))});
    return node;
}

} // namespace

GameNode build_game_tree(const ModelParams& params, const PriceOffer& offer) {
    GameNode root{std::string(node_advance), GameNode::Advance{}, {}};

    GameNode after_prepurchase{"T1/prepurchase", GameNode::Chance{}, {}};
    after_prepurchase.edges.push_back(
        {"H", params.prob_high,
         std::make_unique<GameNode>(
             make_terminal("T1/prepurchase/H", params.high_value, offer.advance_price))});
    after_prepurchase.edges.push_back(
        {"L", 1.0 - params.prob_high,
         std::make_unique<GameNode>(
             make_terminal("T1/prepurchase/L", params.low_value, offer.advance_price))});

    GameNode after_wait{"T1/wait", GameNode::Chance{}, {}};
    after_wait.edges.push_back(
        {"H", params.prob_high,
         std::make_unique<GameNode>(make_spot_node(std::string(node_spot_high), State::high,
                                                   params.high_value,
                                                   offer.spot_price(State::high)))});
    after_wait.edges.push_back(
        {"L", 1.0 - params.prob_high,
         std::make_unique<GameNode>(make_spot_node(std::string(node_spot_low), State::low,
                                                   params.low_value,
                                                   offer.spot_price(State::low)))});

    root.edges.push_back({std::string(action_prepurchase), 1.0,
                          std::make_unique<GameNode>(std::move(after_prepurchase))});
    root.edges.push_back({std::string(action_wait), 1.0,
                          std::make_unique<GameNode>(std::move(after_wait))});
    return root;
}

const GameNode* find_node(const GameNode& root, std::string_view id) {
    if (root.id == id) {
        return &root;
    }
    for (const auto& edge : root.edges) {
        if (const GameNode* found = find_node(*edge.child, id)) {
            return found;
        }
    }
    return nullptr;
}

bool Plan::is_degenerate() const {
    auto zero_or_one = [](double p) { return p == 0.0 || p == 1.0; };
    return zero_or_one(prepurchase_prob) && zero_or_one(buy_high_prob) &&
           zero_or_one(buy_low_prob);
}

double Plan::action_prob(const GameNode& node, std::string_view action) const {
    if (node.is_advance()) {
        if (action == action_prepurchase) return prepurchase_prob;
        if (action == action_wait) return 1.0 - prepurchase_prob;
    } else if (node.is_spot()) {
        const double buy = node.spot_state() == State::high ? buy_high_prob : buy_low_prob;
        if (action == action_buy) return buy;
        if (action == action_reject) return 1.0 - buy;
    }
    throw InvalidAction("action '" + std::string(action) + "' unavailable at node '" +
                        node.id + "'");
}

std::array<Plan, 8> enumerate_degenerate_plans() {
    std::array<Plan, 8> plans;
    int i = 0;
    for (int advance = 0; advance <= 1; ++advance) {
        for (int buy_high = 0; buy_high <= 1; ++buy_high) {
            for (int buy_low = 0; buy_low <= 1; ++buy_low) {
                plans[i++] = Plan{double(advance), double(buy_high), double(buy_low)};
            }
        }
    }
    return plans;
}

namespace {

void collect_outcomes(const GameNode& node, const Plan& plan, double prob,
                      std::vector<WeightedOutcome>& out) {
    if (prob <= 0.0) {
        return;
    }
    if (node.is_terminal()) {
        out.push_back({prob, &node.outcome()});
        return;
    }
    for (const auto& edge : node.edges) {
        const double p =
            node.is_chance() ? edge.chance_prob : plan.action_prob(node, edge.action);
        collect_outcomes(*edge.child, plan, prob * p, out);
    }
}

} // namespace

std::vector<WeightedOutcome> outcome_lottery(const GameNode& node, const Plan& plan) {
    std::vector<WeightedOutcome> out;
    out.reserve(4);
    collect_outcomes(node, plan, 1.0, out);
    return out;
}

std::vector<WeightedOutcome> outcome_lottery(const GameNode& node, const Plan& plan,
                                             std::string_view forced_action) {
    if (!node.is_decision()) {
        throw InvalidAction("cannot force an action at non-decision node '" + node.id + "'");
    }
    for (const auto& edge : node.edges) {
        if (edge.action == forced_action) {
            std::vector<WeightedOutcome> out;
            out.reserve(4);
            collect_outcomes(*edge.child, plan, 1.0, out);
            return out;
        }
    }
    throw InvalidAction("action '" + std::string(forced_action) + "' unavailable at node '" +
                        node.id + "'");
}

double expected_seller_profit(const GameNode& node, const Plan& plan) {
    double profit = 0.0;
    for (const auto& [prob, outcome] : outcome_lottery(node, plan)) {
        profit += prob * outcome->seller_profit;
    }
    return profit;
}

} // namespace presale
