#include "presale/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace presale {

namespace {

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

double parse_number(std::string_view value, int line) {
    double parsed = 0.0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || end != value.data() + value.size() || !std::isfinite(parsed)) {
        throw ParseError(line, "expected a finite number, got '" + std::string(value) + "'");
    }
    return parsed;
}

int parse_integer(std::string_view value, int line) {
    int parsed = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || end != value.data() + value.size()) {
        throw ParseError(line, "expected an integer, got '" + std::string(value) + "'");
    }
    return parsed;
}

} // namespace

ScenarioConfig parse_scenario_config(std::string_view text) {
    std::map<std::string, std::pair<std::string, int>, std::less<>> values;
    int line_number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        ++line_number;
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (const auto comment = line.find('#'); comment != std::string_view::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto equals = line.find('=');
        if (equals == std::string_view::npos) {
            throw ParseError(line_number, "expected 'key = value'");
        }
        const std::string key{trim(line.substr(0, equals))};
        const std::string value{trim(line.substr(equals + 1))};
        if (key.empty() || value.empty()) {
            throw ParseError(line_number, "expected 'key = value'");
        }
        static constexpr std::string_view known[] = {
            "H",      "L",     "q",     "lambda_v", "lambda_m", "preference", "curvature",
            "regime", "p2_min", "p2_max", "steps",   "draws",    "grid_step"};
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw ParseError(line_number, "unknown key '" + key + "'");
        }
        values[key] = {value, line_number};  // later assignments override earlier ones
    }

    auto lookup = [&](std::string_view key) -> const std::pair<std::string, int>* {
        const auto it = values.find(key);
        return it == values.end() ? nullptr : &it->second;
    };
    auto required_number = [&](std::string_view key) {
        const auto* entry = lookup(key);
        if (entry == nullptr) {
            throw ParseError(0, "missing key " + std::string(key));
        }
        return parse_number(entry->first, entry->second);
    };

    ScenarioConfig config;
    config.params = validate_params(required_number("H"), required_number("L"),
                                    required_number("q"), required_number("lambda_v"),
                                    required_number("lambda_m"));

    if (const auto* entry = lookup("preference")) {
        const std::string& name = entry->first;
        if (name == "kr_recent") {
            config.preference = KRRecentBelief{};
        } else if (name == "kr_initial") {
            config.preference = KRInitialBelief{};
        } else if (name == "risk_neutral") {
            config.preference = RiskNeutral{};
        } else if (name == "risk_averse") {
            const auto* curvature = lookup("curvature");
            if (curvature == nullptr) {
                throw ParseError(entry->second,
                                 "preference risk_averse requires a curvature key");
            }
            const double a = parse_number(curvature->first, curvature->second);
            if (!(a > 0.0)) {
                throw ParseError(curvature->second, "curvature must be positive");
            }
            config.preference = RiskAverse{a};
        } else {
            throw ParseError(entry->second, "unknown preference '" + name + "'");
        }
    }

    if (const auto* entry = lookup("regime")) {
        const std::string& name = entry->first;
        if (name == "committed") {
            config.regime = RegimeChoice::committed;
        } else if (name == "flexible") {
            config.regime = RegimeChoice::flexible;
        } else if (name == "both") {
            config.regime = RegimeChoice::both;
        } else {
            throw ParseError(entry->second, "unknown regime '" + name + "'");
        }
    }

    const auto* min_entry = lookup("p2_min");
    const auto* max_entry = lookup("p2_max");
    if ((min_entry == nullptr) != (max_entry == nullptr)) {
        throw ParseError(0, "p2_min and p2_max must be given together");
    }
    if (min_entry != nullptr) {
        SweepRange range;
        range.p2_min = parse_number(min_entry->first, min_entry->second);
        range.p2_max = parse_number(max_entry->first, max_entry->second);
        if (range.p2_min < 0.0 || range.p2_max <= range.p2_min) {
            throw ParseError(min_entry->second, "sweep range needs 0 <= p2_min < p2_max");
        }
        if (const auto* steps = lookup("steps")) {
            range.steps = parse_integer(steps->first, steps->second);
        }
        if (range.steps < 2) {
            throw ParseError(0, "steps must be at least 2");
        }
        config.sweep = range;
    }

    if (const auto* entry = lookup("draws")) {
        config.draws = parse_integer(entry->first, entry->second);
        if (config.draws < 1) {
            throw ParseError(entry->second, "draws must be at least 1");
        }
    }
    if (const auto* entry = lookup("grid_step")) {
        config.grid_step = parse_number(entry->first, entry->second);
        if (!(config.grid_step > 0.0) || config.grid_step > 0.5) {
            throw ParseError(entry->second, "grid_step must lie in (0, 0.5]");
        }
    }
    return config;
}

std::vector<double> sweep_kinks(const ModelParams& params) {
    std::vector<double> kinks{params.low_value};
    const double plan_switch = (params.lambda_value + 1.0) * params.low_value;
    if (plan_switch <= params.high_value) {
        kinks.push_back(plan_switch);
    }
    if (params.lambda_money > 0.0) {
        const double crossing = (1.0 - params.prob_high) * params.lambda_value *
                                params.low_value /
                                (params.prob_high * params.lambda_money);
        if (crossing <= params.high_value) {
            kinks.push_back(crossing);
        }
    }
    kinks.push_back(params.high_value);
    std::sort(kinks.begin(), kinks.end());
    kinks.erase(std::unique(kinks.begin(), kinks.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                kinks.end());
    return kinks;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& config) {
    if (!config.sweep.has_value()) {
        throw DomainError("run_sweep needs a sweep range (p2_min, p2_max)");
    }
    const SweepRange& range = *config.sweep;
    std::vector<double> points;
    points.reserve(static_cast<std::size_t>(range.steps) + 4);
    for (int i = 0; i < range.steps; ++i) {
        points.push_back(range.p2_min +
                         (range.p2_max - range.p2_min) * (i / (range.steps - 1.0)));
    }
    for (double kink : sweep_kinks(config.params)) {
        if (kink >= range.p2_min && kink <= range.p2_max) {
            points.push_back(kink);
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                 points.end());

    std::vector<SweepRow> rows;
    rows.reserve(points.size());
    for (double p2 : points) {
        SweepRow row;
        row.p2 = p2;
        row.closed_form = cutoff_advance_price(p2, config.params);
        row.brute_force_cutoff =
            bisect_cutoff_p1(CommittedSpot{p2}, config.params, config.preference);
        row.abs_gap = std::abs(row.closed_form.cutoff - row.brute_force_cutoff);
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string fixed9(double value) {
    if (value == 0.0) {
        value = 0.0;  // normalize -0
    }
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.9f", value);
    return buffer;
}

} // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string csv = "p2,pe_bound,preferred_bound,cutoff,region,brute_force_cutoff,abs_gap\n";
    for (const SweepRow& row : rows) {
        csv += fixed9(row.p2);
        csv += ',';
        csv += fixed9(row.closed_form.pe_bound);
        csv += ',';
        csv += fixed9(row.closed_form.preferred_bound);
        csv += ',';
        csv += fixed9(row.closed_form.cutoff);
        csv += ',';
        csv += to_string(row.closed_form.region);
        csv += ',';
        csv += fixed9(row.brute_force_cutoff);
        csv += ',';
        csv += fixed9(row.abs_gap);
        csv += '\n';
    }
    return csv;
}

std::string report_scenario(const ScenarioConfig& config) {
    const ModelParams& params = config.params;
    const PricingRecommendation commit = optimal_pricing_commit(params);
    const PricingRecommendation flexible = optimal_pricing_flexible(params);
    const CommitmentDecision decision = commitment_decision(params);
    const auto& flexible_spot = std::get<FlexibleSpot>(flexible.offer.regime);

    std::ostringstream out;
    out << "scenario: H=" << fixed9(params.high_value) << " L=" << fixed9(params.low_value)
        << " q=" << fixed9(params.prob_high) << " lambda_v=" << fixed9(params.lambda_value)
        << " lambda_m=" << fixed9(params.lambda_money)
        << " preference=" << preference_name(config.preference) << "\n";
    out << "expected value of the good:        " << fixed9(params.expected_value()) << "\n";
    out << "optimal committed pricing:         p1=" << fixed9(commit.offer.advance_price)
        << " p2=" << fixed9(std::get<CommittedSpot>(commit.offer.regime).spot_price)
        << " profit=" << fixed9(commit.expected_profit) << "\n";
    out << "optimal flexible pricing:          p1=" << fixed9(flexible.offer.advance_price)
        << " p2_H=" << fixed9(flexible_spot.spot_price_high)
        << " p2_L=" << fixed9(flexible_spot.spot_price_low)
        << " profit=" << fixed9(flexible.expected_profit) << "\n";
    out << "commitment decision:               "
        << (decision.choice == CommitmentChoice::commit ? "commit" : "indifferent")
        << " (profit gap " << fixed9(decision.gap()) << ")\n";
    out << "initial-belief cutoff upper bound: " << fixed9(static_reference_bound(params))
        << "\n";
    out << "single-stage cutoff (no spot buy): " << fixed9(single_stage_cutoff(params))
        << "\n";
    if (const auto* averse = std::get_if<RiskAverse>(&config.preference)) {
        out << "risk-averse cutoff (a=" << fixed9(averse->curvature)
            << "):   " << fixed9(risk_averse_cutoff(params, averse->curvature)) << "\n";
    }
    return out.str();
}

const CheckOutcome* VerificationReport::find(std::string_view name) const {
    for (const CheckOutcome& check : checks) {
        if (check.name == name) {
            return &check;
        }
    }
    return nullptr;
}

std::string VerificationReport::summary_text() const {
    std::ostringstream out;
    out << "verification: draws=" << draws << " seed=" << seed << "\n";
    for (const CheckOutcome& check : checks) {
        out << "  [" << (check.failed == 0 ? "PASS" : "FAIL") << "] " << check.name << ": "
            << check.passed << "/" << (check.passed + check.failed) << "\n";
    }
    if (ok()) {
        out << "all checks passed\n";
    } else {
        out << failures.size() << " failing instance(s); see the failure CSV\n";
    }
    return out.str();
}

namespace {

std::string csv_quote(const std::string& text) {
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

} // namespace

std::string VerificationReport::failures_csv() const {
    std::string csv = "check,draw,H,L,q,lambda_v,lambda_m,detail\n";
    for (const FailureRecord& failure : failures) {
        csv += failure.check;
        csv += ',';
        csv += std::to_string(failure.draw);
        csv += ',';
        csv += fixed9(failure.params.high_value);
        csv += ',';
        csv += fixed9(failure.params.low_value);
        csv += ',';
        csv += fixed9(failure.params.prob_high);
        csv += ',';
        csv += fixed9(failure.params.lambda_value);
        csv += ',';
        csv += fixed9(failure.params.lambda_money);
        csv += ',';
        csv += csv_quote(failure.detail);
        csv += '\n';
    }
    return csv;
}

ClosedFormHooks ClosedFormHooks::defaults() {
    ClosedFormHooks hooks;
    hooks.cutoff = [](double p2, const ModelParams& params) {
        return cutoff_advance_price(p2, params);
    };
    return hooks;
}

} // namespace presale
