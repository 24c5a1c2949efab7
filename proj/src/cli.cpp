#include "presale/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "presale/scenario.hpp"

namespace presale {

namespace {

std::string fixed9(double value) {
    if (value == 0.0) {
        value = 0.0;
    }
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.9f", value);
    return buffer;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw ParseError(0, "cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_scenario_config(buffer.str());
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw ParseError(0, "cannot open output file '" + path + "'");
    }
    file << contents;
}

void print_cutoff(const ScenarioConfig& config, double p2, std::ostream& out) {
    const CutoffBreakdown closed = cutoff_advance_price(p2, config.params);
    const double brute = bisect_cutoff_p1(CommittedSpot{p2}, config.params, config.preference);
    out << "p2=" << fixed9(p2) << "\n";
    out << "pe_bound=" << fixed9(closed.pe_bound) << "\n";
    out << "preferred_bound=" << fixed9(closed.preferred_bound) << "\n";
    out << "cutoff=" << fixed9(closed.cutoff) << "\n";
    out << "region=" << to_string(closed.region) << "\n";
    out << "brute_force_cutoff=" << fixed9(brute) << "\n";
    out << "abs_gap=" << fixed9(std::abs(closed.cutoff - brute)) << "\n";
}

void print_optimal(const ScenarioConfig& config, std::ostream& out) {
    if (config.regime != RegimeChoice::flexible) {
        const PricingRecommendation commit = optimal_pricing_commit(config.params);
        out << "committed: p1=" << fixed9(commit.offer.advance_price)
            << " p2=" << fixed9(std::get<CommittedSpot>(commit.offer.regime).spot_price)
            << " profit=" << fixed9(commit.expected_profit) << "\n";
    }
    if (config.regime != RegimeChoice::committed) {
        const PricingRecommendation flexible = optimal_pricing_flexible(config.params);
        const auto& spot = std::get<FlexibleSpot>(flexible.offer.regime);
        out << "flexible: p1=" << fixed9(flexible.offer.advance_price)
            << " p2_H=" << fixed9(spot.spot_price_high)
            << " p2_L=" << fixed9(spot.spot_price_low)
            << " profit=" << fixed9(flexible.expected_profit) << "\n";
    }
    if (config.regime == RegimeChoice::both) {
        const CommitmentDecision decision = commitment_decision(config.params);
        out << "decision: "
            << (decision.choice == CommitmentChoice::commit ? "commit" : "indifferent")
            << " gap=" << fixed9(decision.gap()) << "\n";
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"advance-purchase pricing: equilibrium solver and closed-form checks"};
    app.name("presale");
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string failures_path;
    double p2 = 0.0;
    std::uint64_t seed = 1;

    CLI::App* cutoff_cmd =
        app.add_subcommand("cutoff", "cutoff advance price at one committed spot price");
    cutoff_cmd->add_option("--config", config_path, "scenario config file")->required();
    cutoff_cmd->add_option("--p2", p2, "committed spot price")->required();

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "cutoff table over a committed spot-price grid");
    sweep_cmd->add_option("--config", config_path, "scenario config file")->required();
    sweep_cmd->add_option("--out", out_path, "CSV output path")->required();

    CLI::App* optimal_cmd = app.add_subcommand("optimal", "profit-maximizing offers");
    optimal_cmd->add_option("--config", config_path, "scenario config file")->required();

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the randomized verification suite");
    verify_cmd->add_option("--config", config_path, "scenario config file")->required();
    verify_cmd->add_option("--seed", seed, "random seed (default 1)");
    verify_cmd->add_option("--failures", failures_path, "write failing draws to this CSV");

    CLI::App* report_cmd = app.add_subcommand("report", "full scenario report");
    report_cmd->add_option("--config", config_path, "scenario config file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error, out, err);
        return code == 0 ? exit_ok : exit_usage_error;
    }

    try {
        if (cutoff_cmd->parsed()) {
            print_cutoff(load_config(config_path), p2, out);
        } else if (sweep_cmd->parsed()) {
            write_file(out_path, sweep_csv(run_sweep(load_config(config_path))));
        } else if (optimal_cmd->parsed()) {
            print_optimal(load_config(config_path), out);
        } else if (verify_cmd->parsed()) {
            const VerificationReport report = run_verification(load_config(config_path), seed);
            out << report.summary_text();
            if (!report.ok()) {
                if (failures_path.empty()) {
                    out << report.failures_csv();
                } else {
                    write_file(failures_path, report.failures_csv());
                }
                return exit_verification_failed;
            }
            if (!failures_path.empty()) {
                write_file(failures_path, report.failures_csv());
            }
        } else if (report_cmd->parsed()) {
            out << report_scenario(load_config(config_path));
        }
    } catch (const ParseError& error) {
        err << "config error: " << error.what() << "\n";
        return exit_usage_error;
    } catch (const DomainError& error) {
        err << "config error: " << error.what() << "\n";
        return exit_usage_error;
    } catch (const std::exception& error) {
        err << "error: " << error.what() << "\n";
        return exit_verification_failed;
    }
    return exit_ok;
}

} // namespace presale
