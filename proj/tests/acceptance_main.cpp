// Acceptance suite: runs every top-level requirement at its stated tolerance
// and prints one pass/fail line per criterion.  Exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "presale/scenario.hpp"

using namespace presale;

namespace {

struct Criterion {
    int id;
    std::string title;
    bool pass;
    std::string detail;
};

std::vector<Criterion> results;

void record(int id, const std::string& title, bool pass, const std::string& detail = "") {
    results.push_back({id, title, pass, detail});
}

bool check_passed(const VerificationReport& report, std::string_view name,
                  int expected_outcomes, std::string& detail) {
    const CheckOutcome* outcome = report.find(name);
    if (outcome == nullptr) {
        detail += std::string(name) + " never ran; ";
        return false;
    }
    if (outcome->failed > 0 || outcome->passed < expected_outcomes) {
        detail += std::string(name) + " " + std::to_string(outcome->passed) + "/" +
                  std::to_string(outcome->passed + outcome->failed) + "; ";
        return false;
    }
    return true;
}

// --------------------------------------------------------------------------
// Criterion 11: structure of the cutoff sweep for the reference instance.

struct FigureCheck {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (detail.empty()) {
            detail = why;
        }
    }
};

const SweepRow* row_at(const std::vector<SweepRow>& rows, double p2) {
    for (const SweepRow& row : rows) {
        if (std::abs(row.p2 - p2) <= 1e-9) {
            return &row;
        }
    }
    return nullptr;
}

// Value at x of the line through the first two rows strictly beyond `from`.
bool extrapolate_right(const std::vector<SweepRow>& rows, double from, double x,
                       double& value) {
    const SweepRow* first = nullptr;
    const SweepRow* second = nullptr;
    for (const SweepRow& row : rows) {
        if (row.p2 > from + 1e-9) {
            if (first == nullptr) {
                first = &row;
            } else {
                second = &row;
                break;
            }
        }
    }
    if (first == nullptr || second == nullptr) {
        return false;
    }
    const double slope = (second->closed_form.cutoff - first->closed_form.cutoff) /
                         (second->p2 - first->p2);
    value = first->closed_form.cutoff + slope * (x - first->p2);
    return true;
}

Criterion figure_reproduction() {
    const ModelParams params = validate_params(10, 4, 0.5, 1.0, 0.5);
    ScenarioConfig config;
    config.params = params;
    config.sweep = SweepRange{0.0, 12.0, 121};
    const std::vector<SweepRow> rows = run_sweep(config);
    FigureCheck check;

    for (const SweepRow& row : rows) {
        if (row.abs_gap > 1e-6) {
            check.fail("oracle gap " + std::to_string(row.abs_gap) + " at p2=" +
                       std::to_string(row.p2));
        }
    }

    // Kink abscissae inside [0, H]: the region boundary L, the plan-switch
    // price (1+lv)L, and the bound-crossing price (1-q) lv L / (q lm); for
    // this instance the latter two coincide at 8.
    const double q = params.prob_high;
    const std::vector<double> kinks{params.low_value,
                                    (params.lambda_value + 1.0) * params.low_value};
    std::vector<double> boundaries{0.0};
    for (double kink : kinks) {
        if (kink > boundaries.back() + 1e-9 && kink < params.high_value - 1e-9) {
            boundaries.push_back(kink);
        }
    }
    boundaries.push_back(params.high_value);

    // Piecewise linearity: within each segment (and in the flat tail beyond
    // H) every row must sit on the chord through the segment's end rows.
    auto segment_rows = [&](double lo, double hi) {
        std::vector<const SweepRow*> inside;
        for (const SweepRow& row : rows) {
            if (row.p2 > lo + 1e-9 && row.p2 <= hi + 1e-9) {
                inside.push_back(&row);
            }
        }
        return inside;
    };
    auto check_linear = [&](double lo, double hi) {
        const auto inside = segment_rows(lo, hi);
        if (inside.size() < 3) {
            return;
        }
        const SweepRow* first = inside.front();
        const SweepRow* last = inside.back();
        const double slope =
            (last->closed_form.cutoff - first->closed_form.cutoff) / (last->p2 - first->p2);
        for (const SweepRow* row : inside) {
            const double on_line =
                first->closed_form.cutoff + slope * (row->p2 - first->p2);
            if (std::abs(row->closed_form.cutoff - on_line) > 1e-6) {
                check.fail("kink away from the predicted abscissae near p2=" +
                           std::to_string(row->p2));
            }
        }
    };
    check_linear(-1e-9, boundaries[1]);  // [0, L]
    for (std::size_t i = 1; i + 1 < boundaries.size(); ++i) {
        check_linear(boundaries[i], boundaries[i + 1]);
    }
    check_linear(params.high_value, 12.0);  // flat tail

    // Continuity across the interior kinks.  At p2 = L the spot sub-plan
    // switches from buy-in-both-states to buy-at-H-only, and both bounds
    // step up by exactly q(1-q)L(lv+lm); everywhere else the branches agree.
    for (double kink : kinks) {
        if (kink >= params.high_value - 1e-9) {
            continue;
        }
        const SweepRow* at = row_at(rows, kink);
        double right_limit = 0.0;
        if (at == nullptr || !extrapolate_right(rows, kink, kink, right_limit)) {
            check.fail("missing kink row at p2=" + std::to_string(kink));
            continue;
        }
        const double step = right_limit - at->closed_form.cutoff;
        const double expected_step =
            std::abs(kink - params.low_value) <= 1e-9
                ? q * (1.0 - q) * params.low_value *
                      (params.lambda_value + params.lambda_money)
                : 0.0;
        if (std::abs(step - expected_step) > 1e-6) {
            check.fail("step " + std::to_string(step) + " across the kink at p2=" +
                       std::to_string(kink) + " (expected " +
                       std::to_string(expected_step) + ")");
        }
    }

    // Downward jump just past H: lv q (1-q) (H-L) + (cutoff(H) - E).
    const SweepRow* at_high = row_at(rows, params.high_value);
    const SweepRow* beyond = nullptr;
    for (const SweepRow& row : rows) {
        if (row.p2 > params.high_value + 1e-9) {
            beyond = &row;
            break;
        }
    }
    if (at_high == nullptr || beyond == nullptr) {
        check.fail("sweep is missing rows at or beyond p2=H");
    } else {
        const double jump = at_high->closed_form.cutoff - beyond->closed_form.cutoff;
        const double expected =
            params.lambda_value * q * (1.0 - q) * (params.high_value - params.low_value) +
            (at_high->closed_form.cutoff - params.expected_value());
        if (std::abs(jump - expected) > 1e-6) {
            check.fail("jump past H measured " + std::to_string(jump) + ", expected " +
                       std::to_string(expected));
        }
    }

    return Criterion{11,
                     "cutoff sweep: piecewise linear, kinks only at the predicted "
                     "spot prices, exact step at L, exact drop past H",
                     check.pass, check.detail};
}

} // namespace

int main() {
    ScenarioConfig config;
    config.params = validate_params(10, 4, 0.5, 1.0, 0.5);
    config.draws = 500;
    config.grid_step = 0.1;

    const auto started = std::chrono::steady_clock::now();
    const VerificationReport report = run_verification(config, 20240501);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const int draws = config.draws;
    {
        std::string detail;
        bool pass = check_passed(report, "oracle_cutoff_equivalence", draws, detail);
        if (elapsed >= 60.0) {
            pass = false;
            detail += "runtime over budget; ";
        }
        std::ostringstream title;
        title << "closed-form cutoff equals the bisection cutoff to 1e-6 over " << draws
              << " draws x 51+ spot prices (" << std::fixed << std::setprecision(1)
              << elapsed << "s < 60s)";
        record(1, title.str(), pass, detail);
    }
    {
        std::string detail;
        const bool pass = check_passed(report, "spot_stage_cutoff", draws, detail);
        record(2,
               "spot stage buys exactly up to the realized value, whatever the "
               "loss-aversion coefficients; credible-interval endpoints match to 1e-9",
               pass, detail);
    }
    {
        std::string detail;
        const bool pass = check_passed(report, "risk_neutral_benchmark", draws, detail);
        record(3,
               "zero loss aversion: optimal profit equals the expected value and "
               "commitment is worth nothing (both to 1e-9)",
               pass, detail);
    }
    {
        std::string detail;
        const bool pass = check_passed(report, "optimal_committed_pricing", draws, detail) &
                          check_passed(report, "reference_instance", 1, detail);
        record(4,
               "optimal committed advance price strictly exceeds the expected value "
               "under any loss aversion and is accepted; worked instance 9.2 / 7.6 / 1.6",
               pass, detail);
    }
    {
        std::string detail;
        const bool pass =
            check_passed(report, "cutoff_maximized_at_high_value", draws, detail) &
            check_passed(report, "cutoff_monotone_in_spot_price", draws, detail);
        record(5,
               "cutoff peaks at a spot price equal to the high value and equals the "
               "single-stage cutoff (to 1e-9) beyond it",
               pass, detail);
    }
    {
        std::string detail;
        const bool pass =
            check_passed(report, "cutoff_monotone_in_loss_aversion", draws, detail);
        record(6,
               "cutoff at the high spot price is non-decreasing in each loss-aversion "
               "coefficient over {0, 0.5, 1, 2, 3}",
               pass, detail);
    }
    {
        std::string detail;
        const bool pass =
            check_passed(report, "flexible_pricing_and_commitment", draws, detail);
        record(7,
               "commitment premium is strictly positive exactly under value loss "
               "aversion; flexible profit beats the expected value exactly under "
               "money loss aversion",
               pass, detail);
    }
    {
        std::string detail;
        const bool pass = check_passed(report, "risk_averse_cutoff", draws, detail) &
                          check_passed(report, "reference_instance", 1, detail);
        record(8,
               "CARA cutoff stays below the expected value, approaches it as the "
               "curvature vanishes, and hits the analytic root (4.6909 +/- 1e-3)",
               pass, detail);
    }
    {
        std::string detail;
        const bool pass = check_passed(report, "static_reference_cutoff", draws, detail) &
                          check_passed(report, "initial_belief_tower_identity", draws,
                                       detail);
        record(9,
               "frozen-reference cutoff respects its upper bound, the expected-value "
               "offer is declined, and waiting utility chains through the spot stage "
               "to 1e-9",
               pass, detail);
    }
    {
        std::string detail;
        const bool pass =
            check_passed(report, "mixed_plan_audit", 2 * std::min(draws, 100), detail);
        record(10,
               "no plan on the 0.1 probability grid beats the degenerate equilibrium "
               "(100 draws, both reference timings)",
               pass, detail);
    }
    results.push_back(figure_reproduction());

    bool all_pass = true;
    for (const Criterion& criterion : results) {
        std::cout << "[" << (criterion.pass ? "PASS" : "FAIL") << "] criterion "
                  << criterion.id << ": " << criterion.title;
        if (!criterion.pass && !criterion.detail.empty()) {
            std::cout << " -- " << criterion.detail;
        }
        std::cout << "\n";
        all_pass = all_pass && criterion.pass;
    }
    if (!all_pass) {
        std::cout << report.summary_text();
        std::cout << report.failures_csv();
    }
    std::cout << (all_pass ? "acceptance suite passed" : "acceptance suite FAILED") << "\n";
    return all_pass ? 0 : 1;
}
