#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "presale/equilibrium.hpp"
#include "presale/pricing.hpp"

namespace presale {

struct SweepRange {
    double p2_min = 0.0;
    double p2_max = 0.0;
    int steps = 200;  ///< number of grid points, endpoints included
};

enum class RegimeChoice { committed, flexible, both };

/// Parsed scenario: model primitives plus run options.
struct ScenarioConfig {
    ModelParams params{};
    PreferenceModel preference = KRRecentBelief{};
    RegimeChoice regime = RegimeChoice::committed;
    std::optional<SweepRange> sweep;
    int draws = 500;         ///< random parameter draws for verification
    double grid_step = 0.1;  ///< mixed-plan grid spacing
};

/// Parses a key = value document ('#' starts a comment).  Recognized keys:
/// H, L, q, lambda_v, lambda_m, preference, curvature, regime, p2_min,
/// p2_max, steps, draws, grid_step.  Unknown keys raise ParseError with the
/// line number; the five primitives are required; everything else has
/// defaults (preference=kr_recent, regime=committed, steps=200, draws=500,
/// grid_step=0.1).
ScenarioConfig parse_scenario_config(std::string_view text);

struct SweepRow {
    double p2 = 0.0;
    CutoffBreakdown closed_form;
    double brute_force_cutoff = 0.0;
    double abs_gap = 0.0;
};

/// Analytic kink abscissae injected into sweeps: L, (1+lv)L when <= H,
/// (1-q) lv L / (q lm) when lm > 0 and <= H, and H.  Ascending, deduplicated.
std::vector<double> sweep_kinks(const ModelParams& params);

/// One row per p2 grid point (plus the kink abscissae inside the range),
/// each carrying the closed-form breakdown, the bisection cutoff under the
/// scenario's preference, and their absolute gap.  Requires config.sweep.
std::vector<SweepRow> run_sweep(const ScenarioConfig& config);

/// Deterministic CSV encoding: header row, 9 fixed decimals, LF endings.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Seam for the verification harness self-test: the closed-form cutoff the
/// oracle checks run against.  Defaults to cutoff_advance_price.
struct ClosedFormHooks {
    std::function<CutoffBreakdown(double, const ModelParams&)> cutoff;
    static ClosedFormHooks defaults();
};

struct CheckOutcome {
    std::string name;
    int passed = 0;
    int failed = 0;
};

struct FailureRecord {
    std::string check;
    int draw = 0;  ///< 0 for fixed (non-random) instances
    ModelParams params{};
    std::string detail;
};

struct VerificationReport {
    int draws = 0;
    std::uint64_t seed = 0;
    std::vector<CheckOutcome> checks;
    std::vector<FailureRecord> failures;

    bool ok() const { return failures.empty(); }
    const CheckOutcome* find(std::string_view name) const;
    std::string summary_text() const;
    std::string failures_csv() const;
};

/// Runs the randomized property suite over `config.draws` parameter draws
/// (H in [2,20], L in (0,H), q in (0.05,0.95), lambdas in [0,3]) from a
/// seeded generator, checking closed-form/brute-force cutoff agreement, the
/// spot-stage cutoff and credible interval, the risk-neutral benchmark,
/// optimal pricing, the commitment comparison, the risk-averse and
/// static-reference cutoffs, the conditional-expectation identity, and the
/// mixed-plan audit.  Deterministic for a fixed (config, seed).
VerificationReport run_verification(const ScenarioConfig& config, std::uint64_t seed);
VerificationReport run_verification(const ScenarioConfig& config, std::uint64_t seed,
                                    const ClosedFormHooks& hooks);

/// Human-readable panel: optimal pricing with and without commitment, the
/// commitment decision with its profit gap, the static-reference bound, the
/// single-stage cutoff, and (for a risk-averse scenario) the CARA cutoff.
std::string report_scenario(const ScenarioConfig& config);

} // namespace presale
