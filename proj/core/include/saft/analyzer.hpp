#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saft/dft.hpp"

namespace saft {

struct AnalysisOptions {
    std::size_t state_cap = 1'000'000;
};

/// Quantitative result for one hazard. `p` is the eventual-failure
/// probability; the MTTF is finite only when p = 1 (ordered gates make
/// p < 1 generic), the conditional MTTF is finite whenever p > 0.
struct AnalysisResult {
    std::string hazard;
    double p = 0.0;
    std::optional<double> mttf;              // seconds; nullopt = infinite
    std::optional<double> conditional_mttf;  // seconds; nullopt = undefined (p = 0)
    std::size_t states = 0;                  // explored CTMC states

    bool operator==(const AnalysisResult&) const = default;
};

/// Exact absorption analysis of the CTMC induced by the DFT: states are
/// generated reachably from the all-operational state, each live basic
/// event fires with its rate, top-failed states absorb. Failures only
/// accumulate, so the transition graph is acyclic and absorption
/// probabilities and expected hitting times solve by back-substitution
/// in reverse exploration order (exact up to rounding).
AnalysisResult analyze(const Dft& dft, const AnalysisOptions& options = {});

struct SimulationResult {
    double p_hat = 0.0;
    double p_stderr = 0.0;
    std::optional<double> mean_time;  // conditional on failure
    double mean_stderr = 0.0;
    std::size_t trials = 0;
    std::size_t failures = 0;
};

/// Monte Carlo cross-check: samples exponential firing times per basic
/// event and evaluates gate failure times directly. Deterministic for a
/// fixed seed. `horizon` bounds counted failures (infinity is allowed).
SimulationResult simulate(const Dft& dft, std::size_t trials, double horizon,
                          std::uint64_t seed);

enum class TrendDirection { Improved, Degraded, Unchanged };
std::string_view trend_direction_name(TrendDirection direction);

struct HazardTrend {
    std::string hazard;
    TrendDirection direction;
};

struct TrendReport {
    std::vector<HazardTrend> hazards;
};

/// Compares the last two runs in the history: lower p means improved;
/// on equal p a longer MTTF means improved (infinite counts as longest),
/// with the conditional MTTF as the final tiebreak. Hazards missing from
/// the previous run are skipped. Throws on fewer than two runs.
TrendReport trend(const std::vector<std::vector<AnalysisResult>>& history);
TrendDirection trend_direction(const AnalysisResult& previous, const AnalysisResult& current);

}  // namespace saft
