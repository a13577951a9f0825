#include <map>

#include "saft/analyzer.hpp"

namespace saft {

std::string_view trend_direction_name(TrendDirection direction) {
    switch (direction) {
        case TrendDirection::Improved: return "improved";
        case TrendDirection::Degraded: return "degraded";
        case TrendDirection::Unchanged: return "unchanged";
    }
    return "unchanged";
}

TrendDirection trend_direction(const AnalysisResult& previous, const AnalysisResult& current) {
    // p dominates: a lower eventual-failure probability is an improvement.
    if (current.p != previous.p) {
        return current.p < previous.p ? TrendDirection::Improved : TrendDirection::Degraded;
    }
    // "If the value decreases, a more secure and thus also more reliable
    // state has been reached" — MTTF increase means improved. Infinite
    // MTTF counts as the longest.
    auto compare_time = [](const std::optional<double>& prev,
                           const std::optional<double>& cur) -> std::optional<TrendDirection> {
        if (!prev && !cur) return std::nullopt;  // both infinite/undefined
        if (!prev) return TrendDirection::Degraded;   // was infinite, now finite
        if (!cur) return TrendDirection::Improved;    // now infinite
        if (*cur > *prev) return TrendDirection::Improved;
        if (*cur < *prev) return TrendDirection::Degraded;
        return std::nullopt;
    };
    if (auto direction = compare_time(previous.mttf, current.mttf)) return *direction;
    if (auto direction = compare_time(previous.conditional_mttf, current.conditional_mttf))
        return *direction;
    return TrendDirection::Unchanged;
}

TrendReport trend(const std::vector<std::vector<AnalysisResult>>& history) {
    if (history.size() < 2) {
        throw AnalysisError("trend needs at least one prior result");
    }
    const auto& previous = history[history.size() - 2];
    const auto& current = history.back();
    std::map<std::string, const AnalysisResult*> by_name;
    for (const auto& r : previous) by_name[r.hazard] = &r;
    TrendReport report;
    for (const auto& r : current) {
        auto it = by_name.find(r.hazard);
        if (it == by_name.end()) continue;  // newly appeared hazard, nothing to compare
        report.hazards.push_back({r.hazard, trend_direction(*it->second, r)});
    }
    return report;
}

}  // namespace saft
