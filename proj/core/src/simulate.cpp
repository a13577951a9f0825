#include <cmath>
#include <limits>
#include <random>

#include "dft_compile.hpp"
#include "saft/analyzer.hpp"

namespace saft {

namespace {

using detail::CompiledDft;
using detail::CompiledGate;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Failure time of a gate given its children's failure times: OR = min,
/// AND = max, ordered = max when the times are nondecreasing (ties are
/// allowed; they arise only through shared basic events) and never
/// otherwise.
double gate_time(const CompiledGate& gate, const std::vector<double>& node_time,
                 size_t basic_count, const std::vector<double>& be_time) {
    auto time_of = [&](int ref) {
        return ref < static_cast<int>(basic_count)
                   ? be_time[static_cast<size_t>(ref)]
                   : node_time[static_cast<size_t>(ref) - basic_count];
    };
    if (gate.ordered) {
        double prev = -1.0;
        double last = 0.0;
        for (int child : gate.children) {
            double t = time_of(child);
            if (t == kInf || t < prev) return kInf;
            prev = t;
            last = t;
        }
        return last;
    }
    double best = gate.is_and ? 0.0 : kInf;
    for (int child : gate.children) {
        double t = time_of(child);
        best = gate.is_and ? std::max(best, t) : std::min(best, t);
    }
    return best;
}

}  // namespace

SimulationResult simulate(const Dft& dft, std::size_t trials, double horizon,
                          std::uint64_t seed) {
    if (trials == 0) throw AnalysisError("simulate needs at least one trial");
    const CompiledDft compiled = detail::compile_dft(dft);
    const size_t nbe = compiled.basic_count();

    SimulationResult result;
    result.trials = trials;
    double sum = 0.0, sum_sq = 0.0;

    std::vector<double> be_time(nbe);
    std::vector<double> node_time(compiled.gates.size());
    for (size_t trial = 0; trial < trials; ++trial) {
        // per-trial generator: the outcome is independent of any
        // partitioning of trials across workers
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ull * (trial + 1));
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        for (size_t i = 0; i < nbe; ++i) {
            double rate = compiled.rates[i];
            if (rate <= 0) {
                be_time[i] = kInf;
            } else {
                be_time[i] = -std::log1p(-uniform(rng)) / rate;
            }
        }
        for (size_t g = 0; g < compiled.gates.size(); ++g) {
            node_time[g] = gate_time(compiled.gates[g], node_time, nbe, be_time);
        }
        double top_time = compiled.top < static_cast<int>(nbe)
                              ? be_time[static_cast<size_t>(compiled.top)]
                              : node_time[static_cast<size_t>(compiled.top) - nbe];
        if (std::isfinite(top_time) && top_time <= horizon) {
            ++result.failures;
            sum += top_time;
            sum_sq += top_time * top_time;
        }
    }

    const double n = static_cast<double>(trials);
    result.p_hat = static_cast<double>(result.failures) / n;
    result.p_stderr = std::sqrt(result.p_hat * (1.0 - result.p_hat) / n);
    if (result.failures > 0) {
        const double k = static_cast<double>(result.failures);
        double mean = sum / k;
        result.mean_time = mean;
        if (result.failures > 1) {
            double variance = (sum_sq - k * mean * mean) / (k - 1.0);
            result.mean_stderr = std::sqrt(std::max(variance, 0.0) / k);
        }
    }
    return result;
}

}  // namespace saft
