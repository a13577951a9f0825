#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "saft/tree.hpp"

namespace saft {

/// Seconds in the 30-day horizon of the EPSS-to-rate conversion.
inline constexpr double kEpssHorizonSeconds = 30.0 * 24.0 * 60.0 * 60.0;

/// Rate of the exponential distribution that reaches the given EPSS value
/// after 30 days: lambda = -ln(1 - epss) / (30*24*60*60 s).
double epss_to_lambda(double epss);

enum class DftNodeKind { Or, And, Seq, Basic };

struct DftNode {
    std::string name;  // [A-Za-z0-9_]+
    DftNodeKind kind = DftNodeKind::Basic;
    std::vector<std::string> children;  // gates only; order significant
    double lambda = 0.0;                // basic events only, rate per second
    bool operator==(const DftNode&) const = default;
};

/// Galileo-style dynamic fault tree over the emitted subset:
/// toplevel / or / and / seq / lambda. Ordered gates are encoded as an
/// AND node plus a SEQ node `<name>_SEQ` sharing the same child list.
struct Dft {
    std::string toplevel;
    std::vector<DftNode> nodes;

    const DftNode* find(std::string_view name) const;
    void validate() const;

    /// Name-keyed structural equality (emission reorders lines).
    bool operator==(const Dft& other) const;
};

struct DftTransform {
    Dft dft;
    std::vector<std::string> warnings;
};

/// AFT -> DFT: events become named nodes (descriptions sanitized to
/// identifiers, de-duplicated with numeric suffixes); OR/AND map directly;
/// PAND and SAND become the AND+SEQ pair; BasicEvent probabilities are
/// consumed verbatim as rates; AttackSteps get lambda from their EPSS.
DftTransform aft_to_dft(const TreePtr& aft);

/// Deterministic Galileo text: toplevel first, then parents before
/// children (ties by name); rates with 17 significant digits.
std::string emit_galileo(const Dft& dft);

Dft parse_galileo(std::string_view text, const std::string& file = {});

}  // namespace saft
