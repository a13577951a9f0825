#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "saft/errors.hpp"

namespace saft {

/// Parsed CVSS 3.x vector, e.g. CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:H.
/// Metric order is preserved so the canonical slash form round-trips.
/// Unknown metric keys or values are rejected at parse time.
struct CvssVector {
    std::string version = "3.1";  // "3.0" or "3.1"
    std::vector<std::pair<std::string, std::string>> metrics;

    std::optional<double> base_score;
    std::optional<double> impact_score;
    std::optional<double> exploitability_score;

    std::optional<std::string> metric(std::string_view key) const;
    std::string to_string() const;

    bool operator==(const CvssVector&) const = default;
};

/// CVSS-style condition where any metric value may be `*` ("don't care").
struct CvssRequirement {
    std::string version = "3.1";
    static constexpr const char* kDontCare = "*";
    std::vector<std::pair<std::string, std::string>> metrics;  // value may be "*"

    std::optional<std::string> metric(std::string_view key) const;
    bool all_dont_care() const;
    std::string to_string() const;

    bool operator==(const CvssRequirement&) const = default;
};

CvssVector parse_cvss_vector(std::string_view text);
CvssRequirement parse_cvss_requirement(std::string_view text);

/// True when the vector meets every constraint of the requirement.
///
/// Severity-ordered metrics (C/I/A and their modified forms: N < L < H;
/// CR/IR/AR: L < M < H) are compared greater-than-equal; every other
/// metric is on a nominal scale and compared for equality. `*` entries
/// always pass. A metric the vector does not carry (or carries as X,
/// "not defined") fails any non-`*` constraint on it.
bool cvss_satisfies(const CvssVector& vector, const CvssRequirement& requirement);

/// Same comparison with a requirement on the providing side (fragment
/// preconditions): the provider's concrete entries act as the vector,
/// its `*`/missing entries count as absent.
bool cvss_satisfies(const CvssRequirement& provided, const CvssRequirement& requirement);

/// Vocabulary lookup used by parsers and generators; nullopt for unknown keys.
bool cvss_known_metric(std::string_view key);
bool cvss_valid_value(std::string_view key, std::string_view value);
bool cvss_is_ordinal(std::string_view key);
/// Rank on the severity scale; nullopt when the value does not take part
/// in ordering (X = not defined).
std::optional<int> cvss_ordinal_rank(std::string_view key, std::string_view value);

}  // namespace saft
