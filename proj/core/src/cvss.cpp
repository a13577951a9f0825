#include "saft/cvss.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "saft/strings.hpp"

namespace saft {

namespace {

struct MetricSpec {
    const char* key;
    std::vector<const char*> values;
    bool ordinal;
};

// CVSS 3.x metric vocabulary. X means "not defined" wherever it appears.
// C/I/A (and MC/MI/MA) order N < L < H; CR/IR/AR order L < M < H.
const std::vector<MetricSpec>& metric_table() {
    static const std::vector<MetricSpec> table = {
        {"AV", {"N", "A", "L", "P"}, false},
        {"AC", {"L", "H"}, false},
        {"PR", {"N", "L", "H"}, false},
        {"UI", {"N", "R"}, false},
        {"S", {"U", "C"}, false},
        {"C", {"N", "L", "H"}, true},
        {"I", {"N", "L", "H"}, true},
        {"A", {"N", "L", "H"}, true},
        {"E", {"X", "U", "P", "F", "H"}, false},
        {"RL", {"X", "O", "T", "W", "U"}, false},
        {"RC", {"X", "U", "R", "C"}, false},
        {"CR", {"X", "L", "M", "H"}, true},
        {"IR", {"X", "L", "M", "H"}, true},
        {"AR", {"X", "L", "M", "H"}, true},
        {"MAV", {"X", "N", "A", "L", "P"}, false},
        {"MAC", {"X", "L", "H"}, false},
        {"MPR", {"X", "N", "L", "H"}, false},
        {"MUI", {"X", "N", "R"}, false},
        {"MS", {"X", "U", "C"}, false},
        {"MC", {"X", "N", "L", "H"}, true},
        {"MI", {"X", "N", "L", "H"}, true},
        {"MA", {"X", "N", "L", "H"}, true},
    };
    return table;
}

const MetricSpec* find_metric(std::string_view key) {
    for (const auto& spec : metric_table()) {
        if (key == spec.key) return &spec;
    }
    return nullptr;
}

int rank_of(const MetricSpec& spec, std::string_view value) {
    // Value order in the table is the severity order; X sits at index 0
    // for the metrics that allow it and never participates in ranking.
    for (size_t i = 0; i < spec.values.size(); ++i) {
        if (value == spec.values[i]) return static_cast<int>(i);
    }
    return -1;
}

struct ParsedPrefix {
    std::string version;
    size_t body_start;
};

ParsedPrefix parse_prefix(std::string_view text) {
    if (!text.starts_with("CVSS:")) {
        throw ParseError("CVSS vector must start with 'CVSS:'");
    }
    size_t slash = text.find('/');
    if (slash == std::string_view::npos) {
        throw ParseError("CVSS vector has no metrics");
    }
    std::string version(text.substr(5, slash - 5));
    if (version != "3.0" && version != "3.1") {
        throw ParseError("unsupported CVSS version '" + version + "'");
    }
    return {std::move(version), slash + 1};
}

template <typename OnPair>
void parse_pairs(std::string_view text, size_t start, OnPair&& on_pair) {
    std::vector<std::string> seen;
    for (const std::string& part : split(text.substr(start), '/')) {
        size_t colon = part.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 >= part.size()) {
            throw ParseError("malformed CVSS metric '" + part + "'");
        }
        std::string key = part.substr(0, colon);
        std::string value = part.substr(colon + 1);
        if (!find_metric(key)) {
            throw ParseError("unknown CVSS metric '" + key + "'");
        }
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            throw ParseError("duplicate CVSS metric '" + key + "'");
        }
        seen.push_back(key);
        on_pair(std::move(key), std::move(value));
    }
}

std::string join_metrics(const std::string& version,
                         const std::vector<std::pair<std::string, std::string>>& metrics) {
    std::string out = "CVSS:" + version;
    for (const auto& [k, v] : metrics) {
        out += "/" + k + ":" + v;
    }
    return out;
}

}  // namespace

std::optional<std::string> CvssVector::metric(std::string_view key) const {
    for (const auto& [k, v] : metrics) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string CvssVector::to_string() const { return join_metrics(version, metrics); }

std::optional<std::string> CvssRequirement::metric(std::string_view key) const {
    for (const auto& [k, v] : metrics) {
        if (k == key) return v;
    }
    return std::nullopt;
}

bool CvssRequirement::all_dont_care() const {
    return std::all_of(metrics.begin(), metrics.end(),
                       [](const auto& kv) { return kv.second == kDontCare; });
}

std::string CvssRequirement::to_string() const { return join_metrics(version, metrics); }

CvssVector parse_cvss_vector(std::string_view text) {
    auto prefix = parse_prefix(text);
    CvssVector vec;
    vec.version = prefix.version;
    parse_pairs(text, prefix.body_start, [&](std::string key, std::string value) {
        if (!cvss_valid_value(key, value)) {
            throw ParseError("invalid value '" + value + "' for CVSS metric '" + key + "'");
        }
        vec.metrics.emplace_back(std::move(key), std::move(value));
    });
    if (vec.metrics.empty()) throw ParseError("CVSS vector has no metrics");
    return vec;
}

CvssRequirement parse_cvss_requirement(std::string_view text) {
    auto prefix = parse_prefix(text);
    CvssRequirement req;
    req.version = prefix.version;
    parse_pairs(text, prefix.body_start, [&](std::string key, std::string value) {
        if (value != CvssRequirement::kDontCare && !cvss_valid_value(key, value)) {
            throw ParseError("invalid value '" + value + "' for CVSS metric '" + key + "'");
        }
        req.metrics.emplace_back(std::move(key), std::move(value));
    });
    if (req.metrics.empty()) throw ParseError("CVSS requirement has no metrics");
    return req;
}

namespace {

// Core of both satisfies() overloads: `lookup` yields the provided value
// for a key, or nullopt when the provider carries nothing usable.
template <typename Lookup>
bool satisfies_impl(Lookup&& lookup, const CvssRequirement& requirement) {
    for (const auto& [key, required] : requirement.metrics) {
        if (required == CvssRequirement::kDontCare) continue;
        const MetricSpec* spec = find_metric(key);
        if (spec && required == "X") continue;  // "not defined" constrains nothing
        std::optional<std::string> provided = lookup(key);
        if (provided && *provided == "X") provided.reset();
        if (!provided) return false;
        if (!spec) return false;
        if (spec->ordinal) {
            int have = rank_of(*spec, *provided);
            int want = rank_of(*spec, required);
            if (have < 0 || want < 0 || have < want) return false;
        } else if (*provided != required) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool cvss_satisfies(const CvssVector& vector, const CvssRequirement& requirement) {
    return satisfies_impl([&](std::string_view key) { return vector.metric(key); },
                          requirement);
}

bool cvss_satisfies(const CvssRequirement& provided, const CvssRequirement& requirement) {
    return satisfies_impl(
        [&](std::string_view key) -> std::optional<std::string> {
            auto value = provided.metric(key);
            if (value && *value == CvssRequirement::kDontCare) return std::nullopt;
            return value;
        },
        requirement);
}

bool cvss_known_metric(std::string_view key) { return find_metric(key) != nullptr; }

bool cvss_valid_value(std::string_view key, std::string_view value) {
    const MetricSpec* spec = find_metric(key);
    return spec && rank_of(*spec, value) >= 0;
}

bool cvss_is_ordinal(std::string_view key) {
    const MetricSpec* spec = find_metric(key);
    return spec && spec->ordinal;
}

std::optional<int> cvss_ordinal_rank(std::string_view key, std::string_view value) {
    const MetricSpec* spec = find_metric(key);
    if (!spec || !spec->ordinal || value == "X") return std::nullopt;
    int rank = rank_of(*spec, value);
    if (rank < 0) return std::nullopt;
    return rank;
}

}  // namespace saft
