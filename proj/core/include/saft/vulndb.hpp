#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saft/cvss.hpp"

namespace saft {

/// Normalized CPE 2.3 name: cpe:2.3:part:vendor:product:version:... padded
/// with '*' to the full 13 colon-separated fields.
struct Cpe {
    std::vector<std::string> fields;  // size 13, fields[0]="cpe", fields[1]="2.3"

    const std::string& part() const { return fields[2]; }
    const std::string& vendor() const { return fields[3]; }
    const std::string& product() const { return fields[4]; }
    const std::string& version() const { return fields[5]; }
    std::string to_string() const;
};

Cpe parse_cpe(std::string_view text);

struct CpeQuery {
    std::string cpe;  // cpe:2.3 prefix form, version field optional
    std::optional<std::string> version;
};

struct VersionRange {
    std::optional<std::string> start_including;
    std::optional<std::string> start_excluding;
    std::optional<std::string> end_including;
    std::optional<std::string> end_excluding;
    bool empty() const {
        return !start_including && !start_excluding && !end_including && !end_excluding;
    }
    bool operator==(const VersionRange&) const = default;
};

struct AffectedCpe {
    std::string cpe;
    VersionRange range;
    bool operator==(const AffectedCpe&) const = default;
};

struct CveRecord {
    std::string id;  // CVE-\d{4}-\d{4,}
    std::string description;
    std::optional<CvssVector> cvss;
    std::vector<AffectedCpe> affected;
    std::vector<std::string> cwe_ids;
    bool fulltext_match = false;  // set on full-text results (lower confidence)
};

/// Numeric (year, sequence) key for ascending CVE-id ordering.
std::pair<int, long long> cve_id_key(std::string_view id);
bool is_valid_cve_id(std::string_view id);

/// Immutable, locally-loaded vulnerability database over the NVD JSON
/// subset (id, descriptions, metrics.cvssMetricV3x, weaknesses,
/// configurations cpeMatch entries). Indexed by CPE product and by
/// lowercase description token; safe for concurrent queries.
class CveDatabase {
public:
    /// `path` is one JSON document or a directory of *.json documents
    /// (loaded in sorted name order; later files win on duplicate ids).
    static CveDatabase load(const std::string& path,
                            std::vector<std::string>* warnings = nullptr);
    static CveDatabase from_records(std::vector<CveRecord> records);

    const std::vector<CveRecord>& records() const { return records_; }

    /// Records whose affected CPEs match the query's vendor/product and
    /// whose version constraint contains the query version. Sorted by id.
    std::vector<CveRecord> match_by_cpe(const CpeQuery& query,
                                        std::vector<std::string>* warnings = nullptr) const;

    /// Records whose description contains every keyword as a whole token,
    /// case-insensitively. Results carry fulltext_match = true.
    std::vector<CveRecord> match_by_fulltext(const std::vector<std::string>& keywords) const;

    /// Distinct CPE product names, for the CPE-guessing dictionary.
    std::vector<std::string> known_products() const;

private:
    void build_indexes();

    std::vector<CveRecord> records_;  // sorted by cve_id_key
    std::map<std::string, std::vector<std::size_t>> product_index_;
    std::map<std::string, std::vector<std::size_t>> token_index_;
};

struct EpssEntry {
    std::string cve_id;
    double epss = 0.0;       // [0,1)
    double percentile = 0.0; // [0,1]
};

/// EPSS CSV table (`cve,epss,percentile`; leading # comment lines allowed).
class EpssTable {
public:
    static EpssTable load(const std::string& path);
    static EpssTable parse(std::string_view text, const std::string& file = {});

    std::optional<EpssEntry> lookup(std::string_view cve_id) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, EpssEntry, std::less<>> entries_;
};

}  // namespace saft
