#include "saft/vulndb.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "saft/strings.hpp"
#include "saft/versioncmp.hpp"

namespace saft {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Cpe::to_string() const {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ":";
        out += fields[i];
    }
    return out;
}

Cpe parse_cpe(std::string_view text) {
    if (!text.starts_with("cpe:2.3:")) {
        throw ParseError("CPE must start with 'cpe:2.3:': " + std::string(text));
    }
    Cpe cpe;
    cpe.fields = split(text, ':');
    if (cpe.fields.size() > 13) {
        throw ParseError("CPE has too many fields: " + std::string(text));
    }
    while (cpe.fields.size() < 13) cpe.fields.emplace_back("*");
    for (auto& f : cpe.fields) {
        if (f.empty()) f = "*";
    }
    return cpe;
}

std::pair<int, long long> cve_id_key(std::string_view id) {
    // CVE-YYYY-NNNN...
    auto parts = split(id, '-');
    if (parts.size() != 3) return {0, 0};
    try {
        return {std::stoi(parts[1]), std::stoll(parts[2])};
    } catch (...) {
        return {0, 0};
    }
}

bool is_valid_cve_id(std::string_view id) {
    auto parts = split(id, '-');
    if (parts.size() != 3 || parts[0] != "CVE") return false;
    if (parts[1].size() != 4 || parts[2].size() < 4) return false;
    auto all_digits = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
            return std::isdigit(c);
        });
    };
    return all_digits(parts[1]) && all_digits(parts[2]);
}

namespace {

std::string pick_description(const json& descriptions) {
    std::string fallback;
    for (const auto& d : descriptions) {
        std::string value = d.value("value", "");
        if (fallback.empty()) fallback = value;
        if (d.value("lang", "") == "en") return value;
    }
    return fallback;
}

std::optional<CvssVector> parse_metrics(const json& cve) {
    if (!cve.contains("metrics")) return std::nullopt;
    const json& metrics = cve["metrics"];
    for (const char* key : {"cvssMetricV31", "cvssMetricV30"}) {
        if (!metrics.contains(key) || metrics[key].empty()) continue;
        const json& entry = metrics[key].front();
        if (!entry.contains("cvssData")) continue;
        const json& data = entry["cvssData"];
        CvssVector vec;
        if (data.contains("vectorString")) {
            vec = parse_cvss_vector(data["vectorString"].get<std::string>());
        }
        if (data.contains("baseScore")) vec.base_score = data["baseScore"].get<double>();
        if (entry.contains("impactScore")) vec.impact_score = entry["impactScore"].get<double>();
        if (entry.contains("exploitabilityScore"))
            vec.exploitability_score = entry["exploitabilityScore"].get<double>();
        return vec;
    }
    return std::nullopt;
}

void collect_cpe_matches(const json& node, std::vector<AffectedCpe>& out) {
    if (node.contains("cpeMatch")) {
        for (const auto& m : node["cpeMatch"]) {
            if (!m.value("vulnerable", true)) continue;
            AffectedCpe affected;
            affected.cpe = m.value("criteria", m.value("cpe23Uri", ""));
            if (affected.cpe.empty()) continue;
            if (m.contains("versionStartIncluding"))
                affected.range.start_including = m["versionStartIncluding"].get<std::string>();
            if (m.contains("versionStartExcluding"))
                affected.range.start_excluding = m["versionStartExcluding"].get<std::string>();
            if (m.contains("versionEndIncluding"))
                affected.range.end_including = m["versionEndIncluding"].get<std::string>();
            if (m.contains("versionEndExcluding"))
                affected.range.end_excluding = m["versionEndExcluding"].get<std::string>();
            out.push_back(std::move(affected));
        }
    }
    if (node.contains("nodes")) {
        for (const auto& child : node["nodes"]) collect_cpe_matches(child, out);
    }
    if (node.contains("children")) {
        for (const auto& child : node["children"]) collect_cpe_matches(child, out);
    }
}

void check_range(const CveRecord& record, const VersionRange& range) {
    auto lower = range.start_including ? range.start_including : range.start_excluding;
    auto upper = range.end_including ? range.end_including : range.end_excluding;
    if (lower && upper) {
        auto cmp = compare_versions(*lower, *upper);
        if (!cmp || *cmp > 0) {
            throw ModelError(record.id + ": version range is not well-ordered (" + *lower +
                             " .. " + *upper + ")");
        }
    }
}

CveRecord parse_cve_object(const json& cve, const std::string& file) {
    CveRecord record;
    if (!cve.contains("id")) throw ParseError("CVE entry without id", file);
    record.id = cve["id"].get<std::string>();
    if (!is_valid_cve_id(record.id)) {
        throw ParseError("malformed CVE id '" + record.id + "'", file);
    }
    if (cve.contains("descriptions")) record.description = pick_description(cve["descriptions"]);
    record.cvss = parse_metrics(cve);
    if (cve.contains("weaknesses")) {
        for (const auto& w : cve["weaknesses"]) {
            if (!w.contains("description")) continue;
            for (const auto& d : w["description"]) {
                std::string value = d.value("value", "");
                if (value.starts_with("CWE-") &&
                    std::find(record.cwe_ids.begin(), record.cwe_ids.end(), value) ==
                        record.cwe_ids.end()) {
                    record.cwe_ids.push_back(value);
                }
            }
        }
    }
    if (cve.contains("configurations")) {
        const json& configs = cve["configurations"];
        if (configs.is_array()) {
            for (const auto& c : configs) collect_cpe_matches(c, record.affected);
        } else {
            collect_cpe_matches(configs, record.affected);
        }
    }
    for (const auto& affected : record.affected) check_range(record, affected.range);
    return record;
}

std::vector<CveRecord> parse_feed(const std::string& text, const std::string& file) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), file);
    }
    std::vector<CveRecord> records;
    auto handle_item = [&](const json& item) {
        const json& cve = item.contains("cve") ? item["cve"] : item;
        records.push_back(parse_cve_object(cve, file));
    };
    if (doc.is_array()) {
        for (const auto& item : doc) handle_item(item);
    } else if (doc.contains("vulnerabilities")) {
        for (const auto& item : doc["vulnerabilities"]) handle_item(item);
    } else if (doc.contains("cve") || doc.contains("id")) {
        handle_item(doc);
    } else {
        throw ParseError("unrecognized CVE feed layout", file);
    }
    return records;
}

bool version_matches(const AffectedCpe& affected, const Cpe& record_cpe,
                     const std::optional<std::string>& query_version,
                     const CveRecord& record, std::vector<std::string>* warnings) {
    if (!query_version) return true;
    auto compare_or_warn = [&](const std::string& bound) -> std::optional<int> {
        auto cmp = compare_versions(*query_version, bound);
        if (!cmp && warnings) {
            warnings->push_back("cannot compare version '" + *query_version + "' with '" +
                                bound + "' (" + record.id + "); treated as no match");
        }
        return cmp;
    };
    const VersionRange& range = affected.range;
    if (!range.empty()) {
        if (range.start_including) {
            auto cmp = compare_or_warn(*range.start_including);
            if (!cmp || *cmp < 0) return false;
        }
        if (range.start_excluding) {
            auto cmp = compare_or_warn(*range.start_excluding);
            if (!cmp || *cmp <= 0) return false;
        }
        if (range.end_including) {
            auto cmp = compare_or_warn(*range.end_including);
            if (!cmp || *cmp > 0) return false;
        }
        if (range.end_excluding) {
            auto cmp = compare_or_warn(*range.end_excluding);
            if (!cmp || *cmp >= 0) return false;
        }
        return true;
    }
    const std::string& rv = record_cpe.version();
    if (rv == "*" || rv == "-") return true;
    auto cmp = compare_or_warn(rv);
    return cmp && *cmp == 0;
}

}  // namespace

CveDatabase CveDatabase::load(const std::string& path, std::vector<std::string>* warnings) {
    std::vector<std::string> files;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path().string());
            }
        }
        std::sort(files.begin(), files.end());
    } else if (fs::exists(path)) {
        files.push_back(path);
    } else {
        throw ParseError("CVE database path does not exist", path);
    }
    std::map<std::string, CveRecord> by_id;  // later files win
    size_t duplicates = 0;
    for (const auto& file : files) {
        for (auto& record : parse_feed(read_file(file), file)) {
            auto [it, inserted] = by_id.insert_or_assign(record.id, std::move(record));
            if (!inserted) ++duplicates;
        }
    }
    if (duplicates > 0 && warnings) {
        warnings->push_back(std::to_string(duplicates) +
                            " duplicate CVE ids replaced by later feed files");
    }
    std::vector<CveRecord> records;
    records.reserve(by_id.size());
    for (auto& [id, record] : by_id) records.push_back(std::move(record));
    return from_records(std::move(records));
}

CveDatabase CveDatabase::from_records(std::vector<CveRecord> records) {
    CveDatabase db;
    db.records_ = std::move(records);
    std::sort(db.records_.begin(), db.records_.end(), [](const auto& a, const auto& b) {
        return cve_id_key(a.id) < cve_id_key(b.id);
    });
    db.build_indexes();
    return db;
}

void CveDatabase::build_indexes() {
    for (size_t i = 0; i < records_.size(); ++i) {
        std::set<std::string> products;
        for (const auto& affected : records_[i].affected) {
            try {
                products.insert(parse_cpe(affected.cpe).product());
            } catch (const ParseError&) {
                // Skip malformed CPEs in the index; match_by_cpe re-reports.
            }
        }
        for (const auto& p : products) product_index_[p].push_back(i);
        std::set<std::string> tokens;
        for (auto& t : tokenize_lower(records_[i].description)) tokens.insert(std::move(t));
        for (const auto& t : tokens) token_index_[t].push_back(i);
    }
}

std::vector<CveRecord> CveDatabase::match_by_cpe(const CpeQuery& query,
                                                 std::vector<std::string>* warnings) const {
    Cpe q = parse_cpe(query.cpe);
    std::optional<std::string> version = query.version;
    if (!version && q.version() != "*" && q.version() != "-") version = q.version();

    std::vector<size_t> candidates;
    if (q.product() == "*") {
        for (size_t i = 0; i < records_.size(); ++i) candidates.push_back(i);
    } else if (auto it = product_index_.find(q.product()); it != product_index_.end()) {
        candidates = it->second;
    }

    auto field_matches = [](const std::string& query_field, const std::string& record_field) {
        return query_field == "*" || record_field == "*" || query_field == record_field;
    };

    std::vector<CveRecord> out;
    for (size_t i : candidates) {
        const CveRecord& record = records_[i];
        for (const auto& affected : record.affected) {
            Cpe rc;
            try {
                rc = parse_cpe(affected.cpe);
            } catch (const ParseError& e) {
                if (warnings) warnings->push_back(record.id + ": " + e.what());
                continue;
            }
            if (!field_matches(q.part(), rc.part())) continue;
            if (!field_matches(q.vendor(), rc.vendor())) continue;
            if (!field_matches(q.product(), rc.product())) continue;
            if (!version_matches(affected, rc, version, record, warnings)) continue;
            out.push_back(record);
            break;
        }
    }
    return out;  // candidate order follows records_, already id-sorted
}

std::vector<CveRecord> CveDatabase::match_by_fulltext(
    const std::vector<std::string>& keywords) const {
    std::vector<std::string> tokens;
    for (const auto& kw : keywords) {
        for (auto& t : tokenize_lower(kw)) tokens.push_back(std::move(t));
    }
    if (tokens.empty()) return {};
    std::vector<size_t> result;
    bool first = true;
    for (const auto& t : tokens) {
        auto it = token_index_.find(t);
        if (it == token_index_.end()) return {};
        if (first) {
            result = it->second;
            first = false;
        } else {
            std::vector<size_t> merged;
            std::set_intersection(result.begin(), result.end(), it->second.begin(),
                                  it->second.end(), std::back_inserter(merged));
            result = std::move(merged);
        }
        if (result.empty()) return {};
    }
    std::vector<CveRecord> out;
    for (size_t i : result) {
        out.push_back(records_[i]);
        out.back().fulltext_match = true;
    }
    return out;
}

std::vector<std::string> CveDatabase::known_products() const {
    std::vector<std::string> out;
    for (const auto& [product, _] : product_index_) {
        if (product != "*") out.push_back(product);
    }
    return out;
}

EpssTable EpssTable::load(const std::string& path) {
    return parse(read_file(path), path);
}

EpssTable EpssTable::parse(std::string_view text, const std::string& file) {
    EpssTable table;
    bool saw_header = false;
    size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line, ',');
        for (auto& f : fields) f = trim(f);
        if (!saw_header) {
            if (fields.size() < 3 || to_lower(fields[0]) != "cve" ||
                to_lower(fields[1]) != "epss" || to_lower(fields[2]) != "percentile") {
                throw ParseError("expected header 'cve,epss,percentile'", line_no, 1, file);
            }
            saw_header = true;
            continue;
        }
        if (fields.size() < 3) throw ParseError("malformed EPSS row", line_no, 1, file);
        EpssEntry entry;
        entry.cve_id = fields[0];
        try {
            entry.epss = std::stod(fields[1]);
            entry.percentile = std::stod(fields[2]);
        } catch (...) {
            throw ParseError("malformed EPSS number", line_no, 1, file);
        }
        if (!is_valid_cve_id(entry.cve_id))
            throw ParseError("malformed CVE id '" + entry.cve_id + "'", line_no, 1, file);
        if (entry.epss < 0 || entry.epss >= 1)
            throw ParseError("EPSS score must be in [0,1)", line_no, 1, file);
        if (entry.percentile < 0 || entry.percentile > 1)
            throw ParseError("EPSS percentile must be in [0,1]", line_no, 1, file);
        table.entries_[entry.cve_id] = entry;
    }
    return table;
}

std::optional<EpssEntry> EpssTable::lookup(std::string_view cve_id) const {
    auto it = entries_.find(cve_id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

}  // namespace saft
