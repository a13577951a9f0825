#include "saft/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>

#include <json.hpp>

#include "saft/atgen.hpp"
#include "saft/combiner.hpp"
#include "saft/cwe.hpp"
#include "saft/dataflow.hpp"
#include "saft/deployment.hpp"
#include "saft/dft.hpp"
#include "saft/fragment.hpp"
#include "saft/hashing.hpp"
#include "saft/strings.hpp"
#include "saft/sysprobe.hpp"
#include "saft/vulndb.hpp"

namespace saft {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view trigger_name(Trigger trigger) {
    switch (trigger) {
        case Trigger::Full: return "full";
        case Trigger::Reconfiguration: return "reconfiguration";
        case Trigger::SystemUpdate: return "system-update";
        case Trigger::CveDbUpdate: return "cve-db-update";
    }
    return "full";
}

std::optional<Trigger> trigger_from_name(std::string_view name) {
    if (name == "full") return Trigger::Full;
    if (name == "reconfiguration") return Trigger::Reconfiguration;
    if (name == "system-update") return Trigger::SystemUpdate;
    if (name == "cve-db-update") return Trigger::CveDbUpdate;
    return std::nullopt;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    return parse(read_file(path), fs::path(path).parent_path().string(), path);
}

PipelineConfig PipelineConfig::parse(std::string_view text, const std::string& config_dir,
                                     const std::string& file) {
    PipelineConfig config;
    auto resolve = [&](const std::string& value) {
        fs::path p(value);
        if (p.is_relative() && !config_dir.empty()) p = fs::path(config_dir) / p;
        return p.lexically_normal().string();
    };
    size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected 'key = value'", line_no, 1, file);
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "dataflow") config.dataflow_path = resolve(value);
            else if (key == "deployment") config.deployment_path = resolve(value);
            else if (key == "snapshots") config.snapshot_dir = resolve(value);
            else if (key == "fault_trees") config.fault_tree_path = resolve(value);
            else if (key == "fragments") config.fragment_path = resolve(value);
            else if (key == "manual_ats") config.manual_at_dir = resolve(value);
            else if (key == "cve_db") config.cve_db_path = resolve(value);
            else if (key == "epss") config.epss_path = resolve(value);
            else if (key == "alias_table") config.alias_path = resolve(value);
            else if (key == "cwe_titles") config.cwe_titles_path = resolve(value);
            else if (key == "output") config.output_dir = resolve(value);
            else if (key == "default_epss") config.default_epss = std::stod(value);
            else if (key == "fragment_pass_limit") config.fragment_pass_limit = std::stoi(value);
            else if (key == "state_space_cap") config.state_space_cap = std::stoull(value);
            else throw ParseError("unknown config key '" + key + "'", line_no, 1, file);
        } catch (const std::invalid_argument&) {
            throw ParseError("malformed number for '" + key + "'", line_no, 1, file);
        } catch (const std::out_of_range&) {
            throw ParseError("number out of range for '" + key + "'", line_no, 1, file);
        }
    }
    if (const char* out = std::getenv("SAFT_OUT"); out && *out) {
        config.output_dir = out;
    }
    return config;
}

namespace {

std::vector<std::string> list_files(const std::string& path, const std::string& extension) {
    std::vector<std::string> files;
    if (path.empty() || !fs::exists(path)) return files;
    if (fs::is_regular_file(path)) {
        files.push_back(path);
        return files;
    }
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() &&
            (extension.empty() || entry.path().extension() == extension)) {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<std::string> list_files_recursive(const std::string& dir) {
    std::vector<std::string> files;
    if (dir.empty() || !fs::exists(dir)) return files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

json analysis_to_json(const AnalysisResult& result) {
    json j;
    j["hazard"] = result.hazard;
    j["p"] = result.p;
    j["mttf"] = result.mttf ? json(*result.mttf) : json(nullptr);
    j["conditional_mttf"] =
        result.conditional_mttf ? json(*result.conditional_mttf) : json(nullptr);
    j["states"] = result.states;
    return j;
}

AnalysisResult analysis_from_json(const json& j) {
    AnalysisResult result;
    result.hazard = j.value("hazard", "");
    result.p = j.value("p", 0.0);
    if (j.contains("mttf") && !j["mttf"].is_null()) result.mttf = j["mttf"].get<double>();
    if (j.contains("conditional_mttf") && !j["conditional_mttf"].is_null())
        result.conditional_mttf = j["conditional_mttf"].get<double>();
    result.states = j.value("states", std::size_t{0});
    return result;
}

class PipelineRun {
public:
    PipelineRun(const PipelineConfig& config, Trigger trigger, RunUntil until)
        : config_(config), trigger_(trigger), until_(until) {
        report_.trigger = trigger;
    }

    Report execute() {
        if (config_.output_dir.empty()) throw ModelError("no output directory configured");
        for (const char* sub : {"", "cache", "ats", "afts", "dfts"}) {
            fs::create_directories(fs::path(config_.output_dir) / sub);
        }
        load_ledger();

        stage_dataflow();
        stage_deploy_parse();
        stage_enrich();
        stage_atgen();
        stage_combine();
        stage_dft();
        if (until_ == RunUntil::Analyze) stage_analyze();

        assemble_report();
        write_ledger();
        write_report_files();
        return report_;
    }

private:
    struct HazardArtifact {
        std::string stem;
        std::string description;
        TreePtr aft;
        std::size_t aft_nodes = 0, aft_gates = 0;
        Dft dft;
        std::size_t dft_nodes = 0, dft_gates = 0;
    };

    // ---- infrastructure -------------------------------------------------

    std::string read_logged(const std::string& path) {
        report_.file_reads.push_back(path);
        return read_file(path);
    }

    std::string out_path(const std::string& rel) {
        return (fs::path(config_.output_dir) / rel).string();
    }

    std::string hash_file(const std::string& path) {
        return sha256_hex(read_logged(path));
    }

    std::string hash_tree_of_files(const std::vector<std::string>& files,
                                   const std::string& base) {
        std::vector<std::pair<std::string, std::string>> parts;
        for (const auto& f : files) {
            std::string rel = base.empty() ? f : fs::path(f).lexically_relative(base).string();
            parts.emplace_back(rel, hash_file(f));
        }
        return combine_hashes(parts);
    }

    void load_ledger() {
        std::string path = out_path("ledger.json");
        if (!fs::exists(path)) {
            ledger_ = json::object();
            return;
        }
        try {
            ledger_ = json::parse(read_file(path));
        } catch (const json::exception&) {
            ledger_ = json::object();  // corrupt ledger: behave like a first run
        }
        if (!ledger_.is_object()) ledger_ = json::object();
    }

    const json* ledger_stage(const std::string& name) const {
        if (!ledger_.contains("stages")) return nullptr;
        const json& stages = ledger_["stages"];
        if (!stages.contains(name)) return nullptr;
        return &stages[name];
    }

    /// Drives one stage. `reused_by_trigger` stages take their previous
    /// record as-is without touching any input; otherwise the stage reruns
    /// unless its input hash matches the ledger and its outputs are intact.
    void run_stage(const std::string& name, bool reused_by_trigger,
                   const std::function<std::string()>& input_hash,
                   const std::function<json()>& run,
                   const std::function<void(const json&)>& load_cached) {
        auto started = std::chrono::steady_clock::now();
        const json* previous = ledger_stage(name);
        json record;
        bool cached = false;
        try {
            if (reused_by_trigger) {
                if (!previous) {
                    throw ModelError("trigger '" + std::string(trigger_name(trigger_)) +
                                     "' reuses the previous '" + name +
                                     "' stage, but no prior run exists; run a full trigger");
                }
                record = *previous;
                load_cached(record.value("meta", json::object()));
                cached = true;
            } else {
                std::string inputs = input_hash();
                if (previous && previous->value("inputs", "") == inputs &&
                    outputs_intact(*previous)) {
                    record = *previous;
                    load_cached(record.value("meta", json::object()));
                    cached = true;
                } else {
                    json meta = run();
                    record = json::object();
                    record["inputs"] = inputs;
                    record["meta"] = meta;
                    record["outputs"] = hash_outputs(stage_outputs_);
                }
            }
        } catch (const std::exception& e) {
            // abort with stage identification; outputs written so far stay
            throw ModelError("stage '" + name + "': " + e.what());
        }
        stage_outputs_.clear();
        new_stages_[name] = record;
        input_hashes_.emplace_back(name, record.value("inputs", ""));
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        report_.stages.push_back({name, cached, seconds});
    }

    bool outputs_intact(const json& record) {
        if (!record.contains("outputs")) return true;
        for (const auto& [rel, digest] : record["outputs"].items()) {
            std::string path = out_path(rel);
            if (!fs::exists(path)) return false;
            if (sha256_hex(read_file(path)) != digest.get<std::string>()) return false;
        }
        return true;
    }

    json hash_outputs(const std::vector<std::string>& rels) {
        json j = json::object();
        for (const auto& rel : rels) j[rel] = sha256_hex(read_file(out_path(rel)));
        return j;
    }

    void write_output(const std::string& rel, std::string_view content) {
        write_file(out_path(rel), content);
        stage_outputs_.push_back(rel);
    }

    // ---- stages ----------------------------------------------------------

    void stage_dataflow() {
        bool reuse = trigger_ == Trigger::SystemUpdate || trigger_ == Trigger::CveDbUpdate;
        run_stage(
            "dataflow", reuse,
            [&] { return combine_hashes({{"dataflow", hash_file(config_.dataflow_path)}}); },
            [&]() -> json {
                dataflow_ = parse_dataflow(read_logged(config_.dataflow_path),
                                           config_.dataflow_path);
                write_output("cache/dataflow.model", print_dataflow(dataflow_));
                return json::object();
            },
            [&](const json&) {
                dataflow_ = parse_dataflow(read_logged(out_path("cache/dataflow.model")),
                                           out_path("cache/dataflow.model"));
            });
    }

    void stage_deploy_parse() {
        bool reuse = trigger_ == Trigger::SystemUpdate || trigger_ == Trigger::CveDbUpdate;
        run_stage(
            "deploy-parse", reuse,
            [&] {
                return combine_hashes({{"deployment", hash_file(config_.deployment_path)},
                                       {"dataflow", stage_output_hash("dataflow")}});
            },
            [&]() -> json {
                deploy_parsed_ = parse_deployment(read_logged(config_.deployment_path),
                                                  dataflow_, config_.deployment_path);
                write_output("cache/deployment.model", print_deployment(deploy_parsed_));
                return json::object();
            },
            [&](const json&) {
                deploy_parsed_ =
                    parse_deployment(read_logged(out_path("cache/deployment.model")), dataflow_,
                                     out_path("cache/deployment.model"));
            });
    }

    void stage_enrich() {
        bool reuse = trigger_ == Trigger::CveDbUpdate;
        run_stage(
            "enrich", reuse,
            [&] {
                std::vector<std::pair<std::string, std::string>> parts;
                parts.emplace_back("deployment", stage_output_hash("deploy-parse"));
                parts.emplace_back(
                    "snapshots",
                    hash_tree_of_files(list_files_recursive(config_.snapshot_dir),
                                       config_.snapshot_dir));
                return combine_hashes(parts);
            },
            [&]() -> json {
                std::vector<std::string> warnings;
                if (config_.snapshot_dir.empty()) {
                    deploy_ = deploy_parsed_;
                } else {
                    deploy_ = enrich_deployment(deploy_parsed_,
                                                load_snapshot(config_.snapshot_dir), &warnings);
                }
                write_output("cache/enriched.model", print_deployment(deploy_));
                json meta;
                meta["warnings"] = warnings;
                stage_warnings(warnings);
                return meta;
            },
            [&](const json& meta) {
                deploy_ = parse_deployment(read_logged(out_path("cache/enriched.model")),
                                           dataflow_, out_path("cache/enriched.model"));
                stage_warnings_from_meta(meta);
            });
    }

    void stage_atgen() {
        run_stage(
            "atgen", /*reused_by_trigger=*/false,
            [&] {
                std::vector<std::pair<std::string, std::string>> parts;
                parts.emplace_back("deployment", stage_output_hash("enrich"));
                parts.emplace_back("cve_db",
                                   hash_tree_of_files(list_files(config_.cve_db_path, ".json"),
                                                      config_.cve_db_path));
                if (!config_.epss_path.empty())
                    parts.emplace_back("epss", hash_file(config_.epss_path));
                if (!config_.alias_path.empty())
                    parts.emplace_back("alias", hash_file(config_.alias_path));
                if (!config_.cwe_titles_path.empty())
                    parts.emplace_back("cwe", hash_file(config_.cwe_titles_path));
                parts.emplace_back("manual",
                                   hash_tree_of_files(list_files(config_.manual_at_dir, ".at"),
                                                      config_.manual_at_dir));
                parts.emplace_back("default_epss", format_double(config_.default_epss));
                return combine_hashes(parts);
            },
            [&]() -> json {
                std::vector<std::string> warnings;
                CveDatabase db = CveDatabase::load(config_.cve_db_path, &warnings);
                EpssTable epss = config_.epss_path.empty() ? EpssTable{}
                                                           : EpssTable::load(config_.epss_path);
                AliasTable aliases = config_.alias_path.empty()
                                         ? AliasTable{}
                                         : AliasTable::load(config_.alias_path);
                CweTitleTable cwe = config_.cwe_titles_path.empty()
                                        ? CweTitleTable::builtin()
                                        : CweTitleTable::load(config_.cwe_titles_path);
                AtGenOptions options;
                options.default_epss = config_.default_epss;
                ats_ = generate_attack_trees(deploy_, db, epss, aliases, cwe, options,
                                             &warnings);
                json entries = json::array();
                for (const auto& at : ats_) {
                    std::string rel = "ats/" + sanitize_identifier(at.component) + ".at";
                    write_output(rel, print_tree(at.tree));
                    entries.push_back({{"component", at.component}, {"file", rel}});
                }
                for (const auto& file : list_files(config_.manual_at_dir, ".at")) {
                    TreePtr tree = parse_attack_tree(read_logged(file), file);
                    std::string component = fs::path(file).stem().string();
                    ats_.push_back({component, tree});
                    entries.push_back({{"component", component}, {"file", file}});
                }
                json meta;
                meta["entries"] = entries;
                meta["warnings"] = warnings;
                stage_warnings(warnings);
                return meta;
            },
            [&](const json& meta) {
                ats_.clear();
                for (const auto& entry : meta.value("entries", json::array())) {
                    std::string file = entry["file"].get<std::string>();
                    std::string path = fs::path(file).is_absolute() ? file : out_path(file);
                    ats_.push_back({entry["component"].get<std::string>(),
                                    parse_attack_tree(read_logged(path), path)});
                }
                stage_warnings_from_meta(meta);
            });
    }

    void stage_combine() {
        run_stage(
            "combine", /*reused_by_trigger=*/false,
            [&] {
                std::vector<std::pair<std::string, std::string>> parts;
                parts.emplace_back("ats", stage_output_hash("atgen"));
                parts.emplace_back("deployment", stage_output_hash("enrich"));
                parts.emplace_back("dataflow", stage_output_hash("dataflow"));
                parts.emplace_back("fault_trees",
                                   hash_tree_of_files(list_files(config_.fault_tree_path, ".ft"),
                                                      config_.fault_tree_path));
                parts.emplace_back(
                    "fragments", hash_tree_of_files(list_files(config_.fragment_path, ".fragment"),
                                                    config_.fragment_path));
                parts.emplace_back("pass_limit", std::to_string(config_.fragment_pass_limit));
                return combine_hashes(parts);
            },
            [&]() -> json {
                std::vector<AftFragment> fragments;
                for (const auto& file : list_files(config_.fragment_path, ".fragment")) {
                    fragments.push_back(parse_fragment(read_logged(file), file));
                }
                CombineOptions options;
                options.fragment_pass_limit = config_.fragment_pass_limit;
                hazards_.clear();
                json hazard_meta = json::array();
                CombineReport combine_report;
                for (const auto& file : list_files(config_.fault_tree_path, ".ft")) {
                    TreePtr ft = parse_fault_tree(read_logged(file), file);
                    HazardArtifact artifact;
                    artifact.stem = fs::path(file).stem().string();
                    artifact.description = std::get<Hazard>(ft->value).description;
                    artifact.aft =
                        generate_aft(ft, fragments, ats_, deploy_, dataflow_, options,
                                     &combine_report);
                    TreeStats stats = count_tree(artifact.aft);
                    artifact.aft_nodes = stats.nodes;
                    artifact.aft_gates = stats.gates;
                    write_output("afts/" + artifact.stem + ".aft", print_tree(artifact.aft));
                    hazard_meta.push_back({{"stem", artifact.stem},
                                           {"description", artifact.description},
                                           {"aft_nodes", artifact.aft_nodes},
                                           {"aft_gates", artifact.aft_gates}});
                    hazards_.push_back(std::move(artifact));
                }
                if (hazards_.empty()) {
                    throw ModelError("no fault trees found under '" + config_.fault_tree_path +
                                     "'");
                }
                report_.pruned_events.insert(report_.pruned_events.end(),
                                             combine_report.pruned_events.begin(),
                                             combine_report.pruned_events.end());
                stage_warnings(combine_report.warnings);
                json meta;
                meta["hazards"] = hazard_meta;
                meta["pruned"] = combine_report.pruned_events;
                meta["warnings"] = combine_report.warnings;
                return meta;
            },
            [&](const json& meta) {
                hazards_.clear();
                for (const auto& h : meta.value("hazards", json::array())) {
                    HazardArtifact artifact;
                    artifact.stem = h["stem"].get<std::string>();
                    artifact.description = h["description"].get<std::string>();
                    artifact.aft_nodes = h["aft_nodes"].get<std::size_t>();
                    artifact.aft_gates = h["aft_gates"].get<std::size_t>();
                    std::string path = out_path("afts/" + artifact.stem + ".aft");
                    artifact.aft = parse_aft(read_logged(path), path);
                    hazards_.push_back(std::move(artifact));
                }
                for (const auto& p : meta.value("pruned", json::array())) {
                    report_.pruned_events.push_back(p.get<std::string>());
                }
                stage_warnings_from_meta(meta);
            });
    }

    void stage_dft() {
        run_stage(
            "dft", /*reused_by_trigger=*/false,
            [&] { return combine_hashes({{"afts", stage_output_hash("combine")}}); },
            [&]() -> json {
                json hazard_meta = json::array();
                std::vector<std::string> warnings;
                for (auto& artifact : hazards_) {
                    DftTransform transform = aft_to_dft(artifact.aft);
                    artifact.dft = std::move(transform.dft);
                    warnings.insert(warnings.end(), transform.warnings.begin(),
                                    transform.warnings.end());
                    artifact.dft_nodes = artifact.dft.nodes.size();
                    for (const auto& node : artifact.dft.nodes) {
                        if (node.kind != DftNodeKind::Basic) ++artifact.dft_gates;
                    }
                    write_output("dfts/" + artifact.stem + ".dft", emit_galileo(artifact.dft));
                    hazard_meta.push_back({{"stem", artifact.stem},
                                           {"dft_nodes", artifact.dft_nodes},
                                           {"dft_gates", artifact.dft_gates}});
                }
                stage_warnings(warnings);
                json meta;
                meta["hazards"] = hazard_meta;
                meta["warnings"] = warnings;
                return meta;
            },
            [&](const json& meta) {
                std::map<std::string, json> by_stem;
                for (const auto& h : meta.value("hazards", json::array())) {
                    by_stem[h["stem"].get<std::string>()] = h;
                }
                for (auto& artifact : hazards_) {
                    std::string path = out_path("dfts/" + artifact.stem + ".dft");
                    artifact.dft = parse_galileo(read_logged(path), path);
                    auto it = by_stem.find(artifact.stem);
                    if (it != by_stem.end()) {
                        artifact.dft_nodes = it->second["dft_nodes"].get<std::size_t>();
                        artifact.dft_gates = it->second["dft_gates"].get<std::size_t>();
                    }
                }
                stage_warnings_from_meta(meta);
            });
    }

    void stage_analyze() {
        run_stage(
            "analyze", /*reused_by_trigger=*/false,
            [&] {
                return combine_hashes({{"dfts", stage_output_hash("dft")},
                                       {"state_cap", std::to_string(config_.state_space_cap)}});
            },
            [&]() -> json {
                AnalysisOptions options;
                options.state_cap = config_.state_space_cap;
                results_.clear();
                json meta_results = json::array();
                for (const auto& artifact : hazards_) {
                    AnalysisResult result = analyze(artifact.dft, options);
                    result.hazard = artifact.description;
                    meta_results.push_back(analysis_to_json(result));
                    results_.push_back(std::move(result));
                }
                json meta;
                meta["results"] = meta_results;
                return meta;
            },
            [&](const json& meta) {
                results_.clear();
                for (const auto& r : meta.value("results", json::array())) {
                    results_.push_back(analysis_from_json(r));
                }
            });
    }

    // ---- reporting -------------------------------------------------------

    void assemble_report() {
        std::vector<AnalysisResult> previous;
        if (ledger_.contains("results")) {
            for (const auto& r : ledger_["results"]) previous.push_back(analysis_from_json(r));
        }
        std::map<std::string, const AnalysisResult*> prev_by_name;
        for (const auto& r : previous) prev_by_name[r.hazard] = &r;

        std::map<std::string, const AnalysisResult*> current_by_name;
        for (const auto& r : results_) current_by_name[r.hazard] = &r;

        for (const auto& artifact : hazards_) {
            HazardReport hr;
            hr.name = artifact.description;
            hr.aft_nodes = artifact.aft_nodes;
            hr.aft_gates = artifact.aft_gates;
            hr.dft_nodes = artifact.dft_nodes;
            hr.dft_gates = artifact.dft_gates;
            if (auto it = current_by_name.find(artifact.description);
                it != current_by_name.end()) {
                hr.result = *it->second;
                hr.analyzed = true;
                if (auto pit = prev_by_name.find(artifact.description);
                    pit != prev_by_name.end()) {
                    hr.trend = trend_direction(*pit->second, hr.result);
                }
            }
            report_.hazards.push_back(std::move(hr));
        }
        report_.run_id = combine_hashes(input_hashes_).substr(0, 16);
    }

    void write_ledger() {
        json ledger;
        ledger["stages"] = json::object();
        // carry forward records of stages that did not run this time
        if (ledger_.contains("stages")) {
            for (const auto& [name, record] : ledger_["stages"].items()) {
                ledger["stages"][name] = record;
            }
        }
        for (const auto& [name, record] : new_stages_) ledger["stages"][name] = record;
        json results = json::array();
        if (until_ == RunUntil::Analyze) {
            for (const auto& r : results_) results.push_back(analysis_to_json(r));
        } else if (ledger_.contains("results")) {
            results = ledger_["results"];
        }
        ledger["results"] = results;
        ledger["run_id"] = report_.run_id;
        ledger["timestamp"] = static_cast<long long>(
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count());
        write_file(out_path("ledger.json"), ledger.dump(2) + "\n");
    }

    void write_report_files() {
        write_file(out_path("report.json"), report_.to_json());
        json timing;
        timing["trigger"] = std::string(trigger_name(trigger_));
        json stages = json::array();
        for (const auto& s : report_.stages) {
            stages.push_back({{"name", s.name}, {"cached", s.cached}, {"seconds", s.seconds}});
        }
        timing["stages"] = stages;
        json reads = json::array();
        for (const auto& f : report_.file_reads) reads.push_back(f);
        timing["file_reads"] = reads;
        write_file(out_path("timing.json"), timing.dump(2) + "\n");
    }

    std::string stage_output_hash(const std::string& name) {
        auto it = new_stages_.find(name);
        if (it == new_stages_.end() || !it->second.contains("outputs")) return "absent";
        std::vector<std::pair<std::string, std::string>> parts;
        for (const auto& [rel, digest] : it->second["outputs"].items()) {
            parts.emplace_back(rel, digest.get<std::string>());
        }
        return combine_hashes(parts);
    }

    void stage_warnings(const std::vector<std::string>& warnings) {
        report_.warnings.insert(report_.warnings.end(), warnings.begin(), warnings.end());
    }

    void stage_warnings_from_meta(const json& meta) {
        for (const auto& w : meta.value("warnings", json::array())) {
            report_.warnings.push_back(w.get<std::string>());
        }
    }

    PipelineConfig config_;
    Trigger trigger_;
    RunUntil until_;

    DataflowModel dataflow_;
    DeploymentModel deploy_parsed_;
    DeploymentModel deploy_;
    std::vector<GeneratedAt> ats_;
    std::vector<HazardArtifact> hazards_;
    std::vector<AnalysisResult> results_;

    json ledger_;
    std::map<std::string, json> new_stages_;
    std::vector<std::pair<std::string, std::string>> input_hashes_;
    std::vector<std::string> stage_outputs_;
    Report report_;
};

}  // namespace

std::string Report::to_json() const {
    json j;
    j["run_id"] = run_id;
    j["trigger"] = std::string(trigger_name(trigger));
    json stages_json = json::array();
    for (const auto& s : stages) {
        stages_json.push_back({{"name", s.name}, {"cached", s.cached}});
    }
    j["stages"] = stages_json;
    json hazards_json = json::array();
    for (const auto& h : hazards) {
        json hj;
        hj["name"] = h.name;
        if (h.analyzed) {
            hj["p"] = h.result.p;
            hj["mttf"] = h.result.mttf ? json(*h.result.mttf) : json(nullptr);
            hj["conditional_mttf"] =
                h.result.conditional_mttf ? json(*h.result.conditional_mttf) : json(nullptr);
            hj["states"] = h.result.states;
        }
        hj["trend"] = h.trend ? json(std::string(trend_direction_name(*h.trend))) : json(nullptr);
        hj["sizes"] = {{"aft_nodes", h.aft_nodes},
                       {"aft_gates", h.aft_gates},
                       {"dft_nodes", h.dft_nodes},
                       {"dft_gates", h.dft_gates}};
        hazards_json.push_back(hj);
    }
    j["hazards"] = hazards_json;
    j["pruned_events"] = pruned_events;
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

Report run_pipeline(const PipelineConfig& config, Trigger trigger, RunUntil until) {
    return PipelineRun(config, trigger, until).execute();
}

std::vector<Diagnostic> validate_inputs(const PipelineConfig& config) {
    std::vector<Diagnostic> diags;
    auto guard = [&](const std::string& fallback_file, auto&& fn) {
        try {
            fn();
            return true;
        } catch (const ParseError& e) {
            diags.push_back({e.file().empty() ? fallback_file : e.file(), e.line(), e.column(),
                             e.message()});
        } catch (const std::exception& e) {
            diags.push_back({fallback_file, 0, 0, e.what()});
        }
        return false;
    };

    for (const auto& [label, path, required] :
         {std::tuple{"dataflow", config.dataflow_path, true},
          std::tuple{"deployment", config.deployment_path, true},
          std::tuple{"fault_trees", config.fault_tree_path, true},
          std::tuple{"cve_db", config.cve_db_path, true},
          std::tuple{"snapshots", config.snapshot_dir, false},
          std::tuple{"fragments", config.fragment_path, false},
          std::tuple{"manual_ats", config.manual_at_dir, false},
          std::tuple{"epss", config.epss_path, false},
          std::tuple{"alias_table", config.alias_path, false},
          std::tuple{"cwe_titles", config.cwe_titles_path, false}}) {
        if (path.empty()) {
            if (required)
                diags.push_back({label, 0, 0, std::string("required path not configured")});
            continue;
        }
        if (!fs::exists(path)) {
            diags.push_back({path, 0, 0, "path does not exist"});
        }
    }

    DataflowModel dataflow;
    bool have_dataflow =
        !config.dataflow_path.empty() && fs::exists(config.dataflow_path) &&
        guard(config.dataflow_path, [&] {
            dataflow = parse_dataflow(read_file(config.dataflow_path), config.dataflow_path);
        });

    DeploymentModel deploy;
    bool have_deploy = have_dataflow && !config.deployment_path.empty() &&
                       fs::exists(config.deployment_path) &&
                       guard(config.deployment_path, [&] {
                           deploy = parse_deployment(read_file(config.deployment_path), dataflow,
                                                     config.deployment_path);
                       });

    if (have_deploy && !config.snapshot_dir.empty() && fs::exists(config.snapshot_dir)) {
        guard(config.snapshot_dir, [&] {
            deploy = enrich_deployment(deploy, load_snapshot(config.snapshot_dir));
        });
    }

    for (const auto& file : list_files(config.fragment_path, ".fragment")) {
        guard(file, [&] { parse_fragment(read_file(file), file); });
    }
    if (!config.cve_db_path.empty() && fs::exists(config.cve_db_path)) {
        guard(config.cve_db_path, [&] { CveDatabase::load(config.cve_db_path); });
    }
    if (!config.epss_path.empty() && fs::exists(config.epss_path)) {
        guard(config.epss_path, [&] { EpssTable::load(config.epss_path); });
    }
    if (!config.alias_path.empty() && fs::exists(config.alias_path)) {
        guard(config.alias_path, [&] { AliasTable::load(config.alias_path); });
    }
    if (!config.cwe_titles_path.empty() && fs::exists(config.cwe_titles_path)) {
        guard(config.cwe_titles_path, [&] { CweTitleTable::load(config.cwe_titles_path); });
    }

    for (const auto& file : list_files(config.fault_tree_path, ".ft")) {
        guard(file, [&] {
            TreePtr ft = parse_fault_tree(read_file(file), file);
            if (!have_deploy) return;
            visit_tree(ft, [&](const TreePtr& node) {
                if (const auto* event = tree_as<AttackEvent>(node)) {
                    bool known = false;
                    if (event->context_kind == TreeContextKind::Deployment) {
                        known = deploy.find_element(event->context) ||
                                deploy.find_channel(event->context);
                    } else if (event->context_kind == TreeContextKind::Dataflow) {
                        known = dataflow.find_component(event->context) ||
                                dataflow.find_channel(event->context);
                    }
                    if (!known) {
                        diags.push_back({file, 0, 0,
                                         "AttackEvent '" + event->description +
                                             "' references unknown element '" + event->context +
                                             "'"});
                    }
                }
                return true;
            });
        });
    }
    for (const auto& file : list_files(config.manual_at_dir, ".at")) {
        guard(file, [&] { parse_attack_tree(read_file(file), file); });
    }
    return diags;
}

}  // namespace saft
