#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saft/analyzer.hpp"
#include "saft/tree.hpp"

namespace saft {

/// Paths and knobs for one toolchain run. Relative paths in a config file
/// are resolved against the file's directory; the SAFT_OUT environment
/// variable overrides the output directory.
struct PipelineConfig {
    std::string dataflow_path;
    std::string deployment_path;
    std::string snapshot_dir;      // optional
    std::string fault_tree_path;   // .ft file or directory of them
    std::string fragment_path;     // optional: .fragment file or directory
    std::string manual_at_dir;     // optional: directory of .at files
    std::string cve_db_path;       // NVD-JSON file or directory
    std::string epss_path;         // optional EPSS CSV
    std::string alias_path;        // optional package->CPE alias table
    std::string cwe_titles_path;   // optional CWE title overrides
    std::string output_dir;

    double default_epss = 0.0;
    int fragment_pass_limit = 5;
    std::size_t state_space_cap = 1'000'000;

    static PipelineConfig load(const std::string& path);
    static PipelineConfig parse(std::string_view text, const std::string& config_dir,
                                const std::string& file = {});
};

enum class Trigger { Full, Reconfiguration, SystemUpdate, CveDbUpdate };
std::string_view trigger_name(Trigger trigger);
std::optional<Trigger> trigger_from_name(std::string_view name);

struct StageRun {
    std::string name;
    bool cached = false;
    double seconds = 0.0;  // reported in the timing sidecar, not report.json
};

struct HazardReport {
    std::string name;  // hazard description
    AnalysisResult result;
    std::optional<TrendDirection> trend;
    std::size_t aft_nodes = 0, aft_gates = 0;
    std::size_t dft_nodes = 0, dft_gates = 0;
    bool analyzed = false;
};

struct Report {
    std::string run_id;
    Trigger trigger = Trigger::Full;
    std::vector<StageRun> stages;
    std::vector<HazardReport> hazards;
    std::vector<std::string> pruned_events;
    std::vector<std::string> warnings;
    std::vector<std::string> file_reads;  // every file read during the run

    /// Deterministic JSON (no durations, no timestamps): byte-identical
    /// for identical inputs.
    std::string to_json() const;
};

struct Diagnostic {
    std::string file;
    std::size_t line = 0;
    std::size_t column = 0;
    std::string message;
};

/// Parse-and-check every configured input without running the pipeline.
std::vector<Diagnostic> validate_inputs(const PipelineConfig& config);

/// How far to take the run: emit Galileo files only, or analyze too.
enum class RunUntil { Dft, Analyze };

/// Executes the staged pipeline (dataflow, deploy-parse, enrich, atgen,
/// combine, dft, analyze) with per-stage content-hash caching. The
/// trigger selects which leading stages are reused from the previous run
/// without re-reading their inputs:
///   full / reconfiguration: everything re-checked;
///   system-update: dataflow and deployment parse reused, re-enrich onward;
///   cve-db-update: models reused, attack-tree generation onward.
/// Writes report.json, timing.json, and the run ledger under output_dir.
Report run_pipeline(const PipelineConfig& config, Trigger trigger,
                    RunUntil until = RunUntil::Analyze);

}  // namespace saft
