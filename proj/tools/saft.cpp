// saft — attack-fault tree toolchain driver.
//
// Verbs: run (full pipeline), validate (check inputs), report (show the
// last run), galileo (emit DFT files only), analyze (single .dft).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>

#include <CLI11.hpp>

#include "saft/analyzer.hpp"
#include "saft/dft.hpp"
#include "saft/pipeline.hpp"
#include "saft/strings.hpp"

namespace fs = std::filesystem;

namespace {

void add_config_flags(CLI::App* cmd, std::string& config_path, saft::PipelineConfig& flags) {
    cmd->add_option("-c,--config", config_path, "pipeline config file (key = value lines)");
    cmd->add_option("--dataflow", flags.dataflow_path, "dataflow model (.dataflow)");
    cmd->add_option("--deployment", flags.deployment_path, "deployment model (.deploy)");
    cmd->add_option("--snapshots", flags.snapshot_dir, "system snapshot directory");
    cmd->add_option("--fault-trees", flags.fault_tree_path, ".ft file or directory");
    cmd->add_option("--fragments", flags.fragment_path, ".fragment file or directory");
    cmd->add_option("--manual-ats", flags.manual_at_dir, "directory of manual .at files");
    cmd->add_option("--cve-db", flags.cve_db_path, "NVD-JSON file or directory");
    cmd->add_option("--epss", flags.epss_path, "EPSS CSV (cve,epss,percentile)");
    cmd->add_option("--alias-table", flags.alias_path, "package-to-CPE alias table");
    cmd->add_option("--cwe-titles", flags.cwe_titles_path, "CWE title overrides (tsv)");
    cmd->add_option("-o,--output", flags.output_dir, "output directory (overrides SAFT_OUT)");
}

saft::PipelineConfig effective_config(const std::string& config_path,
                                      const saft::PipelineConfig& flags) {
    saft::PipelineConfig config;
    if (!config_path.empty()) config = saft::PipelineConfig::load(config_path);
    auto override_path = [](std::string& target, const std::string& value) {
        if (!value.empty()) target = fs::absolute(value).lexically_normal().string();
    };
    override_path(config.dataflow_path, flags.dataflow_path);
    override_path(config.deployment_path, flags.deployment_path);
    override_path(config.snapshot_dir, flags.snapshot_dir);
    override_path(config.fault_tree_path, flags.fault_tree_path);
    override_path(config.fragment_path, flags.fragment_path);
    override_path(config.manual_at_dir, flags.manual_at_dir);
    override_path(config.cve_db_path, flags.cve_db_path);
    override_path(config.epss_path, flags.epss_path);
    override_path(config.alias_path, flags.alias_path);
    override_path(config.cwe_titles_path, flags.cwe_titles_path);
    override_path(config.output_dir, flags.output_dir);
    return config;
}

void print_report_summary(const saft::Report& report) {
    std::cout << "run " << report.run_id << " (trigger: "
              << saft::trigger_name(report.trigger) << ")\n";
    for (const auto& stage : report.stages) {
        std::cout << "  stage " << stage.name << (stage.cached ? " [cached]" : " [ran]")
                  << "\n";
    }
    for (const auto& hazard : report.hazards) {
        std::cout << "hazard: " << hazard.name << "\n";
        if (hazard.analyzed) {
            std::cout << "  p = " << saft::format_double(hazard.result.p) << "\n";
            std::cout << "  MTTF = "
                      << (hazard.result.mttf ? saft::format_double(*hazard.result.mttf) + " s"
                                             : std::string("inf"))
                      << "\n";
            std::cout << "  conditional MTTF = "
                      << (hazard.result.conditional_mttf
                              ? saft::format_double(*hazard.result.conditional_mttf) + " s"
                              : std::string("undefined"))
                      << "\n";
            if (hazard.trend) {
                std::cout << "  trend: " << saft::trend_direction_name(*hazard.trend) << "\n";
            }
        }
        std::cout << "  AFT " << hazard.aft_nodes << " nodes / " << hazard.aft_gates
                  << " gates; DFT " << hazard.dft_nodes << " nodes / " << hazard.dft_gates
                  << " gates\n";
    }
    if (!report.pruned_events.empty()) {
        std::cout << "open attack surface (pruned attack events):\n";
        for (const auto& p : report.pruned_events) std::cout << "  - " << p << "\n";
    }
    if (!report.warnings.empty()) {
        std::cout << report.warnings.size() << " warning(s):\n";
        for (const auto& w : report.warnings) std::cout << "  ! " << w << "\n";
    }
}

int run_verb(const std::string& config_path, const saft::PipelineConfig& flags,
             const std::string& trigger_text, const std::string& notify_cmd,
             saft::RunUntil until) {
    auto trigger = saft::trigger_from_name(trigger_text);
    if (!trigger) {
        std::cerr << "unknown trigger '" << trigger_text
                  << "' (full|reconfiguration|system-update|cve-db-update)\n";
        return 2;
    }
    saft::PipelineConfig config = effective_config(config_path, flags);
    saft::Report report = saft::run_pipeline(config, *trigger, until);
    print_report_summary(report);
    std::string report_path = (fs::path(config.output_dir) / "report.json").string();
    std::cout << "report: " << report_path << "\n";
    if (!notify_cmd.empty()) {
        std::string cmd = notify_cmd + " '" + report_path + "'";
        int rc = std::system(cmd.c_str());
        if (rc != 0) std::cerr << "notify command exited with " << rc << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attack-fault tree generation and risk analysis toolchain"};
    app.require_subcommand(1);

    std::string config_path, trigger_text = "full", notify_cmd;
    saft::PipelineConfig flags;

    CLI::App* run_cmd = app.add_subcommand("run", "run the pipeline and analyze every hazard");
    add_config_flags(run_cmd, config_path, flags);
    run_cmd->add_option("-t,--trigger", trigger_text,
                        "full | reconfiguration | system-update | cve-db-update");
    run_cmd->add_option("--notify-cmd", notify_cmd,
                        "command invoked with the report path on completion");

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "parse and check all inputs without running");
    add_config_flags(validate_cmd, config_path, flags);

    CLI::App* report_cmd = app.add_subcommand("report", "print the report of the last run");
    add_config_flags(report_cmd, config_path, flags);

    CLI::App* galileo_cmd =
        app.add_subcommand("galileo", "run the pipeline up to Galileo DFT emission");
    add_config_flags(galileo_cmd, config_path, flags);
    galileo_cmd->add_option("-t,--trigger", trigger_text,
                            "full | reconfiguration | system-update | cve-db-update");

    std::string dft_path;
    std::size_t state_cap = 1'000'000;
    std::size_t sim_trials = 0;
    std::uint64_t sim_seed = 1;
    double sim_horizon = std::numeric_limits<double>::infinity();
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "analyze a single Galileo .dft file");
    analyze_cmd->add_option("dft", dft_path, "Galileo file")->required();
    analyze_cmd->add_option("--state-space-cap", state_cap, "state space limit");
    analyze_cmd->add_option("--simulate", sim_trials, "also Monte-Carlo simulate N trials");
    analyze_cmd->add_option("--seed", sim_seed, "simulation seed");
    analyze_cmd->add_option("--horizon", sim_horizon, "simulation horizon in seconds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return run_verb(config_path, flags, trigger_text, notify_cmd,
                            saft::RunUntil::Analyze);
        }
        if (galileo_cmd->parsed()) {
            return run_verb(config_path, flags, trigger_text, "", saft::RunUntil::Dft);
        }
        if (validate_cmd->parsed()) {
            saft::PipelineConfig config = effective_config(config_path, flags);
            auto diags = saft::validate_inputs(config);
            for (const auto& d : diags) {
                std::cout << (d.file.empty() ? "<config>" : d.file);
                if (d.line > 0) std::cout << ":" << d.line << ":" << d.column;
                std::cout << ": " << d.message << "\n";
            }
            std::cout << diags.size() << " diagnostic(s)\n";
            return diags.empty() ? 0 : 1;
        }
        if (report_cmd->parsed()) {
            saft::PipelineConfig config = effective_config(config_path, flags);
            std::string path = (fs::path(config.output_dir) / "report.json").string();
            if (!fs::exists(path)) {
                std::cerr << "no report at " << path << "; run the pipeline first\n";
                return 1;
            }
            std::cout << saft::read_file(path);
            return 0;
        }
        if (analyze_cmd->parsed()) {
            saft::Dft dft = saft::parse_galileo(saft::read_file(dft_path), dft_path);
            saft::AnalysisOptions options;
            options.state_cap = state_cap;
            saft::AnalysisResult result = saft::analyze(dft, options);
            std::cout << "toplevel: " << dft.toplevel << "\n";
            std::cout << "p = " << saft::format_double(result.p) << "\n";
            std::cout << "MTTF = "
                      << (result.mttf ? saft::format_double(*result.mttf) + " s"
                                      : std::string("inf"))
                      << "\n";
            std::cout << "conditional MTTF = "
                      << (result.conditional_mttf
                              ? saft::format_double(*result.conditional_mttf) + " s"
                              : std::string("undefined"))
                      << "\n";
            std::cout << "states explored: " << result.states << "\n";
            if (sim_trials > 0) {
                saft::SimulationResult sim =
                    saft::simulate(dft, sim_trials, sim_horizon, sim_seed);
                std::cout << "simulated p = " << saft::format_double(sim.p_hat) << " +/- "
                          << saft::format_double(sim.p_stderr) << "\n";
                if (sim.mean_time) {
                    std::cout << "simulated mean failure time = "
                              << saft::format_double(*sim.mean_time) << " +/- "
                              << saft::format_double(sim.mean_stderr) << " s\n";
                }
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
