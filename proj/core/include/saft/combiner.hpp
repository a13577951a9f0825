#pragma once

#include <string>
#include <vector>

#include "saft/atgen.hpp"
#include "saft/dataflow.hpp"
#include "saft/deployment.hpp"
#include "saft/fragment.hpp"
#include "saft/tree.hpp"

namespace saft {

struct CombineOptions {
    int fragment_pass_limit = 5;
};

struct CombineReport {
    /// Attack events removed because nothing could attach to them — the
    /// open attack surface of the model.
    std::vector<std::string> pruned_events;
    std::vector<std::string> warnings;
};

/// Phase one: lift a fault tree into an AFT. Structure is preserved;
/// attack events stay in place as attachment points for the later phases.
TreePtr phase1_lift(const TreePtr& fault_tree);

/// Phase two: replace attack events by the bodies of every fragment whose
/// precondition (context kind + CVSS condition) their requirement
/// satisfies. Multiple applicable fragments join under an OR gate. `child`
/// placeholders replicate per component executed on the referenced
/// container. Expansion re-visits newly created attack events until the
/// pass limit; a (fragment, context) pair is applied at most once.
TreePtr phase2_fragments(const TreePtr& aft, const std::vector<AftFragment>& fragments,
                         const DeploymentModel& deploy, const DataflowModel& dataflow,
                         const CombineOptions& options = {}, CombineReport* report = nullptr);

/// Phase three: for each remaining attack event, resolve its context to a
/// deployment element (dataflow references map to their deployment
/// counterpart first), walk the executes/depends-on closure, and attach
/// every reachable component's attack tree whose steps satisfy the
/// requirement (non-satisfying steps are filtered out). Multiple trees
/// join under OR; events with no match are pruned and reported.
TreePtr phase3_attach(const TreePtr& aft, const std::vector<GeneratedAt>& attack_trees,
                      const DeploymentModel& deploy, const DataflowModel& dataflow,
                      CombineReport* report = nullptr);

/// All three phases; the result is a valid AFT with no attack events left.
TreePtr generate_aft(const TreePtr& fault_tree, const std::vector<AftFragment>& fragments,
                     const std::vector<GeneratedAt>& attack_trees,
                     const DeploymentModel& deploy, const DataflowModel& dataflow,
                     const CombineOptions& options = {}, CombineReport* report = nullptr);

/// Copy of an attack tree keeping only the AttackSteps that satisfy the
/// requirement; null when none survive.
TreePtr filter_attack_tree(const TreePtr& tree, const CvssRequirement& requirement);

}  // namespace saft
