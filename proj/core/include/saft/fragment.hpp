#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saft/deployment.hpp"
#include "saft/tree.hpp"

namespace saft {

/// Reusable attack template. The precondition names the kind of model
/// element it applies to plus a CVSS condition; the body is a tree
/// template whose `child` placeholders are replicated per component
/// executed on the matched container.
///
///   Fragment corrupt_platform {
///     precondition deploymentElement = Platform CVSSREQ = CVSS:3.1/A:H
///     IntermediateEvent description = "Platform is corrupted" {
///       OR {
///         child AttackEvent description = "Component {component} is corrupted"
///       }
///     }
///   }
struct AftFragment {
    std::string name;
    TreeContextKind context_model = TreeContextKind::Deployment;
    // For deployment contexts; NewComponent also stands for RefComponent.
    std::optional<ElementKind> deployment_kind;
    // For dataflow contexts: "Component" or "Channel".
    std::string dataflow_kind;
    CvssRequirement condition;
    TreePtr body;

    bool has_placeholders() const;
};

AftFragment parse_fragment(std::string_view text, const std::string& file = {});
std::string print_fragment(const AftFragment& fragment);

/// True when the fragment's context kind covers the given deployment element.
bool fragment_context_matches(const AftFragment& fragment,
                              const DeploymentModel::Element& element);

}  // namespace saft
