#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saft/cvss.hpp"
#include "saft/dataflow.hpp"

namespace saft {

enum class ElementKind {
    Untyped,
    NewComponent,
    RefComponent,
    Platform,
    OS,
    Package,
    Library,
    File,
};

std::string_view element_kind_name(ElementKind kind);

/// How software is laid out on the target system: elements of various
/// abstraction levels connected by executes ("runs on") and depends-on
/// edges. RefComponent/RefChannel entries bind back into the dataflow
/// model. Elements first seen as set members are declared implicitly as
/// Untyped and may be upgraded by a later explicit declaration.
struct DeploymentModel {
    struct Element {
        std::string name;
        ElementKind kind = ElementKind::Untyped;
        PropertyList properties;
        std::optional<std::string> cpe;
        std::optional<CvssRequirement> requirement;
        bool implicit = false;
        bool operator==(const Element&) const = default;
    };
    struct Channel {
        std::string name;
        bool is_ref = false;  // RefChannel: resolves to a dataflow channel
        PropertyList properties;
        bool operator==(const Channel&) const = default;
    };
    struct Edge {
        std::string from;  // executor / dependent
        std::string to;    // executed element / dependency
        bool operator==(const Edge&) const = default;
    };

    std::vector<Element> elements;
    std::vector<Channel> channels;
    std::vector<Edge> executes;  // from executes to (to runs on from)
    std::vector<Edge> depends;   // from depends on to

    const Element* find_element(std::string_view name) const;
    const Channel* find_channel(std::string_view name) const;

    /// Elements executed on `name`, document order.
    std::vector<std::string> executed_on(std::string_view name) const;
    /// Dependencies of `name`, document order.
    std::vector<std::string> dependencies_of(std::string_view name) const;
    /// `name` plus its executes/depends-on closure, breadth-first.
    std::vector<std::string> reach_closure(std::string_view name) const;

    /// Deployment element bound to a dataflow component, if any.
    const Element* element_for_dataflow_component(const DataflowModel& dataflow,
                                                  std::string_view component) const;

    /// Structural equality: element/channel/edge sets, order-insensitive
    /// (printing canonicalizes declaration order).
    bool operator==(const DeploymentModel& other) const;
};

/// Parses the deployment language and resolves RefComponents against the
/// dataflow model. Throws on syntax errors, unresolved references, and
/// cycles in the combined executes/depends-on graph.
DeploymentModel parse_deployment(std::string_view text, const DataflowModel& dataflow,
                                 const std::string& file = {});

std::string print_deployment(const DeploymentModel& model);

/// True when the ref element's identifying properties match the component.
bool ref_matches_component(const DeploymentModel::Element& ref,
                           const DataflowModel::Component& component);

}  // namespace saft
