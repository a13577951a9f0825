#include "saft/combiner.hpp"

#include <algorithm>
#include <set>

#include "saft/strings.hpp"

namespace saft {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using NodeList = std::vector<TreePtr>;

/// Rewrites a tree bottom-up. `on_attack_event` maps each AttackEvent to
/// its replacement nodes (empty = prune). Gates splice replacement lists
/// into their child list and collapse when they end up empty; an event
/// whose only child collapses is pruned as well.
NodeList rewrite_tree(const TreePtr& node,
                      const std::function<NodeList(const AttackEvent&, const TreePtr&)>& on_attack_event) {
    return std::visit(
        overloaded{
            [&](const Hazard& h) -> NodeList {
                NodeList child = rewrite_tree(h.child, on_attack_event);
                if (child.empty()) return {};
                TreePtr c = child.size() == 1 ? child.front()
                                              : make_gate(GateKind::Or, std::move(child));
                return {make_tree<Hazard>(h.description, h.id, std::move(c))};
            },
            [&](const IntermediateEvent& e) -> NodeList {
                NodeList child = rewrite_tree(e.child, on_attack_event);
                if (child.empty()) return {};
                TreePtr c = child.size() == 1 ? child.front()
                                              : make_gate(GateKind::Or, std::move(child));
                return {make_tree<IntermediateEvent>(e.description, e.id, std::move(c))};
            },
            [&](const Gate& g) -> NodeList {
                NodeList children;
                for (const auto& c : g.children) {
                    NodeList repl = rewrite_tree(c, on_attack_event);
                    children.insert(children.end(), repl.begin(), repl.end());
                }
                if (children.empty()) return {};
                return {make_gate(g.kind, std::move(children))};
            },
            [&](const AttackEvent& e) -> NodeList { return on_attack_event(e, node); },
            [&](const auto&) -> NodeList { return {node}; },
        },
        node->value);
}

struct ResolvedContext {
    enum class Kind { DeploymentElement, DeploymentChannel, DataflowComponent, DataflowChannel };
    Kind kind;
    std::string name;
    const DeploymentModel::Element* element = nullptr;  // set for DeploymentElement
};

ResolvedContext resolve_context(const AttackEvent& event, const DeploymentModel& deploy,
                                const DataflowModel& dataflow) {
    if (!event.context_kind || event.context.empty()) {
        throw ModelError("AttackEvent '" + event.description + "' has no context");
    }
    const std::string& name = event.context;
    if (*event.context_kind == TreeContextKind::Deployment) {
        if (const auto* element = deploy.find_element(name)) {
            return {ResolvedContext::Kind::DeploymentElement, name, element};
        }
        if (deploy.find_channel(name)) {
            return {ResolvedContext::Kind::DeploymentChannel, name, nullptr};
        }
        throw ModelError("AttackEvent '" + event.description +
                         "' references unknown deployment element '" + name + "'");
    }
    bool is_component = dataflow.find_component(name) != nullptr;
    bool is_channel = dataflow.find_channel(name) != nullptr;
    if (is_component && is_channel) {
        throw ModelError("dataflow name '" + name + "' is both a component and a channel");
    }
    if (is_component) return {ResolvedContext::Kind::DataflowComponent, name, nullptr};
    if (is_channel) return {ResolvedContext::Kind::DataflowChannel, name, nullptr};
    throw ModelError("AttackEvent '" + event.description +
                     "' references unknown dataflow element '" + name + "'");
}

CvssRequirement event_requirement(const AttackEvent& event) {
    return event.requirement.value_or(CvssRequirement{});
}

bool fragment_applies(const AftFragment& fragment, const AttackEvent& event,
                      const ResolvedContext& ctx, const DeploymentModel& deploy,
                      const DataflowModel& dataflow) {
    if (!cvss_satisfies(fragment.condition, event_requirement(event))) return false;
    if (fragment.context_model == TreeContextKind::Deployment) {
        const DeploymentModel::Element* element = ctx.element;
        if (ctx.kind == ResolvedContext::Kind::DataflowComponent) {
            element = deploy.element_for_dataflow_component(dataflow, ctx.name);
        }
        return element && fragment_context_matches(fragment, *element);
    }
    if (fragment.dataflow_kind == "Component")
        return ctx.kind == ResolvedContext::Kind::DataflowComponent;
    if (fragment.dataflow_kind == "Channel")
        return ctx.kind == ResolvedContext::Kind::DataflowChannel ||
               ctx.kind == ResolvedContext::Kind::DeploymentChannel;
    return false;
}

std::string substitute_member(const std::string& tmpl, const std::string& member) {
    const std::string placeholder = "{component}";
    if (tmpl.find(placeholder) == std::string::npos) return tmpl + ": " + member;
    std::string out = tmpl;
    size_t pos = 0;
    while ((pos = out.find(placeholder, pos)) != std::string::npos) {
        out.replace(pos, placeholder.size(), member);
        pos += member.size();
    }
    return out;
}

/// Members a `child` placeholder expands over: the components executed on
/// the referenced container.
std::vector<std::string> container_members(const ResolvedContext& ctx,
                                           const DeploymentModel& deploy) {
    if (ctx.kind != ResolvedContext::Kind::DeploymentElement) return {};
    return deploy.executed_on(ctx.name);
}

NodeList instantiate_body(const TreePtr& node, const AftFragment& fragment,
                          const AttackEvent& replaced, const ResolvedContext& ctx,
                          const DeploymentModel& deploy) {
    return std::visit(
        overloaded{
            [&](const IntermediateEvent& e) -> NodeList {
                NodeList child = instantiate_body(e.child, fragment, replaced, ctx, deploy);
                if (child.empty()) return {};
                TreePtr c = child.size() == 1 ? child.front()
                                              : make_gate(GateKind::Or, std::move(child));
                return {make_tree<IntermediateEvent>(e.description, e.id, std::move(c))};
            },
            [&](const Gate& g) -> NodeList {
                NodeList children;
                for (const auto& c : g.children) {
                    NodeList repl = instantiate_body(c, fragment, replaced, ctx, deploy);
                    children.insert(children.end(), repl.begin(), repl.end());
                }
                if (children.empty()) return {};
                return {make_gate(g.kind, std::move(children))};
            },
            [&](const ChildPlaceholder& p) -> NodeList {
                NodeList events;
                for (const auto& member : container_members(ctx, deploy)) {
                    events.push_back(make_tree<AttackEvent>(
                        substitute_member(p.description, member), std::string{},
                        TreeContextKind::Deployment, member, fragment.condition));
                }
                return events;
            },
            [&](const AttackEvent& e) -> NodeList {
                AttackEvent filled = e;
                if (!filled.context_kind || filled.context.empty()) {
                    filled.context_kind = replaced.context_kind;
                    filled.context = replaced.context;
                }
                if (!filled.requirement) filled.requirement = fragment.condition;
                return {make_tree<AttackEvent>(std::move(filled))};
            },
            [&](const auto&) -> NodeList { return {node}; },
        },
        node->value);
}

}  // namespace

TreePtr phase1_lift(const TreePtr& fault_tree) {
    validate_tree(fault_tree, TreeFlavor::FaultTree);
    // Horizontal transformation: the fault tree *is* the top of the AFT;
    // attack events stay as attachment points.
    return fault_tree;
}

TreePtr phase2_fragments(const TreePtr& aft, const std::vector<AftFragment>& fragments,
                         const DeploymentModel& deploy, const DataflowModel& dataflow,
                         const CombineOptions& options, CombineReport* report) {
    TreePtr tree = aft;
    std::set<std::pair<std::string, std::string>> applied;  // (fragment, context)

    auto applicable = [&](const AttackEvent& event) {
        std::vector<const AftFragment*> out;
        ResolvedContext ctx = resolve_context(event, deploy, dataflow);
        for (const auto& fragment : fragments) {
            if (applied.count({fragment.name, event.context})) continue;
            if (fragment_applies(fragment, event, ctx, deploy, dataflow)) out.push_back(&fragment);
        }
        return out;
    };

    int pass = 0;
    while (true) {
        bool changed = false;
        NodeList result = rewrite_tree(tree, [&](const AttackEvent& event, const TreePtr& node) -> NodeList {
            auto frags = applicable(event);
            if (frags.empty()) return {node};
            ResolvedContext ctx = resolve_context(event, deploy, dataflow);
            NodeList bodies;
            for (const auto* fragment : frags) {
                applied.insert({fragment->name, event.context});
                NodeList body = instantiate_body(fragment->body, *fragment, event, ctx, deploy);
                bodies.insert(bodies.end(), body.begin(), body.end());
                if (body.empty() && report) {
                    report->pruned_events.push_back(
                        "fragment '" + fragment->name + "' on '" + event.description +
                        "' expanded to nothing (no components on '" + event.context + "')");
                }
            }
            changed = true;
            if (bodies.empty()) return {};
            if (bodies.size() == 1) return {bodies.front()};
            return {make_gate(GateKind::Or, std::move(bodies))};
        });
        if (result.empty()) {
            // Whole tree pruned away; callers handle the empty hazard.
            return nullptr;
        }
        tree = result.front();
        if (!changed) break;
        if (++pass >= options.fragment_pass_limit) {
            bool still_matching = false;
            visit_tree(tree, [&](const TreePtr& node) {
                if (const auto* event = tree_as<AttackEvent>(node)) {
                    if (!applicable(*event).empty()) still_matching = true;
                }
                return true;
            });
            if (still_matching && report) {
                report->warnings.push_back(
                    "fragment expansion stopped at pass limit " +
                    std::to_string(options.fragment_pass_limit) +
                    " with fragments still applicable");
            }
            break;
        }
    }
    return tree;
}

TreePtr filter_attack_tree(const TreePtr& tree, const CvssRequirement& requirement) {
    if (!tree) return nullptr;
    return std::visit(
        overloaded{
            [&](const IntermediateEvent& e) -> TreePtr {
                TreePtr child = filter_attack_tree(e.child, requirement);
                if (!child) return nullptr;
                return make_tree<IntermediateEvent>(e.description, e.id, std::move(child));
            },
            [&](const Gate& g) -> TreePtr {
                std::vector<TreePtr> children;
                for (const auto& c : g.children) {
                    if (TreePtr kept = filter_attack_tree(c, requirement)) {
                        children.push_back(std::move(kept));
                    }
                }
                if (children.empty()) return nullptr;
                return make_gate(g.kind, std::move(children));
            },
            [&](const AttackStep& s) -> TreePtr {
                if (cvss_satisfies(s.cvss.value_or(CvssVector{}), requirement)) return tree;
                return nullptr;
            },
            [&](const auto&) -> TreePtr { return tree; },
        },
        tree->value);
}

TreePtr phase3_attach(const TreePtr& aft, const std::vector<GeneratedAt>& attack_trees,
                      const DeploymentModel& deploy, const DataflowModel& dataflow,
                      CombineReport* report) {
    if (!aft) return nullptr;
    NodeList result = rewrite_tree(aft, [&](const AttackEvent& event, const TreePtr&) -> NodeList {
        ResolvedContext ctx = resolve_context(event, deploy, dataflow);
        const DeploymentModel::Element* element = nullptr;
        switch (ctx.kind) {
            case ResolvedContext::Kind::DeploymentElement:
                element = ctx.element;
                break;
            case ResolvedContext::Kind::DataflowComponent:
                // "the corresponding model element in the Deployment model
                // is identified before the recursive analysis"
                element = deploy.element_for_dataflow_component(dataflow, ctx.name);
                if (!element && report) {
                    report->warnings.push_back("dataflow component '" + ctx.name +
                                               "' has no deployment element");
                }
                break;
            case ResolvedContext::Kind::DataflowChannel:
            case ResolvedContext::Kind::DeploymentChannel:
                // Channels own no attack trees; such events can only be
                // served by fragments in phase two.
                break;
        }
        CvssRequirement requirement = event_requirement(event);
        std::vector<TreePtr> attached;
        if (element) {
            for (const auto& reachable : deploy.reach_closure(element->name)) {
                for (const auto& at : attack_trees) {
                    if (at.component != reachable) continue;
                    if (TreePtr filtered = filter_attack_tree(at.tree, requirement)) {
                        attached.push_back(std::move(filtered));
                    }
                }
            }
        }
        if (attached.empty()) {
            if (report) {
                report->pruned_events.push_back(event.description + " (context '" +
                                                event.context + "')");
            }
            return {};
        }
        TreePtr child = attached.size() == 1 ? attached.front()
                                             : make_gate(GateKind::Or, std::move(attached));
        return {make_tree<IntermediateEvent>(event.description, event.id, std::move(child))};
    });
    return result.empty() ? nullptr : result.front();
}

TreePtr generate_aft(const TreePtr& fault_tree, const std::vector<AftFragment>& fragments,
                     const std::vector<GeneratedAt>& attack_trees,
                     const DeploymentModel& deploy, const DataflowModel& dataflow,
                     const CombineOptions& options, CombineReport* report) {
    TreePtr aft = phase1_lift(fault_tree);
    aft = phase2_fragments(aft, fragments, deploy, dataflow, options, report);
    aft = phase3_attach(aft, attack_trees, deploy, dataflow, report);
    if (!aft) {
        // Every failure path was pruned: keep the hazard analyzable with a
        // rate-zero stand-in so downstream tooling sees p = 0.
        const auto& hazard = std::get<Hazard>(fault_tree->value);
        if (report) {
            report->warnings.push_back("hazard '" + hazard.description +
                                       "' has no remaining failure path");
        }
        aft = make_tree<Hazard>(hazard.description, hazard.id,
                                make_tree<BasicEvent>("No failure path remains", std::string{}, 0.0));
    }
    validate_tree(aft, TreeFlavor::Aft);
    return aft;
}

}  // namespace saft
