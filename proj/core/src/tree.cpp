#include "saft/tree.hpp"

#include <algorithm>

#include "saft/strings.hpp"

namespace saft {

std::string_view gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::Or: return "OR";
        case GateKind::And: return "AND";
        case GateKind::Pand: return "PAND";
        case GateKind::Sand: return "SAND";
    }
    return "OR";
}

TreePtr make_gate(GateKind kind, std::vector<TreePtr> children) {
    if (children.empty()) throw ModelError("gate must have at least one child");
    for (const auto& c : children) {
        if (!c) throw ModelError("gate child must not be null");
    }
    return make_tree<Gate>(kind, std::move(children));
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool equal_impl(const TreePtr& a, const TreePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->value.index() != b->value.index()) return false;
    return std::visit(
        overloaded{
            [&](const Hazard& x) {
                const auto& y = std::get<Hazard>(b->value);
                return x.description == y.description && x.id == y.id &&
                       equal_impl(x.child, y.child);
            },
            [&](const IntermediateEvent& x) {
                const auto& y = std::get<IntermediateEvent>(b->value);
                return x.description == y.description && x.id == y.id &&
                       equal_impl(x.child, y.child);
            },
            [&](const BasicEvent& x) {
                const auto& y = std::get<BasicEvent>(b->value);
                return x.description == y.description && x.id == y.id &&
                       x.probability == y.probability;
            },
            [&](const AttackEvent& x) {
                const auto& y = std::get<AttackEvent>(b->value);
                return x.description == y.description && x.id == y.id &&
                       x.context_kind == y.context_kind && x.context == y.context &&
                       x.requirement == y.requirement;
            },
            [&](const AttackStep& x) {
                const auto& y = std::get<AttackStep>(b->value);
                return x.description == y.description && x.id == y.id && x.cve == y.cve &&
                       x.cvss == y.cvss && x.epss == y.epss && x.probability == y.probability;
            },
            [&](const ChildPlaceholder& x) {
                const auto& y = std::get<ChildPlaceholder>(b->value);
                return x.description == y.description;
            },
            [&](const Gate& x) {
                const auto& y = std::get<Gate>(b->value);
                if (x.kind != y.kind || x.children.size() != y.children.size()) return false;
                for (size_t i = 0; i < x.children.size(); ++i) {
                    if (!equal_impl(x.children[i], y.children[i])) return false;
                }
                return true;
            },
        },
        a->value);
}

void print_impl(const TreePtr& node, std::string& out, int depth);

std::string indent(int depth) { return std::string(static_cast<size_t>(depth) * 2, ' '); }

void print_owner(const std::string& keyword, const std::string& description,
                 const std::string& id, const TreePtr& child, std::string& out, int depth) {
    out += indent(depth) + keyword;
    if (!id.empty()) out += " " + id;
    out += " description = " + quote_string(description) + " {\n";
    print_impl(child, out, depth + 1);
    out += "\n" + indent(depth) + "}";
}

void print_impl(const TreePtr& node, std::string& out, int depth) {
    std::visit(
        overloaded{
            [&](const Hazard& h) { print_owner("Hazard", h.description, h.id, h.child, out, depth); },
            [&](const IntermediateEvent& e) {
                print_owner("IntermediateEvent", e.description, e.id, e.child, out, depth);
            },
            [&](const BasicEvent& e) {
                out += indent(depth) + "BasicEvent";
                if (!e.id.empty()) out += " " + e.id;
                out += " description = " + quote_string(e.description);
                out += " probability = " + format_double(e.probability);
            },
            [&](const AttackEvent& e) {
                out += indent(depth) + "AttackEvent";
                if (!e.id.empty()) out += " " + e.id;
                out += " description = " + quote_string(e.description);
                if (e.context_kind) {
                    out += e.context_kind == TreeContextKind::Deployment ? " deploymentElement = "
                                                                         : " dataflowElement = ";
                    out += e.context;
                }
                if (e.requirement) out += " CVSSREQ = " + e.requirement->to_string();
            },
            [&](const AttackStep& s) {
                out += indent(depth) + "AttackStep";
                if (!s.id.empty()) out += " " + s.id;
                out += " description = " + quote_string(s.description);
                out += " probability = " + format_double(s.probability);
                if (s.cve) out += " CVE = " + quote_string(*s.cve);
                if (s.cvss) {
                    out += " CVSS = " + quote_string(s.cvss->to_string());
                    if (s.cvss->base_score) out += " BaseScore = " + format_double(*s.cvss->base_score);
                    if (s.cvss->impact_score)
                        out += " ImpactScore = " + format_double(*s.cvss->impact_score);
                    if (s.cvss->exploitability_score)
                        out += " ExploitabilityScore = " + format_double(*s.cvss->exploitability_score);
                }
                if (s.epss) out += " EPSS = " + format_double(*s.epss);
            },
            [&](const ChildPlaceholder& p) {
                out += indent(depth) + "child AttackEvent description = " +
                       quote_string(p.description);
            },
            [&](const Gate& g) {
                out += indent(depth) + std::string(gate_kind_name(g.kind)) + " {\n";
                for (size_t i = 0; i < g.children.size(); ++i) {
                    print_impl(g.children[i], out, depth + 1);
                    if (i + 1 < g.children.size()) out += ",";
                    out += "\n";
                }
                out += indent(depth) + "}";
            },
        },
        node->value);
}

TreePtr canonicalize(const TreePtr& node) {
    return std::visit(
        overloaded{
            [&](const Hazard& h) -> TreePtr {
                return make_tree<Hazard>(h.description, h.id, canonicalize(h.child));
            },
            [&](const IntermediateEvent& e) -> TreePtr {
                return make_tree<IntermediateEvent>(e.description, e.id, canonicalize(e.child));
            },
            [&](const Gate& g) -> TreePtr {
                std::vector<TreePtr> children;
                children.reserve(g.children.size());
                for (const auto& c : g.children) children.push_back(canonicalize(c));
                if (g.kind == GateKind::Or || g.kind == GateKind::And) {
                    std::sort(children.begin(), children.end(),
                              [](const TreePtr& a, const TreePtr& b) {
                                  return print_tree(a) < print_tree(b);
                              });
                }
                return make_gate(g.kind, std::move(children));
            },
            [&](const auto&) -> TreePtr { return node; },
        },
        node->value);
}

struct ValidationContext {
    TreeFlavor flavor;
};

void validate_impl(const TreePtr& node, const ValidationContext& ctx, bool is_root) {
    if (!node) throw ModelError("tree node must not be null");
    std::visit(
        overloaded{
            [&](const Hazard& h) {
                if (!is_root || ctx.flavor == TreeFlavor::AttackTree ||
                    ctx.flavor == TreeFlavor::FragmentBody) {
                    throw ModelError("Hazard is only valid as a fault-tree/AFT root");
                }
                if (!h.child) throw ModelError("Hazard '" + h.description + "' has no child");
                validate_impl(h.child, ctx, false);
            },
            [&](const IntermediateEvent& e) {
                if (!e.child)
                    throw ModelError("IntermediateEvent '" + e.description + "' has no child");
                if (ctx.flavor == TreeFlavor::AttackTree &&
                    !std::holds_alternative<Gate>(e.child->value)) {
                    throw ModelError("attack-tree IntermediateEvent '" + e.description +
                                     "' must own a gate block");
                }
                validate_impl(e.child, ctx, false);
            },
            [&](const BasicEvent& e) {
                if (ctx.flavor == TreeFlavor::AttackTree)
                    throw ModelError("BasicEvent is not valid inside an attack tree");
                if (e.probability < 0)
                    throw ModelError("BasicEvent '" + e.description +
                                     "' has negative probability");
            },
            [&](const AttackEvent& e) {
                if (ctx.flavor == TreeFlavor::AttackTree || ctx.flavor == TreeFlavor::Aft) {
                    throw ModelError("AttackEvent '" + e.description +
                                     "' is not allowed in this tree");
                }
                if (ctx.flavor == TreeFlavor::FaultTree) {
                    if (!e.context_kind || e.context.empty())
                        throw ModelError("AttackEvent '" + e.description +
                                         "' needs a deploymentElement or dataflowElement");
                    if (!e.requirement)
                        throw ModelError("AttackEvent '" + e.description + "' needs a CVSSREQ");
                }
            },
            [&](const AttackStep& s) {
                if (ctx.flavor == TreeFlavor::FaultTree)
                    throw ModelError("AttackStep is not valid inside a fault tree");
                if (s.probability < 0 || s.probability > 1)
                    throw ModelError("AttackStep '" + s.description +
                                     "' probability outside [0,1]");
                if (s.epss && (*s.epss < 0 || *s.epss >= 1))
                    throw ModelError("AttackStep '" + s.description + "' EPSS outside [0,1)");
            },
            [&](const ChildPlaceholder& p) {
                if (ctx.flavor != TreeFlavor::FragmentBody)
                    throw ModelError("'child' placeholder '" + p.description +
                                     "' is only valid inside a fragment");
            },
            [&](const Gate& g) {
                if (g.children.empty()) throw ModelError("gate with zero children");
                for (const auto& c : g.children) validate_impl(c, ctx, false);
            },
        },
        node->value);
}

}  // namespace

bool tree_equal(const TreePtr& a, const TreePtr& b) { return equal_impl(a, b); }

bool tree_isomorphic(const TreePtr& a, const TreePtr& b) {
    if (!a || !b) return a == b;
    return tree_equal(canonicalize(a), canonicalize(b));
}

void validate_tree(const TreePtr& root, TreeFlavor flavor) {
    if (!root) throw ModelError("empty tree");
    ValidationContext ctx{flavor};
    switch (flavor) {
        case TreeFlavor::FaultTree:
        case TreeFlavor::Aft:
            if (!std::holds_alternative<Hazard>(root->value))
                throw ModelError("tree must be rooted at a Hazard");
            break;
        case TreeFlavor::AttackTree:
            if (!std::holds_alternative<IntermediateEvent>(root->value))
                throw ModelError("attack tree must be rooted at an IntermediateEvent");
            break;
        case TreeFlavor::FragmentBody:
            if (std::holds_alternative<Hazard>(root->value))
                throw ModelError("fragment body must not contain a Hazard");
            break;
    }
    validate_impl(root, ctx, true);
}

std::string print_tree(const TreePtr& root) {
    if (!root) throw ModelError("cannot print an empty tree");
    std::string out;
    print_impl(root, out, 0);
    out += "\n";
    return out;
}

TreeStats count_tree(const TreePtr& root) {
    TreeStats stats;
    visit_tree(root, [&](const TreePtr& node) {
        ++stats.nodes;
        if (std::holds_alternative<Gate>(node->value)) ++stats.gates;
        return true;
    });
    return stats;
}

void visit_tree(const TreePtr& root, const std::function<bool(const TreePtr&)>& fn) {
    if (!root || !fn(root)) return;
    std::visit(overloaded{
                   [&](const Hazard& h) { visit_tree(h.child, fn); },
                   [&](const IntermediateEvent& e) { visit_tree(e.child, fn); },
                   [&](const Gate& g) {
                       for (const auto& c : g.children) visit_tree(c, fn);
                   },
                   [&](const auto&) {},
               },
               root->value);
}

}  // namespace saft
