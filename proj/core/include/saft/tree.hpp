#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "saft/cvss.hpp"
#include "saft/errors.hpp"

namespace saft {

enum class GateKind { Or, And, Pand, Sand };
std::string_view gate_kind_name(GateKind kind);

/// Which model an attack context name points into.
enum class TreeContextKind { Deployment, Dataflow };

struct TreeNode;
using TreePtr = std::shared_ptr<const TreeNode>;

/// Top event of a fault tree / AFT. Owns a single child (gate or event).
struct Hazard {
    std::string description;
    std::string id;
    TreePtr child;
};

/// Event caused by other events; owns a single child (gate or event).
struct IntermediateEvent {
    std::string description;
    std::string id;
    TreePtr child;
};

/// Random failure. `probability` doubles as a rate during DFT transform.
struct BasicEvent {
    std::string description;
    std::string id;
    double probability = 0.0;  // >= 0
};

/// Extended-FT leaf: a fault that an attack can cause. Carries the attack
/// context (a dataflow or deployment element) and a CVSS-style condition.
/// Context/requirement may be absent inside fragment bodies, where they
/// are inherited at expansion time.
struct AttackEvent {
    std::string description;
    std::string id;
    std::optional<TreeContextKind> context_kind;
    std::string context;  // element name, empty = inherit
    std::optional<CvssRequirement> requirement;
};

/// Attack-tree leaf: one concrete exploit, typically one CVE.
struct AttackStep {
    std::string description;
    std::string id;  // e.g. CVE202138425
    std::optional<std::string> cve;
    std::optional<CvssVector> cvss;
    std::optional<double> epss;  // [0,1)
    double probability = 0.0;    // [0,1]
};

/// Fragment-body placeholder replicated per component of the matched
/// container ("child" in the fragment language). `{component}` in the
/// description is replaced by the member name.
struct ChildPlaceholder {
    std::string description;
};

struct Gate {
    GateKind kind;
    std::vector<TreePtr> children;  // nonempty; PAND/SAND order is significant
};

struct TreeNode {
    std::variant<Hazard, IntermediateEvent, BasicEvent, AttackEvent, AttackStep,
                 ChildPlaceholder, Gate>
        value;
};

template <typename T, typename... Args>
TreePtr make_tree(Args&&... args) {
    return std::make_shared<const TreeNode>(TreeNode{T{std::forward<Args>(args)...}});
}

TreePtr make_gate(GateKind kind, std::vector<TreePtr> children);

template <typename T>
const T* tree_as(const TreePtr& node) {
    return node ? std::get_if<T>(&node->value) : nullptr;
}

bool tree_equal(const TreePtr& a, const TreePtr& b);

/// Equality up to reordering of OR/AND children (PAND/SAND stay ordered).
bool tree_isomorphic(const TreePtr& a, const TreePtr& b);

enum class TreeFlavor { FaultTree, AttackTree, Aft, FragmentBody };

/// Structural rules per tree flavor:
///  - FaultTree: rooted at Hazard, leaves are BasicEvents or AttackEvents
///    (with context and requirement present).
///  - AttackTree: rooted at IntermediateEvent whose child is a gate,
///    leaves are AttackSteps.
///  - Aft: rooted at Hazard, no AttackEvents remain, leaves are
///    BasicEvents or AttackSteps.
///  - FragmentBody: non-Hazard template; placeholders allowed, attack
///    events may omit context/requirement.
void validate_tree(const TreePtr& root, TreeFlavor flavor);

TreePtr parse_tree(std::string_view text, const std::string& file = {});
TreePtr parse_fault_tree(std::string_view text, const std::string& file = {});
TreePtr parse_attack_tree(std::string_view text, const std::string& file = {});
TreePtr parse_aft(std::string_view text, const std::string& file = {});

std::string print_tree(const TreePtr& root);

struct TreeStats {
    std::size_t nodes = 0;
    std::size_t gates = 0;
};
TreeStats count_tree(const TreePtr& root);

/// Pre-order traversal; the callback may return false to skip a subtree.
void visit_tree(const TreePtr& root, const std::function<bool(const TreePtr&)>& fn);

}  // namespace saft
