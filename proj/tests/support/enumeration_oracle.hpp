#pragma once

// Independent reference for analyze(): enumerates every firing order of
// the basic events and integrates analytically over the order statistics
// of the exponentials. For a fixed permutation pi with remaining-rate sums
// S_j = sum of rates not yet fired at stage j:
//   P(pi)            = prod_j rate(pi_j) / S_j
//   E[stage j time]  = 1 / S_j (independent of which event wins)
// The top event's failure stage is found by evaluating the gates over
// failure *positions*; ordered gates require nondecreasing child
// positions. Deliberately shares no code with the CTMC engine.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "saft/dft.hpp"

namespace saft::testing {

struct OracleResult {
    double p = 0.0;
    std::optional<double> conditional_mttf;
    std::optional<double> mttf;  // set when p == 1 (within 1e-12)
};

namespace oracle_detail {

constexpr int kNever = 1 << 20;

struct Node {
    enum Kind { Basic, Or, And, Ordered } kind = Basic;
    std::vector<int> children;  // indices into nodes
    double rate = 0.0;
};

struct Model {
    std::vector<Node> nodes;
    int top = -1;
    std::vector<int> basics;  // node indices of basic events
};

inline Model build(const Dft& dft) {
    // Own AND+SEQ pairing, kept separate from the engine's.
    std::map<std::string, const DftNode*> by_name;
    for (const auto& n : dft.nodes) by_name[n.name] = &n;
    std::map<std::string, std::string> alias;
    std::map<std::string, bool> ordered;
    for (const auto& n : dft.nodes) {
        if (n.kind != DftNodeKind::Seq) continue;
        bool merged = false;
        if (n.name.size() > 4 && n.name.ends_with("_SEQ")) {
            auto base = n.name.substr(0, n.name.size() - 4);
            auto it = by_name.find(base);
            if (it != by_name.end() && it->second->kind == DftNodeKind::And &&
                it->second->children == n.children) {
                alias[n.name] = base;
                ordered[base] = true;
                merged = true;
            }
        }
        if (!merged) ordered[n.name] = true;
    }
    Model model;
    std::map<std::string, int> ids;
    auto visit = [&](auto&& self, const std::string& raw) -> int {
        std::string name = alias.count(raw) ? alias[raw] : raw;
        if (auto it = ids.find(name); it != ids.end()) return it->second;
        const DftNode* dn = by_name.at(name);
        Node node;
        if (dn->kind == DftNodeKind::Basic) {
            node.kind = Node::Basic;
            node.rate = dn->lambda;
        } else if (ordered.count(name)) {
            node.kind = Node::Ordered;
        } else if (dn->kind == DftNodeKind::And) {
            node.kind = Node::And;
        } else {
            node.kind = Node::Or;
        }
        int id = static_cast<int>(model.nodes.size());
        ids[name] = id;
        model.nodes.push_back(node);
        std::vector<int> children;
        for (const auto& c : dn->children) children.push_back(self(self, c));
        model.nodes[static_cast<size_t>(id)].children = std::move(children);
        if (model.nodes[static_cast<size_t>(id)].kind == Node::Basic) {
            model.basics.push_back(id);
        }
        return id;
    };
    model.top = visit(visit, dft.toplevel);
    return model;
}

// failure position of a node given basic-event positions (kNever = never)
inline int position(const Model& model, int id, const std::vector<int>& be_pos) {
    const Node& node = model.nodes[static_cast<size_t>(id)];
    switch (node.kind) {
        case Node::Basic: {
            auto it = std::find(model.basics.begin(), model.basics.end(), id);
            return be_pos[static_cast<size_t>(it - model.basics.begin())];
        }
        case Node::Or: {
            int best = kNever;
            for (int c : node.children) best = std::min(best, position(model, c, be_pos));
            return best;
        }
        case Node::And: {
            int best = 0;
            for (int c : node.children) best = std::max(best, position(model, c, be_pos));
            return best;
        }
        case Node::Ordered: {
            int prev = -1;
            for (int c : node.children) {
                int p = position(model, c, be_pos);
                if (p == kNever || p < prev) return kNever;
                prev = p;
            }
            return prev;
        }
    }
    return kNever;
}

}  // namespace oracle_detail

inline OracleResult enumeration_oracle(const Dft& dft, size_t max_basic_events = 8) {
    using namespace oracle_detail;
    Model model = build(dft);

    std::vector<size_t> live;  // basics with positive rate
    for (size_t i = 0; i < model.basics.size(); ++i) {
        if (model.nodes[static_cast<size_t>(model.basics[i])].rate > 0) live.push_back(i);
    }
    if (live.size() > max_basic_events) {
        throw std::runtime_error("enumeration oracle limited to " +
                                 std::to_string(max_basic_events) + " basic events");
    }

    std::vector<int> be_pos(model.basics.size(), kNever);
    std::vector<size_t> perm(live.size());
    std::iota(perm.begin(), perm.end(), size_t{0});

    double p_total = 0.0;
    double defective_time = 0.0;
    do {
        for (size_t i = 0; i < model.basics.size(); ++i) be_pos[i] = kNever;
        for (size_t stage = 0; stage < perm.size(); ++stage) {
            be_pos[live[perm[stage]]] = static_cast<int>(stage) + 1;
        }
        int fail_stage = position(model, model.top, be_pos);
        if (fail_stage == kNever) continue;

        double prob = 1.0;
        double expected = 0.0;
        double remaining = 0.0;
        for (size_t i : live) remaining += model.nodes[static_cast<size_t>(model.basics[i])].rate;
        for (size_t stage = 0; stage < perm.size(); ++stage) {
            double rate = model.nodes[static_cast<size_t>(model.basics[live[perm[stage]]])].rate;
            prob *= rate / remaining;
            if (static_cast<int>(stage) + 1 <= fail_stage) expected += 1.0 / remaining;
            remaining -= rate;
        }
        p_total += prob;
        defective_time += prob * expected;
    } while (std::next_permutation(perm.begin(), perm.end()));

    OracleResult result;
    result.p = p_total;
    if (p_total > 0) {
        result.conditional_mttf = defective_time / p_total;
        if (p_total >= 1.0 - 1e-12) result.mttf = result.conditional_mttf;
    }
    return result;
}

}  // namespace saft::testing
