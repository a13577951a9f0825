#pragma once

// Seeded generators for property-style tests: random DFTs (bounded basic
// events / ordered gates) and random fault trees.

#include <random>
#include <string>
#include <vector>

#include "saft/dft.hpp"
#include "saft/tree.hpp"

namespace saft::testing {

struct DftGenOptions {
    size_t max_basic_events = 6;
    size_t max_ordered_gates = 2;
    double min_rate = 0.2;
    double max_rate = 2.5;
};

/// Random gate tree over fresh basic events, returned as a Galileo-style
/// Dft (ordered gates in the AND+SEQ encoding).
inline Dft random_dft(std::mt19937_64& rng, const DftGenOptions& options = {}) {
    std::uniform_real_distribution<double> rate(options.min_rate, options.max_rate);
    Dft dft;
    size_t be_budget =
        std::uniform_int_distribution<size_t>(1, options.max_basic_events)(rng);
    size_t ordered_budget =
        std::uniform_int_distribution<size_t>(0, options.max_ordered_gates)(rng);
    size_t be_count = 0, gate_count = 0;

    auto new_be = [&]() {
        std::string name = "be" + std::to_string(++be_count);
        dft.nodes.push_back({name, DftNodeKind::Basic, {}, rate(rng)});
        return name;
    };

    auto build = [&](auto&& self, size_t depth) -> std::string {
        bool leaf = be_count >= be_budget ||
                    (depth >= 1 && std::uniform_int_distribution<int>(0, 2)(rng) == 0) ||
                    depth >= 3;
        if (leaf) return new_be();
        size_t width = std::uniform_int_distribution<size_t>(2, 3)(rng);
        std::vector<std::string> children;
        for (size_t i = 0; i < width && (i < 2 || be_count < be_budget); ++i) {
            children.push_back(self(self, depth + 1));
        }
        std::string name = "g" + std::to_string(++gate_count);
        int kind = std::uniform_int_distribution<int>(0, 2)(rng);
        if (kind == 2 && ordered_budget > 0 && children.size() >= 2) {
            --ordered_budget;
            dft.nodes.push_back({name, DftNodeKind::And, children, 0.0});
            dft.nodes.push_back({name + "_SEQ", DftNodeKind::Seq, children, 0.0});
        } else if (kind == 1) {
            dft.nodes.push_back({name, DftNodeKind::And, children, 0.0});
        } else {
            dft.nodes.push_back({name, DftNodeKind::Or, children, 0.0});
        }
        return name;
    };
    dft.toplevel = build(build, 0);
    dft.validate();
    return dft;
}

/// Random fault tree whose attack events all point at the given context.
inline TreePtr random_fault_tree(std::mt19937_64& rng, const std::string& deploy_context,
                                 const CvssRequirement& requirement, int max_depth = 3) {
    int counter = 0;
    auto build = [&](auto&& self, int depth) -> TreePtr {
        int roll = std::uniform_int_distribution<int>(0, 9)(rng);
        if (depth >= max_depth || roll < 3) {
            return make_tree<BasicEvent>("basic event " + std::to_string(++counter),
                                         std::string{},
                                         std::uniform_real_distribution<double>(0.01, 2.0)(rng));
        }
        if (roll < 5) {
            return make_tree<AttackEvent>("attack " + std::to_string(++counter), std::string{},
                                          TreeContextKind::Deployment, deploy_context,
                                          requirement);
        }
        size_t width = std::uniform_int_distribution<size_t>(2, 3)(rng);
        std::vector<TreePtr> children;
        for (size_t i = 0; i < width; ++i) children.push_back(self(self, depth + 1));
        GateKind kind = roll < 8 ? GateKind::Or : GateKind::And;
        TreePtr gate = make_gate(kind, std::move(children));
        if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) return gate;
        return make_tree<IntermediateEvent>("intermediate " + std::to_string(++counter),
                                            std::string{}, std::move(gate));
    };
    TreePtr child = build(build, 1);
    return make_tree<Hazard>("random hazard", std::string{}, std::move(child));
}

/// Random standalone tree exercising every node type and attribute, for
/// print/parse round-trip checks.
inline TreePtr random_round_trip_tree(std::mt19937_64& rng) {
    int counter = 0;
    auto text = [&](const char* prefix) {
        std::string s = std::string(prefix) + " " + std::to_string(++counter);
        int roll = std::uniform_int_distribution<int>(0, 4)(rng);
        if (roll == 0) s += " with \"quotes\"";
        if (roll == 1) s += " and \\ backslash";
        if (roll == 2) s += "\n second line\ttabbed";
        return s;
    };
    auto build = [&](auto&& self, int depth) -> TreePtr {
        int roll = std::uniform_int_distribution<int>(0, 9)(rng);
        if (depth >= 3 || roll < 4) {
            if (roll % 2 == 0) {
                return make_tree<BasicEvent>(text("basic"), std::string{}, 0.25 * roll);
            }
            std::optional<CvssVector> cvss;
            std::optional<std::string> cve;
            std::optional<double> epss;
            if (roll != 5) {
                cvss = parse_cvss_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:H");
                cvss->base_score = 9.1;
                cve = "CVE-2021-38425";
                epss = 0.25;
            }
            return make_tree<AttackStep>(text("step"), roll == 7 ? "Step7" : "", cve, cvss,
                                         epss, 0.5);
        }
        size_t width = std::uniform_int_distribution<size_t>(1, 3)(rng);
        std::vector<TreePtr> children;
        for (size_t i = 0; i < width; ++i) children.push_back(self(self, depth + 1));
        GateKind kind = static_cast<GateKind>(std::uniform_int_distribution<int>(0, 3)(rng));
        TreePtr gate = make_gate(kind, std::move(children));
        if (roll >= 8) return gate;
        return make_tree<IntermediateEvent>(text("mid"), std::string{}, std::move(gate));
    };
    return make_tree<Hazard>(text("hazard"), std::string{}, build(build, 1));
}

}  // namespace saft::testing
