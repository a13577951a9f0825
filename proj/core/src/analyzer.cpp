#include "saft/analyzer.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <unordered_map>

#include "dft_compile.hpp"
#include "saft/strings.hpp"

namespace saft {

namespace detail {

CompiledDft compile_dft(const Dft& dft) {
    dft.validate();
    std::map<std::string, const DftNode*> by_name;
    for (const auto& node : dft.nodes) by_name[node.name] = &node;

    // Fold the AND+SEQ encoding: `X_SEQ seq c...` next to `X and c...`
    // (same ordered children) turns X into one ordered gate; a SEQ without
    // its AND partner is an ordered gate by itself.
    std::map<std::string, std::string> alias;  // seq name -> and name
    std::set<std::string> ordered;
    for (const auto& node : dft.nodes) {
        if (node.kind != DftNodeKind::Seq) continue;
        if (node.name.ends_with("_SEQ")) {
            std::string base = node.name.substr(0, node.name.size() - 4);
            auto it = by_name.find(base);
            if (it != by_name.end() && it->second->kind == DftNodeKind::And) {
                if (it->second->children != node.children) {
                    throw AnalysisError("'" + node.name + "' and '" + base +
                                        "' must share an identical ordered child list");
                }
                alias[node.name] = base;
                ordered.insert(base);
                continue;
            }
        }
        ordered.insert(node.name);
    }
    auto resolve = [&](const std::string& name) -> const std::string& {
        auto it = alias.find(name);
        return it == alias.end() ? name : it->second;
    };

    // Cone of the toplevel, children before parents.
    std::vector<std::string> be_order, gate_order;
    std::set<std::string> visited;
    auto visit = [&](auto&& self, const std::string& raw) -> void {
        const std::string& name = resolve(raw);
        if (!visited.insert(name).second) return;
        const DftNode* node = by_name.at(name);
        if (node->kind == DftNodeKind::Basic) {
            be_order.push_back(name);
            return;
        }
        for (const auto& child : node->children) self(self, child);
        gate_order.push_back(name);
    };
    visit(visit, dft.toplevel);

    CompiledDft out;
    std::map<std::string, int> refs;
    for (const auto& name : be_order) {
        refs[name] = static_cast<int>(out.rates.size());
        out.rates.push_back(by_name.at(name)->lambda);
        out.be_names.push_back(name);
    }
    const int base = static_cast<int>(out.rates.size());
    for (size_t i = 0; i < gate_order.size(); ++i) {
        refs[gate_order[i]] = base + static_cast<int>(i);
    }
    for (const auto& name : gate_order) {
        const DftNode* node = by_name.at(name);
        CompiledGate gate;
        gate.name = name;
        gate.is_and = node->kind != DftNodeKind::Or;
        gate.ordered = ordered.count(name) > 0;
        if (gate.ordered) gate.flag_slot = out.flag_slots++;
        gate.children.reserve(node->children.size());
        for (const auto& child : node->children) {
            gate.children.push_back(refs.at(resolve(child)));
        }
        out.gates.push_back(std::move(gate));
    }
    out.top = refs.at(resolve(dft.toplevel));
    return out;
}

}  // namespace detail

namespace {

using detail::CompiledDft;
using detail::CompiledGate;

// pending/satisfied/violated per ordered gate; violated is absorbing for
// the gate.
enum : uint8_t { kPending = 0, kSatisfied = 1, kViolated = 2 };

struct StateKey {
    std::vector<uint64_t> mask;
    std::vector<uint8_t> flags;
    bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
    size_t operator()(const StateKey& key) const {
        uint64_t h = 1469598103934665603ull;
        auto mix = [&](uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        for (uint64_t w : key.mask) mix(w);
        for (uint8_t f : key.flags) mix(f);
        return static_cast<size_t>(h);
    }
};

bool mask_bit(const std::vector<uint64_t>& mask, int i) {
    return (mask[static_cast<size_t>(i) / 64] >> (static_cast<size_t>(i) % 64)) & 1u;
}

void set_mask_bit(std::vector<uint64_t>& mask, int i) {
    mask[static_cast<size_t>(i) / 64] |= uint64_t{1} << (static_cast<size_t>(i) % 64);
}

struct Evaluation {
    std::vector<char> truth;  // per gate (topo order)
    std::vector<uint8_t> flags;
    bool top;
};

/// One bottom-up pass: gate truths under `mask`, updating ordered-gate
/// flags from `flags_in`. Under a pending flag the true children always
/// form a prefix, so the trit is the only extra state the CTMC needs.
Evaluation evaluate(const CompiledDft& dft, const std::vector<uint64_t>& mask,
                    const std::vector<uint8_t>& flags_in) {
    Evaluation ev;
    ev.truth.resize(dft.gates.size());
    ev.flags = flags_in;
    auto truth_of = [&](int ref) -> bool {
        if (dft.ref_is_basic(ref)) return mask_bit(mask, ref);
        return ev.truth[static_cast<size_t>(ref) - dft.basic_count()] != 0;
    };
    for (size_t g = 0; g < dft.gates.size(); ++g) {
        const CompiledGate& gate = dft.gates[g];
        bool value;
        if (gate.ordered) {
            uint8_t flag = ev.flags[static_cast<size_t>(gate.flag_slot)];
            if (flag == kPending) {
                bool violated = false;
                bool all = true;
                bool prev = true;
                for (size_t i = 0; i < gate.children.size(); ++i) {
                    bool cur = truth_of(gate.children[i]);
                    if (i > 0 && cur && !prev) violated = true;
                    all = all && cur;
                    prev = cur;
                }
                if (violated) {
                    flag = kViolated;
                } else if (all) {
                    flag = kSatisfied;
                }
                ev.flags[static_cast<size_t>(gate.flag_slot)] = flag;
            }
            value = flag == kSatisfied;
        } else if (gate.is_and) {
            value = std::all_of(gate.children.begin(), gate.children.end(), truth_of);
        } else {
            value = std::any_of(gate.children.begin(), gate.children.end(), truth_of);
        }
        ev.truth[g] = value ? 1 : 0;
    }
    ev.top = truth_of(dft.top);
    return ev;
}

/// Upper bound on whether the top event can still fail: unfired basic
/// events with positive rate count as "could become true"; a violated
/// ordered gate never recovers. Conservative for ordered gates sharing
/// basic events, which only costs a few extra explored states.
bool top_still_reachable(const CompiledDft& dft, const std::vector<uint64_t>& mask,
                         const std::vector<uint8_t>& flags) {
    std::vector<char> ub(dft.gates.size());
    auto ub_of = [&](int ref) -> bool {
        if (dft.ref_is_basic(ref)) return mask_bit(mask, ref) || dft.rates[static_cast<size_t>(ref)] > 0;
        return ub[static_cast<size_t>(ref) - dft.basic_count()] != 0;
    };
    for (size_t g = 0; g < dft.gates.size(); ++g) {
        const CompiledGate& gate = dft.gates[g];
        bool value;
        if (gate.ordered) {
            uint8_t flag = flags[static_cast<size_t>(gate.flag_slot)];
            if (flag == kViolated) {
                value = false;
            } else if (flag == kSatisfied) {
                value = true;
            } else {
                value = std::all_of(gate.children.begin(), gate.children.end(), ub_of);
            }
        } else if (gate.is_and) {
            value = std::all_of(gate.children.begin(), gate.children.end(), ub_of);
        } else {
            value = std::any_of(gate.children.begin(), gate.children.end(), ub_of);
        }
        ub[g] = value ? 1 : 0;
    }
    return ub_of(dft.top);
}

}  // namespace

AnalysisResult analyze(const Dft& dft, const AnalysisOptions& options) {
    const CompiledDft compiled = detail::compile_dft(dft);
    const size_t nbe = compiled.basic_count();
    const size_t mask_words = (nbe + 63) / 64;

    enum class Status : uint8_t { Transient, Failed, Dead };
    struct Transition {
        int be;
        uint32_t target;
    };
    struct StateData {
        Status status = Status::Transient;
        std::vector<Transition> transitions;
    };

    std::vector<StateKey> keys;
    std::vector<StateData> data;
    std::unordered_map<StateKey, uint32_t, StateKeyHash> ids;

    auto intern = [&](StateKey key, const Evaluation& ev) -> uint32_t {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        if (keys.size() >= options.state_cap) {
            throw AnalysisError(
                "state space exceeds " + std::to_string(options.state_cap) +
                " states; raise the state-space cap or modularize the fault tree");
        }
        uint32_t id = static_cast<uint32_t>(keys.size());
        StateData sd;
        if (ev.top) {
            sd.status = Status::Failed;
        } else if (!top_still_reachable(compiled, key.mask, key.flags)) {
            sd.status = Status::Dead;
        }
        ids.emplace(key, id);
        keys.push_back(std::move(key));
        data.push_back(std::move(sd));
        return id;
    };

    StateKey initial{std::vector<uint64_t>(mask_words, 0),
                     std::vector<uint8_t>(static_cast<size_t>(compiled.flag_slots), kPending)};
    Evaluation initial_ev = evaluate(compiled, initial.mask, initial.flags);
    initial.flags = initial_ev.flags;
    intern(initial, initial_ev);

    // BFS; every transition fails one more basic event, so discovery order
    // is topological.
    for (uint32_t s = 0; s < keys.size(); ++s) {
        if (data[s].status != Status::Transient) continue;
        for (size_t be = 0; be < nbe; ++be) {
            if (compiled.rates[be] <= 0 || mask_bit(keys[s].mask, static_cast<int>(be)))
                continue;
            StateKey succ_key = keys[s];
            set_mask_bit(succ_key.mask, static_cast<int>(be));
            Evaluation ev = evaluate(compiled, succ_key.mask, succ_key.flags);
            succ_key.flags = ev.flags;
            uint32_t succ = intern(std::move(succ_key), ev);
            data[s].transitions.push_back({static_cast<int>(be), succ});
        }
    }

    // Back-substitution in reverse exploration order (targets always have
    // higher ids): absorption probability p and defective expected
    // absorption time u = E[time * 1{top fails}].
    std::vector<double> p(keys.size(), 0.0), u(keys.size(), 0.0);
    for (uint32_t s = static_cast<uint32_t>(keys.size()); s-- > 0;) {
        const StateData& sd = data[s];
        if (sd.status == Status::Failed) {
            p[s] = 1.0;
            u[s] = 0.0;
            continue;
        }
        if (sd.status == Status::Dead || sd.transitions.empty()) {
            p[s] = 0.0;
            u[s] = 0.0;
            continue;
        }
        double exit_rate = 0.0;
        for (const auto& t : sd.transitions) exit_rate += compiled.rates[static_cast<size_t>(t.be)];
        double ps = 0.0, us = 0.0;
        for (const auto& t : sd.transitions) {
            double w = compiled.rates[static_cast<size_t>(t.be)] / exit_rate;
            ps += w * p[t.target];
            us += w * u[t.target];
        }
        p[s] = ps;
        u[s] = us + ps / exit_rate;
    }

    AnalysisResult result;
    result.hazard = dft.toplevel;
    result.states = keys.size();
    result.p = p[0];
    if (result.p > 0.0) {
        double conditional = u[0] / result.p;
        result.conditional_mttf = conditional;
        if (result.p >= 1.0 - 1e-9) result.mttf = conditional;
    }
    return result;
}

}  // namespace saft
