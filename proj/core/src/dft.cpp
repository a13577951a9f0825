#include "saft/dft.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "saft/strings.hpp"

namespace saft {

double epss_to_lambda(double epss) {
    if (!(epss >= 0.0) || epss >= 1.0) {
        throw AnalysisError("EPSS value must be in [0,1), got " + format_double(epss));
    }
    // -ln(1-epss) via log1p for precision near zero
    return -std::log1p(-epss) / kEpssHorizonSeconds;
}

const DftNode* Dft::find(std::string_view name) const {
    for (const auto& n : nodes) {
        if (n.name == name) return &n;
    }
    return nullptr;
}

namespace {

bool valid_dft_name(std::string_view name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

bool is_galileo_keyword(std::string_view name) {
    return name == "toplevel" || name == "or" || name == "and" || name == "seq" ||
           name == "lambda";
}

}  // namespace

void Dft::validate() const {
    std::set<std::string> names;
    for (const auto& node : nodes) {
        if (!valid_dft_name(node.name)) {
            throw ModelError("invalid DFT node name '" + node.name + "'");
        }
        if (!names.insert(node.name).second) {
            throw ModelError("duplicate DFT node name '" + node.name + "'");
        }
        if (node.kind == DftNodeKind::Basic) {
            if (!node.children.empty())
                throw ModelError("basic event '" + node.name + "' cannot have children");
            if (!(node.lambda >= 0))
                throw ModelError("basic event '" + node.name + "' has negative rate");
        } else if (node.children.empty()) {
            throw ModelError("gate '" + node.name + "' has no children");
        }
    }
    if (!names.count(toplevel)) {
        throw ModelError("toplevel '" + toplevel + "' is not a declared node");
    }
    for (const auto& node : nodes) {
        for (const auto& child : node.children) {
            if (!names.count(child)) {
                throw ModelError("gate '" + node.name + "' references unknown node '" + child +
                                 "'");
            }
        }
    }
    // cycle check over child references
    std::map<std::string, int> color;
    auto dfs = [&](auto&& self, const std::string& name) -> void {
        color[name] = 1;
        for (const auto& child : find(name)->children) {
            if (color[child] == 1)
                throw ModelError("cycle in DFT involving '" + child + "'");
            if (color[child] == 0) self(self, child);
        }
        color[name] = 2;
    };
    for (const auto& node : nodes) {
        if (color[node.name] == 0) dfs(dfs, node.name);
    }
}

bool Dft::operator==(const Dft& other) const {
    if (toplevel != other.toplevel || nodes.size() != other.nodes.size()) return false;
    auto sorted = [](const Dft& d) {
        auto v = d.nodes;
        std::sort(v.begin(), v.end(),
                  [](const auto& a, const auto& b) { return a.name < b.name; });
        return v;
    };
    return sorted(*this) == sorted(other);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

class DftBuilder {
public:
    explicit DftBuilder(DftTransform& out) : out_(out) {}

    // Returns the name of the node representing the subtree.
    std::string map_node(const TreePtr& node) {
        return std::visit(
            overloaded{
                [&](const Hazard& h) { return map_owner(h.description, h.id, h.child); },
                [&](const IntermediateEvent& e) {
                    return map_owner(e.description, e.id, e.child);
                },
                [&](const BasicEvent& e) {
                    std::string name = claim_name(e.id.empty() ? e.description : e.id);
                    out_.dft.nodes.push_back({name, DftNodeKind::Basic, {}, e.probability});
                    return name;
                },
                [&](const AttackStep& s) {
                    std::string name = claim_name(s.id.empty() ? s.description : s.id);
                    out_.dft.nodes.push_back(
                        {name, DftNodeKind::Basic, {}, step_lambda(s)});
                    return name;
                },
                [&](const Gate& g) {
                    // gate without an owning event: synthesized name
                    return map_gate(g, claim_anonymous_gate_name(g.kind));
                },
                [&](const AttackEvent& e) -> std::string {
                    throw ModelError("AttackEvent '" + e.description +
                                     "' cannot be transformed; run the combiner first");
                },
                [&](const ChildPlaceholder& p) -> std::string {
                    throw ModelError("fragment placeholder '" + p.description +
                                     "' cannot be transformed");
                },
            },
            node->value);
    }

private:
    double step_lambda(const AttackStep& s) {
        double epss;
        if (s.epss) {
            epss = *s.epss;
        } else {
            // Manually authored steps without EPSS: their probability
            // stands in as the 30-day success probability.
            epss = s.probability;
            out_.warnings.push_back("AttackStep '" + s.description +
                                    "' has no EPSS; using probability " +
                                    format_double(s.probability) +
                                    " as the 30-day exploit probability");
            if (epss >= 1.0) {
                throw ModelError("AttackStep '" + s.description +
                                 "' probability 1.0 yields an infinite rate; "
                                 "provide an EPSS below 1");
            }
        }
        return epss_to_lambda(epss);
    }

    std::string map_owner(const std::string& description, const std::string& id,
                          const TreePtr& child) {
        std::string base = id.empty() ? description : id;
        if (const auto* gate = tree_as<Gate>(child)) {
            std::string name = claim_name(base, needs_seq(gate->kind));
            return map_gate(*gate, name);
        }
        // a bare basic leaf merges into its owner: one named basic event
        if (const auto* be = tree_as<BasicEvent>(child)) {
            std::string name = claim_name(base);
            out_.dft.nodes.push_back({name, DftNodeKind::Basic, {}, be->probability});
            return name;
        }
        if (const auto* step = tree_as<AttackStep>(child)) {
            std::string name = claim_name(base);
            out_.dft.nodes.push_back({name, DftNodeKind::Basic, {}, step_lambda(*step)});
            return name;
        }
        // bare intermediate child: a single-child OR keeps the event visible
        std::string name = claim_name(base);
        std::string child_name = map_node(child);
        out_.dft.nodes.push_back({name, DftNodeKind::Or, {child_name}, 0.0});
        return name;
    }

    static bool needs_seq(GateKind kind) {
        return kind == GateKind::Pand || kind == GateKind::Sand;
    }

    std::string map_gate(const Gate& gate, const std::string& name) {
        std::vector<std::string> children;
        children.reserve(gate.children.size());
        for (const auto& c : gate.children) children.push_back(map_node(c));
        switch (gate.kind) {
            case GateKind::Or:
                out_.dft.nodes.push_back({name, DftNodeKind::Or, std::move(children), 0.0});
                break;
            case GateKind::And:
                out_.dft.nodes.push_back({name, DftNodeKind::And, std::move(children), 0.0});
                break;
            case GateKind::Sand:
                out_.warnings.push_back(
                    "SAND gate '" + name +
                    "' encoded as AND+SEQ (priority semantics); with independent "
                    "continuous rates simultaneous failure has probability zero");
                [[fallthrough]];
            case GateKind::Pand:
                // "PAND semantics can be simulated by combining an AND gate
                // with a SEQ gate with the same children"
                out_.dft.nodes.push_back({name, DftNodeKind::And, children, 0.0});
                out_.dft.nodes.push_back({name + "_SEQ", DftNodeKind::Seq, children, 0.0});
                break;
        }
        return name;
    }

    std::string claim_anonymous_gate_name(GateKind kind) {
        std::string base = to_lower(gate_kind_name(kind)) + "_gate";
        return claim_name(base, needs_seq(kind));
    }

    std::string claim_name(const std::string& text, bool with_seq = false) {
        std::string base = sanitize_identifier(text);
        if (is_galileo_keyword(base)) base += "_evt";
        std::string name = base;
        int suffix = 1;
        auto taken = [&](const std::string& n) {
            return used_.count(n) || (with_seq && used_.count(n + "_SEQ"));
        };
        while (taken(name)) {
            name = base + "_" + std::to_string(++suffix);
        }
        used_.insert(name);
        if (with_seq) used_.insert(name + "_SEQ");
        return name;
    }

    DftTransform& out_;
    std::set<std::string> used_;
};

std::string format_lambda(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

}  // namespace

DftTransform aft_to_dft(const TreePtr& aft) {
    validate_tree(aft, TreeFlavor::Aft);
    DftTransform out;
    DftBuilder builder(out);
    out.dft.toplevel = builder.map_node(aft);
    out.dft.validate();
    return out;
}

std::string emit_galileo(const Dft& dft) {
    dft.validate();
    // Kahn's algorithm, parents before children, ties broken by name.
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < dft.nodes.size(); ++i) index[dft.nodes[i].name] = i;
    std::map<std::string, size_t> parents;
    for (const auto& node : dft.nodes) parents[node.name] = 0;
    for (const auto& node : dft.nodes) {
        for (const auto& child : node.children) ++parents[child];
    }
    std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
    for (const auto& node : dft.nodes) {
        if (parents[node.name] == 0) ready.push(node.name);
    }
    std::string out = "toplevel " + dft.toplevel + ";\n";
    while (!ready.empty()) {
        std::string name = ready.top();
        ready.pop();
        const DftNode& node = dft.nodes[index[name]];
        if (node.kind == DftNodeKind::Basic) {
            out += node.name + " lambda=" + format_lambda(node.lambda) + ";\n";
        } else {
            const char* kw = node.kind == DftNodeKind::Or    ? "or"
                             : node.kind == DftNodeKind::And ? "and"
                                                             : "seq";
            out += node.name + " " + kw;
            for (const auto& child : node.children) out += " " + child;
            out += ";\n";
        }
        std::set<std::string> seen;
        for (const auto& child : node.children) {
            if (!seen.insert(child).second) continue;
            if (--parents[child] == 0) ready.push(child);
        }
    }
    return out;
}

Dft parse_galileo(std::string_view text, const std::string& file) {
    // Statements end in ';' and may wrap across lines. '//' comments run
    // to end of line.
    std::string cleaned;
    cleaned.reserve(text.size());
    for (const auto& line : split(text, '\n')) {
        size_t comment = line.find("//");
        cleaned += comment == std::string::npos ? line : line.substr(0, comment);
        cleaned += '\n';
    }

    Dft dft;
    bool saw_toplevel = false;
    std::set<std::string> declared;
    size_t line_no = 1;
    size_t pos = 0;
    while (pos < cleaned.size()) {
        size_t semi = cleaned.find(';', pos);
        std::string_view chunk(cleaned.data() + pos,
                               (semi == std::string::npos ? cleaned.size() : semi) - pos);
        size_t stmt_line = line_no;
        line_no += static_cast<size_t>(std::count(chunk.begin(), chunk.end(), '\n'));
        pos = semi == std::string::npos ? cleaned.size() : semi + 1;

        std::vector<std::string> words;
        std::string cur;
        for (char c : chunk) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!cur.empty()) words.push_back(std::move(cur)), cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) words.push_back(std::move(cur));
        if (words.empty()) {
            if (semi != std::string::npos)
                throw ParseError("empty statement", stmt_line, 1, file);
            break;  // trailing whitespace after the last ';'
        }
        if (semi == std::string::npos) {
            throw ParseError("statement not terminated by ';'", stmt_line, 1, file);
        }
        if (!saw_toplevel) {
            if (words.size() != 2 || words[0] != "toplevel") {
                throw ParseError("first statement must be 'toplevel <name>;'", stmt_line, 1,
                                 file);
            }
            dft.toplevel = words[1];
            saw_toplevel = true;
            continue;
        }
        const std::string& name = words[0];
        if (!valid_dft_name(name) || is_galileo_keyword(name)) {
            throw ParseError("invalid node name '" + name + "'", stmt_line, 1, file);
        }
        if (!declared.insert(name).second) {
            throw ParseError("duplicate node '" + name + "'", stmt_line, 1, file);
        }
        if (words.size() >= 2 && words[1].starts_with("lambda")) {
            // `name lambda=0.7`, possibly with spaces around '='
            std::string rest;
            for (size_t i = 1; i < words.size(); ++i) rest += words[i];
            size_t eq = rest.find('=');
            if (eq == std::string::npos) {
                throw ParseError("expected 'lambda=<rate>'", stmt_line, 1, file);
            }
            std::string value = rest.substr(eq + 1);
            double lambda = 0;
            auto res = std::from_chars(value.data(), value.data() + value.size(), lambda);
            if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
                throw ParseError("malformed rate '" + value + "'", stmt_line, 1, file);
            }
            dft.nodes.push_back({name, DftNodeKind::Basic, {}, lambda});
            continue;
        }
        if (words.size() < 3) {
            throw ParseError("expected '<name> <or|and|seq> <children...>'", stmt_line, 1, file);
        }
        DftNodeKind kind;
        if (words[1] == "or") kind = DftNodeKind::Or;
        else if (words[1] == "and") kind = DftNodeKind::And;
        else if (words[1] == "seq") kind = DftNodeKind::Seq;
        else throw ParseError("unknown gate type '" + words[1] + "'", stmt_line, 1, file);
        std::vector<std::string> children(words.begin() + 2, words.end());
        dft.nodes.push_back({name, kind, std::move(children), 0.0});
    }
    if (!saw_toplevel) throw ParseError("missing 'toplevel' statement", file);
    dft.validate();
    return dft;
}

}  // namespace saft
