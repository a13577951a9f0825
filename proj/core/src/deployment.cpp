#include "saft/deployment.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "saft/lexer.hpp"
#include "saft/strings.hpp"

namespace saft {

std::string_view element_kind_name(ElementKind kind) {
    switch (kind) {
        case ElementKind::Untyped: return "Untyped";
        case ElementKind::NewComponent: return "Component";
        case ElementKind::RefComponent: return "RefComponent";
        case ElementKind::Platform: return "Platform";
        case ElementKind::OS: return "OS";
        case ElementKind::Package: return "Package";
        case ElementKind::Library: return "Library";
        case ElementKind::File: return "File";
    }
    return "Untyped";
}

namespace {

std::optional<ElementKind> kind_from_name(std::string_view name) {
    if (name == "Platform") return ElementKind::Platform;
    if (name == "OS") return ElementKind::OS;
    if (name == "Package") return ElementKind::Package;
    if (name == "Library") return ElementKind::Library;
    if (name == "File") return ElementKind::File;
    if (name == "Component") return ElementKind::NewComponent;
    if (name == "Untyped") return ElementKind::Untyped;
    return std::nullopt;
}

std::string strip_leading_slash(std::string_view s) {
    if (!s.empty() && s.front() == '/') return std::string(s.substr(1));
    return std::string(s);
}

}  // namespace

const DeploymentModel::Element* DeploymentModel::find_element(std::string_view name) const {
    for (const auto& e : elements) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

const DeploymentModel::Channel* DeploymentModel::find_channel(std::string_view name) const {
    for (const auto& c : channels) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::vector<std::string> DeploymentModel::executed_on(std::string_view name) const {
    std::vector<std::string> out;
    for (const auto& e : executes) {
        if (e.from == name) out.push_back(e.to);
    }
    return out;
}

std::vector<std::string> DeploymentModel::dependencies_of(std::string_view name) const {
    std::vector<std::string> out;
    for (const auto& e : depends) {
        if (e.from == name) out.push_back(e.to);
    }
    return out;
}

std::vector<std::string> DeploymentModel::reach_closure(std::string_view name) const {
    std::vector<std::string> order;
    std::set<std::string, std::less<>> seen;
    std::vector<std::string> queue{std::string(name)};
    seen.insert(std::string(name));
    while (!queue.empty()) {
        std::string cur = queue.front();
        queue.erase(queue.begin());
        order.push_back(cur);
        for (const auto& edges : {&executes, &depends}) {
            for (const auto& e : *edges) {
                if (e.from == cur && seen.insert(e.to).second) queue.push_back(e.to);
            }
        }
    }
    return order;
}

bool ref_matches_component(const DeploymentModel::Element& ref,
                           const DataflowModel::Component& component) {
    std::vector<std::string> candidates{ref.name};
    for (const char* key : {"ros_name", "full_ros_name"}) {
        if (auto v = find_property(ref.properties, key)) {
            candidates.push_back(strip_leading_slash(*v));
        }
    }
    std::vector<std::string> keys{component.name};
    for (const char* key : {"ros_name", "full_ros_name"}) {
        if (auto v = find_property(component.properties, key)) {
            keys.push_back(strip_leading_slash(*v));
        }
    }
    for (const auto& c : candidates) {
        if (std::find(keys.begin(), keys.end(), c) != keys.end()) return true;
    }
    return false;
}

const DeploymentModel::Element* DeploymentModel::element_for_dataflow_component(
    const DataflowModel& dataflow, std::string_view component) const {
    const DataflowModel::Component* comp = dataflow.find_component(component);
    if (!comp) return nullptr;
    for (const auto& e : elements) {
        if (e.kind == ElementKind::RefComponent && ref_matches_component(e, *comp)) return &e;
    }
    // Fall back to a plain element carrying the component's name.
    return find_element(component);
}

bool DeploymentModel::operator==(const DeploymentModel& other) const {
    auto sorted_elements = [](const DeploymentModel& m) {
        auto v = m.elements;
        std::sort(v.begin(), v.end(),
                  [](const auto& a, const auto& b) { return a.name < b.name; });
        return v;
    };
    auto sorted_channels = [](const DeploymentModel& m) {
        auto v = m.channels;
        std::sort(v.begin(), v.end(),
                  [](const auto& a, const auto& b) { return a.name < b.name; });
        return v;
    };
    auto sorted_edges = [](std::vector<Edge> v) {
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            return std::tie(a.from, a.to) < std::tie(b.from, b.to);
        });
        return v;
    };
    return sorted_elements(*this) == sorted_elements(other) &&
           sorted_channels(*this) == sorted_channels(other) &&
           sorted_edges(executes) == sorted_edges(other.executes) &&
           sorted_edges(depends) == sorted_edges(other.depends);
}

namespace {

class DeploymentParser {
public:
    DeploymentParser(std::string_view text, const DataflowModel& dataflow,
                     const std::string& file)
        : lex_(text, file), dataflow_(dataflow) {}

    DeploymentModel parse() {
        while (true) {
            Token tok = lex_.peek();
            if (tok.kind == TokenKind::End) break;
            if (tok.kind != TokenKind::Ident) lex_.fail("expected a declaration", tok);
            if (tok.text == "RefComponent") {
                parse_ref_component();
            } else if (tok.text == "RefChannel") {
                parse_channel(/*is_ref=*/true);
            } else if (tok.text == "Channel") {
                parse_channel(/*is_ref=*/false);
            } else {
                parse_statement();
            }
        }
        resolve_refs();
        check_acyclic();
        return std::move(model_);
    }

private:
    void parse_ref_component() {
        lex_.next();
        Token name = expect_ident("expected element name");
        PropertyList props = maybe_properties();
        declare_explicit(name, ElementKind::RefComponent, std::move(props));
        if (lex_.peek().kind == TokenKind::Equals) {
            lex_.next();
            for (const auto& member : member_set()) {
                add_edge(model_.depends, name.text, member);
            }
        }
    }

    void parse_channel(bool is_ref) {
        lex_.next();
        Token name = expect_ident("expected channel name");
        PropertyList props = maybe_properties();
        if (model_.find_channel(name.text))
            lex_.fail("duplicate channel '" + name.text + "'", name);
        model_.channels.push_back({name.text, is_ref, std::move(props)});
    }

    // name[:Kind] [(props)] [= {members}]    members are executed on name
    // name executes {members}
    // name depends {members}
    void parse_statement() {
        Token name = expect_ident("expected element name");
        Token tok = lex_.peek();
        if (tok.kind == TokenKind::Ident && (tok.text == "executes" || tok.text == "depends")) {
            lex_.next();
            declare_implicit(name.text);
            auto& edges = tok.text == "executes" ? model_.executes : model_.depends;
            for (const auto& member : member_set()) {
                add_edge(edges, name.text, member);
            }
            return;
        }
        ElementKind kind = ElementKind::Untyped;
        bool explicit_kind = false;
        if (tok.kind == TokenKind::Colon) {
            lex_.next();
            Token kind_tok = expect_ident("expected element kind");
            auto parsed = kind_from_name(kind_tok.text);
            if (!parsed) lex_.fail("unknown element kind '" + kind_tok.text + "'", kind_tok);
            kind = *parsed;
            explicit_kind = true;
        }
        PropertyList props = maybe_properties();
        if (explicit_kind || !props.empty() || lex_.peek().kind != TokenKind::Equals) {
            declare_explicit(name, kind, std::move(props));
        } else {
            declare_implicit(name.text);
        }
        if (lex_.peek().kind == TokenKind::Equals) {
            lex_.next();
            for (const auto& member : member_set()) {
                add_edge(model_.executes, name.text, member);
            }
        }
    }

    Token expect_ident(const std::string& what) {
        Token t = lex_.next();
        if (t.kind != TokenKind::Ident) lex_.fail(what, t);
        return t;
    }

    PropertyList maybe_properties() {
        PropertyList props;
        if (lex_.peek().kind != TokenKind::LParen) return props;
        lex_.next();
        while (lex_.peek().kind != TokenKind::RParen) {
            Token key = expect_ident("expected property name");
            Token eq = lex_.next();
            if (eq.kind != TokenKind::Equals) lex_.fail("expected '='", eq);
            Token value = lex_.next();
            if (value.kind != TokenKind::String) lex_.fail("expected string value", value);
            props.emplace_back(key.text, value.text);
            if (lex_.peek().kind == TokenKind::Comma) lex_.next();
        }
        lex_.next();
        return props;
    }

    std::vector<std::string> member_set() {
        Token open = lex_.next();
        if (open.kind != TokenKind::LBrace) lex_.fail("expected '{'", open);
        std::vector<std::string> members;
        while (lex_.peek().kind != TokenKind::RBrace) {
            Token member = expect_ident("expected element name");
            declare_implicit(member.text);
            members.push_back(member.text);
            if (lex_.peek().kind == TokenKind::Comma) {
                lex_.next();
            } else {
                break;
            }
        }
        Token close = lex_.next();
        if (close.kind != TokenKind::RBrace) lex_.fail("expected '}'", close);
        return members;
    }

    void declare_implicit(const std::string& name) {
        if (!model_.find_element(name)) {
            model_.elements.push_back({name, ElementKind::Untyped, {}, {}, {}, true});
        }
    }

    void declare_explicit(const Token& name, ElementKind kind, PropertyList props) {
        DeploymentModel::Element element{name.text, kind, std::move(props), {}, {}, false};
        if (auto cpe = find_property(element.properties, "cpe")) element.cpe = *cpe;
        if (auto req = find_property(element.properties, "cvssreq")) {
            try {
                element.requirement = parse_cvss_requirement(*req);
            } catch (const ParseError& e) {
                lex_.fail("bad cvssreq property: " + e.message(), name);
            }
        }
        for (auto& existing : model_.elements) {
            if (existing.name != name.text) continue;
            if (!existing.implicit)
                lex_.fail("duplicate element '" + name.text + "'", name);
            element.implicit = false;
            existing = std::move(element);
            return;
        }
        model_.elements.push_back(std::move(element));
    }

    static void add_edge(std::vector<DeploymentModel::Edge>& edges, const std::string& from,
                         const std::string& to) {
        DeploymentModel::Edge edge{from, to};
        if (std::find(edges.begin(), edges.end(), edge) == edges.end()) {
            edges.push_back(std::move(edge));
        }
    }

    void resolve_refs() {
        for (const auto& e : model_.elements) {
            if (e.kind != ElementKind::RefComponent) continue;
            bool found = std::any_of(
                dataflow_.components.begin(), dataflow_.components.end(),
                [&](const auto& comp) { return ref_matches_component(e, comp); });
            if (!found) {
                throw ModelError("RefComponent '" + e.name +
                                 "' matches no dataflow component");
            }
        }
        for (const auto& c : model_.channels) {
            if (!c.is_ref) continue;
            std::string key = c.name;
            if (auto v = find_property(c.properties, "ros_name")) key = *v;
            if (!dataflow_.find_channel(key)) {
                throw ModelError("RefChannel '" + c.name + "' matches no dataflow channel");
            }
        }
    }

    void check_acyclic() {
        // DFS over executes ∪ depends-on; grey node revisit = cycle.
        std::map<std::string, int> color;  // 0 white, 1 grey, 2 black
        auto neighbours = [&](const std::string& n) {
            std::vector<std::string> out;
            for (const auto& e : model_.executes)
                if (e.from == n) out.push_back(e.to);
            for (const auto& e : model_.depends)
                if (e.from == n) out.push_back(e.to);
            return out;
        };
        std::vector<std::pair<std::string, size_t>> stack;
        for (const auto& root : model_.elements) {
            if (color[root.name] != 0) continue;
            stack.emplace_back(root.name, 0);
            color[root.name] = 1;
            while (!stack.empty()) {
                auto& [node, idx] = stack.back();
                auto ns = neighbours(node);
                if (idx >= ns.size()) {
                    color[node] = 2;
                    stack.pop_back();
                    continue;
                }
                std::string next = ns[idx++];
                if (color[next] == 1) {
                    throw ModelError("cycle in executes/depends-on graph involving '" +
                                     next + "'");
                }
                if (color[next] == 0) {
                    color[next] = 1;
                    stack.emplace_back(next, 0);
                }
            }
        }
    }

    Lexer lex_;
    const DataflowModel& dataflow_;
    DeploymentModel model_;
};

}  // namespace

DeploymentModel parse_deployment(std::string_view text, const DataflowModel& dataflow,
                                 const std::string& file) {
    return DeploymentParser(text, dataflow, file).parse();
}

std::string print_deployment(const DeploymentModel& model) {
    std::string out;
    auto props_text = [](const PropertyList& props) {
        if (props.empty()) return std::string();
        std::string s = " (";
        bool first = true;
        for (const auto& [k, v] : props) {
            if (!first) s += ", ";
            first = false;
            s += k + " = " + quote_string(v);
        }
        return s + ")";
    };
    auto braces = [](const std::vector<std::string>& members) {
        std::string s = "{";
        for (size_t i = 0; i < members.size(); ++i) {
            if (i) s += ", ";
            s += members[i];
        }
        return s + "}";
    };
    for (const auto& e : model.elements) {
        if (e.implicit) continue;
        std::string line;
        std::vector<std::string> inline_set;
        if (e.kind == ElementKind::RefComponent) {
            line = "RefComponent " + e.name + props_text(e.properties);
            inline_set = model.dependencies_of(e.name);
        } else {
            line = e.name;
            if (e.kind != ElementKind::Untyped) line += ":" + std::string(element_kind_name(e.kind));
            line += props_text(e.properties);
            inline_set = model.executed_on(e.name);
        }
        if (!inline_set.empty()) line += " = " + braces(inline_set);
        out += line + "\n";
    }
    for (const auto& c : model.channels) {
        out += std::string(c.is_ref ? "RefChannel " : "Channel ") + c.name +
               props_text(c.properties) + "\n";
    }
    // Sets on explicit declarations cover RefComponent dependencies and
    // executes edges; everything else is emitted as standalone statements.
    for (const auto& e : model.elements) {
        if (e.implicit || e.kind == ElementKind::RefComponent) continue;
        auto deps = model.dependencies_of(e.name);
        if (!deps.empty()) out += e.name + " depends " + braces(deps) + "\n";
    }
    for (const auto& e : model.elements) {
        if (!e.implicit) continue;
        auto execs = model.executed_on(e.name);
        if (!execs.empty()) out += e.name + " executes " + braces(execs) + "\n";
        auto deps = model.dependencies_of(e.name);
        if (!deps.empty()) out += e.name + " depends " + braces(deps) + "\n";
    }
    return out;
}

}  // namespace saft
