#include <algorithm>
#include <optional>

#include "saft/lexer.hpp"
#include "saft/tree.hpp"

namespace saft {

namespace {

std::optional<GateKind> gate_kind_from(std::string_view name) {
    if (name == "OR") return GateKind::Or;
    if (name == "AND") return GateKind::And;
    if (name == "PAND") return GateKind::Pand;
    if (name == "SAND") return GateKind::Sand;
    return std::nullopt;
}

class TreeParser {
public:
    TreeParser(std::string_view text, const std::string& file) : lex_(text, file) {}

    TreePtr parse() {
        TreePtr root = parse_node();
        Token end = lex_.next();
        if (end.kind != TokenKind::End) lex_.fail("trailing content after tree", end);
        return root;
    }

private:
    struct Attrs {
        std::optional<std::string> description;
        std::optional<double> probability;
        std::optional<std::string> cve;
        std::optional<CvssVector> cvss;
        std::optional<double> base_score, impact_score, exploitability_score, epss;
        std::optional<CvssRequirement> requirement;
        std::optional<TreeContextKind> context_kind;
        std::string context;
    };

    TreePtr parse_node() {
        Token kw = lex_.next();
        if (kw.kind != TokenKind::Ident) lex_.fail("expected an event or gate keyword", kw);
        if (auto gate = gate_kind_from(kw.text)) return parse_gate(*gate);
        if (kw.text == "child") {
            Token ev = lex_.next();
            if (ev.kind != TokenKind::Ident || ev.text != "AttackEvent")
                lex_.fail("expected 'AttackEvent' after 'child'", ev);
            auto [id, attrs] = parse_id_and_attrs(kw, {"description"});
            if (!id.empty()) lex_.fail("'child' placeholder cannot carry a name", kw);
            require_description(attrs, kw);
            return make_tree<ChildPlaceholder>(*attrs.description);
        }
        if (kw.text == "Hazard" || kw.text == "IntermediateEvent") {
            auto [id, attrs] = parse_id_and_attrs(kw, {"description"});
            require_description(attrs, kw);
            Token open = lex_.next();
            if (open.kind != TokenKind::LBrace)
                lex_.fail("expected '{' with the child of " + kw.text, open);
            TreePtr child = parse_node();
            Token close = lex_.next();
            if (close.kind != TokenKind::RBrace) lex_.fail("expected '}'", close);
            if (kw.text == "Hazard")
                return make_tree<Hazard>(*attrs.description, id, std::move(child));
            return make_tree<IntermediateEvent>(*attrs.description, id, std::move(child));
        }
        if (kw.text == "BasicEvent") {
            auto [id, attrs] = parse_id_and_attrs(kw, {"description", "probability"});
            require_description(attrs, kw);
            double p = attrs.probability.value_or(0.0);
            if (p < 0) lex_.fail("BasicEvent probability must be >= 0", kw);
            return make_tree<BasicEvent>(*attrs.description, id, p);
        }
        if (kw.text == "AttackEvent") {
            auto [id, attrs] = parse_id_and_attrs(
                kw, {"description", "deploymentElement", "dataflowElement", "CVSSREQ"});
            require_description(attrs, kw);
            return make_tree<AttackEvent>(*attrs.description, id, attrs.context_kind,
                                          attrs.context, attrs.requirement);
        }
        if (kw.text == "AttackStep") {
            auto [id, attrs] = parse_id_and_attrs(
                kw, {"description", "probability", "CVE", "CVSS", "BaseScore", "ImpactScore",
                     "ExploitabilityScore", "EPSS"});
            require_description(attrs, kw);
            double p = attrs.probability.value_or(0.0);
            if (p < 0 || p > 1) lex_.fail("AttackStep probability must be in [0,1]", kw);
            if (attrs.epss && (*attrs.epss < 0 || *attrs.epss >= 1))
                lex_.fail("EPSS must be in [0,1)", kw);
            std::optional<CvssVector> cvss = attrs.cvss;
            if (!cvss && (attrs.base_score || attrs.impact_score || attrs.exploitability_score))
                cvss.emplace();
            if (cvss) {
                cvss->base_score = attrs.base_score;
                cvss->impact_score = attrs.impact_score;
                cvss->exploitability_score = attrs.exploitability_score;
            }
            return make_tree<AttackStep>(*attrs.description, id, attrs.cve, std::move(cvss),
                                         attrs.epss, p);
        }
        lex_.fail("unknown keyword '" + kw.text + "'", kw);
    }

    TreePtr parse_gate(GateKind kind) {
        Token open = lex_.next();
        if (open.kind != TokenKind::LBrace) lex_.fail("expected '{' after gate keyword", open);
        std::vector<TreePtr> children;
        while (lex_.peek().kind != TokenKind::RBrace) {
            children.push_back(parse_node());
            if (lex_.peek().kind == TokenKind::Comma) {
                lex_.next();  // trailing comma before '}' is fine
            } else {
                break;
            }
        }
        Token close = lex_.next();
        if (close.kind != TokenKind::RBrace) lex_.fail("expected '}' or ','", close);
        if (children.empty()) lex_.fail("gate with zero children", close);
        return make_gate(kind, std::move(children));
    }

    std::pair<std::string, Attrs> parse_id_and_attrs(const Token& kw,
                                                     std::vector<std::string_view> allowed) {
        std::string id;
        Attrs attrs;
        std::optional<Token> pending_key;
        if (lex_.peek().kind == TokenKind::Ident) {
            Token first = lex_.next();
            if (lex_.peek().kind == TokenKind::Equals) {
                pending_key = first;  // it was the first attribute, not a name
            } else {
                id = first.text;
            }
        }
        while (true) {
            Token key;
            if (pending_key) {
                key = *pending_key;
                pending_key.reset();
            } else {
                if (lex_.peek().kind != TokenKind::Ident) break;
                if (!is_attr_key(lex_.peek().text)) break;
                key = lex_.next();
            }
            if (std::find(allowed.begin(), allowed.end(), key.text) == allowed.end())
                lex_.fail("attribute '" + key.text + "' is not valid on " + kw.text, key);
            Token eq = lex_.next();
            if (eq.kind != TokenKind::Equals) lex_.fail("expected '=' after attribute", eq);
            read_value(key, attrs);
        }
        return {std::move(id), std::move(attrs)};
    }

    static bool is_attr_key(std::string_view name) {
        static constexpr std::string_view keys[] = {
            "description",         "probability", "CVE",
            "CVSS",                "CVSSREQ",     "BaseScore",
            "ImpactScore",         "ExploitabilityScore",
            "EPSS",                "deploymentElement",
            "dataflowElement"};
        for (auto k : keys)
            if (k == name) return true;
        return false;
    }

    void read_value(const Token& key, Attrs& attrs) {
        auto number = [&](const char* what, double lo, double hi) {
            Token t = lex_.next();
            if (t.kind != TokenKind::Number) lex_.fail(std::string("expected a number for ") + what, t);
            if (t.number < lo || t.number > hi)
                lex_.fail(std::string(what) + " outside [" + format_range(lo, hi) + "]", t);
            return t.number;
        };
        if (key.text == "description") {
            Token t = lex_.next();
            if (t.kind != TokenKind::String) lex_.fail("expected a string description", t);
            attrs.description = t.text;
        } else if (key.text == "probability") {
            Token t = lex_.next();
            if (t.kind != TokenKind::Number) lex_.fail("expected a number for probability", t);
            attrs.probability = t.number;
        } else if (key.text == "CVE") {
            Token t = lex_.next();
            if (t.kind != TokenKind::String) lex_.fail("expected a quoted CVE id", t);
            attrs.cve = t.text;
        } else if (key.text == "CVSS") {
            Token t = lex_.peek().kind == TokenKind::String ? lex_.next() : lex_.raw_token();
            try {
                attrs.cvss = parse_cvss_vector(t.text);
            } catch (const ParseError& e) {
                lex_.fail("bad CVSS vector: " + e.message(), t);
            }
        } else if (key.text == "CVSSREQ") {
            Token t = lex_.peek().kind == TokenKind::String ? lex_.next() : lex_.raw_token();
            try {
                attrs.requirement = parse_cvss_requirement(t.text);
            } catch (const ParseError& e) {
                lex_.fail("bad CVSSREQ: " + e.message(), t);
            }
        } else if (key.text == "BaseScore") {
            attrs.base_score = number("BaseScore", 0, 10);
        } else if (key.text == "ImpactScore") {
            attrs.impact_score = number("ImpactScore", 0, 10);
        } else if (key.text == "ExploitabilityScore") {
            attrs.exploitability_score = number("ExploitabilityScore", 0, 10);
        } else if (key.text == "EPSS") {
            Token t = lex_.next();
            if (t.kind != TokenKind::Number) lex_.fail("expected a number for EPSS", t);
            attrs.epss = t.number;
        } else if (key.text == "deploymentElement" || key.text == "dataflowElement") {
            Token t = lex_.next();
            if (t.kind != TokenKind::Ident) lex_.fail("expected an element name", t);
            if (attrs.context_kind) lex_.fail("attack context given twice", key);
            attrs.context_kind = key.text == "deploymentElement" ? TreeContextKind::Deployment
                                                                 : TreeContextKind::Dataflow;
            attrs.context = t.text;
        }
    }

    void require_description(const Attrs& attrs, const Token& kw) {
        if (!attrs.description) lex_.fail(kw.text + " needs a description", kw);
    }

    static std::string format_range(double lo, double hi) {
        return std::to_string(static_cast<int>(lo)) + "," + std::to_string(static_cast<int>(hi));
    }

    Lexer lex_;
};

}  // namespace

TreePtr parse_tree(std::string_view text, const std::string& file) {
    return TreeParser(text, file).parse();
}

TreePtr parse_fault_tree(std::string_view text, const std::string& file) {
    TreePtr root = parse_tree(text, file);
    validate_tree(root, TreeFlavor::FaultTree);
    return root;
}

TreePtr parse_attack_tree(std::string_view text, const std::string& file) {
    TreePtr root = parse_tree(text, file);
    validate_tree(root, TreeFlavor::AttackTree);
    return root;
}

TreePtr parse_aft(std::string_view text, const std::string& file) {
    TreePtr root = parse_tree(text, file);
    validate_tree(root, TreeFlavor::Aft);
    return root;
}

}  // namespace saft
