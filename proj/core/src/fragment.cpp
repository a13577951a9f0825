#include "saft/fragment.hpp"

#include "saft/lexer.hpp"

namespace saft {

bool AftFragment::has_placeholders() const {
    bool found = false;
    visit_tree(body, [&](const TreePtr& node) {
        if (std::holds_alternative<ChildPlaceholder>(node->value)) found = true;
        return true;
    });
    return found;
}

AftFragment parse_fragment(std::string_view text, const std::string& file) {
    Lexer lex(text, file);
    auto expect = [&](TokenKind kind, const char* what) {
        Token t = lex.next();
        if (t.kind != kind) lex.fail(std::string("expected ") + what, t);
        return t;
    };
    Token kw = expect(TokenKind::Ident, "'Fragment'");
    if (kw.text != "Fragment") lex.fail("expected 'Fragment'", kw);
    Token name = expect(TokenKind::Ident, "fragment name");
    expect(TokenKind::LBrace, "'{'");

    Token pre = expect(TokenKind::Ident, "'precondition'");
    if (pre.text != "precondition") lex.fail("expected 'precondition'", pre);

    AftFragment fragment;
    fragment.name = name.text;

    Token ctx = expect(TokenKind::Ident, "'deploymentElement' or 'dataflowElement'");
    expect(TokenKind::Equals, "'='");
    Token kind_tok = expect(TokenKind::Ident, "a context kind");
    if (ctx.text == "deploymentElement") {
        fragment.context_model = TreeContextKind::Deployment;
        if (kind_tok.text == "Platform") fragment.deployment_kind = ElementKind::Platform;
        else if (kind_tok.text == "OS") fragment.deployment_kind = ElementKind::OS;
        else if (kind_tok.text == "Package") fragment.deployment_kind = ElementKind::Package;
        else if (kind_tok.text == "Library") fragment.deployment_kind = ElementKind::Library;
        else if (kind_tok.text == "File") fragment.deployment_kind = ElementKind::File;
        else if (kind_tok.text == "Component") fragment.deployment_kind = ElementKind::NewComponent;
        else if (kind_tok.text == "Untyped") fragment.deployment_kind = ElementKind::Untyped;
        else lex.fail("unknown deployment element kind '" + kind_tok.text + "'", kind_tok);
    } else if (ctx.text == "dataflowElement") {
        fragment.context_model = TreeContextKind::Dataflow;
        if (kind_tok.text != "Component" && kind_tok.text != "Channel")
            lex.fail("dataflow context kind must be Component or Channel", kind_tok);
        fragment.dataflow_kind = kind_tok.text;
    } else {
        lex.fail("expected 'deploymentElement' or 'dataflowElement'", ctx);
    }

    Token req_kw = expect(TokenKind::Ident, "'CVSSREQ'");
    if (req_kw.text != "CVSSREQ") lex.fail("expected 'CVSSREQ'", req_kw);
    expect(TokenKind::Equals, "'='");
    Token req_tok = lex.peek().kind == TokenKind::String ? lex.next() : lex.raw_token();
    try {
        fragment.condition = parse_cvss_requirement(req_tok.text);
    } catch (const ParseError& e) {
        lex.fail("bad precondition CVSSREQ: " + e.message(), req_tok);
    }

    // Remainder up to the matching closing brace is the body tree.
    size_t body_start = lex.peek().offset;
    size_t body_line = lex.peek().line;
    int depth = 1;
    size_t body_end = body_start;
    while (true) {
        Token t = lex.next();
        if (t.kind == TokenKind::End) lex.fail("unterminated fragment", t);
        if (t.kind == TokenKind::LBrace) ++depth;
        if (t.kind == TokenKind::RBrace && --depth == 0) {
            body_end = t.offset;
            break;
        }
    }
    Token end = lex.next();
    if (end.kind != TokenKind::End) lex.fail("trailing content after fragment", end);

    std::string body_text(text.substr(body_start, body_end - body_start));
    try {
        fragment.body = parse_tree(body_text, file);
    } catch (const ParseError& e) {
        // Re-anchor to the enclosing file (body was parsed standalone).
        throw ParseError(e.message(), e.line() + body_line - 1, e.column(), file);
    }
    validate_tree(fragment.body, TreeFlavor::FragmentBody);
    if (fragment.has_placeholders()) {
        bool container = fragment.context_model == TreeContextKind::Deployment &&
                         (fragment.deployment_kind == ElementKind::Platform ||
                          fragment.deployment_kind == ElementKind::OS);
        if (!container) {
            throw ModelError("fragment '" + fragment.name +
                             "': 'child' placeholders need a Platform or OS context");
        }
    }
    return fragment;
}

std::string print_fragment(const AftFragment& fragment) {
    std::string out = "Fragment " + fragment.name + " {\n";
    out += "  precondition ";
    if (fragment.context_model == TreeContextKind::Deployment) {
        out += "deploymentElement = ";
        out += fragment.deployment_kind == ElementKind::NewComponent
                   ? "Component"
                   : std::string(element_kind_name(*fragment.deployment_kind));
    } else {
        out += "dataflowElement = " + fragment.dataflow_kind;
    }
    out += " CVSSREQ = " + fragment.condition.to_string() + "\n";
    std::string body = print_tree(fragment.body);
    // indent the body by one level
    size_t pos = 0;
    while (pos < body.size()) {
        size_t nl = body.find('\n', pos);
        if (nl == std::string::npos) nl = body.size();
        if (nl > pos) out += "  " + body.substr(pos, nl - pos);
        out += "\n";
        pos = nl + 1;
    }
    out += "}\n";
    return out;
}

bool fragment_context_matches(const AftFragment& fragment,
                              const DeploymentModel::Element& element) {
    if (fragment.context_model != TreeContextKind::Deployment || !fragment.deployment_kind)
        return false;
    if (*fragment.deployment_kind == ElementKind::NewComponent) {
        return element.kind == ElementKind::NewComponent ||
               element.kind == ElementKind::RefComponent;
    }
    return element.kind == *fragment.deployment_kind;
}

}  // namespace saft
