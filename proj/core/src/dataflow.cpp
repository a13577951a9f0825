#include "saft/dataflow.hpp"

#include <algorithm>

#include "saft/lexer.hpp"
#include "saft/strings.hpp"

namespace saft {

std::optional<std::string> find_property(const PropertyList& props, std::string_view key) {
    for (const auto& [k, v] : props) {
        if (k == key) return v;
    }
    return std::nullopt;
}

const DataflowModel::Component* DataflowModel::find_component(std::string_view name) const {
    for (const auto& c : components) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const DataflowModel::Channel* DataflowModel::find_channel(std::string_view name) const {
    for (const auto& c : channels) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::vector<std::string> DataflowModel::connected_components(std::string_view channel) const {
    std::vector<std::string> out;
    for (const auto& conn : connections) {
        if (conn.channel == channel &&
            std::find(out.begin(), out.end(), conn.component) == out.end()) {
            out.push_back(conn.component);
        }
    }
    return out;
}

namespace {

PropertyList parse_property_block(Lexer& lex) {
    PropertyList props;
    while (lex.peek().kind == TokenKind::Ident && lex.peek().text == "property") {
        lex.next();
        Token key = lex.next();
        if (key.kind != TokenKind::Ident) lex.fail("expected property name", key);
        Token eq = lex.next();
        if (eq.kind != TokenKind::Equals) lex.fail("expected '=' after property name", eq);
        Token value = lex.next();
        if (value.kind != TokenKind::String) lex.fail("expected string property value", value);
        Token semi = lex.next();
        if (semi.kind != TokenKind::Semicolon) lex.fail("expected ';' after property", semi);
        props.emplace_back(key.text, value.text);
    }
    return props;
}

}  // namespace

DataflowModel parse_dataflow(std::string_view text, const std::string& file) {
    Lexer lex(text, file);
    DataflowModel model;
    while (true) {
        Token tok = lex.next();
        if (tok.kind == TokenKind::End) break;
        if (tok.kind != TokenKind::Ident) lex.fail("expected a declaration", tok);
        if (tok.text == "Component" || tok.text == "Channel") {
            Token name = lex.next();
            if (name.kind != TokenKind::Ident) lex.fail("expected a name", name);
            Token open = lex.next();
            if (open.kind != TokenKind::LBrace) lex.fail("expected '{'", open);
            PropertyList props = parse_property_block(lex);
            Token close = lex.next();
            if (close.kind != TokenKind::RBrace) lex.fail("expected '}'", close);
            if (tok.text == "Component") {
                if (model.find_component(name.text))
                    lex.fail("duplicate component '" + name.text + "'", name);
                model.components.push_back({name.text, std::move(props)});
            } else {
                if (model.find_channel(name.text))
                    lex.fail("duplicate channel '" + name.text + "'", name);
                model.channels.push_back({name.text, std::move(props)});
            }
        } else if (tok.text == "Connect") {
            auto expect_kw = [&](std::string_view kw) {
                Token t = lex.next();
                if (t.kind != TokenKind::Ident || t.text != kw)
                    lex.fail(std::string("expected '") + std::string(kw) + "'", t);
            };
            auto expect_name = [&]() {
                Token eq = lex.next();
                if (eq.kind != TokenKind::Equals) lex.fail("expected '='", eq);
                Token n = lex.next();
                if (n.kind != TokenKind::Ident) lex.fail("expected a name", n);
                return n;
            };
            expect_kw("Component");
            Token comp = expect_name();
            Token arrow = lex.next();
            if (arrow.kind != TokenKind::ArrowRight && arrow.kind != TokenKind::ArrowLeft)
                lex.fail("expected '->' or '<-'", arrow);
            expect_kw("Channel");
            Token chan = expect_name();
            Token semi = lex.next();
            if (semi.kind != TokenKind::Semicolon) lex.fail("expected ';'", semi);
            if (!model.find_component(comp.text))
                lex.fail("Connect references unknown component '" + comp.text + "'", comp);
            if (!model.find_channel(chan.text))
                lex.fail("Connect references unknown channel '" + chan.text + "'", chan);
            model.connections.push_back({comp.text, chan.text,
                                         arrow.kind == TokenKind::ArrowRight
                                             ? DataflowModel::Direction::Outgoing
                                             : DataflowModel::Direction::Incoming});
        } else {
            lex.fail("unknown declaration '" + tok.text + "'", tok);
        }
    }
    return model;
}

std::string print_dataflow(const DataflowModel& model) {
    std::string out;
    auto block = [&](const std::string& kw, const std::string& name, const PropertyList& props) {
        out += kw + " " + name + " {\n";
        for (const auto& [k, v] : props) {
            out += "  property " + k + " = " + quote_string(v) + ";\n";
        }
        out += "}\n\n";
    };
    for (const auto& c : model.components) block("Component", c.name, c.properties);
    for (const auto& c : model.channels) block("Channel", c.name, c.properties);
    for (const auto& conn : model.connections) {
        out += "Connect Component=" + conn.component +
               (conn.direction == DataflowModel::Direction::Outgoing ? " -> " : " <- ") +
               "Channel=" + conn.channel + ";\n";
    }
    return out;
}

}  // namespace saft
