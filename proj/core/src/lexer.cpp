#include "saft/lexer.hpp"

#include <cctype>
#include <charconv>

namespace saft {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_raw_delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';' ||
           c == '{' || c == '}' || c == '(' || c == ')';
}

}  // namespace

Lexer::Lexer(std::string_view src, std::string file)
    : src_(src), file_(std::move(file)) {}

void Lexer::advance() {
    if (src_[pos_] == '\n') {
        ++line_;
        column_ = 1;
    } else {
        ++column_;
    }
    ++pos_;
}

void Lexer::skip_ws_and_comments() {
    while (!eof()) {
        if (std::isspace(static_cast<unsigned char>(cur()))) {
            advance();
        } else if (cur() == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
            while (!eof() && cur() != '\n') advance();
        } else {
            break;
        }
    }
}

const Token& Lexer::peek() {
    if (!has_lookahead_) {
        lookahead_ = scan();
        has_lookahead_ = true;
    }
    return lookahead_;
}

Token Lexer::next() {
    if (has_lookahead_) {
        has_lookahead_ = false;
        return lookahead_;
    }
    return scan();
}

Token Lexer::raw_token() {
    if (has_lookahead_) {
        // Rewind to the start of the buffered token and rescan raw.
        pos_ = lookahead_.offset;
        line_ = lookahead_.line;
        column_ = lookahead_.column;
        has_lookahead_ = false;
    }
    skip_ws_and_comments();
    Token tok;
    tok.kind = TokenKind::String;
    tok.line = line_;
    tok.column = column_;
    tok.offset = pos_;
    while (!eof() && !is_raw_delimiter(cur())) {
        tok.text.push_back(cur());
        advance();
    }
    if (tok.text.empty()) fail_here("expected a value");
    return tok;
}

void Lexer::fail(const std::string& message, const Token& at) const {
    throw ParseError(message, at.line, at.column, file_);
}

void Lexer::fail_here(const std::string& message) {
    throw ParseError(message, line_, column_, file_);
}

Token Lexer::scan() {
    skip_ws_and_comments();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    tok.offset = pos_;
    if (eof()) {
        tok.kind = TokenKind::End;
        return tok;
    }
    char c = cur();
    if (is_ident_start(c)) {
        tok.kind = TokenKind::Ident;
        while (!eof() && is_ident_char(cur())) {
            tok.text.push_back(cur());
            advance();
        }
        return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        tok.kind = TokenKind::Number;
        if (cur() == '-') {
            tok.text.push_back(cur());
            advance();
        }
        auto digits = [&] {
            while (!eof() && std::isdigit(static_cast<unsigned char>(cur()))) {
                tok.text.push_back(cur());
                advance();
            }
        };
        digits();
        if (!eof() && cur() == '.') {
            tok.text.push_back(cur());
            advance();
            digits();
        }
        if (!eof() && (cur() == 'e' || cur() == 'E')) {
            tok.text.push_back(cur());
            advance();
            if (!eof() && (cur() == '+' || cur() == '-')) {
                tok.text.push_back(cur());
                advance();
            }
            digits();
        }
        auto res = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.number);
        if (res.ec != std::errc() || res.ptr != tok.text.data() + tok.text.size()) {
            fail("malformed number '" + tok.text + "'", tok);
        }
        return tok;
    }
    if (c == '"') {
        tok.kind = TokenKind::String;
        advance();
        while (true) {
            if (eof()) fail("unterminated string literal", tok);
            char d = cur();
            if (d == '"') {
                advance();
                break;
            }
            if (d == '\\') {
                advance();
                if (eof()) fail("unterminated string literal", tok);
                char e = cur();
                switch (e) {
                    case 'n': tok.text.push_back('\n'); break;
                    case 't': tok.text.push_back('\t'); break;
                    case '"': tok.text.push_back('"'); break;
                    case '\\': tok.text.push_back('\\'); break;
                    default: fail_here(std::string("unknown escape '\\") + e + "'");
                }
                advance();
            } else {
                tok.text.push_back(d);
                advance();
            }
        }
        return tok;
    }
    auto punct = [&](TokenKind kind, std::string text, int len) {
        tok.kind = kind;
        tok.text = std::move(text);
        for (int i = 0; i < len; ++i) advance();
        return tok;
    };
    switch (c) {
        case '{': return punct(TokenKind::LBrace, "{", 1);
        case '}': return punct(TokenKind::RBrace, "}", 1);
        case '(': return punct(TokenKind::LParen, "(", 1);
        case ')': return punct(TokenKind::RParen, ")", 1);
        case '=': return punct(TokenKind::Equals, "=", 1);
        case ',': return punct(TokenKind::Comma, ",", 1);
        case ';': return punct(TokenKind::Semicolon, ";", 1);
        case ':': return punct(TokenKind::Colon, ":", 1);
        case '*': return punct(TokenKind::Star, "*", 1);
        case '-':
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>')
                return punct(TokenKind::ArrowRight, "->", 2);
            break;
        case '<':
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '-')
                return punct(TokenKind::ArrowLeft, "<-", 2);
            break;
        default: break;
    }
    fail_here(std::string("unexpected character '") + c + "'");
}

}  // namespace saft
