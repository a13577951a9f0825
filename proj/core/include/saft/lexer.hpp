#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "saft/errors.hpp"

namespace saft {

enum class TokenKind {
    End,
    Ident,     // [A-Za-z_][A-Za-z0-9_]*
    String,    // double-quoted, backslash escapes
    Number,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Equals,
    Comma,
    Semicolon,
    Colon,
    Star,
    ArrowRight,  // ->
    ArrowLeft,   // <-
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;     // ident name / decoded string / number literal / punct
    double number = 0.0;  // valid for Number
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t offset = 0;  // byte offset of the first character
};

/// Pull lexer shared by all the model languages. Whitespace-insensitive,
/// `//` line comments. One token of lookahead; `raw_token()` rewinds the
/// lookahead so constructs like CVSS:3.1/C:*/I:*/A:H can be consumed as a
/// single unquoted blob.
class Lexer {
public:
    explicit Lexer(std::string_view src, std::string file = {});

    const Token& peek();
    Token next();

    /// Scan from the current token position to the next whitespace or one
    /// of , ; { } ( ) — used for unquoted CVSS vectors.
    Token raw_token();

    [[noreturn]] void fail(const std::string& message, const Token& at) const;
    [[noreturn]] void fail_here(const std::string& message);

    const std::string& file() const { return file_; }

private:
    Token scan();
    void skip_ws_and_comments();
    char cur() const { return src_[pos_]; }
    bool eof() const { return pos_ >= src_.size(); }
    void advance();

    std::string_view src_;
    std::string file_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
    bool has_lookahead_ = false;
    Token lookahead_;
};

}  // namespace saft
