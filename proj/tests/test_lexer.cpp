#include <doctest.h>

#include "saft/lexer.hpp"

using namespace saft;

TEST_CASE("lexer produces the token stream of the model languages") {
    Lexer lex("Component foo { property x = \"a b\"; } // comment\nConnect -> <- : * , ;");
    CHECK(lex.next().text == "Component");
    CHECK(lex.next().text == "foo");
    CHECK(lex.next().kind == TokenKind::LBrace);
    CHECK(lex.next().text == "property");
    CHECK(lex.next().text == "x");
    CHECK(lex.next().kind == TokenKind::Equals);
    Token str = lex.next();
    CHECK(str.kind == TokenKind::String);
    CHECK(str.text == "a b");
    CHECK(lex.next().kind == TokenKind::Semicolon);
    CHECK(lex.next().kind == TokenKind::RBrace);
    CHECK(lex.next().text == "Connect");
    CHECK(lex.next().kind == TokenKind::ArrowRight);
    CHECK(lex.next().kind == TokenKind::ArrowLeft);
    CHECK(lex.next().kind == TokenKind::Colon);
    CHECK(lex.next().kind == TokenKind::Star);
    CHECK(lex.next().kind == TokenKind::Comma);
    CHECK(lex.next().kind == TokenKind::Semicolon);
    CHECK(lex.next().kind == TokenKind::End);
}

TEST_CASE("string escapes decode") {
    Lexer lex(R"("a\"b\\c\nd\te")");
    CHECK(lex.next().text == "a\"b\\c\nd\te");
}

TEST_CASE("numbers parse including scientific notation") {
    Lexer lex("0.7 9.1 2e-3 -1.5");
    CHECK(lex.next().number == doctest::Approx(0.7));
    CHECK(lex.next().number == doctest::Approx(9.1));
    CHECK(lex.next().number == doctest::Approx(0.002));
    CHECK(lex.next().number == doctest::Approx(-1.5));
}

TEST_CASE("raw tokens grab CVSS vectors even after a peek") {
    Lexer lex("CVSSREQ = CVSS:3.1/C:*/I:*/A:H, next");
    CHECK(lex.next().text == "CVSSREQ");
    CHECK(lex.next().kind == TokenKind::Equals);
    CHECK(lex.peek().text == "CVSS");  // lookahead buffered
    CHECK(lex.raw_token().text == "CVSS:3.1/C:*/I:*/A:H");
    CHECK(lex.next().kind == TokenKind::Comma);
    CHECK(lex.next().text == "next");
}

TEST_CASE("errors carry line and column") {
    Lexer lex("ok\n  ?");
    lex.next();
    try {
        lex.next();
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
}

TEST_CASE("unterminated strings are rejected") {
    Lexer lex("\"abc");
    CHECK_THROWS_AS(lex.next(), ParseError);
}
