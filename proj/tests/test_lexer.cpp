#include "obfuscator/lexer.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace obf;

namespace {

std::string reassemble(const std::vector<Token>& tokens) {
    std::string out;
    for (const Token& tok : tokens) {
        out += tok.leading_trivia;
        out += tok.lexeme;
    }
    return out;
}

std::vector<Token> lex(const std::string& source) { return tokenize(source); }

}  // namespace

TEST_CASE("tokenize basic declaration with trivia") {
    auto tokens = lex("int main () {");
    REQUIRE(tokens.size() == 6);  // int main ( ) { eof
    CHECK(tokens[0].kind == TokenKind::Keyword);
    CHECK(tokens[0].lexeme == "int");
    CHECK(tokens[1].kind == TokenKind::Identifier);
    CHECK(tokens[1].lexeme == "main");
    CHECK(tokens[1].leading_trivia == " ");
    CHECK(tokens[2].lexeme == "(");
    CHECK(tokens[3].lexeme == ")");
    CHECK(tokens[4].lexeme == "{");
    CHECK(tokens[5].kind == TokenKind::EndOfFile);
}

TEST_CASE("empty input yields only end of file") {
    auto tokens = lex("");
    REQUIRE(tokens.size() == 1);
    CHECK(tokens[0].kind == TokenKind::EndOfFile);
}

TEST_CASE("hex literal with trailing comment stays lossless") {
    std::string source = "x = 0x17; // hex";
    auto tokens = lex(source);
    REQUIRE(tokens.size() >= 4);
    CHECK(tokens[2].kind == TokenKind::IntLiteral);
    CHECK(tokens[2].lexeme == "0x17");
    CHECK(reassemble(tokens) == source);
}

TEST_CASE("losslessness over assorted constructs") {
    const char* samples[] = {
        "int a = 1;\n/* block\ncomment */ float f = 1.5e-3;\n",
        "#include <stdio.h>\nint main(void){return 0;}\n",
        "#define LONG \\\n  42\nchar c = 'x';\n",
        "const char *s = \"a\\tb\\x41\";  // tail",
        "a+++b; a---b; a<<=2;",
        "",
        "   \t\n\n",
        "int $weird$ = 1;",
    };
    for (const char* sample : samples) {
        CAPTURE(sample);
        CHECK(reassemble(lex(sample)) == sample);
    }
}

TEST_CASE("token spans are monotonic, non-overlapping, and slice-exact") {
    std::string source =
        "#define X 1\nint main(void) {\n  char *s = \"hi\\n\";\n  return X; }\n";
    auto tokens = lex(source);
    std::size_t prev_end = 0;
    for (const Token& tok : tokens) {
        CHECK(tok.span.begin >= prev_end);
        CHECK(tok.span.begin <= tok.span.end);
        CHECK(source.substr(tok.span.begin, tok.span.end - tok.span.begin) ==
              tok.lexeme);
        prev_end = tok.span.end;
    }
}

TEST_CASE("directive lines become single tokens") {
    auto tokens = lex("#include <stdio.h>\nint x;");
    REQUIRE(tokens.size() >= 4);
    CHECK(tokens[0].kind == TokenKind::PpDirectiveLine);
    CHECK(tokens[0].lexeme == "#include <stdio.h>");
    CHECK(tokens[1].lexeme == "int");

    SUBCASE("backslash continuation keeps the logical line together") {
        auto cont = lex("#define A \\\n  2\nint y;");
        CHECK(cont[0].kind == TokenKind::PpDirectiveLine);
        CHECK(cont[0].lexeme == "#define A \\\n  2");
        CHECK(cont[1].lexeme == "int");
    }

    SUBCASE("a # that is not first on its line is just a punctuator") {
        auto mid = lex("int a; # not directive\n");
        bool has_directive = false;
        for (const auto& tok : mid)
            has_directive |= tok.kind == TokenKind::PpDirectiveLine;
        CHECK(!has_directive);
    }
}

TEST_CASE("lexical errors carry line numbers") {
    CHECK_THROWS_AS(lex("int x;\n\"unterminated"), LexError);
    try {
        lex("int x;\n\"unterminated");
    } catch (const LexError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(lex("/* never closed"), LexError);
    CHECK_THROWS_AS(lex("char c = 'a\n';"), LexError);
    try {
        lex("\n\n/* open");
    } catch (const LexError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("number classification") {
    CHECK(lex("42")[0].kind == TokenKind::IntLiteral);
    CHECK(lex("0x2Aul")[0].kind == TokenKind::IntLiteral);
    CHECK(lex("052")[0].kind == TokenKind::IntLiteral);
    CHECK(lex("1.5")[0].kind == TokenKind::FloatLiteral);
    CHECK(lex(".5f")[0].kind == TokenKind::FloatLiteral);
    CHECK(lex("1e10")[0].kind == TokenKind::FloatLiteral);
    CHECK(lex("1E-10")[0].kind == TokenKind::FloatLiteral);
    CHECK(lex("0x1p3")[0].kind == TokenKind::FloatLiteral);
}

TEST_CASE("unescape_string_literal decodes escapes") {
    CHECK(unescape_string_literal("\"\\x48\"") == "H");
    CHECK(unescape_string_literal("\"\"") == "");
    CHECK(unescape_string_literal("\"\\154\"") == "l");  // octal 154 == 108
    CHECK(unescape_string_literal("\"a\\tb\\n\"") == "a\tb\n");
    CHECK(unescape_string_literal("\"\\\\\\\"\"") == "\\\"");
    CHECK(unescape_string_literal("\"\\0\"") == std::string(1, '\0'));
    CHECK(unescape_string_literal("\"\\1541\"") == "l1");  // 3-digit max

    CHECK_THROWS_AS(unescape_string_literal("\"\\q\""), LexError);
    CHECK_THROWS_AS(unescape_string_literal("\"\\x\""), LexError);
    CHECK_THROWS_AS(unescape_string_literal("\"\\777\""), LexError);
    CHECK_THROWS_AS(unescape_string_literal("\"\\u0041\""), LexError);
}

TEST_CASE("losslessness property over the shipped corpus") {
    namespace fs = std::filesystem;
    int checked = 0;
    for (const auto& entry : fs::directory_iterator(OBF_CORPUS_DIR)) {
        if (entry.path().extension() != ".c") continue;
        std::ifstream stream(entry.path(), std::ios::binary);
        std::ostringstream buf;
        buf << stream.rdbuf();
        std::string source = buf.str();
        CAPTURE(entry.path().string());
        CHECK(reassemble(tokenize(source)) == source);
        ++checked;
    }
    CHECK(checked >= 10);
}
