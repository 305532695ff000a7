#pragma once

#include <cstddef>
#include <string>

namespace obf {

/// Half-open byte range [begin, end) into the original source buffer,
/// with 1-based line numbers for diagnostics.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    int line_begin = 1;
    int line_end = 1;

    bool is_synthetic() const { return begin == 0 && end == 0 && line_begin == 0; }

    static SourceSpan synthetic() { return SourceSpan{0, 0, 0, 0}; }
};

enum class TokenKind {
    Identifier,
    Keyword,
    IntLiteral,
    FloatLiteral,
    CharLiteral,
    StringLiteral,
    Punctuator,
    PpDirectiveLine,
    EndOfFile,
};

const char* to_string(TokenKind kind);

/// One lexeme plus the whitespace/comment run that preceded it. Concatenating
/// leading_trivia + lexeme across the stream reproduces the input exactly;
/// the EndOfFile token carries the file's trailing trivia.
struct Token {
    TokenKind kind = TokenKind::EndOfFile;
    std::string lexeme;
    SourceSpan span;
    std::string leading_trivia;

    bool is(TokenKind k) const { return kind == k; }
    bool is_lexeme(const char* s) const { return lexeme == s; }
};

}  // namespace obf
