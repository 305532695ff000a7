#pragma once

#include "obfuscator/token.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace obf {

/// Raised for lexical errors that make the rest of the file unreadable.
class LexError : public std::runtime_error {
public:
    LexError(std::string message, int line)
        : std::runtime_error(std::move(message)), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

/// Lex C source into a token stream ending with EndOfFile. Lossless: trivia
/// (whitespace, comments) is attached to the following token. Lines whose
/// first non-whitespace character is '#' become a single PpDirectiveLine
/// token covering the whole logical line, backslash continuations included.
///
/// Throws LexError for unterminated strings, chars, and block comments.
std::vector<Token> tokenize(std::string_view source);

/// Decode a C string literal (quotes included) to its character sequence.
/// Handles \x hex, 1-3 digit octal, and the standard single-char escapes.
/// Throws LexError (BadEscape) on unknown or malformed escapes.
std::string unescape_string_literal(std::string_view lexeme);

/// True if `name` is a C99 keyword.
bool is_c_keyword(std::string_view name);

}  // namespace obf
