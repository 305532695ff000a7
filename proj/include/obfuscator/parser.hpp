#pragma once

#include "obfuscator/ast.hpp"
#include "obfuscator/token.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace obf {

struct ParseDiagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Warning;
    std::string message;
    int line = 0;
};

/// Hard parse failure: unbalanced delimiters, or a conditional-compilation
/// directive (#if/#ifdef/#ifndef/#elif/#else/#endif), which the pipeline
/// does not support.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, int line)
        : std::runtime_error(std::move(message)), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

struct ParseResult {
    AstNodePtr root;
    std::vector<ParseDiagnostic> diagnostics;
};

/// Recursive-descent parse of the supported C99 subset. Constructs outside
/// the subset are swallowed into Opaque nodes at external-declaration or
/// statement granularity, never mid-expression, so any balanced token
/// stream parses. Throws ParseError for the two hard failures above.
ParseResult parse(const std::vector<Token>& tokens, std::string_view source);

/// Convenience: tokenize + parse.
ParseResult parse_source(std::string_view source);

/// Parse a single expression fragment. Intended for tests of the
/// expression grammar; throws ParseError if the fragment is not a single
/// well-formed expression.
AstNodePtr parse_expression(std::string_view fragment);

}  // namespace obf
