#pragma once

#include "obfuscator/ast.hpp"
#include "obfuscator/rng.hpp"

#include <stdexcept>
#include <string>

namespace obf {

class RenderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Emit C source with no comments and no whitespace beyond what the grammar
/// forces: a single space where adjacent tokens would otherwise lex as one,
/// and newlines only around directive lines and inside Opaque original
/// text. Opaque nodes are emitted verbatim. String and integer literals are
/// re-encoded here (hex integers, randomized string escapes); the rng drives
/// the string escapes.
std::string render(const AstNode& root, Rng& rng);

/// Hexadecimal spelling of an integer literal: 0x + lowercase digits + the
/// original suffix. 23 -> "0x17".
std::string render_int(std::uint64_t value, const std::string& suffix);

/// Randomized escape encoding of a decoded string (no surrounding quotes on
/// input). Per character the rng picks a \xHH escape (upper-case, and the
/// literal is split right after it so a following hex digit cannot extend
/// it), a 3-digit octal escape, or the character verbatim when printable.
/// Output includes the quotes of every segment. Throws RenderError for
/// embedded NUL.
std::string escape_string(const std::string& value, Rng& rng);

}  // namespace obf
