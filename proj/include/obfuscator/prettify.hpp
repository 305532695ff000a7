#pragma once

#include <string>
#include <string_view>

namespace obf {

/// Deterministic token-level C reformatter: one statement per line, braces
/// on their own rhythm, four-space indent, single spaces between tokens,
/// comments dropped. It exists to normalize code before diffing, so that a
/// hand-formatted original and a whitespace-stripped obfuscation land in
/// the same layout and the diff only shows real changes. Serves as the
/// evaluation pipeline's default formatter; any external formatter can be
/// substituted through the tool configuration.
std::string prettify(std::string_view source);

}  // namespace obf
