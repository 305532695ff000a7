#pragma once

#include "obfuscator/config.hpp"
#include "obfuscator/parser.hpp"

#include <string>
#include <string_view>

namespace obf {

struct PipelineResult {
    std::string output;
    std::vector<ParseDiagnostic> diagnostics;
    std::string ast_dump;  // filled when config.dump_ast is set
};

/// tokenize -> parse -> build_symbols -> transform -> render.
/// file_name feeds the USR scheme (and hence renaming), not I/O.
/// Throws LexError / ParseError for inputs the pipeline rejects.
PipelineResult obfuscate_source(std::string_view source,
                                const std::string& file_name,
                                const ObfuscationConfig& config);

}  // namespace obf
