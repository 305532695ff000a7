#include "obfuscator/pipeline.hpp"

#include "obfuscator/lexer.hpp"
#include "obfuscator/renderer.hpp"
#include "obfuscator/symbols.hpp"
#include "obfuscator/transformer.hpp"

namespace obf {

PipelineResult obfuscate_source(std::string_view source,
                                const std::string& file_name,
                                const ObfuscationConfig& config) {
    PipelineResult result;
    auto tokens = tokenize(source);
    auto [root, diagnostics] = parse(tokens, source);
    result.diagnostics = std::move(diagnostics);
    if (config.dump_ast) result.ast_dump = dump(*root);

    SymbolTable table = build_symbols(*root, file_name);
    for (auto& diag : table.diagnostics)
        result.diagnostics.push_back(std::move(diag));

    Rng rng(config.seed);
    transform(root, table, config, rng);
    result.output = render(*root, rng);
    return result;
}

}  // namespace obf
