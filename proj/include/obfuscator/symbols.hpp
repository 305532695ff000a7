#pragma once

#include "obfuscator/ast.hpp"
#include "obfuscator/config.hpp"
#include "obfuscator/parser.hpp"

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace obf {

enum class SymbolKind {
    Function,
    Variable,
    Parameter,
    StructTag,
    Field,
    EnumConstant,
    TypedefName,
};

struct SymbolInfo {
    std::string name;
    std::string usr;
    SymbolKind kind = SymbolKind::Variable;
    // "Defined in an included header" cannot be observed without running a
    // preprocessor; a symbol that is global in that sense never makes it
    // into this table at all (its references stay unresolved), so this is
    // always false for table entries.
    bool is_global = false;
    bool referenced_locally = true;
    StorageClass storage = StorageClass::None;
    AstNode* decl_node = nullptr;
    bool has_definition = false;
    // The innermost scope subtree this symbol is visible in contains an
    // Opaque node; renaming it could break references hidden in there.
    bool scope_contains_opaque = false;
};

class SymbolTable {
public:
    SymbolId add(SymbolInfo info);

    SymbolInfo& info(SymbolId id) { return symbols_[id]; }
    const SymbolInfo& info(SymbolId id) const { return symbols_[id]; }

    /// Creation-ordered view; rename passes iterate this so collision
    /// handling is deterministic.
    const std::vector<SymbolInfo>& symbols() const { return symbols_; }
    std::vector<SymbolInfo>& symbols() { return symbols_; }

    const SymbolId* find_by_usr(const std::string& usr) const;

    /// Decides whether a symbol may be renamed under the given config:
    /// never `main`, never keep-listed or externally declared names, and
    /// fields / enum constants / typedef names only in files with no Opaque
    /// nodes. The per-symbol Opaque scope restriction is applied separately
    /// by the rename pass.
    bool is_rename_eligible(const SymbolInfo& sym,
                            const ObfuscationConfig& config) const;

    bool file_has_opaque = false;
    std::string file_name;
    std::vector<ParseDiagnostic> diagnostics;

private:
    std::vector<SymbolInfo> symbols_;
    std::unordered_map<std::string, SymbolId> by_usr_;
};

/// Walk a parsed translation unit: give every declaring node a SymbolId,
/// bind every resolvable IdentifierRef to its declaration, and compute USRs.
///
/// USR scheme: `c:` + file name for file-local symbols (static, block
/// scope, or linkage-less kinds), bare `c:` for external linkage, then the
/// scope path (`@F@<function>` and `@B<n>` block ordinals), then `@` + a
/// kind letter + `@` + name. A file-scope function `foo` gets `c:@F@foo`;
/// a local `x` in its body in file t.c gets `c:t.c@F@foo@B0@V@x`.
SymbolTable build_symbols(AstNode& root, const std::string& file_name);

/// `i_` + the first four hex chars of md5(usr), extended two chars at a
/// time while the name collides with `taken` or a C keyword.
std::string obfuscated_name(const std::string& usr,
                            const std::set<std::string>& taken);

/// Lowercase 32-char MD5 hex digest.
std::string md5_hex(std::string_view data);

}  // namespace obf
