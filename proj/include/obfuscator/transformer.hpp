#pragma once

#include "obfuscator/ast.hpp"
#include "obfuscator/config.hpp"
#include "obfuscator/rng.hpp"
#include "obfuscator/symbols.hpp"

namespace obf {

/// Rewrites a non-negative value fitting 31 bits into a parenthesized
/// four-term add/subtract chain that folds back to it, e.g. 23 into
/// (759+78-826+12). The first three terms are drawn from [0,1024); the
/// closing term absorbs the difference. Returns nullptr when the value is
/// too wide (caller keeps the literal).
AstNodePtr split_int(std::uint64_t value, Rng& rng);

/// Wraps a side-effect-free condition C as ((C)&&(!!(C))). Returns nullptr
/// when the condition contains calls, assignments, ++/-- or Opaque nodes;
/// duplicating those would change behaviour.
AstNodePtr add_bool_noise(const AstNode& cond, Rng& rng);

/// Rewrites `a==b` as (!((a)^(b))) and `a!=b` as ((a)^(b)) in condition
/// position or (!!((a)^(b))) in value position. Only fires when both
/// operands are provably of integer type; returns the original expression
/// unchanged otherwise.
AstNodePtr rewrite_equality(AstNodePtr expr, bool condition_position,
                            const SymbolTable& table);

/// Gives every anonymous struct/union a fresh i_anon<N> tag, registered in
/// the table as file-local.
void name_anonymous_structs(AstNode& root, SymbolTable& table);

/// Applies obfuscated_name to every eligible symbol: declaration names,
/// bound identifier references, member accesses (by unique field name) and
/// typedef spellings inside type text. Symbols whose scope contains an
/// Opaque node, or whose name appears in a #define body, are left alone.
void rename_identifiers(AstNode& root, SymbolTable& table,
                        const ObfuscationConfig& config);

/// Full transformation pass: anonymous-struct naming, renaming (when
/// enabled), then one bottom-up expression walk applying the equality
/// rewrite, boolean noise on statement conditions, and integer splitting.
/// Opaque subtrees and directive lines are never entered.
void transform(AstNodePtr& root, SymbolTable& table,
               const ObfuscationConfig& config, Rng& rng);

}  // namespace obf
