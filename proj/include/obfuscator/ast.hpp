#pragma once

#include "obfuscator/token.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace obf {

enum class NodeKind {
    TranslationUnit,
    IncludeDirective,
    DefineDirective,
    FunctionDef,
    FunctionProto,
    ParamDecl,
    VarDecl,
    StructDecl,
    FieldDecl,
    EnumDecl,
    TypedefDecl,
    CompoundStmt,
    IfStmt,
    ForStmt,
    WhileStmt,
    DoWhileStmt,
    SwitchStmt,
    CaseLabel,
    DefaultLabel,
    ReturnStmt,
    BreakStmt,
    ContinueStmt,
    GotoStmt,
    LabelStmt,
    ExprStmt,
    EmptyStmt,
    CallExpr,
    BinaryExpr,
    UnaryExpr,
    AssignExpr,
    ConditionalExpr,
    IndexExpr,
    MemberExpr,
    CastExpr,
    ParenExpr,
    IdentifierRef,
    IntLiteral,
    FloatLiteral,
    CharLiteral,
    StringLiteral,
    InitList,
    Opaque,
};

const char* to_string(NodeKind kind);

enum class StorageClass { None, Static, Extern };

/// Index into a SymbolTable.
using SymbolId = std::uint32_t;

struct AstNode;
using AstNodePtr = std::unique_ptr<AstNode>;

/// Kind-tagged mutable AST node. Every node parsed from source carries the
/// verbatim text of its span in orig_code; Opaque nodes are rendered from
/// that text alone and their subtrees are never transformed. Nodes created
/// by the transformer have a synthetic span and whatever orig_code the
/// creator supplies.
///
/// Kind-specific fields (unused ones stay at their defaults):
///   IntLiteral                int_value, suffix
///   CharLiteral               int_value (the byte), orig lexeme in orig_code
///   StringLiteral             str_value (decoded)
///   IdentifierRef             name, symbol
///   BinaryExpr/UnaryExpr      op (UnaryExpr also is_postfix)
///   AssignExpr                op
///   MemberExpr                op ("." or "->"), name (the member)
///   CastExpr                  type_text; zero children = bare type, as in
///                             the type operand of sizeof
///   Decl kinds                name, type_text, storage, symbol, plus
///                             declarator_prefix / declarator_suffix for the
///                             pointer and trailing parts; VarDecl and
///                             friends keep array dimensions as the first
///                             dim_count children, an initializer when
///                             has_init, then any extra declarators of a
///                             comma declaration as trailing decl children
///   FunctionDef/Proto         is_variadic, takes_void; children are the
///                             ParamDecls followed by the body (defs only)
///   StructDecl                name (tag, may be empty), tag_keyword
///                             ("struct" or "union"), FieldDecl children
///   ForStmt                   has_init/has_cond/has_incr; children are the
///                             present header parts in order, then the body
///   IncludeDirective/Define   raw_line
struct AstNode {
    NodeKind kind = NodeKind::Opaque;
    std::vector<AstNodePtr> children;
    std::string orig_code;
    SourceSpan span = SourceSpan::synthetic();

    std::uint64_t int_value = 0;
    std::string suffix;
    std::string str_value;
    std::string name;
    std::string op;
    std::string type_text;
    std::string declarator_prefix;
    std::string declarator_suffix;
    std::string raw_line;
    std::string tag_keyword;
    StorageClass storage = StorageClass::None;
    std::optional<SymbolId> symbol;
    bool is_postfix = false;
    bool is_variadic = false;
    bool takes_void = false;
    bool has_init = false;
    bool has_type_def = false;  // first child is an inline struct/enum def
    int dim_count = 0;

    bool has_for_init = false;
    bool has_for_cond = false;
    bool has_for_incr = false;

    bool is(NodeKind k) const { return kind == k; }

    // Child layout of declaration nodes:
    //   [tag def][array dims][initializer][extra comma declarators]
    std::size_t first_dim_index() const { return has_type_def ? 1 : 0; }
    std::size_t init_index() const {
        return first_dim_index() + static_cast<std::size_t>(dim_count);
    }
    std::size_t first_extra_decl_index() const {
        return init_index() + (has_init ? 1 : 0);
    }
};

AstNodePtr make_node(NodeKind kind);

/// Deep copy; the clone keeps orig_code but gets synthetic spans throughout.
AstNodePtr clone_synthetic(const AstNode& node);

enum class WalkAction { Descend, SkipChildren };

struct VisitResult {
    WalkAction action = WalkAction::Descend;
    AstNodePtr replacement;  // non-null substitutes the node in place

    static VisitResult descend() { return {WalkAction::Descend, nullptr}; }
    static VisitResult skip_children() {
        return {WalkAction::SkipChildren, nullptr};
    }
    static VisitResult replace_with(AstNodePtr node) {
        return {WalkAction::Descend, std::move(node)};
    }
};

using Visitor = std::function<VisitResult(AstNode&)>;

/// Pre-order walk with in-place replacement. Replacement subtrees are not
/// re-visited. Opaque nodes never have their children visited, whatever the
/// callback returns.
void walk(AstNodePtr& root, const Visitor& visit);

/// True if any node in the subtree (root included) is Opaque.
bool contains_opaque(const AstNode& root);

/// Indented one-node-per-line textual dump, e.g.
///   CallExpr (origCode: "printf(\"hi\");")
///     IdentifierRef (origCode: "printf", name: "printf")
std::string dump(const AstNode& root);

/// Checks span containment/ordering and non-empty orig_code for all
/// non-synthetic nodes. Returns a description of the first violation, or
/// an empty string when the tree is well formed.
std::string validate_tree(const AstNode& root);

}  // namespace obf
