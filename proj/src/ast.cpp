#include "obfuscator/ast.hpp"

#include <sstream>

namespace obf {

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::TranslationUnit: return "TranslationUnit";
        case NodeKind::IncludeDirective: return "IncludeDirective";
        case NodeKind::DefineDirective: return "DefineDirective";
        case NodeKind::FunctionDef: return "FunctionDef";
        case NodeKind::FunctionProto: return "FunctionProto";
        case NodeKind::ParamDecl: return "ParamDecl";
        case NodeKind::VarDecl: return "VarDecl";
        case NodeKind::StructDecl: return "StructDecl";
        case NodeKind::FieldDecl: return "FieldDecl";
        case NodeKind::EnumDecl: return "EnumDecl";
        case NodeKind::TypedefDecl: return "TypedefDecl";
        case NodeKind::CompoundStmt: return "CompoundStmt";
        case NodeKind::IfStmt: return "IfStmt";
        case NodeKind::ForStmt: return "ForStmt";
        case NodeKind::WhileStmt: return "WhileStmt";
        case NodeKind::DoWhileStmt: return "DoWhileStmt";
        case NodeKind::SwitchStmt: return "SwitchStmt";
        case NodeKind::CaseLabel: return "CaseLabel";
        case NodeKind::DefaultLabel: return "DefaultLabel";
        case NodeKind::ReturnStmt: return "ReturnStmt";
        case NodeKind::BreakStmt: return "BreakStmt";
        case NodeKind::ContinueStmt: return "ContinueStmt";
        case NodeKind::GotoStmt: return "GotoStmt";
        case NodeKind::LabelStmt: return "LabelStmt";
        case NodeKind::ExprStmt: return "ExprStmt";
        case NodeKind::EmptyStmt: return "EmptyStmt";
        case NodeKind::CallExpr: return "CallExpr";
        case NodeKind::BinaryExpr: return "BinaryExpr";
        case NodeKind::UnaryExpr: return "UnaryExpr";
        case NodeKind::AssignExpr: return "AssignExpr";
        case NodeKind::ConditionalExpr: return "ConditionalExpr";
        case NodeKind::IndexExpr: return "IndexExpr";
        case NodeKind::MemberExpr: return "MemberExpr";
        case NodeKind::CastExpr: return "CastExpr";
        case NodeKind::ParenExpr: return "ParenExpr";
        case NodeKind::IdentifierRef: return "IdentifierRef";
        case NodeKind::IntLiteral: return "IntLiteral";
        case NodeKind::FloatLiteral: return "FloatLiteral";
        case NodeKind::CharLiteral: return "CharLiteral";
        case NodeKind::StringLiteral: return "StringLiteral";
        case NodeKind::InitList: return "InitList";
        case NodeKind::Opaque: return "Opaque";
    }
    return "?";
}

AstNodePtr make_node(NodeKind kind) {
    auto node = std::make_unique<AstNode>();
    node->kind = kind;
    return node;
}

AstNodePtr clone_synthetic(const AstNode& node) {
    auto copy = std::make_unique<AstNode>();
    *copy = AstNode{};
    copy->kind = node.kind;
    copy->orig_code = node.orig_code;
    copy->span = SourceSpan::synthetic();
    copy->int_value = node.int_value;
    copy->suffix = node.suffix;
    copy->str_value = node.str_value;
    copy->name = node.name;
    copy->op = node.op;
    copy->type_text = node.type_text;
    copy->declarator_prefix = node.declarator_prefix;
    copy->declarator_suffix = node.declarator_suffix;
    copy->raw_line = node.raw_line;
    copy->tag_keyword = node.tag_keyword;
    copy->storage = node.storage;
    copy->symbol = node.symbol;
    copy->is_postfix = node.is_postfix;
    copy->is_variadic = node.is_variadic;
    copy->takes_void = node.takes_void;
    copy->has_init = node.has_init;
    copy->dim_count = node.dim_count;
    copy->has_for_init = node.has_for_init;
    copy->has_for_cond = node.has_for_cond;
    copy->has_for_incr = node.has_for_incr;
    copy->children.reserve(node.children.size());
    for (const auto& child : node.children)
        copy->children.push_back(clone_synthetic(*child));
    return copy;
}

void walk(AstNodePtr& root, const Visitor& visit) {
    if (!root) return;
    VisitResult result = visit(*root);
    if (result.replacement) {
        root = std::move(result.replacement);
        return;
    }
    if (result.action == WalkAction::SkipChildren) return;
    if (root->kind == NodeKind::Opaque) return;
    for (auto& child : root->children) walk(child, visit);
}

bool contains_opaque(const AstNode& root) {
    if (root.kind == NodeKind::Opaque) return true;
    for (const auto& child : root.children)
        if (contains_opaque(*child)) return true;
    return false;
}

namespace {

void append_escaped(std::string& out, const std::string& text) {
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
}

void dump_node(const AstNode& node, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += to_string(node.kind);
    out += " (origCode: \"";
    append_escaped(out, node.orig_code);
    out += "\"";
    switch (node.kind) {
        case NodeKind::IntLiteral:
            out += ", value: " + std::to_string(node.int_value);
            if (!node.suffix.empty()) out += ", suffix: " + node.suffix;
            break;
        case NodeKind::CharLiteral:
            out += ", value: " + std::to_string(node.int_value);
            break;
        case NodeKind::StringLiteral:
            out += ", value: \"";
            append_escaped(out, node.str_value);
            out += "\"";
            break;
        case NodeKind::IdentifierRef:
            out += ", name: \"" + node.name + "\"";
            break;
        case NodeKind::BinaryExpr:
        case NodeKind::UnaryExpr:
        case NodeKind::AssignExpr:
            out += ", op: \"" + node.op + "\"";
            break;
        case NodeKind::MemberExpr:
            out += ", op: \"" + node.op + "\", member: \"" + node.name + "\"";
            break;
        case NodeKind::CastExpr:
            out += ", type: \"" + node.type_text + "\"";
            break;
        default:
            if (!node.name.empty()) out += ", name: \"" + node.name + "\"";
            if (!node.type_text.empty())
                out += ", type: \"" + node.type_text + "\"";
            break;
    }
    out += ")\n";
    for (const auto& child : node.children) dump_node(*child, depth + 1, out);
}

void validate_node(const AstNode& node, std::string& error) {
    if (!error.empty()) return;
    if (!node.span.is_synthetic()) {
        if (node.span.begin > node.span.end) {
            error = std::string(to_string(node.kind)) + ": inverted span";
            return;
        }
        if (node.orig_code.empty() && node.kind != NodeKind::TranslationUnit) {
            error = std::string(to_string(node.kind)) + ": empty orig_code";
            return;
        }
        std::size_t prev_end = node.span.begin;
        for (const auto& child : node.children) {
            if (child->span.is_synthetic()) continue;
            if (child->span.begin < node.span.begin ||
                child->span.end > node.span.end) {
                error = std::string(to_string(child->kind)) +
                        ": child span escapes parent " + to_string(node.kind);
                return;
            }
            if (child->span.begin < prev_end) {
                error = std::string(to_string(child->kind)) +
                        ": child spans out of order in " + to_string(node.kind);
                return;
            }
            prev_end = child->span.end;
        }
    }
    for (const auto& child : node.children) validate_node(*child, error);
}

}  // namespace

std::string dump(const AstNode& root) {
    std::string out;
    dump_node(root, 0, out);
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

std::string validate_tree(const AstNode& root) {
    std::string error;
    validate_node(root, error);
    return error;
}

}  // namespace obf
