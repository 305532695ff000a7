#include "obfuscator/renderer.hpp"

#include <array>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string_view>
#include <unordered_set>

namespace obf {

std::string render_int(std::uint64_t value, const std::string& suffix) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "0x%llx",
                  static_cast<unsigned long long>(value));
    return buf + suffix;
}

std::string escape_string(const std::string& value, Rng& rng) {
    std::string out = "\"";
    for (unsigned char c : value) {
        if (c == '\0')
            throw RenderError("NUL byte inside string literal value");
        bool printable = c >= 0x20 && c <= 0x7E && c != '"' && c != '\\';
        std::uint64_t choice = rng.below(3);
        if (choice == 2 && !printable) choice = rng.below(2);
        if (choice == 2) {
            out.push_back(static_cast<char>(c));
        } else if (choice == 1) {
            char buf[5];
            std::snprintf(buf, sizeof(buf), "\\%03o", c);
            out += buf;
        } else {
            char buf[5];
            std::snprintf(buf, sizeof(buf), "\\x%02X", c);
            out += buf;
            // A hex escape eats every following hex digit, so the literal
            // ends here and a fresh one starts.
            out += "\"\"";
        }
    }
    out += "\"";
    // A trailing hex escape leaves an empty literal behind; drop it. The
    // quote character is never emitted verbatim, so three trailing quotes
    // can only come from that.
    if (out.size() >= 3 && out.compare(out.size() - 3, 3, "\"\"\"") == 0)
        out.resize(out.size() - 2);
    return out;
}

namespace {

bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '$';
}

// Two-character sequences that must not arise from gluing adjacent tokens:
// every multi-char punctuator prefix plus comment openers.
bool is_dangerous_pair(char a, char b) {
    static const std::unordered_set<std::string> kPairs = {
        "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
        "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|=", "##", "/*", "//",
        "..",
    };
    char pair[3] = {a, b, '\0'};
    return kPairs.count(pair) > 0;
}

class Renderer {
public:
    explicit Renderer(Rng& rng) : rng_(rng) {}

    std::string run(const AstNode& root) {
        render_node(root);
        return std::move(out_);
    }

private:
    Rng& rng_;
    std::string out_;
    bool last_numeric_ = false;

    // --- low-level emission ----------------------------------------------

    void separate_from(char next) {
        if (out_.empty()) return;
        char last = out_.back();
        bool both_ident = is_ident_char(last) && is_ident_char(next);
        bool merges = is_dangerous_pair(last, next);
        // 0x17e followed by '+' would glue into one pp-number.
        bool exponent = last_numeric_ &&
                        (last == 'e' || last == 'E' || last == 'p' ||
                         last == 'P') &&
                        (next == '+' || next == '-');
        if (both_ident || merges || exponent) out_.push_back(' ');
    }

    void emit(std::string_view token, bool numeric = false) {
        if (token.empty()) return;
        separate_from(token.front());
        out_.append(token);
        last_numeric_ = numeric;
    }

    // Emits a run of space-separated declarator/type words token by token.
    void emit_words(const std::string& text) {
        std::size_t i = 0;
        while (i < text.size()) {
            if (text[i] == ' ') {
                ++i;
                continue;
            }
            std::size_t start = i;
            while (i < text.size() && text[i] != ' ') ++i;
            emit(std::string_view(text).substr(start, i - start));
        }
    }

    void emit_verbatim(const std::string& text) {
        out_.append(text);
        if (!text.empty())
            last_numeric_ = false;
    }

    void break_line() {
        if (!out_.empty() && out_.back() != '\n') out_.push_back('\n');
    }

    bool starts_with_hash(const std::string& text) const {
        for (char c : text) {
            if (c == ' ' || c == '\t') continue;
            return c == '#';
        }
        return false;
    }

    // --- dispatch ----------------------------------------------------------

    void render_node(const AstNode& node) {
        switch (node.kind) {
            case NodeKind::TranslationUnit:
                for (const auto& child : node.children) render_top_level(*child);
                return;
            default:
                render_top_level(node);
                return;
        }
    }

    void render_top_level(const AstNode& node) {
        switch (node.kind) {
            case NodeKind::IncludeDirective:
            case NodeKind::DefineDirective:
                break_line();
                emit_verbatim(node.raw_line);
                out_.push_back('\n');
                return;
            case NodeKind::FunctionDef:
                render_function(node);
                return;
            case NodeKind::FunctionProto:
                render_function(node);
                emit(";");
                return;
            case NodeKind::Opaque:
                render_opaque(node);
                return;
            default:
                render_statement(node);
                return;
        }
    }

    void render_opaque(const AstNode& node) {
        if (node.orig_code.empty())
            throw RenderError("opaque node without original text");
        // Directive lines inside opaque text need their own lines.
        bool directive = starts_with_hash(node.orig_code);
        if (directive) break_line();
        separate_from(node.orig_code.front());
        emit_verbatim(node.orig_code);
        if (directive) out_.push_back('\n');
    }

    // --- statements ---------------------------------------------------------

    void render_statement(const AstNode& node) {
        switch (node.kind) {
            case NodeKind::CompoundStmt:
                emit("{");
                for (const auto& child : node.children)
                    render_statement(*child);
                emit("}");
                return;
            case NodeKind::ExprStmt:
                render_expr(*node.children.front());
                emit(";");
                return;
            case NodeKind::EmptyStmt:
                emit(";");
                return;
            case NodeKind::VarDecl:
            case NodeKind::TypedefDecl:
                render_declaration(node);
                emit(";");
                return;
            case NodeKind::StructDecl:
            case NodeKind::EnumDecl:
                render_tag(node);
                emit(";");
                return;
            case NodeKind::FunctionProto:
                render_function(node);
                emit(";");
                return;
            case NodeKind::IfStmt:
                render_if(node);
                return;
            case NodeKind::WhileStmt:
                emit("while");
                emit("(");
                render_expr(*node.children[0]);
                emit(")");
                render_statement(*node.children[1]);
                return;
            case NodeKind::DoWhileStmt:
                emit("do");
                render_statement(*node.children[0]);
                emit("while");
                emit("(");
                render_expr(*node.children[1]);
                emit(")");
                emit(";");
                return;
            case NodeKind::ForStmt:
                render_for(node);
                return;
            case NodeKind::SwitchStmt:
                emit("switch");
                emit("(");
                render_expr(*node.children[0]);
                emit(")");
                render_statement(*node.children[1]);
                return;
            case NodeKind::CaseLabel:
                emit("case");
                render_expr(*node.children[0]);
                emit(":");
                render_statement(*node.children[1]);
                return;
            case NodeKind::DefaultLabel:
                emit("default");
                emit(":");
                render_statement(*node.children[0]);
                return;
            case NodeKind::ReturnStmt:
                emit("return");
                if (!node.children.empty()) render_expr(*node.children.front());
                emit(";");
                return;
            case NodeKind::BreakStmt:
                emit("break");
                emit(";");
                return;
            case NodeKind::ContinueStmt:
                emit("continue");
                emit(";");
                return;
            case NodeKind::GotoStmt:
                emit("goto");
                emit(node.name);
                emit(";");
                return;
            case NodeKind::LabelStmt:
                emit(node.name);
                emit(":");
                render_statement(*node.children.front());
                return;
            case NodeKind::Opaque:
                render_opaque(node);
                return;
            case NodeKind::IncludeDirective:
            case NodeKind::DefineDirective:
                break_line();
                emit_verbatim(node.raw_line);
                out_.push_back('\n');
                return;
            default:
                // A stray expression at statement position is a bug.
                throw RenderError(std::string("cannot render ") +
                                  to_string(node.kind) + " as a statement");
        }
    }

    void render_if(const AstNode& node) {
        emit("if");
        emit("(");
        render_expr(*node.children[0]);
        emit(")");
        bool has_else = node.children.size() == 3;
        const AstNode& then_branch = *node.children[1];
        if (has_else && then_branch.kind != NodeKind::CompoundStmt) {
            // Brace a non-compound then-branch so the else keeps binding to
            // this if and not to one nested inside.
            emit("{");
            render_statement(then_branch);
            emit("}");
        } else {
            render_statement(then_branch);
        }
        if (has_else) {
            emit("else");
            render_statement(*node.children[2]);
        }
    }

    void render_for(const AstNode& node) {
        emit("for");
        emit("(");
        std::size_t i = 0;
        if (node.has_for_init) {
            const AstNode& init = *node.children[i++];
            if (init.kind == NodeKind::VarDecl) render_declaration(init);
            else render_expr(init);
        }
        emit(";");
        if (node.has_for_cond) render_expr(*node.children[i++]);
        emit(";");
        if (node.has_for_incr) render_expr(*node.children[i++]);
        emit(")");
        render_statement(*node.children[i]);
    }

    // --- declarations ---------------------------------------------------------

    void render_storage(const AstNode& node) {
        if (node.storage == StorageClass::Static) emit("static");
        if (node.storage == StorageClass::Extern) emit("extern");
    }

    void render_declaration(const AstNode& node) {
        render_storage(node);
        if (node.kind == NodeKind::TypedefDecl) emit("typedef");
        if (node.has_type_def) render_tag(*node.children.front());
        else emit_words(node.type_text);
        render_declarator(node);
        for (std::size_t i = node.first_extra_decl_index();
             i < node.children.size(); ++i) {
            emit(",");
            render_declarator(*node.children[i]);
        }
    }

    // The part after the specifiers: pointer prefix, name, array dims,
    // captured suffix, initializer.
    void render_declarator(const AstNode& node) {
        emit_words(node.declarator_prefix);
        if (!node.name.empty()) emit(node.name);
        std::size_t dims_at = node.first_dim_index();
        for (int d = 0; d < node.dim_count; ++d) {
            const AstNode& dim = *node.children[dims_at + static_cast<std::size_t>(d)];
            emit("[");
            if (dim.kind != NodeKind::EmptyStmt) render_expr(dim);
            emit("]");
        }
        emit_words(node.declarator_suffix);
        if (node.has_init) {
            emit("=");
            render_expr(*node.children[node.init_index()]);
        }
    }

    void render_tag(const AstNode& node) {
        if (node.kind == NodeKind::EnumDecl) {
            emit("enum");
            if (!node.name.empty()) emit(node.name);
            emit("{");
            bool first = true;
            for (const auto& child : node.children) {
                if (child->kind != NodeKind::VarDecl) continue;
                if (!first) emit(",");
                first = false;
                emit(child->name);
                if (child->has_init) {
                    emit("=");
                    render_expr(*child->children[child->init_index()]);
                }
            }
            emit("}");
            return;
        }
        emit(node.tag_keyword.empty() ? "struct" : node.tag_keyword.c_str());
        if (!node.name.empty()) emit(node.name);
        if (node.children.empty()) return;  // forward declaration
        emit("{");
        for (const auto& child : node.children) {
            render_declaration(*child);
            emit(";");
        }
        emit("}");
    }

    void render_function(const AstNode& node) {
        render_storage(node);
        if (node.has_type_def) render_tag(*node.children.front());
        else emit_words(node.type_text);
        emit_words(node.declarator_prefix);
        emit(node.name);
        emit("(");
        bool is_def = node.kind == NodeKind::FunctionDef;
        std::size_t first = node.has_type_def ? 1 : 0;
        std::size_t end = node.children.size() - (is_def ? 1 : 0);
        if (node.takes_void) {
            emit("void");
        } else {
            bool first_param = true;
            for (std::size_t i = first; i < end; ++i) {
                const AstNode& param = *node.children[i];
                if (param.kind != NodeKind::ParamDecl) continue;
                if (!first_param) emit(",");
                first_param = false;
                emit_words(param.type_text);
                render_declarator(param);
            }
            if (node.is_variadic) {
                emit(",");
                emit("...");
            }
        }
        emit(")");
        if (is_def) render_statement(*node.children.back());
    }

    // --- expressions --------------------------------------------------------

    void render_expr(const AstNode& node) {
        switch (node.kind) {
            case NodeKind::IntLiteral:
                render_int_literal(node);
                return;
            case NodeKind::FloatLiteral:
                emit(node.orig_code, /*numeric=*/true);
                return;
            case NodeKind::CharLiteral:
                emit(node.orig_code);
                return;
            case NodeKind::StringLiteral:
                render_string_literal(node);
                return;
            case NodeKind::IdentifierRef:
                emit(node.name);
                return;
            case NodeKind::ParenExpr:
                emit("(");
                render_expr(*node.children.front());
                emit(")");
                return;
            case NodeKind::BinaryExpr:
                render_expr(*node.children[0]);
                emit(node.op);
                render_expr(*node.children[1]);
                return;
            case NodeKind::AssignExpr:
                render_expr(*node.children[0]);
                emit(node.op);
                render_expr(*node.children[1]);
                return;
            case NodeKind::UnaryExpr:
                if (node.is_postfix) {
                    render_expr(*node.children.front());
                    emit(node.op);
                } else {
                    emit(node.op);
                    render_expr(*node.children.front());
                }
                return;
            case NodeKind::ConditionalExpr:
                render_expr(*node.children[0]);
                emit("?");
                render_expr(*node.children[1]);
                emit(":");
                render_expr(*node.children[2]);
                return;
            case NodeKind::CallExpr: {
                render_expr(*node.children.front());
                emit("(");
                for (std::size_t i = 1; i < node.children.size(); ++i) {
                    if (i > 1) emit(",");
                    render_expr(*node.children[i]);
                }
                emit(")");
                return;
            }
            case NodeKind::IndexExpr:
                render_expr(*node.children[0]);
                emit("[");
                render_expr(*node.children[1]);
                emit("]");
                return;
            case NodeKind::MemberExpr:
                render_expr(*node.children.front());
                emit(node.op);
                emit(node.name);
                return;
            case NodeKind::CastExpr:
                emit("(");
                emit_words(node.type_text);
                emit(")");
                if (!node.children.empty()) render_expr(*node.children.front());
                return;
            case NodeKind::InitList:
                emit("{");
                for (std::size_t i = 0; i < node.children.size(); ++i) {
                    if (i > 0) emit(",");
                    render_expr(*node.children[i]);
                }
                emit("}");
                return;
            case NodeKind::Opaque:
                render_opaque(node);
                return;
            default:
                if (!node.orig_code.empty()) {
                    emit_verbatim(node.orig_code);
                    return;
                }
                throw RenderError(std::string("cannot render ") +
                                  to_string(node.kind) + " as an expression");
        }
    }

    void render_int_literal(const AstNode& node) {
        // An unsuffixed decimal literal in [2^31, 2^32) has type long, but
        // its hex spelling would be unsigned int; keep the original text in
        // that window rather than change the literal's type.
        constexpr std::uint64_t kInt32Max = std::numeric_limits<std::int32_t>::max();
        if (node.suffix.empty() && node.int_value > kInt32Max &&
            node.int_value <= 0xFFFFFFFFull && !node.orig_code.empty()) {
            emit(node.orig_code, /*numeric=*/true);
            return;
        }
        emit(render_int(node.int_value, node.suffix), /*numeric=*/true);
    }

    void render_string_literal(const AstNode& node) {
        if (node.str_value.find('\0') != std::string::npos) {
            // Not representable through escape_string; fall back to the
            // original spelling.
            if (!node.orig_code.empty()) {
                emit_verbatim(node.orig_code);
                return;
            }
            throw RenderError("NUL byte inside synthetic string literal");
        }
        emit(escape_string(node.str_value, rng_));
    }
};

}  // namespace

std::string render(const AstNode& root, Rng& rng) {
    return Renderer(rng).run(root);
}

}  // namespace obf
