#include "obfuscator/parser.hpp"

#include "obfuscator/lexer.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_set>

namespace obf {

namespace {

// Internal unwind signal: the construct under the cursor is outside the
// subset. Caught at statement / external-declaration level, where the
// construct is re-consumed into an Opaque node.
struct SubsetFail {};

bool is_type_keyword(std::string_view s) {
    static const std::unordered_set<std::string_view> kTypes = {
        "void", "char", "short", "int", "long", "float", "double",
        "signed", "unsigned", "_Bool", "_Complex",
    };
    return kTypes.count(s) > 0;
}

bool is_qualifier_keyword(std::string_view s) {
    return s == "const" || s == "volatile" || s == "restrict" || s == "inline";
}

bool is_storage_keyword(std::string_view s) {
    return s == "static" || s == "extern" || s == "auto" || s == "register" ||
           s == "typedef";
}

// Typedef names from ubiquitous standard headers. Directives pass through
// unexpanded, so these names would otherwise be unclassifiable and push
// perfectly ordinary declarations into Opaque nodes.
const std::unordered_set<std::string>& seeded_typedefs() {
    static const std::unordered_set<std::string> kSeed = {
        "size_t", "ssize_t", "ptrdiff_t", "wchar_t", "FILE", "va_list",
        "time_t", "clock_t", "off_t", "bool",
        "int8_t", "int16_t", "int32_t", "int64_t",
        "uint8_t", "uint16_t", "uint32_t", "uint64_t",
        "intptr_t", "uintptr_t", "intmax_t", "uintmax_t",
    };
    return kSeed;
}

std::string directive_name(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size() || line[i] != '#') return "";
    ++i;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::string name;
    while (i < line.size() &&
           (std::isalpha(static_cast<unsigned char>(line[i])) != 0)) {
        name.push_back(line[i]);
        ++i;
    }
    return name;
}

bool is_conditional_directive(std::string_view line) {
    std::string name = directive_name(line);
    return name == "if" || name == "ifdef" || name == "ifndef" ||
           name == "elif" || name == "else" || name == "endif";
}

struct BinOp {
    const char* text;
    int prec;
};

// C99 binary operator precedence, higher binds tighter.
const BinOp kBinOps[] = {
    {"||", 1}, {"&&", 2}, {"|", 3}, {"^", 4}, {"&", 5},
    {"==", 6}, {"!=", 6},
    {"<", 7}, {">", 7}, {"<=", 7}, {">=", 7},
    {"<<", 8}, {">>", 8},
    {"+", 9}, {"-", 9},
    {"*", 10}, {"/", 10}, {"%", 10},
};

const BinOp* lookup_binop(const std::string& lexeme) {
    for (const BinOp& op : kBinOps)
        if (lexeme == op.text) return &op;
    return nullptr;
}

bool is_assign_op(const std::string& s) {
    return s == "=" || s == "+=" || s == "-=" || s == "*=" || s == "/=" ||
           s == "%=" || s == "<<=" || s == ">>=" || s == "&=" || s == "^=" ||
           s == "|=";
}

class Parser {
public:
    Parser(const std::vector<Token>& tokens, std::string_view source)
        : tokens_(tokens), source_(source) {
        typedefs_ = seeded_typedefs();
    }

    ParseResult run() {
        reject_conditional_directives();
        auto root = make_node(NodeKind::TranslationUnit);
        while (!at(TokenKind::EndOfFile)) {
            root->children.push_back(parse_external_declaration());
        }
        root->span = SourceSpan{0, source_.size(), 1,
                                tokens_.empty() ? 1 : tokens_.back().span.line_end};
        root->orig_code = std::string(source_);
        return ParseResult{std::move(root), std::move(diagnostics_)};
    }

    AstNodePtr parse_single_expression() {
        auto expr = parse_expr();
        if (!at(TokenKind::EndOfFile))
            throw ParseError("trailing tokens after expression", cur().span.line_begin);
        return expr;
    }

private:
    const std::vector<Token>& tokens_;
    std::string_view source_;
    std::size_t pos_ = 0;
    std::vector<ParseDiagnostic> diagnostics_;
    std::unordered_set<std::string> typedefs_;

    // --- token plumbing -------------------------------------------------

    const Token& cur() const { return tokens_[pos_]; }
    const Token& peek(std::size_t n = 1) const {
        std::size_t i = std::min(pos_ + n, tokens_.size() - 1);
        return tokens_[i];
    }
    bool at(TokenKind kind) const { return cur().kind == kind; }
    bool at_lexeme(const char* s) const { return cur().lexeme == s; }
    bool at_keyword(const char* s) const {
        return cur().kind == TokenKind::Keyword && cur().lexeme == s;
    }

    const Token& take() {
        const Token& t = cur();
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }

    void expect_lexeme(const char* s) {
        if (!at_lexeme(s)) throw SubsetFail{};
        take();
    }

    void warn(std::string message, int line) {
        diagnostics_.push_back(
            {ParseDiagnostic::Severity::Warning, std::move(message), line});
    }

    // Fills span and orig_code from the token range [first, pos_).
    AstNodePtr finish(AstNodePtr node, std::size_t first) {
        if (pos_ > first) {
            const Token& a = tokens_[first];
            const Token& b = tokens_[pos_ - 1];
            node->span = SourceSpan{a.span.begin, b.span.end, a.span.line_begin,
                                    b.span.line_end};
            node->orig_code =
                std::string(source_.substr(a.span.begin, b.span.end - a.span.begin));
        }
        return node;
    }

    void reject_conditional_directives() {
        for (const Token& tok : tokens_) {
            if (tok.kind == TokenKind::PpDirectiveLine &&
                is_conditional_directive(tok.lexeme)) {
                throw ParseError("conditional compilation is not supported",
                                 tok.span.line_begin);
            }
        }
    }

    // --- opaque fallback ------------------------------------------------

    // Consumes a balanced token run starting at `first` and wraps it in an
    // Opaque node. Stops after a top-level ';', or after a '}' that closes
    // a brace opened inside the run (plus a directly following ';'). At
    // statement level a '}' belonging to the enclosing block stops the run
    // without being consumed.
    AstNodePtr consume_opaque(std::size_t first, bool file_scope) {
        pos_ = first;
        int depth = 0;
        int open_line = cur().span.line_begin;
        for (;;) {
            if (at(TokenKind::EndOfFile)) {
                if (depth > 0)
                    throw ParseError("unbalanced delimiters", open_line);
                break;
            }
            const std::string& lex = cur().lexeme;
            if (cur().kind == TokenKind::Punctuator) {
                if (lex == "(" || lex == "[" || lex == "{") {
                    if (depth == 0) open_line = cur().span.line_begin;
                    ++depth;
                    take();
                    continue;
                }
                if (lex == ")" || lex == "]" || lex == "}") {
                    if (depth == 0) {
                        if (file_scope)
                            throw ParseError("unbalanced delimiters",
                                             cur().span.line_begin);
                        break;  // enclosing block's closer
                    }
                    --depth;
                    bool closed_brace = lex == "}";
                    take();
                    if (depth == 0 && closed_brace) {
                        if (at_lexeme(";")) take();
                        break;
                    }
                    continue;
                }
                if (lex == ";" && depth == 0) {
                    take();
                    break;
                }
            }
            take();
        }
        if (pos_ == first)
            throw ParseError("unexpected '" + cur().lexeme + "'",
                             cur().span.line_begin);
        return finish(make_node(NodeKind::Opaque), first);
    }

    // --- declarations ---------------------------------------------------

    bool starts_declaration() const {
        const Token& t = cur();
        if (t.kind == TokenKind::Keyword) {
            return is_type_keyword(t.lexeme) || is_qualifier_keyword(t.lexeme) ||
                   is_storage_keyword(t.lexeme) || t.lexeme == "struct" ||
                   t.lexeme == "union" || t.lexeme == "enum";
        }
        if (t.kind == TokenKind::Identifier && typedefs_.count(t.lexeme) > 0) {
            // A typedef name only opens a declaration when a declarator can
            // follow; `t * x;` is the classic case and is a declaration.
            const Token& n = peek();
            return n.kind == TokenKind::Identifier || n.lexeme == "*" ||
                   (n.kind == TokenKind::Keyword && is_qualifier_keyword(n.lexeme));
        }
        return false;
    }

    struct DeclSpecs {
        StorageClass storage = StorageClass::None;
        bool is_typedef = false;
        std::string type_text;
        AstNodePtr tag_def;  // inline struct/union/enum definition
    };

    void append_word(std::string& text, const std::string& word) {
        if (!text.empty()) text.push_back(' ');
        text += word;
    }

    DeclSpecs parse_decl_specifiers() {
        DeclSpecs specs;
        bool saw_type = false;
        bool saw_typedef_name = false;
        for (;;) {
            const Token& t = cur();
            if (t.kind == TokenKind::Keyword) {
                if (is_storage_keyword(t.lexeme)) {
                    if (t.lexeme == "typedef") specs.is_typedef = true;
                    else if (t.lexeme == "static") specs.storage = StorageClass::Static;
                    else if (t.lexeme == "extern") specs.storage = StorageClass::Extern;
                    else append_word(specs.type_text, t.lexeme);  // auto/register
                    take();
                    continue;
                }
                if (is_qualifier_keyword(t.lexeme)) {
                    append_word(specs.type_text, t.lexeme);
                    take();
                    continue;
                }
                if (is_type_keyword(t.lexeme)) {
                    append_word(specs.type_text, t.lexeme);
                    saw_type = true;
                    take();
                    continue;
                }
                if (t.lexeme == "struct" || t.lexeme == "union" ||
                    t.lexeme == "enum") {
                    if (saw_type || specs.tag_def) throw SubsetFail{};
                    parse_tag_specifier(specs);
                    saw_type = true;
                    continue;
                }
                break;
            }
            if (t.kind == TokenKind::Identifier && !saw_type &&
                !saw_typedef_name && typedefs_.count(t.lexeme) > 0) {
                append_word(specs.type_text, t.lexeme);
                saw_typedef_name = true;
                saw_type = true;
                take();
                continue;
            }
            break;
        }
        if (!saw_type && specs.type_text.empty()) throw SubsetFail{};
        return specs;
    }

    // struct/union/enum specifier: either a reference ("struct S") folded
    // into type_text, or an inline definition parsed into a tag node.
    void parse_tag_specifier(DeclSpecs& specs) {
        std::size_t first = pos_;
        std::string keyword = take().lexeme;
        std::string tag;
        if (at(TokenKind::Identifier)) tag = take().lexeme;
        if (at_lexeme("{")) {
            AstNodePtr def = keyword == "enum" ? parse_enum_body(tag)
                                               : parse_struct_body(keyword, tag);
            specs.tag_def = finish(std::move(def), first);
            return;
        }
        if (tag.empty()) throw SubsetFail{};
        append_word(specs.type_text, keyword);
        append_word(specs.type_text, tag);
    }

    AstNodePtr parse_struct_body(const std::string& keyword,
                                 const std::string& tag) {
        auto node = make_node(NodeKind::StructDecl);
        node->name = tag;
        node->tag_keyword = keyword;
        expect_lexeme("{");
        while (!at_lexeme("}")) {
            if (at(TokenKind::EndOfFile))
                throw ParseError("unbalanced delimiters", cur().span.line_begin);
            node->children.push_back(parse_field_declaration());
        }
        take();  // '}'
        return node;
    }

    AstNodePtr parse_field_declaration() {
        std::size_t first = pos_;
        DeclSpecs specs = parse_decl_specifiers();
        auto field = parse_declarator_group(std::move(specs), NodeKind::FieldDecl,
                                            /*stop_before_semi=*/false);
        return finish(std::move(field), first);
    }

    AstNodePtr parse_enum_body(const std::string& tag) {
        auto node = make_node(NodeKind::EnumDecl);
        node->name = tag;
        expect_lexeme("{");
        while (!at_lexeme("}")) {
            if (!at(TokenKind::Identifier)) throw SubsetFail{};
            std::size_t first = pos_;
            auto constant = make_node(NodeKind::VarDecl);
            constant->name = take().lexeme;
            if (at_lexeme("=")) {
                take();
                constant->has_init = true;
                constant->children.push_back(parse_conditional());
            }
            node->children.push_back(finish(std::move(constant), first));
            if (at_lexeme(",")) {
                take();
                continue;
            }
            if (!at_lexeme("}")) throw SubsetFail{};
        }
        take();  // '}'
        return node;
    }

    struct Declarator {
        std::string prefix;
        std::string name;
        std::vector<AstNodePtr> dims;
        std::string suffix;
        bool is_function = false;
        std::vector<AstNodePtr> params;
        bool variadic = false;
        bool takes_void = false;
    };

    // declarator := pointer* ( name | '(' ... name ... ')' ) ( '(' params ')'
    //             | '[' dim ']'* | <captured suffix> )
    // Parenthesized declarators (function pointers and friends) keep their
    // inner shape textually in prefix/suffix; arrays and direct function
    // declarators are structural.
    Declarator parse_declarator(bool allow_abstract) {
        Declarator d;
        while (at_lexeme("*") ||
               (cur().kind == TokenKind::Keyword && is_qualifier_keyword(cur().lexeme))) {
            append_word(d.prefix, take().lexeme);
        }
        if (at_lexeme("(")) {
            parse_paren_declarator(d);
            return d;
        }
        if (at(TokenKind::Identifier)) {
            d.name = take().lexeme;
        } else if (!allow_abstract) {
            throw SubsetFail{};
        }
        if (at_lexeme("(")) {
            parse_param_list(d);
            d.is_function = true;
            return d;
        }
        while (at_lexeme("[")) parse_array_dim(d);
        return d;
    }

    void parse_array_dim(Declarator& d) {
        std::size_t first = pos_;
        take();  // '['
        if (at_lexeme("]")) {
            take();
            d.dims.push_back(finish(make_node(NodeKind::EmptyStmt), first));
            return;
        }
        auto dim = parse_assign();
        expect_lexeme("]");
        d.dims.push_back(std::move(dim));
    }

    // Captures `(*name)...` style declarators. Everything except the name
    // stays textual; later passes treat the prefix/suffix as immutable.
    void parse_paren_declarator(Declarator& d) {
        append_word(d.prefix, take().lexeme);  // '('
        int depth = 1;
        bool before_name = true;
        while (depth > 0) {
            if (at(TokenKind::EndOfFile))
                throw ParseError("unbalanced delimiters", cur().span.line_begin);
            if (before_name && at(TokenKind::Identifier) && depth == 1) {
                d.name = take().lexeme;
                before_name = false;
                continue;
            }
            const std::string& lex = cur().lexeme;
            if (lex == "(") ++depth;
            if (lex == ")") --depth;
            if (depth == 0) {
                take();
                append_word(d.suffix, ")");
                break;
            }
            append_word(before_name ? d.prefix : d.suffix, take().lexeme);
        }
        if (d.name.empty()) throw SubsetFail{};
        // Trailing parameter list or array part, captured verbatim.
        if (at_lexeme("(") || at_lexeme("[")) {
            int tail_depth = 0;
            do {
                const std::string& lex = cur().lexeme;
                if (lex == "(" || lex == "[") ++tail_depth;
                if (lex == ")" || lex == "]") --tail_depth;
                append_word(d.suffix, take().lexeme);
                if (at(TokenKind::EndOfFile) && tail_depth > 0)
                    throw ParseError("unbalanced delimiters",
                                     cur().span.line_begin);
            } while (tail_depth > 0 || at_lexeme("(") || at_lexeme("["));
        }
    }

    void parse_param_list(Declarator& d) {
        expect_lexeme("(");
        if (at_lexeme(")")) {
            take();
            return;
        }
        if (at_keyword("void") && peek().lexeme == ")") {
            take();
            take();
            d.takes_void = true;
            return;
        }
        for (;;) {
            if (at_lexeme("...")) {
                take();
                d.variadic = true;
                break;
            }
            std::size_t first = pos_;
            DeclSpecs specs = parse_decl_specifiers();
            if (specs.is_typedef || specs.tag_def) throw SubsetFail{};
            Declarator pd = parse_declarator(/*allow_abstract=*/true);
            if (pd.is_function) throw SubsetFail{};
            auto param = make_node(NodeKind::ParamDecl);
            param->name = pd.name;
            param->type_text = specs.type_text;
            param->storage = specs.storage;
            param->declarator_prefix = pd.prefix;
            param->declarator_suffix = pd.suffix;
            param->dim_count = static_cast<int>(pd.dims.size());
            for (auto& dim : pd.dims) param->children.push_back(std::move(dim));
            d.params.push_back(finish(std::move(param), first));
            if (at_lexeme(",")) {
                take();
                continue;
            }
            break;
        }
        expect_lexeme(")");
    }

    // Parses the declarator list after the specifiers and assembles the
    // declaration node. The first declarator becomes the node; any further
    // comma declarators become trailing children of it.
    AstNodePtr parse_declarator_group(DeclSpecs specs, NodeKind decl_kind,
                                      bool stop_before_semi) {
        // Bare tag declaration: `struct S { ... };`
        if (specs.tag_def && (at_lexeme(";") || at(TokenKind::EndOfFile))) {
            if (!stop_before_semi) expect_lexeme(";");
            return std::move(specs.tag_def);
        }
        // Forward tag declaration: `struct S;` becomes a field-less
        // StructDecl so the file stays free of Opaque nodes.
        if (!specs.tag_def && at_lexeme(";")) {
            auto fwd = parse_forward_tag(specs);
            if (fwd) {
                if (!stop_before_semi) expect_lexeme(";");
                return fwd;
            }
        }

        Declarator d = parse_declarator(/*allow_abstract=*/false);

        if (d.is_function && (at_lexeme("{") || at_lexeme(";"))) {
            bool is_def = at_lexeme("{");
            auto fn = make_node(is_def ? NodeKind::FunctionDef
                                       : NodeKind::FunctionProto);
            fn->name = d.name;
            fn->type_text = specs.type_text;
            fn->storage = specs.storage;
            fn->declarator_prefix = d.prefix;
            fn->is_variadic = d.variadic;
            fn->takes_void = d.takes_void;
            if (specs.tag_def) {
                fn->has_type_def = true;
                fn->children.push_back(std::move(specs.tag_def));
            }
            for (auto& p : d.params) fn->children.push_back(std::move(p));
            if (is_def) {
                fn->children.push_back(parse_compound_statement());
            } else {
                take();  // ';'
            }
            return fn;
        }
        if (d.is_function) throw SubsetFail{};  // K&R definitions etc.

        NodeKind kind = specs.is_typedef ? NodeKind::TypedefDecl : decl_kind;
        auto first_decl = build_one_declarator(specs, std::move(d), kind);
        AstNode* head = first_decl.get();
        while (at_lexeme(",")) {
            take();
            std::size_t extra_first = pos_;
            Declarator extra = parse_declarator(/*allow_abstract=*/false);
            if (extra.is_function) throw SubsetFail{};
            DeclSpecs extra_specs;
            extra_specs.storage = specs.storage;
            extra_specs.is_typedef = specs.is_typedef;
            extra_specs.type_text = specs.type_text;
            auto node = build_one_declarator(extra_specs, std::move(extra), kind);
            head->children.push_back(finish(std::move(node), extra_first));
        }
        if (!stop_before_semi) expect_lexeme(";");
        return first_decl;
    }

    AstNodePtr parse_forward_tag(const DeclSpecs& specs) {
        if (specs.is_typedef || specs.storage != StorageClass::None)
            return nullptr;
        std::size_t space = specs.type_text.find(' ');
        if (space == std::string::npos) return nullptr;
        std::string keyword = specs.type_text.substr(0, space);
        std::string tag = specs.type_text.substr(space + 1);
        if (keyword != "struct" && keyword != "union") return nullptr;
        if (tag.empty() || tag.find(' ') != std::string::npos) return nullptr;
        auto node = make_node(NodeKind::StructDecl);
        node->name = tag;
        node->tag_keyword = keyword;
        return node;
    }

    AstNodePtr build_one_declarator(DeclSpecs& specs, Declarator d,
                                    NodeKind kind) {
        auto node = make_node(kind);
        node->name = d.name;
        node->type_text = specs.type_text;
        node->storage = specs.storage;
        node->declarator_prefix = d.prefix;
        node->declarator_suffix = d.suffix;
        if (specs.tag_def) {
            node->has_type_def = true;
            node->children.push_back(std::move(specs.tag_def));
        }
        node->dim_count = static_cast<int>(d.dims.size());
        for (auto& dim : d.dims) node->children.push_back(std::move(dim));

        if (kind == NodeKind::FieldDecl && at_lexeme(":")) {
            // Bit-field width, kept textual; compilers are strict about the
            // width expression so it is left untouched.
            append_word(node->declarator_suffix, take().lexeme);
            while (!at_lexeme(",") && !at_lexeme(";") &&
                   !at(TokenKind::EndOfFile)) {
                append_word(node->declarator_suffix, take().lexeme);
            }
            return node;
        }
        if (at_lexeme("=")) {
            take();
            node->has_init = true;
            node->children.insert(node->children.begin() +
                                      static_cast<std::ptrdiff_t>(node->init_index()),
                                  parse_initializer());
        }
        if (kind == NodeKind::TypedefDecl && !node->name.empty())
            typedefs_.insert(node->name);
        return node;
    }

    AstNodePtr parse_initializer() {
        if (!at_lexeme("{")) return parse_assign();
        std::size_t first = pos_;
        take();  // '{'
        auto list = make_node(NodeKind::InitList);
        while (!at_lexeme("}")) {
            if (at(TokenKind::EndOfFile))
                throw ParseError("unbalanced delimiters", cur().span.line_begin);
            if (at_lexeme(".") || at_lexeme("["))
                throw SubsetFail{};  // designated initializers
            list->children.push_back(parse_initializer());
            if (at_lexeme(",")) {
                take();
                continue;
            }
            if (!at_lexeme("}")) throw SubsetFail{};
        }
        take();  // '}'
        return finish(std::move(list), first);
    }

    // --- external declarations -------------------------------------------

    AstNodePtr parse_external_declaration() {
        std::size_t first = pos_;
        if (at(TokenKind::PpDirectiveLine)) return parse_file_scope_directive();
        if (starts_declaration()) {
            try {
                auto node = parse_declaration_statement(/*stop_before_semi=*/false);
                return finish(std::move(node), first);
            } catch (const SubsetFail&) {
                return consume_opaque(first, /*file_scope=*/true);
            }
        }
        return consume_opaque(first, /*file_scope=*/true);
    }

    AstNodePtr parse_file_scope_directive() {
        std::size_t first = pos_;
        const Token& tok = take();
        std::string name = directive_name(tok.lexeme);
        NodeKind kind = name == "include" ? NodeKind::IncludeDirective
                        : name == "define" ? NodeKind::DefineDirective
                                           : NodeKind::Opaque;
        auto node = make_node(kind);
        if (kind != NodeKind::Opaque) node->raw_line = tok.lexeme;
        return finish(std::move(node), first);
    }

    AstNodePtr parse_declaration_statement(bool stop_before_semi) {
        DeclSpecs specs = parse_decl_specifiers();
        return parse_declarator_group(std::move(specs), NodeKind::VarDecl,
                                      stop_before_semi);
    }

    // --- statements -------------------------------------------------------

    AstNodePtr parse_compound_statement() {
        std::size_t first = pos_;
        int open_line = cur().span.line_begin;
        expect_lexeme("{");
        auto block = make_node(NodeKind::CompoundStmt);
        auto typedef_snapshot = typedefs_;  // block-scope typedefs
        while (!at_lexeme("}")) {
            if (at(TokenKind::EndOfFile))
                throw ParseError("unbalanced delimiters", open_line);
            block->children.push_back(parse_statement());
        }
        take();  // '}'
        typedefs_ = std::move(typedef_snapshot);
        return finish(std::move(block), first);
    }

    AstNodePtr parse_statement() {
        std::size_t first = pos_;
        try {
            return finish(parse_statement_inner(), first);
        } catch (const SubsetFail&) {
            return consume_opaque(first, /*file_scope=*/false);
        }
    }

    AstNodePtr parse_statement_inner() {
        if (at(TokenKind::PpDirectiveLine)) {
            std::size_t first = pos_;
            take();
            return finish(make_node(NodeKind::Opaque), first);
        }
        if (at_lexeme("{")) return parse_compound_statement();
        if (at_lexeme(";")) {
            take();
            return make_node(NodeKind::EmptyStmt);
        }
        if (cur().kind == TokenKind::Keyword) {
            const std::string& kw = cur().lexeme;
            if (kw == "if") return parse_if();
            if (kw == "while") return parse_while();
            if (kw == "do") return parse_do_while();
            if (kw == "for") return parse_for();
            if (kw == "switch") return parse_switch();
            if (kw == "case") return parse_case();
            if (kw == "default") return parse_default();
            if (kw == "return") return parse_return();
            if (kw == "break") return parse_jump(NodeKind::BreakStmt, "break");
            if (kw == "continue")
                return parse_jump(NodeKind::ContinueStmt, "continue");
            if (kw == "goto") return parse_goto();
        }
        if (starts_declaration())
            return parse_declaration_statement(/*stop_before_semi=*/false);
        if (at(TokenKind::Identifier) && peek().lexeme == ":") {
            auto label = make_node(NodeKind::LabelStmt);
            label->name = take().lexeme;
            take();  // ':'
            label->children.push_back(parse_statement());
            return label;
        }
        auto stmt = make_node(NodeKind::ExprStmt);
        stmt->children.push_back(parse_expr());
        expect_lexeme(";");
        return stmt;
    }

    AstNodePtr parse_if() {
        take();  // 'if'
        auto node = make_node(NodeKind::IfStmt);
        expect_lexeme("(");
        node->children.push_back(parse_expr());
        expect_lexeme(")");
        node->children.push_back(parse_statement());
        if (at_keyword("else")) {
            take();
            node->children.push_back(parse_statement());
        }
        return node;
    }

    AstNodePtr parse_while() {
        take();  // 'while'
        auto node = make_node(NodeKind::WhileStmt);
        expect_lexeme("(");
        node->children.push_back(parse_expr());
        expect_lexeme(")");
        node->children.push_back(parse_statement());
        return node;
    }

    AstNodePtr parse_do_while() {
        take();  // 'do'
        auto node = make_node(NodeKind::DoWhileStmt);
        node->children.push_back(parse_statement());
        if (!at_keyword("while")) throw SubsetFail{};
        take();
        expect_lexeme("(");
        node->children.push_back(parse_expr());
        expect_lexeme(")");
        expect_lexeme(";");
        return node;
    }

    AstNodePtr parse_for() {
        take();  // 'for'
        auto node = make_node(NodeKind::ForStmt);
        expect_lexeme("(");
        if (!at_lexeme(";")) {
            node->has_for_init = true;
            std::size_t first = pos_;
            if (starts_declaration()) {
                node->children.push_back(finish(
                    parse_declaration_statement(/*stop_before_semi=*/true),
                    first));
            } else {
                node->children.push_back(parse_expr());
            }
        }
        expect_lexeme(";");
        if (!at_lexeme(";")) {
            node->has_for_cond = true;
            node->children.push_back(parse_expr());
        }
        expect_lexeme(";");
        if (!at_lexeme(")")) {
            node->has_for_incr = true;
            node->children.push_back(parse_expr());
        }
        expect_lexeme(")");
        node->children.push_back(parse_statement());
        return node;
    }

    AstNodePtr parse_switch() {
        take();  // 'switch'
        auto node = make_node(NodeKind::SwitchStmt);
        expect_lexeme("(");
        node->children.push_back(parse_expr());
        expect_lexeme(")");
        node->children.push_back(parse_statement());
        return node;
    }

    AstNodePtr parse_case() {
        take();  // 'case'
        auto node = make_node(NodeKind::CaseLabel);
        node->children.push_back(parse_conditional());
        expect_lexeme(":");
        node->children.push_back(parse_statement());
        return node;
    }

    AstNodePtr parse_default() {
        take();  // 'default'
        auto node = make_node(NodeKind::DefaultLabel);
        expect_lexeme(":");
        node->children.push_back(parse_statement());
        return node;
    }

    AstNodePtr parse_return() {
        take();  // 'return'
        auto node = make_node(NodeKind::ReturnStmt);
        if (!at_lexeme(";")) node->children.push_back(parse_expr());
        expect_lexeme(";");
        return node;
    }

    AstNodePtr parse_jump(NodeKind kind, const char*) {
        take();
        auto node = make_node(kind);
        expect_lexeme(";");
        return node;
    }

    AstNodePtr parse_goto() {
        take();  // 'goto'
        if (!at(TokenKind::Identifier)) throw SubsetFail{};
        auto node = make_node(NodeKind::GotoStmt);
        node->name = take().lexeme;
        expect_lexeme(";");
        return node;
    }

    // --- expressions ------------------------------------------------------

    AstNodePtr finish_expr(AstNodePtr node, std::size_t first) {
        return finish(std::move(node), first);
    }

    AstNodePtr parse_expr() {
        std::size_t first = pos_;
        auto lhs = parse_assign();
        while (at_lexeme(",")) {
            take();
            auto node = make_node(NodeKind::BinaryExpr);
            node->op = ",";
            node->children.push_back(std::move(lhs));
            node->children.push_back(parse_assign());
            lhs = finish_expr(std::move(node), first);
        }
        return lhs;
    }

    AstNodePtr parse_assign() {
        std::size_t first = pos_;
        auto lhs = parse_conditional();
        if (cur().kind == TokenKind::Punctuator && is_assign_op(cur().lexeme)) {
            auto node = make_node(NodeKind::AssignExpr);
            node->op = take().lexeme;
            node->children.push_back(std::move(lhs));
            node->children.push_back(parse_assign());
            return finish_expr(std::move(node), first);
        }
        return lhs;
    }

    AstNodePtr parse_conditional() {
        std::size_t first = pos_;
        auto cond = parse_binary(1);
        if (!at_lexeme("?")) return cond;
        take();
        auto node = make_node(NodeKind::ConditionalExpr);
        node->children.push_back(std::move(cond));
        node->children.push_back(parse_expr());
        expect_lexeme(":");
        node->children.push_back(parse_conditional());
        return finish_expr(std::move(node), first);
    }

    AstNodePtr parse_binary(int min_prec) {
        std::size_t first = pos_;
        auto lhs = parse_cast_or_unary();
        for (;;) {
            if (cur().kind != TokenKind::Punctuator) return lhs;
            const BinOp* op = lookup_binop(cur().lexeme);
            if (!op || op->prec < min_prec) return lhs;
            take();
            auto rhs = parse_binary(op->prec + 1);
            auto node = make_node(NodeKind::BinaryExpr);
            node->op = op->text;
            node->children.push_back(std::move(lhs));
            node->children.push_back(std::move(rhs));
            lhs = finish_expr(std::move(node), first);
        }
    }

    bool starts_type_name() const {
        const Token& t = cur();
        if (t.kind == TokenKind::Keyword) {
            return is_type_keyword(t.lexeme) || is_qualifier_keyword(t.lexeme) ||
                   t.lexeme == "struct" || t.lexeme == "union" ||
                   t.lexeme == "enum";
        }
        return t.kind == TokenKind::Identifier && typedefs_.count(t.lexeme) > 0;
    }

    // Captures the text between the parentheses of a cast or sizeof(type),
    // e.g. "(unsigned long*)" -> "unsigned long *".
    std::string capture_type_parens() {
        expect_lexeme("(");
        std::string text;
        int depth = 1;
        for (;;) {
            if (at(TokenKind::EndOfFile))
                throw ParseError("unbalanced delimiters", cur().span.line_begin);
            const std::string& lex = cur().lexeme;
            if (lex == "(") ++depth;
            if (lex == ")") {
                --depth;
                if (depth == 0) {
                    take();
                    return text;
                }
            }
            append_word(text, take().lexeme);
        }
    }

    AstNodePtr parse_cast_or_unary() {
        if (at_lexeme("(") && peek_starts_type_name()) {
            std::size_t first = pos_;
            std::string type_text = capture_type_parens();
            if (at_lexeme("{")) throw SubsetFail{};  // compound literal
            auto node = make_node(NodeKind::CastExpr);
            node->type_text = type_text;
            node->children.push_back(parse_cast_or_unary());
            return finish_expr(std::move(node), first);
        }
        return parse_unary();
    }

    bool peek_starts_type_name() const {
        const Token& n = peek();
        if (n.kind == TokenKind::Keyword) {
            return is_type_keyword(n.lexeme) || is_qualifier_keyword(n.lexeme) ||
                   n.lexeme == "struct" || n.lexeme == "union" ||
                   n.lexeme == "enum";
        }
        return n.kind == TokenKind::Identifier && typedefs_.count(n.lexeme) > 0;
    }

    AstNodePtr parse_unary() {
        std::size_t first = pos_;
        if (cur().kind == TokenKind::Punctuator) {
            const std::string& lex = cur().lexeme;
            if (lex == "!" || lex == "~" || lex == "+" || lex == "-" ||
                lex == "*" || lex == "&" || lex == "++" || lex == "--") {
                auto node = make_node(NodeKind::UnaryExpr);
                node->op = take().lexeme;
                node->children.push_back(parse_cast_or_unary());
                return finish_expr(std::move(node), first);
            }
        }
        if (at_keyword("sizeof")) {
            take();
            auto node = make_node(NodeKind::UnaryExpr);
            node->op = "sizeof";
            if (at_lexeme("(") && peek_starts_type_name()) {
                auto type_node = make_node(NodeKind::CastExpr);
                std::size_t type_first = pos_;
                type_node->type_text = capture_type_parens();
                node->children.push_back(
                    finish_expr(std::move(type_node), type_first));
            } else {
                node->children.push_back(parse_cast_or_unary());
            }
            return finish_expr(std::move(node), first);
        }
        return parse_postfix();
    }

    AstNodePtr parse_postfix() {
        std::size_t first = pos_;
        auto expr = parse_primary();
        for (;;) {
            if (cur().kind != TokenKind::Punctuator) return expr;
            const std::string& lex = cur().lexeme;
            if (lex == "(") {
                take();
                auto call = make_node(NodeKind::CallExpr);
                call->children.push_back(std::move(expr));
                if (!at_lexeme(")")) {
                    for (;;) {
                        call->children.push_back(parse_assign());
                        if (at_lexeme(",")) {
                            take();
                            continue;
                        }
                        break;
                    }
                }
                expect_lexeme(")");
                expr = finish_expr(std::move(call), first);
            } else if (lex == "[") {
                take();
                auto index = make_node(NodeKind::IndexExpr);
                index->children.push_back(std::move(expr));
                index->children.push_back(parse_expr());
                expect_lexeme("]");
                expr = finish_expr(std::move(index), first);
            } else if (lex == "." || lex == "->") {
                auto member = make_node(NodeKind::MemberExpr);
                member->op = take().lexeme;
                if (!at(TokenKind::Identifier)) throw SubsetFail{};
                member->name = take().lexeme;
                member->children.push_back(std::move(expr));
                expr = finish_expr(std::move(member), first);
            } else if (lex == "++" || lex == "--") {
                auto unary = make_node(NodeKind::UnaryExpr);
                unary->op = take().lexeme;
                unary->is_postfix = true;
                unary->children.push_back(std::move(expr));
                expr = finish_expr(std::move(unary), first);
            } else {
                return expr;
            }
        }
    }

    AstNodePtr parse_primary() {
        std::size_t first = pos_;
        switch (cur().kind) {
            case TokenKind::Identifier: {
                auto node = make_node(NodeKind::IdentifierRef);
                node->name = take().lexeme;
                return finish_expr(std::move(node), first);
            }
            case TokenKind::IntLiteral:
                return parse_int_literal();
            case TokenKind::FloatLiteral: {
                take();
                return finish_expr(make_node(NodeKind::FloatLiteral), first);
            }
            case TokenKind::CharLiteral:
                return parse_char_literal();
            case TokenKind::StringLiteral:
                return parse_string_literal();
            case TokenKind::Punctuator:
                if (at_lexeme("(")) {
                    take();
                    auto node = make_node(NodeKind::ParenExpr);
                    node->children.push_back(parse_expr());
                    expect_lexeme(")");
                    return finish_expr(std::move(node), first);
                }
                throw SubsetFail{};
            default:
                throw SubsetFail{};
        }
    }

    AstNodePtr parse_int_literal() {
        std::size_t first = pos_;
        const std::string& lexeme = cur().lexeme;
        std::size_t suffix_pos = lexeme.size();
        while (suffix_pos > 0) {
            char c = lexeme[suffix_pos - 1];
            if (c == 'u' || c == 'U' || c == 'l' || c == 'L') --suffix_pos;
            else break;
        }
        std::string body = lexeme.substr(0, suffix_pos);
        std::string suffix = lexeme.substr(suffix_pos);
        int base = 10;
        if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X'))
            base = 16;
        else if (body.size() > 1 && body[0] == '0')
            base = 8;
        char* end = nullptr;
        errno = 0;
        std::uint64_t value = std::strtoull(body.c_str(), &end, base);
        if (end == nullptr || *end != '\0' || errno == ERANGE || body.empty())
            throw SubsetFail{};
        take();
        auto node = make_node(NodeKind::IntLiteral);
        node->int_value = value;
        node->suffix = suffix;
        return finish_expr(std::move(node), first);
    }

    AstNodePtr parse_char_literal() {
        std::size_t first = pos_;
        const std::string& lexeme = cur().lexeme;
        auto node = make_node(NodeKind::CharLiteral);
        // Best-effort value; multi-character and exotic literals are still
        // rendered verbatim from orig_code so the value is only advisory.
        std::string body = lexeme.substr(1, lexeme.size() - 2);
        try {
            std::string decoded = unescape_string_literal("\"" + body + "\"");
            if (decoded.size() == 1)
                node->int_value = static_cast<unsigned char>(decoded[0]);
        } catch (const LexError&) {
            // '\q' and friends: keep the raw text, value stays 0.
        }
        take();
        return finish_expr(std::move(node), first);
    }

    AstNodePtr parse_string_literal() {
        std::size_t first = pos_;
        std::string value;
        try {
            value = unescape_string_literal(take().lexeme);
            while (at(TokenKind::StringLiteral))
                value += unescape_string_literal(take().lexeme);
        } catch (const LexError& e) {
            warn(e.what(), tokens_[first].span.line_begin);
            throw SubsetFail{};
        }
        auto node = make_node(NodeKind::StringLiteral);
        node->str_value = std::move(value);
        return finish_expr(std::move(node), first);
    }
};

}  // namespace

ParseResult parse(const std::vector<Token>& tokens, std::string_view source) {
    return Parser(tokens, source).run();
}

ParseResult parse_source(std::string_view source) {
    return parse(tokenize(source), source);
}

AstNodePtr parse_expression(std::string_view fragment) {
    auto tokens = tokenize(fragment);
    Parser parser(tokens, fragment);
    try {
        return parser.parse_single_expression();
    } catch (const SubsetFail&) {
        throw ParseError("expression outside the supported subset", 1);
    }
}

}  // namespace obf
