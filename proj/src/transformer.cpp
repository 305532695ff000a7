#include "obfuscator/transformer.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace obf {

namespace {

AstNodePtr make_int_literal(std::int64_t value) {
    auto node = make_node(NodeKind::IntLiteral);
    node->int_value = static_cast<std::uint64_t>(value);
    node->orig_code = std::to_string(value);
    return node;
}

AstNodePtr make_paren(AstNodePtr inner) {
    auto node = make_node(NodeKind::ParenExpr);
    node->children.push_back(std::move(inner));
    return node;
}

AstNodePtr make_binary(const char* op, AstNodePtr lhs, AstNodePtr rhs) {
    auto node = make_node(NodeKind::BinaryExpr);
    node->op = op;
    node->children.push_back(std::move(lhs));
    node->children.push_back(std::move(rhs));
    return node;
}

AstNodePtr make_unary(const char* op, AstNodePtr operand) {
    auto node = make_node(NodeKind::UnaryExpr);
    node->op = op;
    node->children.push_back(std::move(operand));
    return node;
}

}  // namespace

AstNodePtr split_int(std::uint64_t value, Rng& rng) {
    constexpr std::uint64_t kMax = std::numeric_limits<std::int32_t>::max();
    if (value > kMax) return nullptr;
    auto target = static_cast<std::int64_t>(value);
    for (;;) {
        std::int64_t t1 = static_cast<std::int64_t>(rng.below(1024));
        std::int64_t t2 = static_cast<std::int64_t>(rng.below(1024));
        std::int64_t t3 = static_cast<std::int64_t>(rng.below(1024));
        bool add2 = rng.coin();
        bool add3 = rng.coin();
        std::int64_t partial = t1 + (add2 ? t2 : -t2) + (add3 ? t3 : -t3);
        std::int64_t t4 = target - partial;
        // Every term must itself fit a signed 32-bit literal; values near
        // INT_MAX occasionally need a redraw.
        if (t4 > static_cast<std::int64_t>(kMax) ||
            t4 < -static_cast<std::int64_t>(kMax))
            continue;
        auto expr = make_binary(add2 ? "+" : "-", make_int_literal(t1),
                                make_int_literal(t2));
        expr = make_binary(add3 ? "+" : "-", std::move(expr),
                           make_int_literal(t3));
        expr = make_binary(t4 >= 0 ? "+" : "-", std::move(expr),
                           make_int_literal(t4 >= 0 ? t4 : -t4));
        return make_paren(std::move(expr));
    }
}

namespace {

bool is_side_effect_free(const AstNode& node) {
    switch (node.kind) {
        case NodeKind::CallExpr:
        case NodeKind::AssignExpr:
        case NodeKind::Opaque:
            return false;
        case NodeKind::UnaryExpr:
            if (node.op == "++" || node.op == "--") return false;
            break;
        default:
            break;
    }
    for (const auto& child : node.children)
        if (!is_side_effect_free(*child)) return false;
    return true;
}

}  // namespace

AstNodePtr add_bool_noise(const AstNode& cond, Rng&) {
    if (!is_side_effect_free(cond)) return nullptr;
    auto copy = clone_synthetic(cond);
    auto original = clone_synthetic(cond);
    auto doubled = make_unary("!", make_unary("!", make_paren(std::move(copy))));
    auto noise = make_binary("&&", make_paren(std::move(original)),
                             make_paren(std::move(doubled)));
    return make_paren(std::move(noise));
}

namespace {

bool is_integer_type_text(const std::string& text) {
    if (text.rfind("enum ", 0) == 0) return true;
    std::istringstream stream(text);
    std::string word;
    bool saw_int_word = false;
    while (stream >> word) {
        if (word == "const" || word == "volatile" || word == "register" ||
            word == "auto")
            continue;
        if (word == "char" || word == "short" || word == "int" ||
            word == "long" || word == "signed" || word == "unsigned" ||
            word == "_Bool") {
            saw_int_word = true;
            continue;
        }
        return false;
    }
    return saw_int_word;
}

bool is_integer_expr(const AstNode& node, const SymbolTable& table) {
    switch (node.kind) {
        case NodeKind::IntLiteral:
        case NodeKind::CharLiteral:
            return true;
        case NodeKind::ParenExpr:
            return is_integer_expr(*node.children.front(), table);
        case NodeKind::IdentifierRef: {
            if (!node.symbol) return false;
            const SymbolInfo& sym = table.info(*node.symbol);
            if (sym.kind == SymbolKind::EnumConstant) return true;
            if (sym.kind != SymbolKind::Variable &&
                sym.kind != SymbolKind::Parameter)
                return false;
            const AstNode* decl = sym.decl_node;
            if (!decl) return false;
            if (!decl->declarator_prefix.empty()) return false;  // pointer
            if (!decl->declarator_suffix.empty()) return false;
            if (decl->dim_count > 0) return false;  // array decays to pointer
            return is_integer_type_text(decl->type_text);
        }
        case NodeKind::UnaryExpr:
            if (node.op == "sizeof") return true;
            if (node.op == "*" || node.op == "&") return false;
            return is_integer_expr(*node.children.front(), table);
        case NodeKind::BinaryExpr: {
            if (node.op == ",")
                return is_integer_expr(*node.children.back(), table);
            return is_integer_expr(*node.children[0], table) &&
                   is_integer_expr(*node.children[1], table);
        }
        case NodeKind::ConditionalExpr:
            return is_integer_expr(*node.children[1], table) &&
                   is_integer_expr(*node.children[2], table);
        case NodeKind::CastExpr:
            return node.type_text.find('*') == std::string::npos &&
                   is_integer_type_text(node.type_text);
        default:
            // Calls, member and index accesses: the type is unknown without
            // real type inference, so the rewrite stays away.
            return false;
    }
}

}  // namespace

AstNodePtr rewrite_equality(AstNodePtr expr, bool condition_position,
                            const SymbolTable& table) {
    if (!expr || expr->kind != NodeKind::BinaryExpr) return expr;
    if (expr->op != "==" && expr->op != "!=") return expr;
    const AstNode& lhs = *expr->children[0];
    const AstNode& rhs = *expr->children[1];
    if (contains_opaque(lhs) || contains_opaque(rhs)) return expr;
    if (!is_integer_expr(lhs, table) || !is_integer_expr(rhs, table))
        return expr;

    bool is_equal_op = expr->op == "==";
    auto left = make_paren(std::move(expr->children[0]));
    auto right = make_paren(std::move(expr->children[1]));
    auto xored = make_binary("^", std::move(left), std::move(right));
    if (is_equal_op)
        return make_paren(make_unary("!", make_paren(std::move(xored))));
    if (condition_position) return make_paren(std::move(xored));
    return make_paren(
        make_unary("!", make_unary("!", make_paren(std::move(xored)))));
}

void name_anonymous_structs(AstNode& root, SymbolTable& table) {
    int counter = 0;
    // Direct recursion instead of walk(): the root reference must not be
    // replaceable here.
    std::function<void(AstNode&)> visit = [&](AstNode& node) {
        if (node.kind == NodeKind::Opaque) return;
        if (node.kind == NodeKind::StructDecl && node.name.empty() &&
            !node.children.empty()) {
            node.name = "i_anon" + std::to_string(counter++);
            SymbolInfo sym;
            sym.name = node.name;
            sym.kind = SymbolKind::StructTag;
            sym.usr = "c:" + table.file_name + "@S@" + node.name;
            sym.decl_node = &node;
            sym.has_definition = true;
            node.symbol = table.add(std::move(sym));
        }
        for (auto& child : node.children) visit(*child);
    };
    visit(root);
}

namespace {

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '$';
}

void collect_words(const std::string& text, std::set<std::string>& out) {
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && is_word_char(text[i])) ++i;
        out.insert(text.substr(start, i - start));
    }
}

std::string replace_words(const std::string& text,
                          const std::map<std::string, std::string>& map) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_char(text[i])) {
            out.push_back(text[i++]);
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && is_word_char(text[i])) ++i;
        std::string word = text.substr(start, i - start);
        auto found = map.find(word);
        out += found == map.end() ? word : found->second;
    }
    return out;
}

// Names used anywhere in the file (declarations, references, members, raw
// directive text). New names must not collide with any of these.
void collect_all_names(const AstNode& node, std::set<std::string>& out) {
    if (!node.name.empty()) out.insert(node.name);
    if (!node.raw_line.empty()) collect_words(node.raw_line, out);
    if (!node.type_text.empty()) collect_words(node.type_text, out);
    if (node.kind == NodeKind::Opaque) collect_words(node.orig_code, out);
    for (const auto& child : node.children) collect_all_names(*child, out);
}

// Identifiers mentioned inside #define bodies: renaming a symbol whose name
// appears there would break the (unexpanded) macro at compile time.
void collect_define_words(const AstNode& node, std::set<std::string>& out) {
    if (node.kind == NodeKind::DefineDirective) collect_words(node.raw_line, out);
    for (const auto& child : node.children) collect_define_words(*child, out);
}

}  // namespace

void rename_identifiers(AstNode& root, SymbolTable& table,
                        const ObfuscationConfig& config) {
    if (!config.rename) return;

    std::set<std::string> taken;
    collect_all_names(root, taken);
    std::set<std::string> define_words;
    collect_define_words(root, define_words);

    // Field and typedef renames are applied by plain name matching (member
    // accesses and type text carry no symbol binding), so shared names must
    // opt out to stay unambiguous.
    std::map<std::string, int> field_name_uses;
    std::map<std::string, int> typedef_name_uses;
    for (const SymbolInfo& sym : table.symbols()) {
        if (sym.kind == SymbolKind::Field) ++field_name_uses[sym.name];
        if (sym.kind == SymbolKind::TypedefName) ++typedef_name_uses[sym.name];
    }

    std::map<SymbolId, std::string> new_names;
    std::map<std::string, std::string> member_map;
    std::map<std::string, std::string> typedef_map;
    const auto& symbols = table.symbols();
    for (SymbolId id = 0; id < static_cast<SymbolId>(symbols.size()); ++id) {
        const SymbolInfo& sym = symbols[id];
        if (!table.is_rename_eligible(sym, config)) continue;
        if (sym.scope_contains_opaque) continue;
        if (define_words.count(sym.name) > 0) continue;
        if (sym.kind == SymbolKind::Field && field_name_uses[sym.name] > 1)
            continue;
        if (sym.kind == SymbolKind::TypedefName &&
            typedef_name_uses[sym.name] > 1)
            continue;
        std::string fresh = obfuscated_name(sym.usr, taken);
        taken.insert(fresh);
        new_names[id] = fresh;
        if (sym.kind == SymbolKind::Field) member_map[sym.name] = fresh;
        if (sym.kind == SymbolKind::TypedefName) typedef_map[sym.name] = fresh;
    }
    if (new_names.empty()) return;

    std::function<void(AstNode&)> apply = [&](AstNode& node) {
        if (node.kind == NodeKind::Opaque) return;
        if (node.symbol) {
            auto found = new_names.find(*node.symbol);
            if (found != new_names.end()) node.name = found->second;
        }
        if (node.kind == NodeKind::MemberExpr && !member_map.empty()) {
            auto found = member_map.find(node.name);
            if (found != member_map.end()) node.name = found->second;
        }
        if (!typedef_map.empty()) {
            if (!node.type_text.empty())
                node.type_text = replace_words(node.type_text, typedef_map);
            if (!node.declarator_suffix.empty())
                node.declarator_suffix =
                    replace_words(node.declarator_suffix, typedef_map);
        }
        for (auto& child : node.children) apply(*child);
    };
    apply(root);
}

namespace {

class ExpressionPass {
public:
    ExpressionPass(const SymbolTable& table, const ObfuscationConfig& config,
                   Rng& rng)
        : table_(table), config_(config), rng_(rng) {}

    void run(AstNodePtr& node) { rewrite(node, /*truth=*/false, /*no_split=*/false); }

private:
    const SymbolTable& table_;
    const ObfuscationConfig& config_;
    Rng& rng_;

    // Bottom-up: children first, then this node. `truth` marks expressions
    // whose value is only ever truth-tested, which is what licenses the
    // bare xor form for !=. `no_split` covers enum bodies, where some
    // compilers reject folded initializers.
    void rewrite(AstNodePtr& node, bool truth, bool no_split) {
        if (!node) return;
        switch (node->kind) {
            case NodeKind::Opaque:
            case NodeKind::IncludeDirective:
            case NodeKind::DefineDirective:
                return;
            case NodeKind::EnumDecl:
                for (auto& child : node->children)
                    rewrite(child, false, /*no_split=*/true);
                return;
            case NodeKind::IfStmt:
            case NodeKind::WhileStmt:
                rewrite(node->children[0], /*truth=*/true, no_split);
                for (std::size_t i = 1; i < node->children.size(); ++i)
                    rewrite(node->children[i], false, no_split);
                apply_bool_noise(node->children[0]);
                return;
            case NodeKind::DoWhileStmt:
                rewrite(node->children[0], false, no_split);
                rewrite(node->children[1], /*truth=*/true, no_split);
                apply_bool_noise(node->children[1]);
                return;
            case NodeKind::ForStmt: {
                std::size_t i = 0;
                std::size_t cond_index = node->children.size();
                if (node->has_for_init) rewrite(node->children[i++], false, no_split);
                if (node->has_for_cond) {
                    cond_index = i;
                    rewrite(node->children[i++], /*truth=*/true, no_split);
                }
                if (node->has_for_incr) rewrite(node->children[i++], false, no_split);
                rewrite(node->children[i], false, no_split);
                if (cond_index < node->children.size())
                    apply_bool_noise(node->children[cond_index]);
                return;
            }
            case NodeKind::ConditionalExpr:
                rewrite(node->children[0], /*truth=*/true, no_split);
                rewrite(node->children[1], truth, no_split);
                rewrite(node->children[2], truth, no_split);
                break;
            case NodeKind::ParenExpr:
                rewrite(node->children[0], truth, no_split);
                break;
            case NodeKind::UnaryExpr:
                rewrite(node->children[0], node->op == "!", no_split);
                break;
            case NodeKind::BinaryExpr: {
                bool operand_truth = node->op == "&&" || node->op == "||";
                rewrite(node->children[0], operand_truth, no_split);
                rewrite(node->children[1], operand_truth, no_split);
                break;
            }
            default:
                for (auto& child : node->children) rewrite(child, false, no_split);
                break;
        }

        if (config_.enable_xor_eq && node->kind == NodeKind::BinaryExpr &&
            (node->op == "==" || node->op == "!=")) {
            node = rewrite_equality(std::move(node), truth, table_);
            return;
        }
        if (config_.enable_int_split && !no_split &&
            node->kind == NodeKind::IntLiteral && node->suffix.empty()) {
            if (auto split = split_int(node->int_value, rng_)) node = split;
        }
    }

    void apply_bool_noise(AstNodePtr& cond) {
        if (!config_.enable_bool_noise) return;
        if (auto wrapped = add_bool_noise(*cond, rng_)) cond = std::move(wrapped);
    }
};

}  // namespace

void transform(AstNodePtr& root, SymbolTable& table,
               const ObfuscationConfig& config, Rng& rng) {
    if (!root) return;
    name_anonymous_structs(*root, table);
    rename_identifiers(*root, table, config);
    ExpressionPass(table, config, rng).run(root);
}

}  // namespace obf
