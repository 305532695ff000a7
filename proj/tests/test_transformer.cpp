#include "obfuscator/transformer.hpp"

#include "obfuscator/parser.hpp"
#include "obfuscator/renderer.hpp"

#include <doctest.h>

#include <cstdint>
#include <functional>
#include <optional>

using namespace obf;

namespace {

// Independent constant-fold oracle: evaluates pure integer expression trees
// with C semantics on 64-bit signed values. Deliberately separate from any
// production evaluation path.
std::optional<std::int64_t> fold(const AstNode& node) {
    switch (node.kind) {
        case NodeKind::IntLiteral:
            return static_cast<std::int64_t>(node.int_value);
        case NodeKind::CharLiteral:
            return static_cast<std::int64_t>(node.int_value);
        case NodeKind::ParenExpr:
            return fold(*node.children.front());
        case NodeKind::UnaryExpr: {
            auto v = fold(*node.children.front());
            if (!v) return std::nullopt;
            if (node.op == "-") return -*v;
            if (node.op == "+") return *v;
            if (node.op == "!") return *v == 0 ? 1 : 0;
            if (node.op == "~") return ~*v;
            return std::nullopt;
        }
        case NodeKind::BinaryExpr: {
            auto a = fold(*node.children[0]);
            auto b = fold(*node.children[1]);
            if (!a || !b) return std::nullopt;
            if (node.op == "+") return *a + *b;
            if (node.op == "-") return *a - *b;
            if (node.op == "*") return *a * *b;
            if (node.op == "^") return *a ^ *b;
            if (node.op == "==") return *a == *b ? 1 : 0;
            if (node.op == "!=") return *a != *b ? 1 : 0;
            if (node.op == "&&") return (*a != 0 && *b != 0) ? 1 : 0;
            if (node.op == "||") return (*a != 0 || *b != 0) ? 1 : 0;
            return std::nullopt;
        }
        default:
            return std::nullopt;
    }
}

int count_terms(const AstNode& node) {
    if (node.kind == NodeKind::IntLiteral) return 1;
    int n = 0;
    for (const auto& child : node.children) n += count_terms(*child);
    return n;
}

AstNodePtr int_literal(std::uint64_t value) {
    auto node = make_node(NodeKind::IntLiteral);
    node->int_value = value;
    return node;
}

struct Built {
    AstNodePtr root;
    SymbolTable table;
};

Built build(const std::string& source) {
    auto result = parse_source(source);
    SymbolTable table = build_symbols(*result.root, "t.c");
    return {std::move(result.root), std::move(table)};
}

const AstNode* find_kind(const AstNode& node, NodeKind kind) {
    if (node.kind == kind) return &node;
    for (const auto& child : node.children)
        if (const AstNode* hit = find_kind(*child, kind)) return hit;
    return nullptr;
}

std::string render_all(AstNodePtr& root, SymbolTable& table,
                       const ObfuscationConfig& config) {
    Rng rng(config.seed);
    transform(root, table, config, rng);
    return render(*root, rng);
}

}  // namespace

TEST_CASE("split_int folds back to the original for 10000 random values") {
    Rng value_rng(1234);
    Rng term_rng(42);
    for (int i = 0; i < 10000; ++i) {
        std::uint64_t value = value_rng.below(0x80000000ull);
        auto expr = split_int(value, term_rng);
        REQUIRE(expr != nullptr);
        CHECK(expr->kind == NodeKind::ParenExpr);  // safe under any parent
        auto folded = fold(*expr);
        REQUIRE(folded.has_value());
        CHECK(*folded == static_cast<std::int64_t>(value));
        CHECK(count_terms(*expr) == 4);
    }
}

TEST_CASE("split_int corner values") {
    Rng rng(7);
    for (std::uint64_t value : {0ull, 1ull, 23ull, 1023ull, 2147483647ull}) {
        auto expr = split_int(value, rng);
        REQUIRE(expr != nullptr);
        auto folded = fold(*expr);
        REQUIRE(folded.has_value());
        CHECK(*folded == static_cast<std::int64_t>(value));
        // Each term must itself be a valid int literal.
        std::function<void(const AstNode&)> check_terms = [&](const AstNode& n) {
            if (n.kind == NodeKind::IntLiteral)
                CHECK(n.int_value <= 0x7fffffffull);
            for (const auto& child : n.children) check_terms(*child);
        };
        check_terms(*expr);
    }
    CHECK(split_int(0x80000000ull, rng) == nullptr);  // too wide
}

TEST_CASE("bool noise preserves truth value and skips side effects") {
    Rng rng(0);
    SUBCASE("pure comparison gets the double negation form") {
        auto expr = parse_expression("x > 12");
        auto wrapped = add_bool_noise(*expr, rng);
        REQUIRE(wrapped != nullptr);
        // Shape: ((C) && (!!(C)))
        REQUIRE(wrapped->kind == NodeKind::ParenExpr);
        const AstNode& conj = *wrapped->children.front();
        REQUIRE(conj.kind == NodeKind::BinaryExpr);
        CHECK(conj.op == "&&");
        const AstNode& rhs = *conj.children[1];
        REQUIRE(rhs.kind == NodeKind::ParenExpr);
        const AstNode& not1 = *rhs.children.front();
        REQUIRE(not1.kind == NodeKind::UnaryExpr);
        CHECK(not1.op == "!");
        CHECK(not1.children.front()->op == "!");
    }
    SUBCASE("constant keeps truth value") {
        auto expr = parse_expression("1");
        auto wrapped = add_bool_noise(*expr, rng);
        REQUIRE(wrapped != nullptr);
        CHECK(*fold(*wrapped) == 1);
        auto zero = parse_expression("0");
        auto wrapped_zero = add_bool_noise(*zero, rng);
        CHECK(*fold(*wrapped_zero) == 0);
    }
    SUBCASE("calls, assignments and increments are skipped") {
        CHECK(add_bool_noise(*parse_expression("f() > 0"), rng) == nullptr);
        CHECK(add_bool_noise(*parse_expression("(x = 1)"), rng) == nullptr);
        CHECK(add_bool_noise(*parse_expression("x++ < 3"), rng) == nullptr);
        CHECK(add_bool_noise(*parse_expression("--x"), rng) == nullptr);
    }
}

TEST_CASE("equality rewrite is exhaustively value-correct on small ints") {
    SymbolTable empty_table;
    for (int a = -8; a < 8; ++a) {
        for (int b = -8; b < 8; ++b) {
            // a == b in value position
            {
                auto lhs = a < 0 ? parse_expression("-" + std::to_string(-a))
                                 : int_literal(static_cast<std::uint64_t>(a));
                auto rhs = b < 0 ? parse_expression("-" + std::to_string(-b))
                                 : int_literal(static_cast<std::uint64_t>(b));
                auto eq = make_node(NodeKind::BinaryExpr);
                eq->op = "==";
                eq->children.push_back(std::move(lhs));
                eq->children.push_back(std::move(rhs));
                auto rewritten =
                    rewrite_equality(std::move(eq), false, empty_table);
                REQUIRE(rewritten != nullptr);
                CHECK(rewritten->kind != NodeKind::BinaryExpr);  // was rewritten
                CHECK(*fold(*rewritten) == (a == b ? 1 : 0));
            }
            // a != b in value position must still yield exactly 0 or 1
            {
                auto lhs = a < 0 ? parse_expression("-" + std::to_string(-a))
                                 : int_literal(static_cast<std::uint64_t>(a));
                auto rhs = b < 0 ? parse_expression("-" + std::to_string(-b))
                                 : int_literal(static_cast<std::uint64_t>(b));
                auto ne = make_node(NodeKind::BinaryExpr);
                ne->op = "!=";
                ne->children.push_back(std::move(lhs));
                ne->children.push_back(std::move(rhs));
                auto rewritten =
                    rewrite_equality(std::move(ne), false, empty_table);
                CHECK(*fold(*rewritten) == (a != b ? 1 : 0));
            }
            // a != b in condition position only needs matching truthiness
            {
                auto lhs = a < 0 ? parse_expression("-" + std::to_string(-a))
                                 : int_literal(static_cast<std::uint64_t>(a));
                auto rhs = b < 0 ? parse_expression("-" + std::to_string(-b))
                                 : int_literal(static_cast<std::uint64_t>(b));
                auto ne = make_node(NodeKind::BinaryExpr);
                ne->op = "!=";
                ne->children.push_back(std::move(lhs));
                ne->children.push_back(std::move(rhs));
                auto rewritten =
                    rewrite_equality(std::move(ne), true, empty_table);
                CHECK((*fold(*rewritten) != 0) == (a != b));
            }
        }
    }
}

TEST_CASE("equality rewrite skips non-integer operands") {
    auto built = build(
        "float f;\nchar *p;\nint i;\n"
        "int main(void){ if (f == 0) return 1; if (p != 0) return 2;"
        " if (i == 3) return 3; return 0; }");
    ObfuscationConfig config;
    config.enable_int_split = false;
    config.enable_bool_noise = false;
    Rng rng(0);
    transform(built.root, built.table, config, rng);
    std::string out = render(*built.root, rng);
    CHECK(out.find("f==") != std::string::npos);   // float: untouched
    CHECK(out.find("p!=") != std::string::npos);   // pointer: untouched
    CHECK(out.find("(i)^") != std::string::npos);  // int: rewritten
}

TEST_CASE("anonymous structs get fresh names") {
    SUBCASE("single") {
        auto built = build("struct { int x; } s;");
        name_anonymous_structs(*built.root, built.table);
        const AstNode* tag = find_kind(*built.root, NodeKind::StructDecl);
        REQUIRE(tag != nullptr);
        CHECK(tag->name == "i_anon0");
        CHECK(tag->symbol.has_value());
    }
    SUBCASE("no anonymous structs means no change") {
        auto built = build("struct named { int x; } s;");
        std::string before = dump(*built.root);
        name_anonymous_structs(*built.root, built.table);
        CHECK(dump(*built.root) == before);
    }
    SUBCASE("two get distinct names") {
        auto built = build("struct { int x; } a;\nstruct { int y; } b;");
        name_anonymous_structs(*built.root, built.table);
        const AstNode* first = find_kind(*built.root->children[0],
                                         NodeKind::StructDecl);
        const AstNode* second = find_kind(*built.root->children[1],
                                          NodeKind::StructDecl);
        REQUIRE(first != nullptr);
        REQUIRE(second != nullptr);
        CHECK(first->name == "i_anon0");
        CHECK(second->name == "i_anon1");
    }
}

TEST_CASE("rename_identifiers") {
    const char* listing12 =
        "int foo(int param) {\n"
        "    int x = 42 + param;\n"
        "    return x;\n"
        "}\n"
        "int main() {\n"
        "    int y = 2;\n"
        "    return foo(y);\n"
        "}\n";

    SUBCASE("renames everything but main, consistently") {
        auto built = build(listing12);
        ObfuscationConfig config;
        config.rename = true;
        config.enable_int_split = false;
        config.enable_bool_noise = false;
        config.enable_xor_eq = false;
        std::string out = render_all(built.root, built.table, config);
        CHECK(out.find("foo") == std::string::npos);
        CHECK(out.find("param") == std::string::npos);
        CHECK(out.find("main") != std::string::npos);
        // The call site uses foo's new name: i_ + md5("c:@F@foo")[:4].
        CHECK(out.find("return i_e444(") != std::string::npos);
        CHECK(out.find("int i_e444(") != std::string::npos);
    }
    SUBCASE("rename off is the identity") {
        auto built = build(listing12);
        ObfuscationConfig config;
        config.rename = false;
        rename_identifiers(*built.root, built.table, config);
        std::string dumped = dump(*built.root);
        CHECK(dumped.find("foo") != std::string::npos);
        CHECK(dumped.find("param") != std::string::npos);
    }
    SUBCASE("keep-list symbols survive while siblings change") {
        auto built = build(listing12);
        ObfuscationConfig config;
        config.rename = true;
        config.keep_list.insert("foo");
        rename_identifiers(*built.root, built.table, config);
        std::string dumped = dump(*built.root);
        CHECK(dumped.find("\"foo\"") != std::string::npos);
        CHECK(dumped.find("\"param\"") == std::string::npos);
    }
    SUBCASE("symbols named in a #define body are not renamed") {
        auto built = build(
            "#define CALL helper()\n"
            "int helper(void) { return 3; }\n"
            "int main(void) { return CALL; }\n");
        ObfuscationConfig config;
        config.rename = true;
        rename_identifiers(*built.root, built.table, config);
        std::string dumped = dump(*built.root);
        CHECK(dumped.find("\"helper\"") != std::string::npos);
    }
}

TEST_CASE("transform never touches opaque subtrees") {
    auto built = build(
        "int main(void){ __asm__(\"nop\"); if (1 == 1) return 23; return 0; }");
    const AstNode* opaque_before = find_kind(*built.root, NodeKind::Opaque);
    REQUIRE(opaque_before != nullptr);
    std::string opaque_text = opaque_before->orig_code;

    ObfuscationConfig config;
    Rng rng(0);
    transform(built.root, built.table, config, rng);

    const AstNode* opaque_after = find_kind(*built.root, NodeKind::Opaque);
    REQUIRE(opaque_after != nullptr);
    CHECK(opaque_after->orig_code == opaque_text);
    CHECK(opaque_after->children.empty());
}

TEST_CASE("transform output is deterministic per seed") {
    const char* source =
        "int main(void){ int v = 23; const char *s = \"hi\"; if (v == 23) "
        "return v != 0; return 0; }";
    auto once = build(source);
    auto twice = build(source);
    ObfuscationConfig config;
    config.seed = 99;
    std::string a = render_all(once.root, once.table, config);
    std::string b = render_all(twice.root, twice.table, config);
    CHECK(a == b);

    auto third = build(source);
    ObfuscationConfig other;
    other.seed = 100;
    std::string c = render_all(third.root, third.table, other);
    CHECK(a != c);
}

TEST_CASE("full transform folds every literal back to its value") {
    auto built = build("int main(void){ int age = 23; return age; }");
    ObfuscationConfig config;
    Rng rng(5);
    transform(built.root, built.table, config, rng);
    // The initializer is now a 4-term chain folding to 23.
    const AstNode* decl = find_kind(*built.root, NodeKind::VarDecl);
    REQUIRE(decl != nullptr);
    REQUIRE(decl->has_init);
    const AstNode& init = *decl->children[decl->init_index()];
    CHECK(count_terms(init) == 4);
    CHECK(*fold(init) == 23);
}
