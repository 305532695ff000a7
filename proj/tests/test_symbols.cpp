#include "obfuscator/symbols.hpp"

#include "obfuscator/parser.hpp"

#include <doctest.h>

using namespace obf;

namespace {

struct Built {
    AstNodePtr root;
    SymbolTable table;
};

Built build(const std::string& source, const std::string& file = "t.c") {
    auto result = parse_source(source);
    SymbolTable table = build_symbols(*result.root, file);
    return {std::move(result.root), std::move(table)};
}

const SymbolInfo* find_symbol(const SymbolTable& table, const std::string& name) {
    for (const auto& sym : table.symbols())
        if (sym.name == name) return &sym;
    return nullptr;
}

}  // namespace

TEST_CASE("listing-12 style file produces the expected symbols") {
    auto built = build(
        "int foo(int param) {\n"
        "    int x = 42 + param;\n"
        "    return x;\n"
        "}\n"
        "\n"
        "int main() {\n"
        "    int y = 2;\n"
        "    return foo(y);\n"
        "}\n");
    const SymbolTable& table = built.table;

    const SymbolInfo* foo = find_symbol(table, "foo");
    REQUIRE(foo != nullptr);
    CHECK(foo->kind == SymbolKind::Function);
    CHECK(foo->usr == "c:@F@foo");  // external linkage: no file name

    const SymbolInfo* main_sym = find_symbol(table, "main");
    REQUIRE(main_sym != nullptr);
    CHECK(main_sym->usr == "c:@F@main");

    const SymbolInfo* param = find_symbol(table, "param");
    REQUIRE(param != nullptr);
    CHECK(param->kind == SymbolKind::Parameter);
    CHECK(param->usr == "c:t.c@F@foo@P@param");

    const SymbolInfo* x = find_symbol(table, "x");
    REQUIRE(x != nullptr);
    CHECK(x->usr == "c:t.c@F@foo@B0@V@x");

    CHECK(find_symbol(table, "y") != nullptr);
}

TEST_CASE("empty translation unit gives an empty table") {
    auto built = build("");
    CHECK(built.table.symbols().empty());
}

TEST_CASE("shadowing produces distinct USRs and inner references bind inward") {
    auto built = build("int a; void f(void){ int a; a = 1; }");
    int count = 0;
    SymbolId outer = 0, inner = 0;
    for (SymbolId id = 0; id < built.table.symbols().size(); ++id) {
        if (built.table.symbols()[id].name == "a") {
            if (count == 0) outer = id;
            else inner = id;
            ++count;
        }
    }
    REQUIRE(count == 2);
    CHECK(built.table.info(outer).usr != built.table.info(inner).usr);

    // The reference inside f binds to the block-scope a.
    const SymbolId* bound = nullptr;
    std::function<void(const AstNode&)> search = [&](const AstNode& node) {
        if (node.kind == NodeKind::IdentifierRef && node.name == "a" && node.symbol)
            bound = &*node.symbol;
        for (const auto& child : node.children) search(*child);
    };
    search(*built.root);
    REQUIRE(bound != nullptr);
    CHECK(*bound == inner);
}

TEST_CASE("static storage moves the USR into the file namespace") {
    auto built = build("static int counter; static void tick(void) {}", "m.c");
    CHECK(find_symbol(built.table, "counter")->usr == "c:m.c@V@counter");
    CHECK(find_symbol(built.table, "tick")->usr == "c:m.c@F@tick");
}

TEST_CASE("unresolved references stay unbound") {
    auto built = build("#include <stdio.h>\nint main(void){printf(\"x\");return 0;}");
    bool printf_bound = true;
    std::function<void(const AstNode&)> search = [&](const AstNode& node) {
        if (node.kind == NodeKind::IdentifierRef && node.name == "printf")
            printf_bound = node.symbol.has_value();
        for (const auto& child : node.children) search(*child);
    };
    search(*built.root);
    CHECK(!printf_bound);
}

TEST_CASE("rename eligibility") {
    ObfuscationConfig config;
    config.rename = true;

    auto built = build(
        "int foo(int param){return param;}\n"
        "int main(void){return foo(2);}\n");
    const SymbolTable& table = built.table;

    SUBCASE("main is never renamed") {
        CHECK(!table.is_rename_eligible(*find_symbol(table, "main"), config));
    }
    SUBCASE("a file-scope function declared here is renameable") {
        CHECK(table.is_rename_eligible(*find_symbol(table, "foo"), config));
    }
    SUBCASE("keep-list wins") {
        config.keep_list.insert("foo");
        CHECK(!table.is_rename_eligible(*find_symbol(table, "foo"), config));
    }
    SUBCASE("symbols never declared here are represented as unbound, not eligible") {
        SymbolInfo external;
        external.name = "printf";
        external.referenced_locally = false;
        CHECK(!table.is_rename_eligible(external, config));
    }
}

TEST_CASE("fields and typedefs are conservative under opaque") {
    ObfuscationConfig config;
    config.rename = true;

    auto clean = build("struct s { int fld; }; typedef int num;");
    CHECK(clean.table.is_rename_eligible(*find_symbol(clean.table, "fld"), config));
    CHECK(clean.table.is_rename_eligible(*find_symbol(clean.table, "num"), config));

    auto dirty = build(
        "struct s { int fld; };\n"
        "@garbage;\n"
        "typedef int num;\n");
    REQUIRE(dirty.table.file_has_opaque);
    CHECK(!dirty.table.is_rename_eligible(*find_symbol(dirty.table, "fld"), config));
    CHECK(!dirty.table.is_rename_eligible(*find_symbol(dirty.table, "num"), config));
    // Plain variables elsewhere in the file also get scope-restricted.
    auto scoped = build("int g;\n@garbage;\nvoid f(void){int local;}\n");
    CHECK(find_symbol(scoped.table, "g")->scope_contains_opaque);
    CHECK(!find_symbol(scoped.table, "local")->scope_contains_opaque);
}

TEST_CASE("obfuscated_name format and md5 oracle") {
    std::set<std::string> taken;
    // md5("c:@F@foo") = e444485443835161932f83994d4909d7, computed offline.
    CHECK(md5_hex("c:@F@foo") == "e444485443835161932f83994d4909d7");
    CHECK(obfuscated_name("c:@F@foo", taken) == "i_e444");

    SUBCASE("same usr, same name; different usr, typically different name") {
        CHECK(obfuscated_name("c:@F@foo", taken) ==
              obfuscated_name("c:@F@foo", taken));
    }

    SUBCASE("collision extends by two hex chars") {
        // usr345 and usr355 share the md5 prefix 121e (found by search):
        // 121e8ab366ba6cb8dc0d4d91d3bed023 / 121efdf5e2fc754d90bad407b4c4fa0c
        std::string first = obfuscated_name("usr345", taken);
        CHECK(first == "i_121e");
        taken.insert(first);
        std::string second = obfuscated_name("usr355", taken);
        CHECK(second == "i_121efd");
    }

    SUBCASE("names always match the expected shape") {
        const char* usrs[] = {"c:@F@a", "c:x.c@V@b", "c:@F@main@B0@V@c"};
        for (const char* usr : usrs) {
            std::string name = obfuscated_name(usr, {});
            CHECK(name.size() >= 6);  // i_ + 4 hex
            CHECK(name.rfind("i_", 0) == 0);
            for (std::size_t i = 2; i < name.size(); ++i) {
                bool hex = (name[i] >= '0' && name[i] <= '9') ||
                           (name[i] >= 'a' && name[i] <= 'f');
                CHECK(hex);
            }
        }
    }
}

TEST_CASE("duplicate definitions warn and first wins") {
    auto built = build("int g = 1;\nint g = 2;\n");
    bool warned = false;
    for (const auto& diag : built.table.diagnostics)
        warned |= diag.message.find("duplicate") != std::string::npos;
    CHECK(warned);
}
