#include "obfuscator/symbols.hpp"

#include "obfuscator/lexer.hpp"

#include <openssl/evp.h>

#include <cstdio>

namespace obf {

std::string md5_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_Digest(data.data(), data.size(), digest, &length, EVP_md5(), nullptr);
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        char buf[3];
        std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
        out += buf;
    }
    return out;
}

std::string obfuscated_name(const std::string& usr,
                            const std::set<std::string>& taken) {
    std::string digest = md5_hex(usr);
    std::size_t length = 4;
    for (;;) {
        while (length > digest.size()) digest += md5_hex(digest);
        std::string candidate = "i_" + digest.substr(0, length);
        if (taken.count(candidate) == 0 && !is_c_keyword(candidate))
            return candidate;
        length += 2;
    }
}

SymbolId SymbolTable::add(SymbolInfo info) {
    auto id = static_cast<SymbolId>(symbols_.size());
    by_usr_.emplace(info.usr, id);
    symbols_.push_back(std::move(info));
    return id;
}

const SymbolId* SymbolTable::find_by_usr(const std::string& usr) const {
    auto it = by_usr_.find(usr);
    return it == by_usr_.end() ? nullptr : &it->second;
}

bool SymbolTable::is_rename_eligible(const SymbolInfo& sym,
                                     const ObfuscationConfig& config) const {
    if (sym.name.empty() || sym.name == "main") return false;
    if (config.keep_list.count(sym.name) > 0) return false;
    if (sym.is_global || !sym.referenced_locally) return false;
    switch (sym.kind) {
        case SymbolKind::Function:
        case SymbolKind::Variable:
        case SymbolKind::Parameter:
            return true;
        case SymbolKind::Field:
        case SymbolKind::EnumConstant:
        case SymbolKind::TypedefName:
            // Member accesses and type spellings inside Opaque regions are
            // invisible to the rename pass, so these kinds stay put unless
            // the whole file parsed cleanly.
            return !file_has_opaque;
        case SymbolKind::StructTag:
            // Tag references live inside verbatim type text; tags are never
            // renamed (anonymous structs get fresh names instead).
            return false;
    }
    return false;
}

namespace {

char kind_letter(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Function: return 'F';
        case SymbolKind::Variable: return 'V';
        case SymbolKind::Parameter: return 'P';
        case SymbolKind::StructTag: return 'S';
        case SymbolKind::Field: return 'M';
        case SymbolKind::EnumConstant: return 'E';
        case SymbolKind::TypedefName: return 'T';
    }
    return '?';
}

class Builder {
public:
    Builder(AstNode& root, std::string file_name)
        : root_(root), file_name_(std::move(file_name)) {}

    SymbolTable run() {
        table_.file_has_opaque = contains_opaque(root_);
        table_.file_name = file_name_;
        scopes_.push_back({});
        visit_children(root_);
        scopes_.pop_back();
        mark_opaque_scopes();
        return std::move(table_);
    }

private:
    struct Scope {
        std::unordered_map<std::string, SymbolId> ordinary;
        AstNode* node = nullptr;  // subtree the scope covers
    };

    AstNode& root_;
    std::string file_name_;
    SymbolTable table_;
    std::vector<Scope> scopes_;
    std::string scope_path_;
    int block_counter_ = 0;
    int anon_counter_ = 0;

    bool at_file_scope() const { return scopes_.size() == 1; }

    // File-local symbols carry the file name so their USRs cannot collide
    // with another translation unit's; external-linkage ones must hash the
    // same everywhere, so the file name is omitted.
    std::string usr_for(const SymbolInfo& sym) const {
        bool external_linkage =
            (sym.kind == SymbolKind::Function || sym.kind == SymbolKind::Variable) &&
            at_file_scope() && sym.storage != StorageClass::Static;
        std::string usr = "c:";
        if (!external_linkage) usr += file_name_;
        usr += scope_path_;
        usr += '@';
        usr += kind_letter(sym.kind);
        usr += '@';
        usr += sym.name;
        return usr;
    }

    SymbolId declare(AstNode& decl, SymbolKind kind, bool is_definition) {
        SymbolInfo sym;
        sym.name = decl.name;
        sym.kind = kind;
        sym.storage = decl.storage;
        sym.decl_node = &decl;
        sym.has_definition = is_definition;
        sym.usr = usr_for(sym);

        SymbolId id;
        if (const SymbolId* existing = table_.find_by_usr(sym.usr)) {
            id = *existing;
            SymbolInfo& prior = table_.info(id);
            if (is_definition && prior.has_definition) {
                table_.diagnostics.push_back(
                    {ParseDiagnostic::Severity::Warning,
                     "duplicate definition of '" + sym.name + "'",
                     decl.span.line_begin});
            }
            prior.has_definition = prior.has_definition || is_definition;
        } else {
            id = table_.add(std::move(sym));
        }
        decl.symbol = id;
        if (kind != SymbolKind::Field && kind != SymbolKind::StructTag)
            scopes_.back().ordinary[decl.name] = id;
        return id;
    }

    void resolve(AstNode& ref) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->ordinary.find(ref.name);
            if (found != it->ordinary.end()) {
                ref.symbol = found->second;
                return;
            }
        }
        // Unresolved: declared elsewhere (a header, another unit). The
        // renamer leaves it alone.
    }

    void visit_children(AstNode& node) {
        for (auto& child : node.children) visit(*child);
    }

    void visit(AstNode& node) {
        switch (node.kind) {
            case NodeKind::Opaque:
            case NodeKind::IncludeDirective:
            case NodeKind::DefineDirective:
                return;
            case NodeKind::FunctionDef:
            case NodeKind::FunctionProto:
                visit_function(node);
                return;
            case NodeKind::VarDecl:
            case NodeKind::TypedefDecl:
                visit_var_like(node);
                return;
            case NodeKind::StructDecl:
                visit_struct(node);
                return;
            case NodeKind::EnumDecl:
                visit_enum(node);
                return;
            case NodeKind::CompoundStmt:
                push_block(node);
                visit_children(node);
                pop_scope();
                return;
            case NodeKind::ForStmt:
                // C99 gives the for-init declaration its own scope.
                push_block(node);
                visit_children(node);
                pop_scope();
                return;
            case NodeKind::IdentifierRef:
                resolve(node);
                return;
            default:
                visit_children(node);
                return;
        }
    }

    void push_block(AstNode& node) {
        scopes_.push_back({{}, &node});
        scope_path_ += "@B" + std::to_string(block_counter_++);
    }

    void pop_scope() {
        scopes_.pop_back();
        scope_path_.resize(scope_path_.rfind('@'));
    }

    void visit_function(AstNode& node) {
        bool is_def = node.kind == NodeKind::FunctionDef;
        if (node.has_type_def) visit(*node.children.front());
        declare(node, SymbolKind::Function, is_def);

        scopes_.push_back({{}, &node});
        std::string saved_path = scope_path_;
        int saved_counter = block_counter_;
        scope_path_ += "@F@" + node.name;
        block_counter_ = 0;

        std::size_t first_param = node.has_type_def ? 1 : 0;
        std::size_t end = node.children.size() - (is_def ? 1 : 0);
        for (std::size_t i = first_param; i < end; ++i) {
            AstNode& param = *node.children[i];
            if (param.kind != NodeKind::ParamDecl) continue;
            if (!param.name.empty())
                declare(param, SymbolKind::Parameter, is_def);
            for (auto& dim : param.children) visit(*dim);  // VLA sizes
        }
        if (is_def) {
            // The body block is B0 inside this function.
            visit(*node.children.back());
        }

        block_counter_ = saved_counter;
        scope_path_ = std::move(saved_path);
        scopes_.pop_back();
    }

    void visit_var_like(AstNode& node) {
        SymbolKind kind = node.kind == NodeKind::TypedefDecl
                              ? SymbolKind::TypedefName
                              : SymbolKind::Variable;
        if (node.has_type_def) visit(*node.children.front());
        if (!node.name.empty()) declare(node, kind, node.has_init);

        std::size_t i = node.first_dim_index();
        for (std::size_t n = 0; n < static_cast<std::size_t>(node.dim_count); ++n)
            visit(*node.children[i + n]);
        if (node.has_init) visit(*node.children[node.init_index()]);
        for (std::size_t e = node.first_extra_decl_index();
             e < node.children.size(); ++e)
            visit_var_like(*node.children[e]);
    }

    void visit_struct(AstNode& node) {
        std::string tag = node.name;
        if (tag.empty()) tag = "<anon" + std::to_string(anon_counter_++) + ">";
        if (!node.name.empty()) declare(node, SymbolKind::StructTag, true);

        std::string saved_path = scope_path_;
        scope_path_ += "@S@" + tag;
        for (auto& child : node.children) {
            AstNode& field = *child;
            if (field.kind != NodeKind::FieldDecl) continue;
            if (field.has_type_def) visit(*field.children.front());
            if (!field.name.empty()) declare(field, SymbolKind::Field, true);
            std::size_t i = field.first_dim_index();
            for (std::size_t n = 0; n < static_cast<std::size_t>(field.dim_count);
                 ++n)
                visit(*field.children[i + n]);
        }
        scope_path_ = std::move(saved_path);
    }

    void visit_enum(AstNode& node) {
        if (!node.name.empty()) declare(node, SymbolKind::StructTag, true);
        // Enumerators land in the enclosing ordinary scope.
        for (auto& child : node.children) {
            AstNode& constant = *child;
            if (constant.kind != NodeKind::VarDecl) continue;
            declare(constant, SymbolKind::EnumConstant, true);
            if (constant.has_init) visit(*constant.children[constant.init_index()]);
        }
    }

    // A symbol whose visibility scope contains an Opaque node may be
    // referenced from inside it, invisibly; flag those for the renamer.
    void mark_opaque_scopes() {
        if (!table_.file_has_opaque) return;
        for (SymbolInfo& sym : table_.symbols()) {
            AstNode* scope = scope_node_of(sym);
            sym.scope_contains_opaque =
                scope == nullptr ? true : contains_opaque(*scope);
        }
    }

    AstNode* scope_node_of(SymbolInfo& sym) {
        // decl_node was declared while some scope stack was active, but the
        // stack is gone by now; recover the enclosing scope by searching
        // from the root.
        return find_enclosing_scope(root_, sym.decl_node);
    }

    static bool subtree_contains(const AstNode& node, const AstNode* target) {
        if (&node == target) return true;
        for (const auto& child : node.children)
            if (subtree_contains(*child, target)) return true;
        return false;
    }

    // Innermost CompoundStmt/ForStmt/FunctionDef strictly containing target,
    // or nullptr when the target sits at file scope.
    static AstNode* find_enclosing_scope(AstNode& node, AstNode* target) {
        for (auto& child : node.children) {
            if (child.get() == target) break;
            if (!subtree_contains(*child, target)) continue;
            if (AstNode* inner = find_enclosing_scope(*child, target))
                return inner;
            break;
        }
        bool is_scope = node.kind == NodeKind::CompoundStmt ||
                        node.kind == NodeKind::ForStmt ||
                        node.kind == NodeKind::FunctionDef;
        return is_scope ? &node : nullptr;
    }
};

}  // namespace

SymbolTable build_symbols(AstNode& root, const std::string& file_name) {
    return Builder(root, file_name).run();
}

}  // namespace obf
