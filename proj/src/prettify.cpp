#include "obfuscator/prettify.hpp"

#include "obfuscator/lexer.hpp"

#include <vector>

namespace obf {

namespace {

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '$';
}

class Writer {
public:
    std::string take() {
        flush_line();
        return std::move(out_);
    }

    void put(const std::string& lexeme) {
        if (line_.empty()) {
            line_.append(static_cast<std::size_t>(indent_) * 4, ' ');
        } else if (needs_space(line_.back(), lexeme.front())) {
            line_.push_back(' ');
        }
        line_ += lexeme;
    }

    void flush_line() {
        if (line_.empty()) return;
        out_ += line_;
        out_.push_back('\n');
        line_.clear();
    }

    void indent(int delta) { indent_ += delta; }

private:
    std::string out_;
    std::string line_;
    int indent_ = 0;

    static bool needs_space(char last, char next) {
        if (next == ',' || next == ';' || next == ')' || next == ']') return false;
        if (last == '(' || last == '[') return false;
        if (next == '(' && (is_word_char(last) || last == ')')) return false;
        if (next == '[' && (is_word_char(last) || last == ']' || last == ')'))
            return false;
        if (last == '.' || next == '.') return false;
        if (last == '-' && next == '>') return false;
        return true;
    }
};

}  // namespace

std::string prettify(std::string_view source) {
    auto tokens = tokenize(source);
    Writer out;
    int paren_depth = 0;
    for (const Token& tok : tokens) {
        switch (tok.kind) {
            case TokenKind::EndOfFile:
                break;
            case TokenKind::PpDirectiveLine:
                out.flush_line();
                out.put(tok.lexeme);
                out.flush_line();
                break;
            case TokenKind::Punctuator:
                if (tok.lexeme == "{") {
                    out.put("{");
                    out.flush_line();
                    out.indent(+1);
                } else if (tok.lexeme == "}") {
                    out.flush_line();
                    out.indent(-1);
                    out.put("}");
                } else if (tok.lexeme == ";") {
                    out.put(";");
                    if (paren_depth == 0) out.flush_line();
                } else {
                    if (tok.lexeme == "(") ++paren_depth;
                    if (tok.lexeme == ")") --paren_depth;
                    out.put(tok.lexeme);
                }
                break;
            default:
                out.put(tok.lexeme);
                break;
        }
    }
    return out.take();
}

}  // namespace obf
