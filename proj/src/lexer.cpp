#include "obfuscator/lexer.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <unordered_set>

namespace obf {

const char* to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Identifier: return "identifier";
        case TokenKind::Keyword: return "keyword";
        case TokenKind::IntLiteral: return "int_literal";
        case TokenKind::FloatLiteral: return "float_literal";
        case TokenKind::CharLiteral: return "char_literal";
        case TokenKind::StringLiteral: return "string_literal";
        case TokenKind::Punctuator: return "punctuator";
        case TokenKind::PpDirectiveLine: return "pp_directive_line";
        case TokenKind::EndOfFile: return "end_of_file";
    }
    return "?";
}

bool is_c_keyword(std::string_view name) {
    static const std::unordered_set<std::string_view> kKeywords = {
        "auto", "break", "case", "char", "const", "continue", "default", "do",
        "double", "else", "enum", "extern", "float", "for", "goto", "if",
        "inline", "int", "long", "register", "restrict", "return", "short",
        "signed", "sizeof", "static", "struct", "switch", "typedef", "union",
        "unsigned", "void", "volatile", "while", "_Bool", "_Complex",
        "_Imaginary",
    };
    return kKeywords.count(name) > 0;
}

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_hex_digit(char c) {
    return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

bool is_octal_digit(char c) { return c >= '0' && c <= '7'; }

// Multi-char C punctuators, longest first so maximal munch falls out of the
// scan order. Digraphs are deliberately absent.
constexpr std::array<std::string_view, 22> kLongPunctuators = {
    "<<=", ">>=", "...",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "*=", "/=", "%=", "+=", "-=", "&=", "^=", "|=",
};

constexpr std::string_view kSinglePunctuators = "[](){}.&*+-~!/%<>^|?:;=,#";

class Scanner {
public:
    explicit Scanner(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        for (;;) {
            std::size_t trivia_begin = pos_;
            consume_trivia();
            std::string trivia(src_.substr(trivia_begin, pos_ - trivia_begin));
            Token tok = next_token();
            tok.leading_trivia = std::move(trivia);
            bool eof = tok.kind == TokenKind::EndOfFile;
            tokens.push_back(std::move(tok));
            if (eof) break;
        }
        return tokens;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;

    bool at_end() const { return pos_ >= src_.size(); }
    char peek(std::size_t off = 0) const {
        return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
    }
    char advance() {
        char c = src_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    void consume_trivia() {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
                c == '\f') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                int open_line = line_;
                advance();
                advance();
                for (;;) {
                    if (at_end())
                        throw LexError("unterminated block comment", open_line);
                    if (peek() == '*' && peek(1) == '/') {
                        advance();
                        advance();
                        break;
                    }
                    advance();
                }
            } else {
                break;
            }
        }
    }

    // True when only blanks separate pos_ from the start of its line, which
    // is what makes a '#' a directive rather than a stray punctuator.
    bool at_line_start() const {
        std::size_t i = pos_;
        while (i > 0) {
            char c = src_[i - 1];
            if (c == '\n') return true;
            if (c == ' ' || c == '\t' || c == '\v' || c == '\f' || c == '\r') {
                --i;
                continue;
            }
            return false;
        }
        return true;
    }

    Token make(TokenKind kind, std::size_t begin, int line_begin) {
        Token tok;
        tok.kind = kind;
        tok.span = SourceSpan{begin, pos_, line_begin, line_};
        tok.lexeme = std::string(src_.substr(begin, pos_ - begin));
        return tok;
    }

    Token next_token() {
        std::size_t begin = pos_;
        int line_begin = line_;

        if (at_end()) return make(TokenKind::EndOfFile, begin, line_begin);

        char c = peek();

        if (c == '#' && at_line_start()) return lex_directive_line();
        if (is_ident_start(c)) return lex_identifier();
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return lex_number();
        if (c == '"') return lex_string();
        if (c == '\'') return lex_char();
        return lex_punctuator();
    }

    Token lex_directive_line() {
        std::size_t begin = pos_;
        int line_begin = line_;
        while (!at_end()) {
            char c = peek();
            if (c == '\\' &&
                (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n'))) {
                advance();  // backslash
                if (peek() == '\r') advance();
                advance();  // newline
                continue;
            }
            if (c == '\n' || c == '\r') break;
            advance();
        }
        return make(TokenKind::PpDirectiveLine, begin, line_begin);
    }

    Token lex_identifier() {
        std::size_t begin = pos_;
        int line_begin = line_;
        while (!at_end() && is_ident_char(peek())) advance();
        std::string_view text = src_.substr(begin, pos_ - begin);
        TokenKind kind =
            is_c_keyword(text) ? TokenKind::Keyword : TokenKind::Identifier;
        return make(kind, begin, line_begin);
    }

    // Scans a pp-number (digits, letters, '.', exponent signs) and classifies
    // it as an int or float literal afterwards.
    Token lex_number() {
        std::size_t begin = pos_;
        int line_begin = line_;
        bool hex = false;
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            hex = true;
            advance();
            advance();
        }
        bool has_dot = false;
        bool has_exp = false;
        while (!at_end()) {
            char c = peek();
            if ((c == 'e' || c == 'E') && !hex && (peek(1) == '+' || peek(1) == '-')) {
                has_exp = true;
                advance();
                advance();
                continue;
            }
            if ((c == 'p' || c == 'P') && hex && (peek(1) == '+' || peek(1) == '-')) {
                has_exp = true;
                advance();
                advance();
                continue;
            }
            if (c == '.') {
                has_dot = true;
                advance();
                continue;
            }
            if (is_ident_char(c)) {
                if (!hex && (c == 'e' || c == 'E')) has_exp = true;
                if (hex && (c == 'p' || c == 'P')) has_exp = true;
                advance();
                continue;
            }
            break;
        }
        bool is_float = has_dot || has_exp;
        return make(is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral,
                    begin, line_begin);
    }

    Token lex_string() {
        std::size_t begin = pos_;
        int line_begin = line_;
        advance();  // opening quote
        for (;;) {
            if (at_end() || peek() == '\n')
                throw LexError("unterminated string literal", line_begin);
            char c = advance();
            if (c == '\\') {
                if (at_end() || peek() == '\n')
                    throw LexError("unterminated string literal", line_begin);
                advance();
            } else if (c == '"') {
                break;
            }
        }
        return make(TokenKind::StringLiteral, begin, line_begin);
    }

    Token lex_char() {
        std::size_t begin = pos_;
        int line_begin = line_;
        advance();  // opening quote
        for (;;) {
            if (at_end() || peek() == '\n')
                throw LexError("unterminated character literal", line_begin);
            char c = advance();
            if (c == '\\') {
                if (at_end() || peek() == '\n')
                    throw LexError("unterminated character literal", line_begin);
                advance();
            } else if (c == '\'') {
                break;
            }
        }
        return make(TokenKind::CharLiteral, begin, line_begin);
    }

    Token lex_punctuator() {
        std::size_t begin = pos_;
        int line_begin = line_;
        std::string_view rest = src_.substr(pos_);
        for (std::string_view p : kLongPunctuators) {
            if (rest.substr(0, p.size()) == p) {
                for (std::size_t i = 0; i < p.size(); ++i) advance();
                return make(TokenKind::Punctuator, begin, line_begin);
            }
        }
        char c = peek();
        if (kSinglePunctuators.find(c) != std::string_view::npos) {
            advance();
            return make(TokenKind::Punctuator, begin, line_begin);
        }
        // Unknown byte (e.g. '@' or a stray control char). Emit it as a
        // punctuator; the parser will push the construct into an Opaque node.
        advance();
        return make(TokenKind::Punctuator, begin, line_begin);
    }
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
    return Scanner(source).run();
}

std::string unescape_string_literal(std::string_view lexeme) {
    if (lexeme.size() < 2 || lexeme.front() != '"' || lexeme.back() != '"')
        throw LexError("malformed string literal", 0);
    std::string_view body = lexeme.substr(1, lexeme.size() - 2);
    std::string out;
    out.reserve(body.size());
    std::size_t i = 0;
    while (i < body.size()) {
        char c = body[i++];
        if (c != '\\') {
            out.push_back(c);
            continue;
        }
        if (i >= body.size()) throw LexError("bad escape: trailing backslash", 0);
        char e = body[i++];
        switch (e) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            case 'a': out.push_back('\a'); break;
            case 'b': out.push_back('\b'); break;
            case 'f': out.push_back('\f'); break;
            case 'v': out.push_back('\v'); break;
            case '\\': out.push_back('\\'); break;
            case '\'': out.push_back('\''); break;
            case '"': out.push_back('"'); break;
            case '?': out.push_back('?'); break;
            case 'x': {
                unsigned value = 0;
                int digits = 0;
                while (i < body.size() && is_hex_digit(body[i])) {
                    value = value * 16 +
                            static_cast<unsigned>(
                                std::stoul(std::string(1, body[i]), nullptr, 16));
                    ++digits;
                    ++i;
                    if (value > 0xFF)
                        throw LexError("bad escape: hex escape out of range", 0);
                }
                if (digits == 0)
                    throw LexError("bad escape: \\x with no hex digits", 0);
                out.push_back(static_cast<char>(value));
                break;
            }
            default: {
                if (is_octal_digit(e)) {
                    unsigned value = static_cast<unsigned>(e - '0');
                    int digits = 1;
                    while (digits < 3 && i < body.size() &&
                           is_octal_digit(body[i])) {
                        value = value * 8 + static_cast<unsigned>(body[i] - '0');
                        ++digits;
                        ++i;
                    }
                    if (value > 0xFF)
                        throw LexError("bad escape: octal escape out of range", 0);
                    out.push_back(static_cast<char>(value));
                    break;
                }
                throw LexError(std::string("bad escape: unknown escape \\") + e,
                               0);
            }
        }
    }
    return out;
}

}  // namespace obf
