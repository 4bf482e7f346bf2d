#include "chiraag/sva_parse.hpp"

#include "chiraag/errors.hpp"
#include "chiraag/util.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <regex>
#include <sstream>

namespace chiraag {

PropExpr PropExpr::implication(ImplKind kind, PropExpr antecedent, PropExpr consequent) {
    PropExpr e;
    e.kind = Kind::Implication;
    e.impl_kind = kind;
    e.children.push_back(std::move(antecedent));
    e.children.push_back(std::move(consequent));
    return e;
}

PropExpr PropExpr::binary(BinaryOp op, PropExpr lhs, PropExpr rhs) {
    PropExpr e;
    e.kind = Kind::Binary;
    e.binary_op = op;
    e.children.push_back(std::move(lhs));
    e.children.push_back(std::move(rhs));
    return e;
}

PropExpr PropExpr::unary(UnaryOp op, PropExpr operand) {
    PropExpr e;
    e.kind = Kind::Unary;
    e.unary_op = op;
    e.children.push_back(std::move(operand));
    return e;
}

PropExpr PropExpr::past(PropExpr operand, std::optional<std::uint32_t> depth) {
    PropExpr e;
    e.kind = Kind::Past;
    e.past_depth = depth;
    e.children.push_back(std::move(operand));
    return e;
}

PropExpr PropExpr::identifier(std::string name, std::optional<IdentIndex> index) {
    PropExpr e;
    e.kind = Kind::Ident;
    e.ident = std::move(name);
    e.index = index;
    return e;
}

PropExpr PropExpr::literal(std::optional<std::uint32_t> width, LiteralBase base,
                           std::uint64_t value) {
    PropExpr e;
    e.kind = Kind::Literal;
    e.literal_width = width;
    e.literal_base = base;
    e.literal_value = value;
    return e;
}

std::string render_diagnostic_body(const SyntaxDiagnostic& d) {
    std::ostringstream out;
    out << d.message;
    if (!d.found.empty() || !d.expected.empty()) {
        out << " (found '" << d.found << "'";
        if (!d.expected.empty()) {
            out << ", expected ";
            for (std::size_t i = 0; i < d.expected.size(); ++i) {
                if (i > 0) out << " or ";
                out << d.expected[i];
            }
        }
        out << ")";
    }
    return out.str();
}

std::string render_diagnostic(const SyntaxDiagnostic& d) {
    std::ostringstream out;
    out << "line " << d.line << ", col " << d.column << ": " << render_diagnostic_body(d);
    return out.str();
}

const Assertion* AssertionSuite::find(const std::string& name) const {
    for (const auto& a : assertions) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
    KwProperty, KwEndproperty, KwEnd, KwAssert,
    Ident, SystemIdent, Number,
    Semi, LParen, RParen, LBracket, RBracket, Colon, Comma, At,
    ImplOverlap, ImplNonOverlap, ImplBoolean, // |-> |=> ->
    OrOr, AndAnd, Pipe, Caret, Amp,
    EqEq, BangEq, Lt, Le, Gt, Ge, Plus, Minus, Bang, Tilde,
    Unknown, Eof,
};

struct Token {
    Tok kind = Tok::Eof;
    std::string text;
    int line = 1;
    int col = 1;
    // literal payload, valid when kind == Number
    std::optional<std::uint32_t> width;
    LiteralBase base = LiteralBase::UnsizedDecimal;
    std::uint64_t value = 0;
};

constexpr std::size_t kMaxDiagnostics = 20;

struct Lexer {
    const std::string& src;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;
    std::vector<SyntaxDiagnostic>& diags;

    Lexer(const std::string& s, std::vector<SyntaxDiagnostic>& d) : src(s), diags(d) {}

    char peek(std::size_t off = 0) const {
        return pos + off < src.size() ? src[pos + off] : '\0';
    }

    void advance() {
        if (pos >= src.size()) return;
        if (src[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void error(int l, int c, const std::string& message, const std::string& found) {
        if (diags.size() < kMaxDiagnostics) {
            diags.push_back(SyntaxDiagnostic{l, c, message, found, {}});
        }
    }

    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    std::vector<Token> lex() {
        std::vector<Token> tokens;
        while (true) {
            while (pos < src.size() &&
                   std::isspace(static_cast<unsigned char>(src[pos]))) {
                advance();
            }
            if (pos + 1 < src.size() && src[pos] == '/' && src[pos + 1] == '/') {
                while (pos < src.size() && src[pos] != '\n') advance();
                continue;
            }
            if (pos >= src.size()) break;
            tokens.push_back(next_token());
        }
        Token eof;
        eof.kind = Tok::Eof;
        eof.text = "end of input";
        eof.line = line;
        eof.col = col;
        tokens.push_back(eof);
        return tokens;
    }

    Token tok(Tok kind, std::string text, int l, int c) {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.line = l;
        t.col = c;
        return t;
    }

    Token next_token() {
        const int l = line;
        const int c = col;
        const char ch = peek();

        if (ident_start(ch)) {
            std::string word;
            while (ident_char(peek())) {
                word.push_back(peek());
                advance();
            }
            if (word == "property") return tok(Tok::KwProperty, word, l, c);
            if (word == "endproperty") return tok(Tok::KwEndproperty, word, l, c);
            if (word == "end") return tok(Tok::KwEnd, word, l, c);
            if (word == "assert") return tok(Tok::KwAssert, word, l, c);
            return tok(Tok::Ident, word, l, c);
        }

        if (ch == '$') {
            std::string word(1, ch);
            advance();
            while (ident_char(peek())) {
                word.push_back(peek());
                advance();
            }
            return tok(Tok::SystemIdent, word, l, c);
        }

        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '\'') {
            return lex_number(l, c);
        }

        auto two = [&](char a, char b) { return peek() == a && peek(1) == b; };
        if (peek() == '|' && peek(1) == '-' && peek(2) == '>') {
            advance(); advance(); advance();
            return tok(Tok::ImplOverlap, "|->", l, c);
        }
        if (peek() == '|' && peek(1) == '=' && peek(2) == '>') {
            advance(); advance(); advance();
            return tok(Tok::ImplNonOverlap, "|=>", l, c);
        }
        if (two('-', '>')) { advance(); advance(); return tok(Tok::ImplBoolean, "->", l, c); }
        if (two('|', '|')) { advance(); advance(); return tok(Tok::OrOr, "||", l, c); }
        if (two('&', '&')) { advance(); advance(); return tok(Tok::AndAnd, "&&", l, c); }
        if (two('=', '=')) { advance(); advance(); return tok(Tok::EqEq, "==", l, c); }
        if (two('!', '=')) { advance(); advance(); return tok(Tok::BangEq, "!=", l, c); }
        if (two('<', '=')) { advance(); advance(); return tok(Tok::Le, "<=", l, c); }
        if (two('>', '=')) { advance(); advance(); return tok(Tok::Ge, ">=", l, c); }
        // `|>` is not an operator; keep it as one token so the diagnostic names it
        if (two('|', '>')) { advance(); advance(); return tok(Tok::Unknown, "|>", l, c); }

        switch (ch) {
            case ';': advance(); return tok(Tok::Semi, ";", l, c);
            case '(': advance(); return tok(Tok::LParen, "(", l, c);
            case ')': advance(); return tok(Tok::RParen, ")", l, c);
            case '[': advance(); return tok(Tok::LBracket, "[", l, c);
            case ']': advance(); return tok(Tok::RBracket, "]", l, c);
            case ':': advance(); return tok(Tok::Colon, ":", l, c);
            case ',': advance(); return tok(Tok::Comma, ",", l, c);
            case '@': advance(); return tok(Tok::At, "@", l, c);
            case '|': advance(); return tok(Tok::Pipe, "|", l, c);
            case '^': advance(); return tok(Tok::Caret, "^", l, c);
            case '&': advance(); return tok(Tok::Amp, "&", l, c);
            case '<': advance(); return tok(Tok::Lt, "<", l, c);
            case '>': advance(); return tok(Tok::Gt, ">", l, c);
            case '+': advance(); return tok(Tok::Plus, "+", l, c);
            case '-': advance(); return tok(Tok::Minus, "-", l, c);
            case '!': advance(); return tok(Tok::Bang, "!", l, c);
            case '~': advance(); return tok(Tok::Tilde, "~", l, c);
            default: break;
        }

        // unsupported punctuation; group repeats so `##` reads as one token
        std::string text;
        const char first = ch;
        while (peek() == first) {
            text.push_back(peek());
            advance();
        }
        if (text.empty()) {
            text.push_back(ch);
            advance();
        }
        return tok(Tok::Unknown, text, l, c);
    }

    Token lex_number(int l, int c) {
        std::string digits;
        while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') {
            if (peek() != '_') digits.push_back(peek());
            advance();
        }

        if (peek() != '\'') {
            Token t = tok(Tok::Number, digits, l, c);
            t.base = LiteralBase::UnsizedDecimal;
            std::uint64_t v = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
            if (ec != std::errc() || p != digits.data() + digits.size()) {
                error(l, c, "malformed literal", digits);
            }
            t.value = v;
            return t;
        }

        std::string text = digits;
        text.push_back('\'');
        advance(); // consume '

        std::optional<std::uint32_t> width;
        if (!digits.empty()) {
            std::uint32_t w = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), w);
            if (ec != std::errc() || w == 0 || w > 64) {
                error(l, c, "malformed literal: bad width", text);
                w = 64;
            }
            width = w;
        }

        const char base_char =
            static_cast<char>(std::tolower(static_cast<unsigned char>(peek())));
        LiteralBase base;
        int radix;
        switch (base_char) {
            case 'b': base = LiteralBase::Binary; radix = 2; break;
            case 'o': base = LiteralBase::Octal; radix = 8; break;
            case 'd': base = LiteralBase::Decimal; radix = 10; break;
            case 'h': base = LiteralBase::Hex; radix = 16; break;
            default:
                error(l, c, "malformed literal: unknown base", text + peek());
                return tok(Tok::Number, text, l, c);
        }
        text.push_back(peek());
        advance();

        std::string value_digits;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
            if (peek() != '_') value_digits.push_back(peek());
            text.push_back(peek());
            advance();
        }
        if (value_digits.empty()) {
            error(l, c, "malformed literal: missing digits", text);
            return tok(Tok::Number, text, l, c);
        }

        std::uint64_t value = 0;
        auto [p, ec] = std::from_chars(value_digits.data(),
                                       value_digits.data() + value_digits.size(), value, radix);
        if (ec != std::errc() || p != value_digits.data() + value_digits.size()) {
            error(l, c, "malformed literal: bad digits for base", text);
            return tok(Tok::Number, text, l, c);
        }

        Token t = tok(Tok::Number, text, l, c);
        t.width = width;
        t.base = base;
        t.value = value;
        if (width && *width < 64 && value >= (std::uint64_t(1) << *width)) {
            error(l, c, "literal value does not fit in its declared width", text);
        }
        return t;
    }
};

// ---------------------------------------------------------------------------
// Parser

struct ParserBail {};

struct Parser {
    const std::vector<Token>& tokens;
    std::size_t pos = 0;
    std::vector<SyntaxDiagnostic>& diags;

    Parser(const std::vector<Token>& t, std::vector<SyntaxDiagnostic>& d)
        : tokens(t), diags(d) {}

    const Token& peek(std::size_t off = 0) const {
        const std::size_t i = std::min(pos + off, tokens.size() - 1);
        return tokens[i];
    }

    const Token& advance() {
        const Token& t = tokens[pos];
        if (pos + 1 < tokens.size()) ++pos;
        return t;
    }

    [[noreturn]] void fail(const Token& at, const std::string& message,
                           std::vector<std::string> expected = {}) {
        if (diags.size() < kMaxDiagnostics) {
            diags.push_back(
                SyntaxDiagnostic{at.line, at.col, message, at.text, std::move(expected)});
        }
        throw ParserBail{};
    }

    const Token& expect(Tok kind, const std::string& what) {
        if (peek().kind != kind) {
            fail(peek(), "unexpected token", {what});
        }
        return advance();
    }

    PropertyAst parse_property_and_assert() {
        PropertyAst ast;
        expect(Tok::KwProperty, "'property'");
        const Token& name_tok = peek();
        if (name_tok.kind != Tok::Ident) {
            fail(name_tok, "property name expected", {"identifier"});
        }
        ast.name = advance().text;
        expect(Tok::Semi, "';'");

        if (peek().kind == Tok::At) {
            advance();
            expect(Tok::LParen, "'('");
            const Token& edge_tok = peek();
            if (edge_tok.kind != Tok::Ident ||
                (edge_tok.text != "posedge" && edge_tok.text != "negedge")) {
                fail(edge_tok, "clock edge expected", {"'posedge'", "'negedge'"});
            }
            Clocking clk;
            clk.edge = advance().text == "posedge" ? ClockEdge::Posedge : ClockEdge::Negedge;
            const Token& sig_tok = peek();
            if (sig_tok.kind != Tok::Ident) {
                fail(sig_tok, "clock signal expected", {"identifier"});
            }
            clk.signal = advance().text;
            expect(Tok::RParen, "')'");
            ast.clocking = clk;
        }

        if (at_end_of_property()) {
            fail(peek(), "property body missing", {"expression"});
        }
        ast.body = parse_implication();
        if (peek().kind == Tok::Semi) {
            advance();
        }

        if (peek().kind == Tok::KwEndproperty) {
            advance();
        } else if (peek().kind == Tok::KwEnd && peek(1).kind == Tok::KwProperty) {
            advance();
            advance();
        } else {
            fail(peek(), "unterminated property", {"'endproperty'"});
        }

        expect(Tok::KwAssert, "'assert'");
        expect(Tok::KwProperty, "'property'");
        expect(Tok::LParen, "'('");
        const Token& assert_name = peek();
        if (assert_name.kind != Tok::Ident) {
            fail(assert_name, "asserted property name expected", {"identifier"});
        }
        if (assert_name.text != ast.name) {
            fail(assert_name,
                 "assert names '" + assert_name.text + "' but the property is named '" +
                     ast.name + "'",
                 {"'" + ast.name + "'"});
        }
        advance();
        expect(Tok::RParen, "')'");
        expect(Tok::Semi, "';'");
        if (peek().kind != Tok::Eof) {
            fail(peek(), "unexpected trailing input", {"end of input"});
        }
        return ast;
    }

    bool at_end_of_property() const {
        return peek().kind == Tok::KwEndproperty ||
               (peek().kind == Tok::KwEnd && peek(1).kind == Tok::KwProperty) ||
               peek().kind == Tok::Eof;
    }

    PropExpr parse_implication() {
        PropExpr lhs = parse_logical_or();
        const Tok k = peek().kind;
        if (k == Tok::ImplOverlap || k == Tok::ImplNonOverlap || k == Tok::ImplBoolean) {
            advance();
            ImplKind kind = k == Tok::ImplOverlap    ? ImplKind::Overlapping
                            : k == Tok::ImplNonOverlap ? ImplKind::NonOverlapping
                                                       : ImplKind::Boolean;
            PropExpr rhs = parse_implication(); // right-associative
            return PropExpr::implication(kind, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    template <typename Next>
    PropExpr parse_left_assoc(Next next, std::initializer_list<std::pair<Tok, BinaryOp>> ops) {
        PropExpr lhs = next();
        while (true) {
            bool matched = false;
            for (const auto& [tk, op] : ops) {
                if (peek().kind == tk) {
                    advance();
                    PropExpr rhs = next();
                    lhs = PropExpr::binary(op, std::move(lhs), std::move(rhs));
                    matched = true;
                    break;
                }
            }
            if (!matched) return lhs;
        }
    }

    PropExpr parse_logical_or() {
        return parse_left_assoc([this] { return parse_logical_and(); },
                                {{Tok::OrOr, BinaryOp::LogicalOr}});
    }
    PropExpr parse_logical_and() {
        return parse_left_assoc([this] { return parse_bit_or(); },
                                {{Tok::AndAnd, BinaryOp::LogicalAnd}});
    }
    PropExpr parse_bit_or() {
        return parse_left_assoc([this] { return parse_bit_xor(); },
                                {{Tok::Pipe, BinaryOp::BitOr}});
    }
    PropExpr parse_bit_xor() {
        return parse_left_assoc([this] { return parse_bit_and(); },
                                {{Tok::Caret, BinaryOp::BitXor}});
    }
    PropExpr parse_bit_and() {
        return parse_left_assoc([this] { return parse_equality(); },
                                {{Tok::Amp, BinaryOp::BitAnd}});
    }
    PropExpr parse_equality() {
        return parse_left_assoc([this] { return parse_relational(); },
                                {{Tok::EqEq, BinaryOp::Eq}, {Tok::BangEq, BinaryOp::Ne}});
    }
    PropExpr parse_relational() {
        return parse_left_assoc([this] { return parse_additive(); },
                                {{Tok::Lt, BinaryOp::Lt},
                                 {Tok::Le, BinaryOp::Le},
                                 {Tok::Gt, BinaryOp::Gt},
                                 {Tok::Ge, BinaryOp::Ge}});
    }
    PropExpr parse_additive() {
        return parse_left_assoc([this] { return parse_unary(); },
                                {{Tok::Plus, BinaryOp::Add}, {Tok::Minus, BinaryOp::Sub}});
    }

    PropExpr parse_unary() {
        const Tok k = peek().kind;
        if (k == Tok::Bang || k == Tok::Tilde || k == Tok::Minus) {
            advance();
            UnaryOp op = k == Tok::Bang ? UnaryOp::Not
                         : k == Tok::Tilde ? UnaryOp::BitNot
                                           : UnaryOp::Minus;
            return PropExpr::unary(op, parse_unary());
        }
        return parse_primary();
    }

    std::int64_t parse_index_value() {
        bool neg = false;
        if (peek().kind == Tok::Minus) {
            advance();
            neg = true;
        }
        const Token& t = peek();
        if (t.kind != Tok::Number || t.base != LiteralBase::UnsizedDecimal) {
            fail(t, "malformed slice: integer index expected", {"integer"});
        }
        advance();
        auto v = static_cast<std::int64_t>(t.value);
        return neg ? -v : v;
    }

    PropExpr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::LParen: {
                advance();
                PropExpr inner = parse_implication();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::SystemIdent: {
                if (t.text != "$past") {
                    fail(t, "unsupported system function", {"'$past'"});
                }
                advance();
                expect(Tok::LParen, "'('");
                PropExpr operand = parse_implication();
                std::optional<std::uint32_t> depth;
                if (peek().kind == Tok::Comma) {
                    advance();
                    const Token& d = peek();
                    if (d.kind != Tok::Number || d.base != LiteralBase::UnsizedDecimal ||
                        d.value == 0) {
                        fail(d, "positive integer depth expected", {"positive integer"});
                    }
                    depth = static_cast<std::uint32_t>(d.value);
                    advance();
                }
                expect(Tok::RParen, "')'");
                return PropExpr::past(std::move(operand), depth);
            }
            case Tok::Ident: {
                std::string name = advance().text;
                std::optional<IdentIndex> index;
                if (peek().kind == Tok::LBracket) {
                    const Token& open = advance();
                    IdentIndex idx;
                    idx.high = parse_index_value();
                    if (peek().kind == Tok::Colon) {
                        advance();
                        idx.low = parse_index_value();
                        if (idx.high < *idx.low) {
                            fail(open, "malformed slice: high bound is below low bound",
                                 {"high >= low"});
                        }
                    }
                    expect(Tok::RBracket, "']'");
                    index = idx;
                }
                return PropExpr::identifier(std::move(name), index);
            }
            case Tok::Number: {
                advance();
                return PropExpr::literal(t.width, t.base, t.value);
            }
            case Tok::Unknown:
                fail(t, "unsupported token", {"expression"});
            default:
                fail(t, "expression expected", {"expression"});
        }
    }
};

} // namespace

ParseResult parse_assertion(const std::string& source_text) {
    std::vector<SyntaxDiagnostic> diags;
    Lexer lexer(source_text, diags);
    std::vector<Token> tokens = lexer.lex();
    if (!diags.empty()) {
        return diags; // malformed literals aside, keep lexing errors fatal
    }
    Parser parser(tokens, diags);
    try {
        PropertyAst ast = parser.parse_property_and_assert();
        if (diags.empty()) {
            return ast;
        }
    } catch (const ParserBail&) {
    }
    if (diags.empty()) {
        diags.push_back(SyntaxDiagnostic{1, 1, "parse failed", "", {}});
    }
    if (diags.size() > kMaxDiagnostics) {
        diags.resize(kMaxDiagnostics);
    }
    return diags;
}

// ---------------------------------------------------------------------------
// Renderer

namespace {

int level_of(const PropExpr& e) {
    switch (e.kind) {
        case PropExpr::Kind::Implication: return 1;
        case PropExpr::Kind::Binary:
            switch (e.binary_op) {
                case BinaryOp::LogicalOr: return 2;
                case BinaryOp::LogicalAnd: return 3;
                case BinaryOp::BitOr: return 4;
                case BinaryOp::BitXor: return 5;
                case BinaryOp::BitAnd: return 6;
                case BinaryOp::Eq:
                case BinaryOp::Ne: return 7;
                case BinaryOp::Lt:
                case BinaryOp::Le:
                case BinaryOp::Gt:
                case BinaryOp::Ge: return 8;
                case BinaryOp::Add:
                case BinaryOp::Sub: return 9;
            }
            return 9;
        case PropExpr::Kind::Unary: return 10;
        case PropExpr::Kind::Past:
        case PropExpr::Kind::Ident:
        case PropExpr::Kind::Literal: return 11;
    }
    return 11;
}

const char* impl_token(ImplKind k) {
    switch (k) {
        case ImplKind::Overlapping: return "|->";
        case ImplKind::NonOverlapping: return "|=>";
        case ImplKind::Boolean: return "->";
    }
    return "|->";
}

const char* binary_token(BinaryOp op) {
    switch (op) {
        case BinaryOp::LogicalAnd: return "&&";
        case BinaryOp::LogicalOr: return "||";
        case BinaryOp::BitAnd: return "&";
        case BinaryOp::BitOr: return "|";
        case BinaryOp::BitXor: return "^";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
    }
    return "&&";
}

std::string digits_in_base(std::uint64_t value, int radix) {
    if (value == 0) return "0";
    static const char* digits = "0123456789abcdef";
    std::string out;
    while (value > 0) {
        out.push_back(digits[value % radix]);
        value /= radix;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

void render_expr(const PropExpr& e, std::string& out);

void render_child(const PropExpr& child, int parent_level, bool needs_parens_at_equal,
                  std::string& out) {
    const int cl = level_of(child);
    const bool parens = cl < parent_level || (cl == parent_level && needs_parens_at_equal);
    if (parens) out.push_back('(');
    render_expr(child, out);
    if (parens) out.push_back(')');
}

void render_expr(const PropExpr& e, std::string& out) {
    switch (e.kind) {
        case PropExpr::Kind::Implication:
            // right-associative: parenthesize an implication on the left
            render_child(e.children[0], 1, true, out);
            out += " ";
            out += impl_token(e.impl_kind);
            out += " ";
            render_child(e.children[1], 1, false, out);
            return;
        case PropExpr::Kind::Binary: {
            const int lvl = level_of(e);
            render_child(e.children[0], lvl, false, out);
            out += " ";
            out += binary_token(e.binary_op);
            out += " ";
            render_child(e.children[1], lvl, true, out);
            return;
        }
        case PropExpr::Kind::Unary: {
            switch (e.unary_op) {
                case UnaryOp::Not: out += "!"; break;
                case UnaryOp::BitNot: out += "~"; break;
                case UnaryOp::Minus: out += "-"; break;
            }
            // parenthesize anything that is not a plain primary
            render_child(e.children[0], 11, false, out);
            return;
        }
        case PropExpr::Kind::Past:
            out += "$past(";
            render_expr(e.children[0], out);
            if (e.past_depth) {
                out += ", ";
                out += std::to_string(*e.past_depth);
            }
            out += ")";
            return;
        case PropExpr::Kind::Ident:
            out += e.ident;
            if (e.index) {
                out += "[";
                out += std::to_string(e.index->high);
                if (e.index->low) {
                    out += ":";
                    out += std::to_string(*e.index->low);
                }
                out += "]";
            }
            return;
        case PropExpr::Kind::Literal: {
            if (e.literal_base == LiteralBase::UnsizedDecimal) {
                out += std::to_string(e.literal_value);
                return;
            }
            if (e.literal_width) {
                out += std::to_string(*e.literal_width);
            }
            out.push_back('\'');
            int radix = 10;
            switch (e.literal_base) {
                case LiteralBase::Binary: out.push_back('b'); radix = 2; break;
                case LiteralBase::Octal: out.push_back('o'); radix = 8; break;
                case LiteralBase::Decimal: out.push_back('d'); radix = 10; break;
                case LiteralBase::Hex: out.push_back('h'); radix = 16; break;
                case LiteralBase::UnsizedDecimal: break;
            }
            out += digits_in_base(e.literal_value, radix);
            return;
        }
    }
}

} // namespace

std::string render(const PropertyAst& ast) {
    std::string out;
    out += "property " + ast.name + ";\n";
    if (ast.clocking) {
        out += "@(";
        out += ast.clocking->edge == ClockEdge::Posedge ? "posedge" : "negedge";
        out += " " + ast.clocking->signal + ")\n";
    }
    render_expr(ast.body, out);
    out += ";\nendproperty\n";
    out += "assert property (" + ast.name + ");";
    return out;
}

// ---------------------------------------------------------------------------
// Suite helpers

std::vector<SuiteDiagnostics> validate_suite(AssertionSuite& suite) {
    std::vector<SuiteDiagnostics> report;
    std::set<std::string> seen;
    for (auto& assertion : suite.assertions) {
        std::vector<SyntaxDiagnostic> diags;

        ParseResult result = parse_assertion(assertion.source_text);
        if (auto* ast = std::get_if<PropertyAst>(&result)) {
            assertion.ast = *ast;
            if (ast->name != assertion.name) {
                diags.push_back(SyntaxDiagnostic{
                    1, 1,
                    "suite metadata names '" + assertion.name + "' but the property is named '" +
                        ast->name + "'",
                    ast->name,
                    {"'" + assertion.name + "'"}});
            }
        } else {
            assertion.ast.reset();
            diags = std::get<std::vector<SyntaxDiagnostic>>(std::move(result));
        }

        if (!seen.insert(assertion.name).second) {
            diags.push_back(SyntaxDiagnostic{1, 1,
                                             "duplicate property name '" + assertion.name + "'",
                                             assertion.name,
                                             {"unique property name"}});
        }
        if (!diags.empty()) {
            if (diags.size() > 20) diags.resize(20);
            report.push_back(SuiteDiagnostics{assertion.name, std::move(diags)});
        }
    }
    return report;
}

namespace {

void collect_signals(const PropExpr& e, std::set<std::string>& out) {
    if (e.kind == PropExpr::Kind::Ident) {
        out.insert(e.ident);
    }
    for (const auto& child : e.children) {
        collect_signals(child, out);
    }
}

} // namespace

std::set<std::string> extract_signals(const PropertyAst& ast) {
    std::set<std::string> out;
    if (ast.clocking) {
        out.insert(ast.clocking->signal);
    }
    collect_signals(ast.body, out);
    return out;
}

AssertionSuite parse_sva_text(const std::string& text, const std::string& design_name) {
    AssertionSuite suite;
    suite.design_name = design_name;

    std::vector<std::vector<std::string>> blocks;
    std::vector<std::string> current;
    for (const auto& line : split_lines(text)) {
        if (trim(line).empty()) {
            if (!current.empty()) {
                blocks.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(line);
        }
    }
    if (!current.empty()) blocks.push_back(std::move(current));

    static const std::regex name_re(R"(property\s+([A-Za-z_][A-Za-z0-9_]*))");
    int block_no = 0;
    for (auto& block : blocks) {
        ++block_no;
        Assertion a;
        std::size_t start = 0;
        if (!block.empty() && block[0].rfind("//", 0) == 0) {
            a.comment = trim(block[0].substr(2));
            start = 1;
        }
        std::string source;
        for (std::size_t i = start; i < block.size(); ++i) {
            if (i > start) source += "\n";
            source += block[i];
        }
        a.source_text = source;

        ParseResult result = parse_assertion(source);
        if (auto* ast = std::get_if<PropertyAst>(&result)) {
            a.name = ast->name;
            a.ast = std::move(*ast);
        } else {
            std::smatch m;
            a.name = std::regex_search(source, m, name_re) ? m[1].str()
                                                           : "block_" + std::to_string(block_no);
        }
        suite.assertions.push_back(std::move(a));
    }
    return suite;
}

AssertionSuite load_sva_file(const std::string& path, const std::string& design_name) {
    return parse_sva_text(read_file(path), design_name);
}

std::string render_sva_file(const AssertionSuite& suite) {
    std::string out;
    for (std::size_t i = 0; i < suite.assertions.size(); ++i) {
        const Assertion& a = suite.assertions[i];
        if (i > 0) out += "\n";
        if (a.comment) {
            out += "// " + *a.comment + "\n";
        }
        out += a.source_text + "\n";
    }
    return out;
}

} // namespace chiraag
