#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace chiraag {

enum class ImplKind { Overlapping, NonOverlapping, Boolean }; // |->  |=>  ->
enum class BinaryOp {
    LogicalAnd, LogicalOr,      // && ||
    BitAnd, BitOr, BitXor,      // & | ^
    Eq, Ne, Lt, Le, Gt, Ge,     // == != < <= > >=
    Add, Sub,                   // + -
};
enum class UnaryOp { Not, BitNot, Minus }; // ! ~ -
enum class LiteralBase { Binary, Octal, Decimal, Hex, UnsizedDecimal };
enum class ClockEdge { Posedge, Negedge };

struct IdentIndex {
    std::int64_t high = 0;
    std::optional<std::int64_t> low;
    bool operator==(const IdentIndex&) const = default;
};

// One node of a property expression tree. Children:
//   Implication -> [antecedent, consequent]
//   Binary      -> [lhs, rhs]
//   Unary, Past -> [operand]
struct PropExpr {
    enum class Kind { Implication, Binary, Unary, Past, Ident, Literal };

    Kind kind = Kind::Ident;
    ImplKind impl_kind = ImplKind::Overlapping;
    BinaryOp binary_op = BinaryOp::LogicalAnd;
    UnaryOp unary_op = UnaryOp::Not;
    std::optional<std::uint32_t> past_depth;
    std::string ident;
    std::optional<IdentIndex> index;
    std::optional<std::uint32_t> literal_width;
    LiteralBase literal_base = LiteralBase::UnsizedDecimal;
    std::uint64_t literal_value = 0;
    std::vector<PropExpr> children;

    bool operator==(const PropExpr&) const = default;

    static PropExpr implication(ImplKind kind, PropExpr antecedent, PropExpr consequent);
    static PropExpr binary(BinaryOp op, PropExpr lhs, PropExpr rhs);
    static PropExpr unary(UnaryOp op, PropExpr operand);
    static PropExpr past(PropExpr operand, std::optional<std::uint32_t> depth = std::nullopt);
    static PropExpr identifier(std::string name, std::optional<IdentIndex> index = std::nullopt);
    static PropExpr literal(std::optional<std::uint32_t> width, LiteralBase base,
                            std::uint64_t value);
};

struct Clocking {
    ClockEdge edge = ClockEdge::Posedge;
    std::string signal;
    bool operator==(const Clocking&) const = default;
};

struct PropertyAst {
    std::string name;
    std::optional<Clocking> clocking;
    PropExpr body;
    bool operator==(const PropertyAst&) const = default;
};

struct SyntaxDiagnostic {
    int line = 1;
    int column = 1;
    std::string message;
    std::string found;
    std::vector<std::string> expected;
};

/// `line L, col C: MESSAGE (found 'X', expected Y)` — one line, bit-exact.
std::string render_diagnostic(const SyntaxDiagnostic& d);

// The same text without the `line L, col C: ` prefix.
std::string render_diagnostic_body(const SyntaxDiagnostic& d);

struct AssertionOrigin {
    enum class Kind { InitialGeneration, Repair };
    Kind kind = Kind::InitialGeneration;
    std::uint32_t iteration = 0; // meaningful for Repair only
    bool operator==(const AssertionOrigin&) const = default;
};

struct Assertion {
    std::string name;
    std::string source_text;
    std::optional<std::string> comment;
    std::optional<PropertyAst> ast; // present iff the last parse succeeded
    AssertionOrigin origin;

    bool operator==(const Assertion&) const = default;
};

struct AssertionSuite {
    std::string design_name;
    std::vector<Assertion> assertions;

    const Assertion* find(const std::string& name) const;
    bool operator==(const AssertionSuite&) const = default;
};

using ParseResult = std::variant<PropertyAst, std::vector<SyntaxDiagnostic>>;

// Parses one `property ... endproperty` block plus its `assert property (name);`
// statement. Diagnostics are returned, never thrown; at most 20 per call.
ParseResult parse_assertion(const std::string& source_text);

// Canonical pretty-printing; parse_assertion(render(ast)) == ast.
std::string render(const PropertyAst& ast);

struct SuiteDiagnostics {
    std::string assertion_name;
    std::vector<SyntaxDiagnostic> diagnostics;
};

// Parses every assertion (updating `ast` in place) and reports entries that
// have diagnostics, including duplicate-name and assert/property mismatches.
std::vector<SuiteDiagnostics> validate_suite(AssertionSuite& suite);

std::set<std::string> extract_signals(const PropertyAst& ast);

// .sva files: assertion blocks separated by blank lines; a leading `//`
// comment line becomes the assertion's comment.
AssertionSuite load_sva_file(const std::string& path, const std::string& design_name);
AssertionSuite parse_sva_text(const std::string& text, const std::string& design_name);
std::string render_sva_file(const AssertionSuite& suite);

} // namespace chiraag
