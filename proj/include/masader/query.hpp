#pragma once

// Filtration query language.
//
//   query      := or_expr
//   or_expr    := and_expr ("or" and_expr)*
//   and_expr   := not_expr ("and" not_expr)*
//   not_expr   := "not" not_expr | primary
//   primary    := "(" or_expr ")" | comparison
//   comparison := operand cmp_op operand
//   operand    := identifier | `quoted identifier` | integer | float | 'string' | "string"
//   cmp_op     := == | != | < | <= | > | >=
//
// Keywords are lowercase. Identifiers name schema features. A chain of the
// same connective at one nesting level becomes a single n-ary node.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "masader/catalog.hpp"

namespace masader::query {

enum class TokenKind { Ident, IntLit, FloatLit, StrLit, CmpOp, And, Or, Not, LParen, RParen };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(TokenKind kind);
std::string_view to_string(CmpOp op);

struct Token {
  TokenKind kind = TokenKind::Ident;
  std::string text;  // lexeme exactly as written, quotes included
  std::size_t offset = 0;
  std::string value;  // decoded identifier or string contents
  std::int64_t int_value = 0;
  double float_value = 0.0;
  CmpOp op = CmpOp::Eq;
};

// Throws UnterminatedString, UnterminatedBacktick, IllegalCharacter, or
// SyntaxError for a malformed operator or numeric literal.
std::vector<Token> tokenize(std::string_view input);

struct FeatureRef {
  std::string name;
  std::size_t feature = 0;  // schema position
  FeatureKind kind = FeatureKind::Text;

  bool operator==(const FeatureRef& o) const { return name == o.name; }
};

using Literal = std::variant<std::int64_t, double, std::string>;
using Operand = std::variant<FeatureRef, Literal>;

struct Comparison {
  Operand lhs;
  CmpOp op = CmpOp::Eq;
  Operand rhs;
  std::size_t offset = 0;  // of the operator token
  // Set when both sides are literals.
  std::optional<bool> folded;

  bool operator==(const Comparison& o) const {
    return lhs == o.lhs && op == o.op && rhs == o.rhs;
  }
};

struct FilterExpr {
  enum class Kind { Comparison, And, Or, Not };

  Kind kind = Kind::Comparison;
  Comparison comparison;              // Kind::Comparison only
  std::vector<FilterExpr> children;  // And/Or: two or more; Not: exactly one

  static FilterExpr compare(Comparison c);
  static FilterExpr all_of(std::vector<FilterExpr> children);
  static FilterExpr any_of(std::vector<FilterExpr> children);
  static FilterExpr negate(FilterExpr child);

  // Structural equality; source offsets are ignored.
  bool operator==(const FilterExpr&) const = default;
};

// Builds the AST and resolves/type-checks every feature reference against
// the schema. Throws SyntaxError, UnknownFeature or TypeMismatch.
FilterExpr parse(const std::vector<Token>& tokens, const Schema& schema);
FilterExpr parse(std::string_view input, const Schema& schema);

// Throws TypeMismatch if the record holds a value of an unexpected kind.
bool evaluate(const FilterExpr& expr, const DatasetRecord& record);

// Canonical text that parses back to a structurally identical expression.
std::string render(const FilterExpr& expr);

// Records matching the query in source order. An empty or blank query
// matches everything.
std::vector<const DatasetRecord*> filter_records(const CatalogSnapshot& snapshot,
                                                 std::string_view query);

}  // namespace masader::query
