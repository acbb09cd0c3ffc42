#include "masader/query.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>

#include "masader/error.hpp"

namespace masader::query {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::IntLit: return "integer";
    case TokenKind::FloatLit: return "float";
    case TokenKind::StrLit: return "string";
    case TokenKind::CmpOp: return "comparison operator";
    case TokenKind::And: return "'and'";
    case TokenKind::Or: return "'or'";
    case TokenKind::Not: return "'not'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
  }
  return "token";
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "==";
}

namespace {

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

[[noreturn]] void fail(ErrorCode code, std::size_t offset, const std::string& message) {
  throw Error(code, message + " at offset " + std::to_string(offset), offset);
}

Token lex_number(std::string_view in, std::size_t start) {
  std::size_t i = start;
  if (in[i] == '-') ++i;
  while (i < in.size() && is_digit(in[i])) ++i;
  bool is_float = false;
  if (i < in.size() && in[i] == '.') {
    if (i + 1 >= in.size() || !is_digit(in[i + 1])) {
      fail(ErrorCode::SyntaxError, i, "expected digits after decimal point");
    }
    is_float = true;
    ++i;
    while (i < in.size() && is_digit(in[i])) ++i;
  }
  if (i < in.size() && (in[i] == 'e' || in[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < in.size() && (in[j] == '+' || in[j] == '-')) ++j;
    if (j < in.size() && is_digit(in[j])) {
      is_float = true;
      i = j;
      while (i < in.size() && is_digit(in[i])) ++i;
    }
  }
  Token t;
  t.offset = start;
  t.text = std::string(in.substr(start, i - start));
  const char* first = in.data() + start;
  const char* last = in.data() + i;
  if (is_float) {
    t.kind = TokenKind::FloatLit;
    auto [ptr, ec] = std::from_chars(first, last, t.float_value);
    if (ec != std::errc() || ptr != last || !std::isfinite(t.float_value)) {
      fail(ErrorCode::SyntaxError, start, "numeric literal out of range");
    }
  } else {
    t.kind = TokenKind::IntLit;
    auto [ptr, ec] = std::from_chars(first, last, t.int_value);
    if (ec != std::errc() || ptr != last) {
      fail(ErrorCode::SyntaxError, start, "integer literal out of range");
    }
  }
  return t;
}

}  // namespace

std::vector<Token> tokenize(std::string_view in) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < in.size()) {
    char c = in[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    Token t;
    t.offset = start;

    if (is_ident_start(c)) {
      while (i < in.size() && is_ident_char(in[i])) ++i;
      t.text = std::string(in.substr(start, i - start));
      if (t.text == "and") {
        t.kind = TokenKind::And;
      } else if (t.text == "or") {
        t.kind = TokenKind::Or;
      } else if (t.text == "not") {
        t.kind = TokenKind::Not;
      } else {
        t.kind = TokenKind::Ident;
        t.value = t.text;
      }
    } else if (c == '`') {
      auto close = in.find('`', start + 1);
      if (close == std::string_view::npos) {
        fail(ErrorCode::UnterminatedBacktick, start, "unterminated backtick identifier");
      }
      i = close + 1;
      t.kind = TokenKind::Ident;
      t.text = std::string(in.substr(start, i - start));
      t.value = std::string(in.substr(start + 1, close - start - 1));
    } else if (c == '\'' || c == '"') {
      ++i;
      bool closed = false;
      while (i < in.size()) {
        if (in[i] == '\\' && i + 1 < in.size()) {
          t.value.push_back(in[i + 1]);
          i += 2;
          continue;
        }
        if (in[i] == c) {
          closed = true;
          ++i;
          break;
        }
        t.value.push_back(in[i]);
        ++i;
      }
      if (!closed) fail(ErrorCode::UnterminatedString, start, "unterminated string literal");
      t.kind = TokenKind::StrLit;
      t.text = std::string(in.substr(start, i - start));
    } else if (is_digit(c) || (c == '-' && i + 1 < in.size() && is_digit(in[i + 1]))) {
      t = lex_number(in, start);
      i = start + t.text.size();
    } else if (c == '(' || c == ')') {
      t.kind = c == '(' ? TokenKind::LParen : TokenKind::RParen;
      t.text = std::string(1, c);
      ++i;
    } else if (c == '=' || c == '!' || c == '<' || c == '>') {
      bool has_eq = i + 1 < in.size() && in[i + 1] == '=';
      t.kind = TokenKind::CmpOp;
      if (c == '=') {
        if (!has_eq) fail(ErrorCode::SyntaxError, start, "expected '=='");
        t.op = CmpOp::Eq;
      } else if (c == '!') {
        if (!has_eq) fail(ErrorCode::SyntaxError, start, "expected '!='");
        t.op = CmpOp::Ne;
      } else if (c == '<') {
        t.op = has_eq ? CmpOp::Le : CmpOp::Lt;
      } else {
        t.op = has_eq ? CmpOp::Ge : CmpOp::Gt;
      }
      i += has_eq ? 2 : 1;
      t.text = std::string(in.substr(start, i - start));
    } else {
      fail(ErrorCode::IllegalCharacter, start,
           "illegal character '" + std::string(1, c) + "'");
    }
    tokens.push_back(std::move(t));
  }
  return tokens;
}

FilterExpr FilterExpr::compare(Comparison c) {
  FilterExpr e;
  e.kind = Kind::Comparison;
  e.comparison = std::move(c);
  return e;
}

FilterExpr FilterExpr::all_of(std::vector<FilterExpr> children) {
  FilterExpr e;
  e.kind = Kind::And;
  e.children = std::move(children);
  return e;
}

FilterExpr FilterExpr::any_of(std::vector<FilterExpr> children) {
  FilterExpr e;
  e.kind = Kind::Or;
  e.children = std::move(children);
  return e;
}

FilterExpr FilterExpr::negate(FilterExpr child) {
  FilterExpr e;
  e.kind = Kind::Not;
  e.children.push_back(std::move(child));
  return e;
}

namespace {

// Runtime view of one side of a comparison.
using Resolved = std::variant<Missing, std::int64_t, double, const std::string*, const TextList*>;

Resolved resolve(const Operand& operand, const DatasetRecord* record) {
  if (const auto* lit = std::get_if<Literal>(&operand)) {
    return std::visit(
        [](const auto& x) -> Resolved {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, std::string>) {
            return &x;
          } else {
            return x;
          }
        },
        *lit);
  }
  const auto& ref = std::get<FeatureRef>(operand);
  const auto& v = record->values.at(ref.feature);
  if (const auto* s = std::get_if<std::string>(&v)) return s;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* l = std::get_if<TextList>(&v)) return l;
  return Missing{};
}

std::partial_ordering compare_int_double(std::int64_t a, double b) {
  if (std::isnan(b)) return std::partial_ordering::unordered;
  if (b >= 9223372036854775808.0) return std::partial_ordering::less;
  if (b < -9223372036854775808.0) return std::partial_ordering::greater;
  double fb = std::floor(b);
  auto ib = static_cast<std::int64_t>(fb);
  if (a < ib) return std::partial_ordering::less;
  if (a > ib) return std::partial_ordering::greater;
  return b > fb ? std::partial_ordering::less : std::partial_ordering::equivalent;
}

bool holds(CmpOp op, std::partial_ordering ord) {
  switch (op) {
    case CmpOp::Eq: return ord == 0;
    case CmpOp::Ne: return ord != 0;
    case CmpOp::Lt: return ord < 0;
    case CmpOp::Le: return ord <= 0;
    case CmpOp::Gt: return ord > 0;
    case CmpOp::Ge: return ord >= 0;
  }
  return false;
}

bool is_ordering(CmpOp op) { return op != CmpOp::Eq && op != CmpOp::Ne; }

[[noreturn]] void type_mismatch(const Comparison& c, const std::string& what) {
  throw Error(ErrorCode::TypeMismatch,
              "cannot apply '" + std::string(to_string(c.op)) + "' to " + what + " at offset " +
                  std::to_string(c.offset),
              c.offset);
}

std::string describe_resolved(const Resolved& r) {
  switch (r.index()) {
    case 1:
    case 2: return "a number";
    case 3: return "text";
    case 4: return "a text list";
  }
  return "a missing value";
}

bool compare_resolved(const Comparison& c, const Resolved& l, const Resolved& r) {
  if (std::holds_alternative<Missing>(l) || std::holds_alternative<Missing>(r)) return false;

  auto numeric = [](const Resolved& x) { return x.index() == 1 || x.index() == 2; };
  if (numeric(l) && numeric(r)) {
    std::partial_ordering ord = std::partial_ordering::unordered;
    if (l.index() == 1 && r.index() == 1) {
      ord = std::get<std::int64_t>(l) <=> std::get<std::int64_t>(r);
    } else if (l.index() == 1) {
      ord = compare_int_double(std::get<std::int64_t>(l), std::get<double>(r));
    } else if (r.index() == 1) {
      ord = 0 <=> compare_int_double(std::get<std::int64_t>(r), std::get<double>(l));
    } else {
      ord = std::get<double>(l) <=> std::get<double>(r);
    }
    return holds(c.op, ord);
  }

  const auto* ls = std::get_if<const std::string*>(&l);
  const auto* rs = std::get_if<const std::string*>(&r);
  if (ls && rs) return holds(c.op, (**ls).compare(**rs) <=> 0);

  const auto* ll = std::get_if<const TextList*>(&l);
  const auto* rl = std::get_if<const TextList*>(&r);
  if ((ll && rs) || (ls && rl)) {
    if (is_ordering(c.op)) type_mismatch(c, "a text list");
    const TextList& list = ll ? **ll : **rl;
    const std::string& needle = ls ? **ls : **rs;
    bool member = std::find(list.begin(), list.end(), needle) != list.end();
    return c.op == CmpOp::Eq ? member : !member;
  }
  if (ll && rl) {
    if (is_ordering(c.op)) type_mismatch(c, "a text list");
    bool same = **ll == **rl;
    return c.op == CmpOp::Eq ? same : !same;
  }
  type_mismatch(c, describe_resolved(l) + " and " + describe_resolved(r));
}

// Static operand categories used for type checking.
enum class Category { Number, Text, List };

Category category_of(const Operand& operand) {
  if (const auto* ref = std::get_if<FeatureRef>(&operand)) {
    switch (ref->kind) {
      case FeatureKind::Integer: return Category::Number;
      case FeatureKind::Text: return Category::Text;
      case FeatureKind::TextList: return Category::List;
    }
  }
  const auto& lit = std::get<Literal>(operand);
  return std::holds_alternative<std::string>(lit) ? Category::Text : Category::Number;
}

std::string_view describe(Category c) {
  switch (c) {
    case Category::Number: return "a number";
    case Category::Text: return "text";
    case Category::List: return "a text list";
  }
  return "a value";
}

void type_check(const Comparison& c) {
  auto l = category_of(c.lhs);
  auto r = category_of(c.rhs);
  bool ok = false;
  if (l == r) {
    ok = l != Category::List || !is_ordering(c.op);
  } else if ((l == Category::List && r == Category::Text) ||
             (l == Category::Text && r == Category::List)) {
    // Only a literal can stand for a list element.
    bool literal_side = std::holds_alternative<Literal>(l == Category::List ? c.rhs : c.lhs);
    ok = literal_side && !is_ordering(c.op);
  }
  if (!ok) {
    type_mismatch(c, std::string(describe(l)) + " and " + std::string(describe(r)));
  }
}

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, const Schema& schema)
      : tokens_(tokens), schema_(schema) {}

  FilterExpr run() {
    if (tokens_.empty()) fail(ErrorCode::SyntaxError, 0, "empty query");
    auto expr = or_expr();
    if (pos_ < tokens_.size()) {
      const auto& t = tokens_[pos_];
      fail(ErrorCode::SyntaxError, t.offset,
           "expected 'and', 'or' or end of query, found " + quoted(t));
    }
    return expr;
  }

 private:
  static constexpr std::size_t kMaxDepth = 256;

  const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }
  bool at(TokenKind kind) const { return peek() && peek()->kind == kind; }

  std::size_t end_offset() const {
    if (tokens_.empty()) return 0;
    const auto& last = tokens_.back();
    return last.offset + last.text.size();
  }

  static std::string quoted(const Token& t) { return "'" + t.text + "'"; }

  [[noreturn]] void expected(const std::string& what) const {
    if (const auto* t = peek()) {
      fail(ErrorCode::SyntaxError, t->offset, "expected " + what + ", found " + quoted(*t));
    }
    fail(ErrorCode::SyntaxError, end_offset(), "expected " + what + ", found end of query");
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxDepth) {
        const auto* t = parser.peek();
        fail(ErrorCode::SyntaxError, t ? t->offset : parser.end_offset(), "query nested too deeply");
      }
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  FilterExpr or_expr() {
    DepthGuard guard(*this);
    std::vector<FilterExpr> items;
    items.push_back(and_expr());
    while (at(TokenKind::Or)) {
      ++pos_;
      items.push_back(and_expr());
    }
    if (items.size() == 1) return std::move(items.front());
    return FilterExpr::any_of(std::move(items));
  }

  FilterExpr and_expr() {
    std::vector<FilterExpr> items;
    items.push_back(not_expr());
    while (at(TokenKind::And)) {
      ++pos_;
      items.push_back(not_expr());
    }
    if (items.size() == 1) return std::move(items.front());
    return FilterExpr::all_of(std::move(items));
  }

  FilterExpr not_expr() {
    DepthGuard guard(*this);
    if (at(TokenKind::Not)) {
      ++pos_;
      return FilterExpr::negate(not_expr());
    }
    return primary();
  }

  FilterExpr primary() {
    if (at(TokenKind::LParen)) {
      ++pos_;
      auto inner = or_expr();
      if (!at(TokenKind::RParen)) expected("')'");
      ++pos_;
      return inner;
    }
    return comparison();
  }

  FilterExpr comparison() {
    Comparison c;
    c.lhs = operand();
    if (!at(TokenKind::CmpOp)) expected("comparison operator");
    c.op = peek()->op;
    c.offset = peek()->offset;
    ++pos_;
    c.rhs = operand();
    type_check(c);
    if (std::holds_alternative<Literal>(c.lhs) && std::holds_alternative<Literal>(c.rhs)) {
      c.folded = compare_resolved(c, resolve(c.lhs, nullptr), resolve(c.rhs, nullptr));
    }
    return FilterExpr::compare(std::move(c));
  }

  Operand operand() {
    const auto* t = peek();
    if (!t) expected("feature name or literal");
    switch (t->kind) {
      case TokenKind::Ident: {
        auto f = schema_.find(t->value);
        if (!f) {
          throw Error(ErrorCode::UnknownFeature,
                      "unknown feature '" + t->value + "' at offset " + std::to_string(t->offset),
                      t->offset);
        }
        ++pos_;
        return FeatureRef{t->value, *f, schema_[*f].kind};
      }
      case TokenKind::IntLit: ++pos_; return Literal{t->int_value};
      case TokenKind::FloatLit: ++pos_; return Literal{t->float_value};
      case TokenKind::StrLit: ++pos_; return Literal{t->value};
      default: expected("feature name or literal");
    }
  }

  const std::vector<Token>& tokens_;
  const Schema& schema_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

bool is_bare_identifier(std::string_view name) {
  if (name.empty() || !is_ident_start(name.front())) return false;
  for (char c : name) {
    if (!is_ident_char(c)) return false;
  }
  return name != "and" && name != "or" && name != "not";
}

std::string render_operand(const Operand& operand) {
  if (const auto* ref = std::get_if<FeatureRef>(&operand)) {
    return is_bare_identifier(ref->name) ? ref->name : "`" + ref->name + "`";
  }
  const auto& lit = std::get<Literal>(operand);
  if (const auto* i = std::get_if<std::int64_t>(&lit)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&lit)) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *d);
    std::string s(buf, ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
  }
  std::string out = "'";
  for (char c : std::get<std::string>(lit)) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

}  // namespace

FilterExpr parse(const std::vector<Token>& tokens, const Schema& schema) {
  return Parser(tokens, schema).run();
}

FilterExpr parse(std::string_view input, const Schema& schema) {
  return parse(tokenize(input), schema);
}

bool evaluate(const FilterExpr& expr, const DatasetRecord& record) {
  switch (expr.kind) {
    case FilterExpr::Kind::Comparison: {
      const auto& c = expr.comparison;
      if (c.folded) return *c.folded;
      return compare_resolved(c, resolve(c.lhs, &record), resolve(c.rhs, &record));
    }
    case FilterExpr::Kind::And:
      for (const auto& child : expr.children) {
        if (!evaluate(child, record)) return false;
      }
      return true;
    case FilterExpr::Kind::Or:
      for (const auto& child : expr.children) {
        if (evaluate(child, record)) return true;
      }
      return false;
    case FilterExpr::Kind::Not:
      return !evaluate(expr.children.front(), record);
  }
  return false;
}

std::string render(const FilterExpr& expr) {
  auto wrapped = [](const FilterExpr& child) {
    bool group = child.kind == FilterExpr::Kind::And || child.kind == FilterExpr::Kind::Or;
    return group ? "(" + render(child) + ")" : render(child);
  };
  switch (expr.kind) {
    case FilterExpr::Kind::Comparison: {
      const auto& c = expr.comparison;
      return render_operand(c.lhs) + " " + std::string(to_string(c.op)) + " " +
             render_operand(c.rhs);
    }
    case FilterExpr::Kind::And:
    case FilterExpr::Kind::Or: {
      std::string joiner = expr.kind == FilterExpr::Kind::And ? " and " : " or ";
      std::string out;
      for (std::size_t i = 0; i < expr.children.size(); ++i) {
        if (i) out += joiner;
        out += wrapped(expr.children[i]);
      }
      return out;
    }
    case FilterExpr::Kind::Not:
      return "not " + wrapped(expr.children.front());
  }
  return {};
}

std::vector<const DatasetRecord*> filter_records(const CatalogSnapshot& snapshot,
                                                 std::string_view query) {
  std::vector<const DatasetRecord*> out;
  if (trim(query).empty()) {
    out.reserve(snapshot.records().size());
    for (const auto& r : snapshot.records()) out.push_back(&r);
    return out;
  }
  auto expr = parse(query, snapshot.schema());
  for (const auto& r : snapshot.records()) {
    if (evaluate(expr, r)) out.push_back(&r);
  }
  return out;
}

}  // namespace masader::query
