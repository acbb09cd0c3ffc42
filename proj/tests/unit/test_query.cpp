#include <gtest/gtest.h>

#include "fixture.hpp"
#include "masader/error.hpp"
#include "masader/query.hpp"
#include "query_oracle.hpp"

namespace {

using namespace masader;
using namespace masader::query;

Schema query_schema() {
  return Schema({{"Name", FeatureKind::Text, ","},
                 {"Year", FeatureKind::Integer, ","},
                 {"Unit", FeatureKind::Text, ","},
                 {"Tasks", FeatureKind::TextList, ","},
                 {"Ethical Risks", FeatureKind::Text, ","}});
}

struct Failure {
  ErrorCode code;
  std::optional<std::size_t> offset;
};

Failure failure_of(std::string_view q) {
  try {
    parse(q, query_schema());
  } catch (const Error& e) {
    return {e.code(), e.offset()};
  }
  ADD_FAILURE() << "query parsed: " << q;
  return {ErrorCode::ValidationError, std::nullopt};
}

FilterExpr cmp(std::string feature, CmpOp op, Literal lit) {
  Comparison c;
  c.lhs = FeatureRef{std::move(feature), 0, FeatureKind::Text};
  c.op = op;
  c.rhs = std::move(lit);
  return FilterExpr::compare(std::move(c));
}

TEST(Tokenize, DocumentedQuery) {
  auto toks = tokenize("Year>2003 and Year<2008 and Unit=='tokens'");
  std::vector<TokenKind> kinds;
  std::vector<std::string> texts;
  for (const auto& t : toks) {
    kinds.push_back(t.kind);
    texts.push_back(t.text);
  }
  using K = TokenKind;
  EXPECT_EQ(kinds, (std::vector<K>{K::Ident, K::CmpOp, K::IntLit, K::And, K::Ident, K::CmpOp,
                                   K::IntLit, K::And, K::Ident, K::CmpOp, K::StrLit}));
  EXPECT_EQ(texts, (std::vector<std::string>{"Year", ">", "2003", "and", "Year", "<", "2008", "and",
                                             "Unit", "==", "'tokens'"}));
  EXPECT_EQ(toks[2].int_value, 2003);
  EXPECT_EQ(toks[10].value, "tokens");
  EXPECT_EQ(toks[4].offset, 14u);
}

TEST(Tokenize, QuotingAndNumbers) {
  auto toks = tokenize("`Ethical Risks` != \"it's \\\"x\\\"\" or Year >= -2.5e1");
  ASSERT_EQ(toks.size(), 7u);
  EXPECT_EQ(toks[0].value, "Ethical Risks");
  EXPECT_EQ(toks[2].value, "it's \"x\"");
  EXPECT_EQ(toks[6].kind, TokenKind::FloatLit);
  EXPECT_DOUBLE_EQ(toks[6].float_value, -25.0);
}

TEST(Tokenize, LexicalErrors) {
  EXPECT_EQ(failure_of("Name == 'abc").code, ErrorCode::UnterminatedString);
  EXPECT_EQ(failure_of("Name == 'abc").offset, 8u);
  EXPECT_EQ(failure_of("`Name == 1").code, ErrorCode::UnterminatedBacktick);
  EXPECT_EQ(failure_of("Year == 1 & Year == 2").code, ErrorCode::IllegalCharacter);
  EXPECT_EQ(failure_of("Year == 1 & Year == 2").offset, 10u);
  EXPECT_EQ(failure_of("Year = 1").code, ErrorCode::SyntaxError);
}

TEST(Parse, DocumentedQueryShape) {
  auto e = parse("Year>2003 and Year<2008 and Unit=='tokens'", query_schema());
  auto want = FilterExpr::all_of({cmp("Year", CmpOp::Gt, std::int64_t{2003}),
                                  cmp("Year", CmpOp::Lt, std::int64_t{2008}),
                                  cmp("Unit", CmpOp::Eq, std::string("tokens"))});
  EXPECT_EQ(e, want);
}

TEST(Parse, NotBindsTighterThanAndWhichBindsTighterThanOr) {
  auto e = parse("not Name == 'a' and Year > 1 or Unit == 'b'", query_schema());
  ASSERT_EQ(e.kind, FilterExpr::Kind::Or);
  ASSERT_EQ(e.children[0].kind, FilterExpr::Kind::And);
  EXPECT_EQ(e.children[0].children[0].kind, FilterExpr::Kind::Not);

  auto g = parse("not (Unit=='Free' or Year<2010)", query_schema());
  ASSERT_EQ(g.kind, FilterExpr::Kind::Not);
  EXPECT_EQ(g.children[0].kind, FilterExpr::Kind::Or);
}

TEST(Parse, SyntaxErrorOffsets) {
  auto f = failure_of("Year >== 2003");
  EXPECT_EQ(f.code, ErrorCode::SyntaxError);
  EXPECT_EQ(f.offset, 7u);
  EXPECT_EQ(failure_of("Year>>2003").offset, 5u);
  EXPECT_EQ(failure_of("").code, ErrorCode::SyntaxError);
  EXPECT_EQ(failure_of("(Year > 1").offset, 9u);
  EXPECT_EQ(failure_of("Year > 1 Year").offset, 9u);
  EXPECT_EQ(failure_of("Year > 1 and").offset, 12u);
  EXPECT_EQ(failure_of("and Year > 1").offset, 0u);
}

TEST(Parse, UnknownFeatureAndTypeErrors) {
  auto u = failure_of("Yeer > 1");
  EXPECT_EQ(u.code, ErrorCode::UnknownFeature);
  EXPECT_EQ(u.offset, 0u);
  auto t = failure_of("Name > 3");
  EXPECT_EQ(t.code, ErrorCode::TypeMismatch);
  EXPECT_EQ(t.offset, 5u);
  EXPECT_EQ(failure_of("Tasks < 'a'").code, ErrorCode::TypeMismatch);
  EXPECT_EQ(failure_of("Year == 'a'").code, ErrorCode::TypeMismatch);
  EXPECT_EQ(failure_of("Tasks == Name").code, ErrorCode::TypeMismatch);
}

TEST(Parse, DeepNestingIsRejectedNotCrashing) {
  std::string deep(5000, '(');
  deep += "Year > 1";
  deep += std::string(5000, ')');
  EXPECT_EQ(failure_of(deep).code, ErrorCode::SyntaxError);
  std::string nots;
  for (int i = 0; i < 5000; ++i) nots += "not ";
  EXPECT_EQ(failure_of(nots + "Year > 1").code, ErrorCode::SyntaxError);
}

class EvaluateTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::vector<DatasetRecord> recs;
    recs.push_back({0, {Value(std::string("Shami")), Value(std::int64_t{2018}),
                        Value(std::string("sentences")), Value(TextList{"a", "b"}),
                        Value(std::string("Low"))}});
    recs.push_back({1, {Value(std::string("X")), Value(Missing{}), Value(Missing{}),
                        Value(Missing{}), Value(Missing{})}});
    recs.push_back({2, {Value(std::string("Y")), Value(std::int64_t{2005}),
                        Value(std::string("tokens")), Value(TextList{}), Value(std::string("High"))}});
    snap = std::make_shared<const CatalogSnapshot>(CatalogSnapshot::Meta{}, query_schema(), recs);
  }

  std::vector<std::size_t> run(std::string_view q) { return oracle::positions(filter_records(*snap, q)); }

  SnapshotPtr snap;
};

TEST_F(EvaluateTest, MissingComparesFalseEvenForNotEqual) {
  EXPECT_EQ(run("Year != 2018"), (std::vector<std::size_t>{2}));
  EXPECT_EQ(run("not Year == 2018"), (std::vector<std::size_t>{1, 2}));
}

TEST_F(EvaluateTest, ListMembership) {
  EXPECT_EQ(run("Tasks == 'a'"), (std::vector<std::size_t>{0}));
  EXPECT_EQ(run("'b' == Tasks"), (std::vector<std::size_t>{0}));
  EXPECT_EQ(run("Tasks != 'a'"), (std::vector<std::size_t>{2}));
}

TEST_F(EvaluateTest, NumericAndTextOrdering) {
  EXPECT_EQ(run("Year > 2003 and Year < 2008 and Unit == 'tokens'"), (std::vector<std::size_t>{2}));
  EXPECT_EQ(run("Year >= 2017.5"), (std::vector<std::size_t>{0}));
  EXPECT_EQ(run("Year == 2018.0"), (std::vector<std::size_t>{0}));
  EXPECT_EQ(run("Name < 'Z'"), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(run("Name > 'X'"), (std::vector<std::size_t>{2}));
  EXPECT_EQ(run("`Ethical Risks` == 'High'"), (std::vector<std::size_t>{2}));
}

TEST_F(EvaluateTest, BlankQueryReturnsAllAndLiteralComparisonsFold) {
  EXPECT_EQ(run("  "), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(run("1 < 2"), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(run("'b' < 'a'").empty());
  auto e = parse("1 < 2", query_schema());
  EXPECT_EQ(e.comparison.folded, std::optional<bool>(true));
}

TEST(Evaluate, LargeIntegersCompareExactlyAgainstDoubles) {
  Schema s({{"N", FeatureKind::Integer, ","}});
  CatalogSnapshot snap({}, s, {{0, {Value(std::int64_t{9007199254740993})}}});
  EXPECT_EQ(filter_records(snap, "N > 9007199254740992.0").size(), 1u);
  EXPECT_EQ(filter_records(snap, "N == 9007199254740992.0").size(), 0u);
}

TEST(Render, CanonicalTextRoundTrips) {
  auto schema = query_schema();
  for (const char* q : {"Year>2003 and Year<2008 and Unit=='tokens'",
                        "not (Name == 'a' or `Ethical Risks` != \"it's\")",
                        "(Year > 1 and Year < 3) or not not Tasks == 'x'",
                        "Year >= -2.5 and 1e3 > Year", "'a\\\\b' == Name"}) {
    auto e = parse(q, schema);
    auto text = render(e);
    EXPECT_EQ(parse(text, schema), e) << q << " -> " << text;
    EXPECT_EQ(render(parse(text, schema)), text);
  }
  EXPECT_EQ(render(parse("Year>2003 and Year<2008 and Unit=='tokens'", schema)),
            "Year > 2003 and Year < 2008 and Unit == 'tokens'");
}

// Smaller version of the acceptance oracle run; keeps the property suite in
// the fast unit tier.
TEST(QueryOracle, AgreesWithNaiveInterpreter) {
  std::mt19937_64 rng(11);
  for (int table_no = 0; table_no < 20; ++table_no) {
    auto table = oracle::random_table(rng, 40);
    auto snap = oracle::to_snapshot(table);
    oracle::QueryGenerator gen(table, 1000 + table_no);
    for (int i = 0; i < 25; ++i) {
      auto q = gen.query(3);
      EXPECT_EQ(oracle::positions(filter_records(*snap, q)), oracle::naive_filter(table, q)) << q;
      auto round = render(parse(q, snap->schema()));
      EXPECT_EQ(parse(round, snap->schema()), parse(q, snap->schema())) << q;
    }
  }
}

TEST(QueryOracle, NaiveInterpreterRejectsMalformedQueries) {
  std::mt19937_64 rng(3);
  auto table = oracle::random_table(rng, 2);
  for (const char* q : {"Year >", "(Year > 1", "Year > 1)", "Year = 1", "and Year > 1"}) {
    EXPECT_THROW(oracle::naive_filter(table, q), std::invalid_argument) << q;
  }
}

}  // namespace
