#include <gtest/gtest.h>

#include "fixture.hpp"
#include "masader/api.hpp"
#include "process.hpp"

namespace {

using testing_support::cli_path;
using testing_support::data_dir;
using testing_support::run_process;

std::string csv() { return (data_dir() / "catalogue.csv").string(); }
std::string schema() { return (data_dir() / "schema.json").string(); }

TEST(Cli, QueryOutputMatchesApiPayload) {
  auto snap = testing_support::fixture_snapshot();
  const std::string q = "Year>2003 and Year<2008 and Unit=='tokens'";
  auto r = run_process({cli_path(), "query", "--source", csv(), "--schema", schema(), "--query", q,
                        "--features", "Name,Year,Unit"});
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, masader::api::datasets_payload(*snap, q, "Name,Year,Unit"));
}

TEST(Cli, JsonSourceGivesSameOutput) {
  auto a = run_process({cli_path(), "query", "--source", csv(), "--schema", schema(), "--features", "Name,Tasks"});
  auto b = run_process({cli_path(), "query", "--source", (data_dir() / "catalogue.json").string(),
                        "--schema", schema(), "--features", "Name,Tasks"});
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, QueryErrorReportsOffset) {
  auto r = run_process({cli_path(), "query", "--source", csv(), "--schema", schema(), "--query", "Year>>2003"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("offset 5"), std::string::npos) << r.err;
}

TEST(Cli, SchemaTagsStats) {
  auto s = run_process({cli_path(), "schema", "--schema", schema()});
  EXPECT_EQ(s.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(s.out), testing_support::expected_values()["schema_names"]);

  auto t = run_process({cli_path(), "tags", "--source", csv(), "--schema", schema(), "--features", "Dialect,Year"});
  EXPECT_EQ(t.exit_code, 0);
  auto tags = nlohmann::json::parse(t.out);
  EXPECT_EQ(tags["Dialect"], testing_support::expected_values()["tags"]["Dialect"]);

  auto st = run_process({cli_path(), "stats", "--source", csv(), "--schema", schema()});
  EXPECT_EQ(st.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(st.out), testing_support::expected_values()["stats"]);
}

TEST(Cli, ValidateReportsIssues) {
  testing_support::TempDir dir;
  testing_support::write_file(dir / "bad.csv", "Name,Year\nA,twenty\nB,2001\nC\n");
  auto bad = run_process({cli_path(), "validate", "--source", (dir / "bad.csv").string(), "--schema", schema()});
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.out.find("twenty"), std::string::npos) << bad.out;
  EXPECT_NE(bad.out.find(" issues\n"), std::string::npos) << bad.out;

  auto good = run_process({cli_path(), "validate", "--source", csv(), "--schema", schema()});
  EXPECT_EQ(good.exit_code, 0);
  EXPECT_EQ(good.out, "0 issues\n");
}

TEST(Cli, UsageAndConfigErrorsExitTwo) {
  EXPECT_EQ(run_process({cli_path()}).exit_code, 2);
  EXPECT_EQ(run_process({cli_path(), "query", "--schema", schema()}).exit_code, 2);
  EXPECT_EQ(run_process({cli_path(), "query", "--source", "/nonexistent.csv", "--schema", schema()}).exit_code, 2);
  EXPECT_EQ(run_process({cli_path(), "serve", "--config", "/nonexistent.json"}).exit_code, 2);
  EXPECT_EQ(run_process({cli_path(), "serve"}, {{"MASADER_CONFIG", "/nonexistent.json"}}).exit_code, 2);
  EXPECT_EQ(run_process({cli_path(), "--help"}).exit_code, 0);
}

}  // namespace
