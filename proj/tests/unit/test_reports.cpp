#include <fstream>

#include <gtest/gtest.h>

#include "fixture.hpp"
#include "masader/error.hpp"
#include "masader/reports.hpp"
#include "stub_server.hpp"

namespace {

using namespace masader;
using testing_support::read_file;
using testing_support::TempDir;

std::vector<nlohmann::json> lines_of(const std::filesystem::path& p) {
  std::vector<nlohmann::json> out;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

TEST(ReportLog, AppendsAndNeverRewrites) {
  TempDir dir;
  auto path = dir / "reports.jsonl";
  {
    ReportLog log(path);
    auto a = log.append({2, std::nullopt, "wrong year", std::nullopt}, ForwardStatus::Disabled, 10);
    EXPECT_EQ(a.id, "rpt-000001");
    EXPECT_FALSE(a.reporter);
    auto before = read_file(path);
    auto b = log.append({3, std::string("Year"), "typo", std::string("octocat")},
                        ForwardStatus::Pending, 11);
    EXPECT_EQ(b.id, "rpt-000002");
    log.record_status(b.id, ForwardStatus::Forwarded, "ok");
    auto after = read_file(path);
    EXPECT_EQ(after.substr(0, before.size()), before);
    EXPECT_EQ(log.find(b.id)->forward_status, ForwardStatus::Forwarded);
  }
  auto lines = lines_of(path);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0]["type"], "report");
  EXPECT_FALSE(lines[0].contains("reporter") && !lines[0]["reporter"].is_null());
  EXPECT_EQ(lines[2]["type"], "status");
  EXPECT_EQ(lines[2]["forward_status"], "forwarded");

  ReportLog reopened(path);
  EXPECT_EQ(reopened.all().size(), 2u);
  EXPECT_EQ(reopened.find("rpt-000002")->forward_status, ForwardStatus::Forwarded);
  EXPECT_EQ(reopened.find("rpt-000002")->reporter, std::optional<std::string>("octocat"));
  auto c = reopened.append({0, std::nullopt, "again", std::nullopt}, ForwardStatus::Disabled, 12);
  EXPECT_EQ(c.id, "rpt-000003");
}

TEST(ReportLog, CorruptLineIsConfigError) {
  TempDir dir;
  testing_support::write_file(dir / "r.jsonl", "{not json\n");
  EXPECT_THROW(ReportLog(dir / "r.jsonl"), Error);
}

TEST(Webhook, ForwardsWithBearerToken) {
  TempDir dir;
  ReportLog log(dir / "r.jsonl");
  testing_support::StubServer stub;
  std::mutex m;
  std::vector<std::string> bodies;
  std::string auth;
  stub.on_post("/hook", [&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(m);
    bodies.push_back(req.body);
    auth = req.get_header_value("Authorization");
    res.status = 201;
  });
  stub.start();

  WebhookConfig cfg;
  cfg.url = stub.url("/hook");
  cfg.token = "secret";
  WebhookForwarder fwd(cfg, log);
  auto r = log.append({1, std::nullopt, "bad link", std::nullopt}, ForwardStatus::Pending, 1);
  fwd.enqueue(r);
  ASSERT_TRUE(fwd.wait_idle(std::chrono::seconds(10)));
  EXPECT_EQ(log.find(r.id)->forward_status, ForwardStatus::Forwarded);
  std::lock_guard lock(m);
  ASSERT_EQ(bodies.size(), 1u);
  EXPECT_EQ(nlohmann::json::parse(bodies[0])["message"], "bad link");
  EXPECT_EQ(auth, "Bearer secret");
}

TEST(Webhook, UnreachableEventuallyFails) {
  TempDir dir;
  ReportLog log(dir / "r.jsonl");
  WebhookConfig cfg;
  cfg.url = "http://127.0.0.1:1/hook";
  cfg.retries = 3;
  cfg.backoff = std::chrono::milliseconds(5);
  cfg.timeout = std::chrono::milliseconds(300);
  WebhookForwarder fwd(cfg, log);
  auto r = log.append({1, std::nullopt, "bad link", std::nullopt}, ForwardStatus::Pending, 1);
  fwd.enqueue(r);
  ASSERT_TRUE(fwd.wait_idle(std::chrono::seconds(20)));
  EXPECT_EQ(log.find(r.id)->forward_status, ForwardStatus::Failed);
  auto lines = lines_of(log.path());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1]["forward_status"], "failed");
}

TEST(Webhook, RetriesUntilSuccess) {
  TempDir dir;
  ReportLog log(dir / "r.jsonl");
  testing_support::StubServer stub;
  std::atomic<int> attempts{0};
  stub.on_post("/hook", [&](const httplib::Request&, httplib::Response& res) {
    res.status = ++attempts < 3 ? 503 : 200;
  });
  stub.start();
  WebhookConfig cfg;
  cfg.url = stub.url("/hook");
  cfg.retries = 3;
  cfg.backoff = std::chrono::milliseconds(5);
  WebhookForwarder fwd(cfg, log);
  auto r = log.append({1, std::nullopt, "m", std::nullopt}, ForwardStatus::Pending, 1);
  fwd.enqueue(r);
  ASSERT_TRUE(fwd.wait_idle(std::chrono::seconds(10)));
  EXPECT_EQ(attempts.load(), 3);
  EXPECT_EQ(log.find(r.id)->forward_status, ForwardStatus::Forwarded);
}

}  // namespace
