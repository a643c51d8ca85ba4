#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "topsing/report.hpp"

using namespace topsing;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

RunResult run(const std::vector<std::string>& args) {
  std::string cmd = quote(TOPSING_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, GoldenReportsForEveryFixture) {
  auto fixtures = load_fixtures(TOPSING_FIXTURE_DIR);
  ASSERT_GE(fixtures.size(), 15u);
  for (const auto& fx : fixtures) {
    auto r = run({"classify", "-e", fx.equation, "-d", std::to_string(fx.dim), "--format", "json"});
    EXPECT_EQ(r.status, 0) << fx.name;
    EXPECT_EQ(r.out, slurp(fx.expected_path())) << fx.name;
  }
}

TEST(Cli, OutputIsDeterministic) {
  std::vector<std::string> args{"classify", "-e", "(x1+x2)^2 + (x2+x3)^3 + x3^5", "-d", "2", "--format", "json"};
  auto a = run(args), b = run(args);
  EXPECT_EQ(a.out, b.out);
  auto j1 = run({"jets", "-e", "x1^2+x2^3", "-d", "1", "--m", "4", "--format", "json"});
  auto j2 = run({"jets", "-e", "x1^2+x2^3", "-d", "1", "--m", "4", "--format", "json"});
  EXPECT_EQ(j1.status, 0);
  EXPECT_EQ(j1.out, j2.out);
}

TEST(Cli, NodeExample) {
  auto r = run({"classify", "-e", "x1*x2", "-d", "1", "--format", "json"});
  ASSERT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["report"]["class"], "NCD");
  EXPECT_EQ(j["report"]["is_top"], true);
  EXPECT_EQ(j["report"]["predicted_mld_hat"]["value"], 0);
}

TEST(Cli, MldHatExample) {
  auto r = run({"mld-hat", "-e", "x1^2+x2^2+x3^2", "-d", "2", "--m-max", "4", "--format", "json"});
  ASSERT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["estimate"]["min_value"], 1);
  EXPECT_EQ(j["estimate"]["top_certified_up_to_m_max"], true);
  EXPECT_EQ(j["estimate"]["levels"].size(), 4u);
}

TEST(Cli, SmoothPairExample) {
  auto r = run({"pair", "--smooth-dim", "2", "--divisor", R"({"components":[{"coeff":"1/2","equation":"x1"}]})",
                "--format", "json"});
  ASSERT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["pair"]["value"], "3/2");
  EXPECT_EQ(j["pair"]["witness"], "first blow-up");
}

TEST(Cli, DivisorFromFile) {
  auto path = std::filesystem::temp_directory_path() / "topsing_cli_divisor.json";
  std::ofstream(path) << R"({"components":[{"coeff":"1/3","equation":"x1*x2"}]})";
  auto r = run({"audit", "-d", "2", "--divisor", "@" + path.string(), "--format", "json"});
  std::filesystem::remove(path);
  ASSERT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["audit"]["minimum"], "4/3");
}

TEST(Cli, TimingIsOptIn) {
  auto plain = run({"mld-hat", "-e", "x1*x2", "-d", "1", "--m-max", "2", "--format", "json"});
  auto timed = run({"mld-hat", "-e", "x1*x2", "-d", "1", "--m-max", "2", "--format", "json", "--timing"});
  EXPECT_EQ(plain.out.find("seconds"), std::string::npos);
  EXPECT_NE(timed.out.find("seconds"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"classify", "-e", "x1**2", "-d", "1"}).status, 2);
  EXPECT_EQ(run({"classify", "-e", "x1*x4", "-d", "2"}).status, 2);
  EXPECT_EQ(run({"classify", "-e", "x1*x2"}).status, 2);
  EXPECT_EQ(run({"nosuchmode"}).status, 2);
  EXPECT_EQ(run({"classify", "-e", "x1*x2", "-d", "1", "--precision", "5"}).status, 2);
  EXPECT_EQ(run({"pair", "--smooth-dim", "2", "--divisor", "{"}).status, 2);
  EXPECT_EQ(run({"mld-hat", "-e", "x1*x2", "-d", "1", "--m-max", "4", "--spair-degree-cap", "2"}).status, 3);
}

TEST(Cli, ParseErrorsCarryALocation) {
  std::string cmd = quote(TOPSING_CLI_PATH) + " classify -e 'x1 + x2*' -d 1 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string err;
  char buf[512];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) err.append(buf, n);
  pclose(pipe);
  EXPECT_NE(err.find("column"), std::string::npos) << err;
}

TEST(Cli, SelftestPasses) {
  auto r = run({"selftest"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}
