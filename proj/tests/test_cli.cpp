#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(CUBIKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(CUBIKIT_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Cli, GraphInfo) {
  auto r = run("graph info --graph " + data("pentagon.json"));
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "graph info");
  EXPECT_FALSE(j["checks"].empty());
}

TEST(Cli, BallIsCat0AndDeterministic) {
  auto a = run("check cat0 --graph " + data("pentagon.json") + " --radius 2");
  auto b = run("check cat0 --graph " + data("pentagon.json") + " --radius 2");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto c = run("check rq --graph " + data("k2.json") + " --radius 2 --instances 5 --seed 3");
  auto d = run("check rq --graph " + data("k2.json") + " --radius 2 --instances 5 --seed 3");
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(c.out, d.out);
}

TEST(Cli, OutputFilesAndDot) {
  auto dir = fs::temp_directory_path() / "cubikit_cli_test";
  fs::create_directories(dir);
  auto out = (dir / "ball.json").string(), dot = (dir / "ball.dot").string();
  auto r = run("ball --graph " + data("k2.json") + " --radius 2 -o " + out + " --dot " + dot);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(fs::exists(out));
  EXPECT_GT(fs::file_size(dot), 0u);
  fs::remove_all(dir);
}

TEST(Cli, SemiconjFlip2MatchesFloorHalf) {
  auto r = run("semiconj --action " + data("flip2.json") + " --window 64 --B 8 --R 6");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  const auto& bm = j["result"]["block-map"];
  ASSERT_FALSE(bm.empty());
  int c = bm["0"].get<int>();
  bool up = true, down = true;
  for (auto it = bm.begin(); it != bm.end(); ++it) {
    int x = std::stoi(it.key()), b = it.value().get<int>();
    int fl = static_cast<int>(std::floor(x / 2.0));
    up = up && b == fl + c;
    down = down && b == c - fl;
  }
  EXPECT_TRUE(up || down);
}

TEST(Cli, Blowup) {
  auto r = run("blowup --graph " + data("k2.json") + " --data floor-half --radius 3 --fiber-bound 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_NO_THROW(nlohmann::json::parse(r.out));
}

TEST(Cli, DualOfWallspaceAndBall) {
  EXPECT_EQ(run("dual --graph " + data("k2.json") + " --radius 1").code, 0);
  auto dir = fs::temp_directory_path() / "cubikit_cli_ws";
  fs::create_directories(dir);
  auto ws = (dir / "ws.json").string();
  std::ofstream(ws) << R"({"points":["a","b","c","d"],"walls":[[0,1],[0,2]]})";
  auto r = run("dual --wallspace " + ws);
  EXPECT_EQ(r.code, 0);
  std::ofstream(ws) << R"({"points":["a","b"],"walls":[[0],[1]]})";
  EXPECT_EQ(run("dual --wallspace " + ws).code, 4);
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("ball --graph /nonexistent/graph.json").code, 3);
  EXPECT_EQ(run("ball --graph " + data("k2.json") + " --radius -2").code, 2);
  EXPECT_EQ(run("ball --graph " + data("k2.json") + " --bogus").code, 2);
  EXPECT_EQ(run("semiconj --action " + data("flip2.json") + " --window 1000").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  auto dir = fs::temp_directory_path() / "cubikit_cli_bad";
  fs::create_directories(dir);
  auto bad = (dir / "loop.json").string();
  std::ofstream(bad) << R"({"vertices":["a"],"edges":[["a","a"]]})";
  EXPECT_EQ(run("graph info --graph " + bad).code, 4);
  fs::remove_all(dir);
}

TEST(Cli, VerifyOnlySelectedCriterion) {
  auto r = run("verify all --only 10");
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["checks"].size(), 1u);
  EXPECT_EQ(j["checks"][0]["status"], "pass");
}
