#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "support/fixtures.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the CLI with stderr discarded and returns its exit code and stdout.
Run optbt(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + quote(OPTBT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string cafe_domain() { return quote(optbt::fixtures::data_path("cafe/cafe.domain")); }

fs::path temp_file(const std::string& name, const std::string& content) {
  auto p = fs::temp_directory_path() / ("optbt_cli_test_" + name);
  std::ofstream(p) << content;
  return p;
}

TEST(Cli, NormalizeCafeGoal) {
  auto r = optbt("normalize --domain " + cafe_domain() + " --goal " + quote(optbt::fixtures::kCafeGoal));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
  EXPECT_NE(r.out.find("On(Coffee,Table)"), std::string::npos);

  auto j = optbt("normalize --format json --domain " + cafe_domain() + " --goal " + quote(optbt::fixtures::kCafeGoal));
  ASSERT_EQ(j.code, 0);
  auto doc = nlohmann::json::parse(j.out);
  ASSERT_EQ(doc.at("clauses").size(), 2U);
  EXPECT_EQ(doc["clauses"][0].size(), 2U);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(optbt("normalize --domain " + cafe_domain() + " --goal 'On(Coffee'").code, 2);
  EXPECT_EQ(optbt("normalize --domain " + cafe_domain() + " --goal 'Fly(Table)'").code, 3);
  EXPECT_EQ(optbt("normalize --domain " + cafe_domain() + " --goal 'Dirty(Table) & !Dirty(Table)'").code, 3);
  auto toy = temp_file("toy.domain", optbt::fixtures::kToyChain);
  EXPECT_EQ(optbt("plan --domain " + quote(toy.string()) + " --goal l4").code, 4);
  EXPECT_EQ(optbt("interpret --domain " + cafe_domain() + " --instruction hi --mock-response 'Fly(Table)'").code, 5);
  EXPECT_EQ(optbt("interpret --domain " + cafe_domain() + " --instruction hi", "env -u OPTBT_BACKEND_URL").code, 6);
  EXPECT_EQ(optbt("plan --domain /nonexistent --goal x").code, 1);
  EXPECT_EQ(optbt("bench --case case42").code, 1);
  EXPECT_EQ(optbt("--version").code, 0);
}

TEST(Cli, PlanToyChain) {
  auto toy = temp_file("toy2.domain", optbt::fixtures::kToyChain);
  auto r = optbt("plan --domain " + quote(toy.string()) + " --goal 'l1 & l3' --simulate --format json");
  ASSERT_EQ(r.code, 0);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc.at("simulation").at("outcome"), "Success");
  EXPECT_EQ(doc["simulation"]["cost"], "13");
  EXPECT_EQ(doc["simulation"]["actions"], nlohmann::json({"a1", "a3"}));

  auto dot = optbt("plan --domain " + quote(toy.string()) + " --goal l3 --format dot");
  ASSERT_EQ(dot.code, 0);
  EXPECT_EQ(dot.out.rfind("digraph", 0), 0U);
}

TEST(Cli, PlanCafeFromInit) {
  auto r = optbt("plan --domain " + cafe_domain() + " --goal " + quote(optbt::fixtures::kCafeGoal) +
                 " --state " + quote(optbt::fixtures::data_path("cafe/cafe.state")) + " --simulate");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulation: Success"), std::string::npos);
}

TEST(Cli, BenchIsDeterministicWithoutTiming) {
  auto a = optbt("bench --case small --n 3 --seed 5 --rows --no-timing");
  auto b = optbt("bench --case small --n 3 --seed 5 --rows --no-timing");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 10);
  auto numeric = optbt("bench --case 0 --n 1 --no-timing");
  EXPECT_EQ(numeric.code, 0);
  EXPECT_NE(numeric.out.find("case0,OBTEA,"), std::string::npos);
}

TEST(Cli, AblateFiveDepths) {
  auto r = optbt("ablate --case small --n 3 --depths 0,1,2,3,4");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
  EXPECT_EQ(optbt("ablate --case small --n 2 --depths x").code, 1);
}

TEST(Cli, InterpretWithMockAndReplay) {
  auto record = fs::temp_directory_path() / "optbt_cli_test_record.jsonl";
  auto r = optbt("interpret --domain " + cafe_domain() + " --instruction 'Go to the bar.' --mock-response " +
                 quote("Goal: RobotNear(Bar)") + " --record " + quote(record.string()));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "RobotNear(Bar)\n");

  auto replay = optbt("interpret --domain " + cafe_domain() + " --instruction 'Go to the bar.' --replay " +
                      quote(record.string()));
  EXPECT_EQ(replay.code, 0);
  EXPECT_EQ(replay.out, r.out);
  // a different instruction builds a different prompt, so the replay diverges
  EXPECT_EQ(optbt("interpret --domain " + cafe_domain() + " --instruction 'Other.' --replay " +
                  quote(record.string()))
                .code,
            6);
}

TEST(Cli, InterpretThenPlan) {
  auto r = optbt("interpret --domain " + cafe_domain() + " --instruction 'Clean the table.' --mock-response " +
                 quote("!Dirty(Table)") + " --plan --state " + quote(optbt::fixtures::data_path("cafe/cafe.state")) +
                 " --simulate");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulation: Success"), std::string::npos);
}

}  // namespace
