#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "fnr/cli.hpp"

using namespace fnr;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fnr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fnr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string stem(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// Every opened element is closed, in order; a single <svg> root.
bool tags_balanced(const std::string& svg) {
  static const std::regex tag(R"(<(/?)([a-zA-Z][\w:-]*)[^>]*?(/?)>)");
  std::vector<std::string> stack;
  std::size_t roots = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    const std::string name = m[2];
    if (m[1] == "/") {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else if (m[3] != "/") {
      if (stack.empty()) ++roots;
      stack.push_back(name);
    }
  }
  return stack.empty() && roots == 1;
}

}  // namespace

TEST_F(CliTest, SupportLinesCsv) {
  const auto r = run({"support-lines", "--r", "0.5", "--out", stem("lines")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(slurp(dir_ / "lines.csv"));
  ASSERT_GT(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"theta", "offset"}));
  bool found = false;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::stod(rows[i][0]) == 0.0) {
      EXPECT_DOUBLE_EQ(std::stod(rows[i][1]), 1.5);
      found = true;
    }
  EXPECT_TRUE(found);
  EXPECT_TRUE(fs::exists(dir_ / "lines.svg"));
}

TEST_F(CliTest, SupportLinesAtZeroRadiusAreTheUnitCircle) {
  ASSERT_EQ(run({"support-lines", "--r", "0", "--out", stem("zero"), "--format", "csv"}).code, 0);
  const auto rows = csv_rows(slurp(dir_ / "zero.csv"));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(std::stod(rows[i][1]), 1.0);
  EXPECT_FALSE(fs::exists(dir_ / "zero.svg"));
}

TEST_F(CliTest, BoundaryCsvStructure) {
  ASSERT_EQ(run({"boundary", "--r", "0.5", "--out", stem("b")}).code, 0);
  std::ifstream is(dir_ / "b.csv");
  const auto rows = cli::parse_boundary_csv(is);
  // 720 is a multiple of 4, so only the switching angles are extra rows
  EXPECT_EQ(rows.size(), cli::RunConfig{}.samples + 4);
  EXPECT_EQ(cli::branch_transitions(rows), 4u);
  const auto right = std::max_element(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.x < b.x; });
  EXPECT_DOUBLE_EQ(right->x, 1.5);
  EXPECT_DOUBLE_EQ(right->y, 0.0);
  EXPECT_EQ(right->branch, Branch::CircleRight);
  for (const auto& row : rows) EXPECT_EQ(contains(row.x, row.y, 0.5, 720).where, Location::Boundary) << row.theta;
}

TEST_F(CliTest, BoundarySvgStructure) {
  ASSERT_EQ(run({"boundary", "--r", "0.5", "--out", stem("b"), "--format", "svg"}).code, 0);
  const auto svg = slurp(dir_ / "b.svg");
  EXPECT_TRUE(tags_balanced(svg));
  for (const char* id : {"circles", "sextic", "switching-lines", "boundary", "switching-points"})
    EXPECT_NE(svg.find(std::string("id=\"") + id + "\""), std::string::npos) << id;
  const auto points = svg.substr(svg.find("id=\"switching-points\""));
  EXPECT_EQ(count(points, "<circle"), 4u);
  EXPECT_NE(svg.find("#1f4fbf"), std::string::npos);
  EXPECT_NE(svg.find("#d62728"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "b.csv"));
}

TEST_F(CliTest, CustomColours) {
  ASSERT_EQ(run({"boundary", "--r", "1", "--out", stem("c"), "--format", "svg", "--switch-color", "#00ff00"}).code, 0);
  const auto svg = slurp(dir_ / "c.svg");
  EXPECT_NE(svg.find("#00ff00"), std::string::npos);
  EXPECT_EQ(svg.find("#d62728"), std::string::npos);
}

TEST_F(CliTest, SupportLinesSvgStructure) {
  ASSERT_EQ(run({"support-lines", "--r", "0.5", "--out", stem("s"), "--format", "svg"}).code, 0);
  const auto svg = slurp(dir_ / "s.svg");
  EXPECT_TRUE(tags_balanced(svg));
  EXPECT_NE(svg.find("id=\"support-lines\""), std::string::npos);
}

TEST_F(CliTest, OutputsAreByteIdentical) {
  ASSERT_EQ(run({"boundary", "--r", "0.5", "--out", stem("one")}).code, 0);
  ASSERT_EQ(run({"boundary", "--r", "0.5", "--out", stem("two")}).code, 0);
  EXPECT_EQ(slurp(dir_ / "one.csv"), slurp(dir_ / "two.csv"));
  EXPECT_EQ(slurp(dir_ / "one.svg"), slurp(dir_ / "two.svg"));
}

TEST_F(CliTest, BoundaryRejectsDegenerateAndNegativeRadius) {
  const auto zero = run({"boundary", "--r", "0", "--out", stem("z")});
  EXPECT_EQ(zero.code, 2);
  EXPECT_FALSE(zero.err.empty());
  EXPECT_FALSE(fs::exists(dir_ / "z.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "z.svg"));
  EXPECT_EQ(run({"boundary", "--r", "-1", "--out", stem("n")}).code, 2);
  EXPECT_EQ(run({"boundary", "--r", "abc", "--out", stem("n")}).code, 2);
}

TEST_F(CliTest, RadiusFromComplexA) {
  ASSERT_EQ(run({"support-lines", "--a", "0,1", "--out", stem("a"), "--format", "csv"}).code, 0);
  const auto rows = csv_rows(slurp(dir_ / "a.csv"));
  EXPECT_DOUBLE_EQ(std::stod(rows[1][1]) , lambda_max(std::stod(rows[1][0]), 0.5));
  EXPECT_EQ(run({"support-lines", "--a", "0,1", "--r", "0.5"}).code, 2);
}

TEST_F(CliTest, VerifyPassesWithDefaults) {
  const auto r = run({"verify", "--out", stem("v")});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto json = nlohmann::json::parse(slurp(dir_ / "v.json"));
  EXPECT_TRUE(json["pass"].get<bool>());
  EXPECT_GE(json["checks"].size(), 15u);
}

TEST_F(CliTest, VerifyFailsUnderImpossibleTolerance) {
  const auto r = run({"verify", "--out", stem("v"), "--tol-conv", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("oracle_convergence"), std::string::npos);
}

TEST_F(CliTest, VerifyWithComplexA) {
  EXPECT_EQ(run({"verify", "--a", "0.9009688679024191,0.4338837391175581", "--out", stem("v")}).code, 0);
}

TEST_F(CliTest, ResultantCertificate) {
  const auto r = run({"resultant", "--r", "1/2", "--r", "1/3", "--out", stem("res")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto json = nlohmann::json::parse(slurp(dir_ / "res.json"));
  EXPECT_TRUE(json["pass"].get<bool>());
  EXPECT_EQ(json["reports"].size(), 2u);
  EXPECT_TRUE(fs::exists(dir_ / "res.txt"));
}

TEST_F(CliTest, ResultantMutationSelfTestFails) {
  EXPECT_EQ(run({"resultant", "--r", "1/2", "--mutate", "--out", stem("m")}).code, 1);
}

TEST_F(CliTest, ResultantUsageErrors) {
  EXPECT_EQ(run({"resultant", "--r", "0", "--out", stem("x")}).code, 2);
  EXPECT_EQ(run({"resultant", "--r", "1/2", "--samples", "10", "--out", stem("x")}).code, 2);
}

TEST_F(CliTest, UnwritableOutputIsAnIoError) {
  EXPECT_EQ(run({"boundary", "--r", "0.5", "--out", "/proc/fnr-no-such/dir/b"}).code, 3);
}

TEST(Cli, UnknownCommandAndBadFormat) {
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"boundary", "--format", "png"}).code, 2);
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = FNR_BINARY;
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status(bin + " --help"), 0);
  EXPECT_EQ(status(bin + " boundary --r 0 --out /tmp/fnr_bin_zero"), 2);
}
