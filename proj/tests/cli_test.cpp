#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "trispec/errors.hpp"
#include "trispec/measure_io.hpp"
#include "trispec/sphere.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = trispec::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("trispec_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

}  // namespace

TEST(CliCount, Examples) {
  EXPECT_EQ(run({"count", "-n", "2", "-q", "1,1,2"}).out, "8\n");
  EXPECT_EQ(run({"count", "-n", "2", "-q", "1,1,1"}).out, "0\n");
  EXPECT_EQ(run({"count", "-n", "2", "-q", "1,1,5"}).out, "0\n");
  EXPECT_EQ(run({"count", "-n", "3", "-q", "2,2,4"}).code, 0);
  const auto bad = run({"count", "-n", "7", "-q", "1,1,5"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("unsupported"), std::string::npos);
  EXPECT_EQ(run({"count", "-n", "2", "-q", "1,1"}).code, 2);
  EXPECT_EQ(run({"count", "-n", "2", "-q", "1,1.5,2"}).code, 2);
}

TEST(CliLeray, ClosedFormAndErrors) {
  const auto r = run({"leray", "-n", "2", "--tau", "3,4,5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("62.831853071795", 0), 0u) << r.out;

  const auto bad = run({"leray", "-n", "2", "--tau", "1,1,3"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("triangle-bad"), std::string::npos);

  const auto flat = run({"leray", "-n", "2", "--tau", "1,2,3"});
  EXPECT_EQ(flat.code, 2);
  EXPECT_NE(flat.err.find("triangle-degenerate"), std::string::npos) << flat.err;
}

TEST(CliLeray, OracleAgreesAndIsSeeded) {
  const std::vector<std::string> cmd{"leray", "-n", "3", "--tau", "3,4,5", "--oracle", "2e5",
                                     "--seed", "5"};
  const auto a = run(cmd);
  EXPECT_EQ(a.code, 0) << a.out << a.err;
  EXPECT_NE(a.out.find("4737.41"), std::string::npos);
  EXPECT_NE(a.out.find("agree"), std::string::npos);
  EXPECT_EQ(run(cmd).out, a.out);
}

TEST(CliUsage, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"scan"}).code, 2);
  EXPECT_EQ(run({"scan", "bad", "-m", "no_such_thing", "--dir", "1,1,3", "--scales", "2"}).code, 2);
}

TEST_F(TempDir, MeasureIsByteIdenticalAcrossRuns) {
  const auto a = path("a.json"), b = path("b.json");
  EXPECT_EQ(run({"measure", "--model", "torus2", "--cutoff", "8", "-o", a}).code, 0);
  EXPECT_EQ(run({"measure", "--model", "torus2", "--cutoff", "8", "-o", b}).code, 0);
  const std::string text = slurp(a);
  EXPECT_FALSE(text.empty());
  EXPECT_EQ(text, slurp(b));
  const auto m = trispec::load_measure(a);
  EXPECT_EQ(m.key_kind(), trispec::AtomKeyKind::SquaredNorms);
  EXPECT_EQ(m.cutoff(), 8.0);
}

TEST_F(TempDir, SphereMeasureAtomsObeySelectionRules) {
  const auto s = path("s.json");
  EXPECT_EQ(run({"measure", "--model", "sphere", "--lmax", "12", "-o", s}).code, 0);
  const auto m = trispec::load_measure(s);
  EXPECT_FALSE(m.atoms().empty());
  for (const auto& a : m.atoms())
    EXPECT_TRUE(trispec::passes_selection_rule({a.key[0], a.key[1], a.key[2]}));
  EXPECT_EQ(run({"measure", "--model", "sphere", "--cutoff", "3"}).code, 2);
  EXPECT_EQ(run({"measure", "--model", "torus2"}).code, 2);
  EXPECT_EQ(run({"measure", "--model", "klein", "--cutoff", "3"}).code, 2);
}

TEST_F(TempDir, MeasureResourceLimit) {
  const auto r = run({"measure", "--model", "torus3", "--cutoff", "400", "-o", path("x.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliScan, BadConeAllZeros) {
  const auto r = run({"scan", "bad", "-m", "torus2:121", "--dir", "1,1,3", "--scales", "2..40"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["verdict"], "pass");
  EXPECT_EQ(doc["rows"].size(), 39u);
  for (const auto& row : doc["rows"]) EXPECT_EQ(row["measured"], 0.0);
  EXPECT_EQ(doc["config"]["scales"], "2..40");
  EXPECT_EQ(doc["config"]["command"], "scan bad");

  const auto boundary = run({"scan", "bad", "-m", "torus2:121", "--dir", "1,1,2", "--scales", "2"});
  EXPECT_EQ(boundary.code, 2);
}

TEST_F(TempDir, TailFromMeasureFile) {
  const auto m = path("m.json");
  ASSERT_EQ(run({"measure", "--model", "torus2", "--cutoff", "22", "-o", m}).code, 0);
  const auto r = run({"scan", "tail", "-m", m, "--t", "10,10", "--eps", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["rows"][0]["measured"], 0.0);
  EXPECT_EQ(run({"scan", "tail", "-m", m, "--t", "10,10", "--eps", "0.5"}).code, 2);
}

TEST(CliScan, GoodConePassFailAndSafety) {
  const std::vector<std::string> cmd{"scan", "good", "-m", "torus2:300", "--tau0", "3,4,5",
                                     "--scales", "8,16,32", "--seed", "9"};
  const auto r = run(cmd);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run(cmd).out, r.out);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["context"]["seed"], 9);
  EXPECT_EQ(doc["context"]["kernel"]["grid_points"], 4096);
  EXPECT_LE(doc["rows"][2]["rel_error"].get<double>(), 0.15);

  auto strict = cmd;
  strict.insert(strict.end(), {"--threshold", "1e-9"});
  EXPECT_EQ(run(strict).code, 3);

  const auto unsafe = run({"scan", "good", "-m", "torus2:100", "--tau0", "3,4,5", "--scales", "32"});
  EXPECT_EQ(unsafe.code, 2);
  EXPECT_NE(unsafe.err.find("cutoff >="), std::string::npos);

  const auto wide = run({"scan", "good", "-m", "torus2:300", "--tau0", "3,4,5", "--scales", "8",
                         "--delta", "3.5"});
  EXPECT_EQ(wide.code, 2);
}

TEST_F(TempDir, CsvReportToFile) {
  const auto out = path("w.csv");
  const auto r = run({"scan", "weyl", "--radii", "50,100,200", "--format", "csv", "-o", out});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict pass"), std::string::npos);
  std::istringstream csv(slurp(out));
  std::string line;
  int rows = 0;
  bool header = false;
  while (std::getline(csv, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (!header) {
      EXPECT_EQ(line, "tau1,tau2,tau3,measured,predicted,rel_error");
      header = true;
      continue;
    }
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST(CliScan, InterfaceOnLattice) {
  const auto r = run({"scan", "interface", "-m", "torus2:400", "--t", "1,1", "--scales", "40,80"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["rows"][0]["predicted"].get<double>(), 1600.0, 1e-6);
}

TEST(Schedule, Parsing) {
  using trispec::cli::parse_schedule;
  EXPECT_EQ(parse_schedule("8,16,32"), (std::vector<double>{8, 16, 32}));
  EXPECT_EQ(parse_schedule("2..5"), (std::vector<double>{2, 3, 4, 5}));
  EXPECT_EQ(parse_schedule("1..2:0.5"), (std::vector<double>{1, 1.5, 2}));
  EXPECT_EQ(parse_schedule("1,3..4"), (std::vector<double>{1, 3, 4}));
  EXPECT_EQ(parse_schedule("2..40").size(), 39u);
  EXPECT_THROW((void)parse_schedule(""), trispec::DomainError);
  EXPECT_THROW((void)parse_schedule("5..2"), trispec::DomainError);
  EXPECT_THROW((void)parse_schedule("a,b"), trispec::DomainError);
  EXPECT_THROW((void)parse_schedule("1..3:0"), trispec::DomainError);
}
