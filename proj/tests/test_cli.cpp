#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "adjustkit/separation.hpp"
#include "cli_app.hpp"

using namespace adjustkit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "adjustkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Run run_binary(const std::string& args) {
  std::string cmd = std::string(ADJUSTKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t k = std::fread(buf, 1, sizeof buf, p)) out.append(buf, k);
  int status = pclose(p);
  return {WEXITSTATUS(status), out, ""};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("adjustkit_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string role(const std::vector<std::string>& v) { return cli::join(v, ","); }

}  // namespace

TEST(Cli, OsetOnSurveyGraph) {
  auto r = run({"oset", "--fixture", "SSQ-DAG", "--x", "ALN", "--y", "DET"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "AIS\nCDR\n");
  EXPECT_EQ(run({"oset", "--fixture", "SSQ-DAG", "--x", "ALN", "--y", "DET", "--via-projection"}).out, "AIS\nCDR\n");
}

TEST(Cli, BinaryExamples) {
  auto r = run_binary("oset --fixture SSQ-DAG --x ALN --y DET");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "AIS\nCDR\n");
  r = run_binary("validate --fixture FIG3-F --x X1,X2 --y Y --z V1");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out, "no valid adjustment set exists\n");
  EXPECT_EQ(run_binary("").code, 1);
}

TEST(Cli, ValidateOutcomes) {
  auto r = run({"validate", "--fixture", "FIG3-F", "--x", "X1,X2", "--y", "Y", "--z", "V1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out, "no valid adjustment set exists\n");
  // order of list arguments does not matter
  EXPECT_EQ(run({"validate", "--fixture", "FIG3-F", "--x", "X2, X1", "--y", "Y", "--z", "V1"}).out, r.out);
  r = run({"validate", "--fixture", "SSQ-DAG", "--x", "ALN", "--y", "DET", "--z", "CDR,AIS"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "valid\n");
  r = run({"validate", "--fixture", "SSQ-DAG", "--x", "ALN", "--y", "DET", "--z", "AIS,CDR,PER"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out, "invalid: forbidden members PER\n");
  r = run({"validate", "--fixture", "SSQ-DAG", "--x", "ALN", "--y", "DET"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out.rfind("invalid: open path ALN <- ", 0), 0u) << r.out;
  r = run({"validate", "--fixture", "FIG4-CPDAG", "--x", "X", "--y", "Y"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out, "graph is not amenable relative to (X, Y)\n");
}

TEST(Cli, OsetOnFig3Fixtures) {
  std::map<std::string, std::string> want = {
      {"FIG3-A", "V2\n"}, {"FIG3-B", ""}, {"FIG3-C", "V2\nV4\n"}, {"FIG3-D", "V2\nV4\nV7\n"}, {"FIG3-E", ""}};
  for (const auto& [name, out] : want) {
    const auto& f = fixture(name);
    auto r = run({"oset", "--fixture", name, "--x", role(f.x), "--y", role(f.y)});
    EXPECT_EQ(r.code, 0) << name << r.err;
    EXPECT_EQ(r.out, out) << name;
  }
  EXPECT_EQ(run({"oset", "--fixture", "FIG3-B", "--x", "X1,X2", "--y", "Y", "--via-projection"}).out, "V2\n");
  auto r = run({"oset", "--fixture", "FIG3-F", "--x", "X1,X2", "--y", "Y"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out, "no valid adjustment set exists\n");
}

TEST_F(CliFiles, ProjectWritesSurveyProjection) {
  auto r = run({"project", "--fixture", "SSQ-DAG", "--x", "ALN", "--y", "DET", "--out", path("p.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(parse_graph(slurp(path("p.txt"))), fixture_graph("SSQ-PROJECTION"));
  r = run({"project", "--fixture", "SSQ-DAG", "--x", "ALN", "--y", "DET"});
  EXPECT_EQ(r.out, slurp(path("p.txt")));
  // a projection is a mixed graph and cannot be projected again
  r = run({"project", "--graph", path("p.txt"), "--x", "ALN", "--y", "DET"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, FixturesPrintCanonicalText) {
  auto names = lines(run({"fixtures"}).out);
  EXPECT_EQ(names.size(), fixtures().size());
  for (const auto& n : names) {
    auto r = run({"fixtures", "--name", n});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, format_graph(fixture_graph(n)));
  }
  EXPECT_EQ(run({"fixtures", "--name", "NOPE"}).code, 1);
}

TEST(Cli, Separate) {
  Graph g = fixture_graph("SSQ-DAG");
  auto r = run({"separate", "--fixture", "SSQ-DAG", "--a", "AIS", "--b", "ALN", "--c", "SAN,AFF"});
  ASSERT_TRUE(separated(g, g.ids({"AIS"}), g.ids({"ALN"}), g.ids({"SAN", "AFF"})));
  EXPECT_EQ(r.out, "separated\n");
  r = run({"separate", "--fixture", "SSQ-DAG", "--a", "AIS", "--b", "ALN", "--c", "AFF"});
  auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0], "connected");
  EXPECT_EQ(l[1].substr(0, 3), "AIS");
  EXPECT_EQ(l[1].substr(l[1].size() - 3), "ALN");
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, Orient) {
  auto r = run({"orient", "--fixture", "FIG4-CPDAG", "--require", "V1->X", "--require", "V4->X"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out, "FAIL\n");
  r = run({"orient", "--fixture", "FIG4-CPDAG", "--require", "V1 -> X", "--require", "V3->X"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(parse_graph(r.out), fixture_graph("FIG4-C"));
  EXPECT_EQ(run({"orient", "--fixture", "FIG4-CPDAG", "--require", "V1-X"}).code, 1);
}

TEST_F(CliFiles, IdaOnFig4Cpdag) {
  ASSERT_EQ(run({"sample", "--fixture", "FIG4-B", "--n", "400", "--seed", "7", "--out", path("d.csv")}).code, 0);
  auto r = run({"ida", "--fixture", "FIG4-CPDAG", "--data", path("d.csv"), "--x", "X", "--y", "Y", "--method", "optimal"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto l = lines(r.out);
  ASSERT_EQ(l.size(), 6u);
  EXPECT_EQ(l[0], "subset,adjustment_set,estimate");
  EXPECT_EQ(l[2].substr(0, 6), "V1,V1,");
  EXPECT_EQ(l[3].substr(0, 9), "V3,V3;V5,");
  EXPECT_EQ(l[5], "V1;V3,ZERO,0");
  // the empty subset and {V4} share the empty adjustment set
  EXPECT_EQ(lines(run({"ida", "--fixture", "FIG4-CPDAG", "--data", path("d.csv"), "--x", "X", "--y", "Y", "--dedupe"}).out).size(), 5u);
  r = run({"ida", "--fixture", "FIG4-CPDAG", "--data", path("d.csv"), "--x", "X", "--y", "Y", "--method", "semilocal"});
  l = lines(r.out);
  ASSERT_EQ(l.size(), 6u);
  EXPECT_EQ(l[5].substr(0, 12), "V1;V3,V1;V3,");
  EXPECT_EQ(run({"ida", "--fixture", "FIG4-CPDAG", "--data", path("d.csv"), "--x", "X", "--y", "Y", "--method", "x"}).code, 1);
}

TEST_F(CliFiles, IdaRegressionFailure) {
  std::ofstream(path("tiny.csv")) << "X,A,Y\n1,2,3\n2,1,0\n";
  auto r = run({"ida", "--graph", path("g.txt"), "--data", path("tiny.csv"), "--x", "X", "--y", "Y"});
  EXPECT_EQ(r.code, 1);
  std::ofstream(path("g.txt")) << "class: maxpdag\nX -- A\nA -> Y\nX -> Y\n";
  r = run({"ida", "--graph", path("g.txt"), "--data", path("tiny.csv"), "--x", "X", "--y", "Y"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("NA"), std::string::npos);
}

TEST_F(CliFiles, SelectOnSurveyData) {
  ASSERT_EQ(run({"sample", "--fixture", "SSQ-DAG", "--n", "20000", "--seed", "11", "--out", path("s.csv")}).code, 0);
  auto r = run({"select", "--data", path("s.csv"), "--x", "ALN", "--y", "DET", "--z", "SAN,AFF,AIS,APA,CDR", "--alpha", "bic"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "selected: AIS,CDR");
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(l[i].substr(0, 8), "removed ");
  r = run({"select", "--data", path("s.csv"), "--x", "ALN", "--y", "DET", "--z", "SAN,AFF", "--alpha", "1"});
  EXPECT_EQ(r.out, "selected: AFF,SAN\n");
  EXPECT_EQ(run({"select", "--data", path("s.csv"), "--x", "ALN", "--y", "DET", "--alpha", "often"}).code, 1);
  EXPECT_EQ(run({"select", "--data", path("s.csv"), "--x", "ALN", "--y", "DET", "--alpha", "2"}).code, 1);
}

TEST_F(CliFiles, SampleIsSeeded) {
  auto a = run({"sample", "--fixture", "FIG4-B", "--n", "5", "--seed", "3"});
  auto b = run({"sample", "--fixture", "FIG4-B", "--n", "5", "--seed", "3"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run({"sample", "--fixture", "FIG4-B", "--n", "5", "--seed", "4"}).out);
  EXPECT_EQ(run({"sample", "--fixture", "FIG4-B", "--n", "5"}).code, 1);
  std::istringstream in(a.out);
  EXPECT_EQ(read_dataset(in).rows(), 5);
  // random coefficients for graphs without a built-in model, extension for a CPDAG
  EXPECT_EQ(run({"sample", "--fixture", "FIG4-CPDAG", "--n", "5", "--seed", "3", "--errors", "uniform"}).code, 0);
}

TEST_F(CliFiles, SimulateSummaryAndCsv) {
  auto r = run({"simulate", "--p", "8", "--reps", "4", "--dpg", "5", "--seed", "2", "--out", path("r.csv")});
  EXPECT_EQ(r.code, 0) << r.err;
  auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0], "p,d,n,reps,dpg,geometric_mean,median,failed,mean_draws");
  EXPECT_EQ(l[1].substr(0, 13), "8,2,100,4,5,0");
  auto csv = lines(slurp(path("r.csv")));
  ASSERT_EQ(csv.size(), 5u);
  EXPECT_EQ(csv[0], "rep,min_abs_true,mse_optimal,mse_local,rmse");
}

TEST(Cli, SeedIsMandatoryAndEnvironmentFallsBehindFlags) {
  auto r = run({"simulate", "--reps", "2", "--dpg", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--seed"), std::string::npos);
  auto with2 = run({"simulate", "--p", "6", "--reps", "2", "--dpg", "3", "--seed", "2"});
  ::setenv("ADJUSTKIT_SEED", "2", 1);
  auto env2 = run({"simulate", "--p", "6", "--reps", "2", "--dpg", "3"});
  ::setenv("ADJUSTKIT_SEED", "1", 1);
  auto flag2 = run({"simulate", "--p", "6", "--reps", "2", "--dpg", "3", "--seed", "2"});
  auto env1 = run({"simulate", "--p", "6", "--reps", "2", "--dpg", "3"});
  ::unsetenv("ADJUSTKIT_SEED");
  EXPECT_EQ(env2.code, 0);
  EXPECT_EQ(env2.out, with2.out);
  EXPECT_EQ(flag2.out, with2.out);
  EXPECT_NE(env1.out, with2.out);
}

TEST(Cli, EstimatedTrackIsRejected) {
  auto r = run({"simulate", "--seed", "1", "--estimated"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("requires structure learning (out of scope)"), std::string::npos);
}

TEST(Cli, Density) {
  auto r = run({"density", "--fixture", "FIG4-CPDAG", "--model", "FIG4-B", "--x", "X", "--y", "Y", "--n", "40",
                "--reps", "2", "--seed", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto l = lines(r.out);
  ASSERT_EQ(l.size(), 21u);
  EXPECT_EQ(l[0], "rep,method,subset,estimate");
  r = run({"density", "--fixture", "SSQ-DAG", "--model", "FIG4-B", "--x", "ALN", "--y", "DET", "--seed", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("not in the class"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"oset", "--x", "A", "--y", "B"}).code, 1);
  EXPECT_EQ(run({"oset", "--fixture", "SSQ-DAG", "--x", "NOPE", "--y", "DET"}).code, 1);
  EXPECT_EQ(run({"oset", "--fixture", "SSQ-DAG", "--graph", "f", "--x", "ALN", "--y", "DET"}).code, 1);
  auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("oset"), std::string::npos);
}
