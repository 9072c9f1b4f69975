#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const char* env = std::getenv("TYPGRAPH_CLI");
    exe_ = env ? env : "typgraph";
    dir_ = fs::temp_directory_path() / ("typgraph_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    spit(dir_ / "bin.json", R"({"x_alphabet":["0","1"],"y_alphabet":["0","1"],"joint":[["2/5","1/10"],["1/10","2/5"]]})");
    spit(dir_ / "prod.json", R"({"x_alphabet":["0","1"],"y_alphabet":["0","1"],"joint":[["1/4","1/4"],["1/4","1/4"]]})");
    spit(dir_ / "bad.json", R"({"x_alphabet":["0","1"],"y_alphabet":["0","1"],"joint":[["2/5","1/10"],["x","2/5"]]})");
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string path(const std::string& name) { return (dir_ / name).string(); }

  static Outcome run(const std::string& args) {
    const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = "'" + exe_ + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static inline std::string exe_;
  static inline fs::path dir_;
};

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_F(Cli, InfoPrintsEntropies) {
  const Outcome r = run("info --dist " + path("bin.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has(r.err, "I(X;Y) = 0.278072")) << r.err;
  EXPECT_TRUE(has(r.err, "H(X) = 1.000000"));
  const auto rec = nlohmann::json::parse(r.out);
  EXPECT_EQ(rec["schema"], "typgraph.info/1");
  EXPECT_EQ(rec["config_hash"].get<std::string>().size(), 16u);
  EXPECT_NEAR(rec["payload"]["I(X;Y)"].get<double>(), 0.278072, 1e-6);
  const Outcome p = run("info --dist " + path("prod.json"));
  EXPECT_TRUE(has(p.err, "I(X;Y) = 0.000000"));
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(run("info --dist " + path("missing.json")).code, 2);
  const Outcome bad = run("info --dist " + path("bad.json"));
  EXPECT_EQ(bad.code, 2);
  EXPECT_TRUE(has(bad.err, "joint[1][0]")) << bad.err;
  EXPECT_EQ(run("graph --dist " + path("bin.json") + " --n 0").code, 2);
  EXPECT_EQ(run("graph --dist " + path("bin.json") + " --n 4 --eps1 abc").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, GraphStats) {
  const Outcome r = run("graph --dist " + path("bin.json") + " --n 4 --eps1 1/4 --eps2 1/4 --lambda 3/20");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has(r.err, "left=14 right=14")) << r.err;
  EXPECT_TRUE(has(r.err, "degree bound: PASS"));
}

TEST_F(Cli, GraphCapExceeded) {
  const Outcome r = run("graph --dist " + path("bin.json") + " --n 30");
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(has(r.err, "--mode implicit")) << r.err;
  EXPECT_EQ(run("graph --dist " + path("bin.json") + " --n 30 --mode implicit").code, 0);
}

TEST_F(Cli, SubgraphKinds) {
  const Outcome an = run("subgraph an --dist " + path("bin.json") + " --n 10");
  ASSERT_EQ(an.code, 0) << an.err;
  EXPECT_TRUE(has(an.err, "verify_prop1: PASS")) << an.err;
  EXPECT_EQ(run("subgraph gamma --dist " + path("bin.json") + " --n 10").code, 2);
  const Outcome g = run("subgraph gamma --aux copy-x --dist " + path("bin.json") + " --n 12");
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_TRUE(has(g.err, "verify_prop2: PASS")) << g.err;
}

TEST_F(Cli, SimulateIsDeterministic) {
  const std::string base = "simulate --dist " + path("bin.json") + " --n 10 --m1 3 --m2 4 --trials 2000 --seed 9";
  const Outcome a = run(base + " --workers 1");
  ASSERT_EQ(a.code, 0) << a.err;
  const Outcome b = run(base + " --workers 1");
  const Outcome c = run(base + " --workers 3");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  const auto rec = nlohmann::json::parse(a.out);
  EXPECT_TRUE(rec["payload"].contains("monte_carlo"));
  EXPECT_TRUE(rec["payload"].contains("bounds"));
  EXPECT_TRUE(has(a.err, "bracket: "));
  EXPECT_NE(run("simulate --dist " + path("bin.json") + " --n 10 --m1 3 --m2 4 --trials 2000 --seed 10").out, a.out);
}

TEST_F(Cli, SimulateCsvAndTrivialBracket) {
  const Outcome r = run("simulate --dist " + path("bin.json") + " --n 6 --m1 2 --m2 2 --trials 500 --seed 1 --eps1 1 "
                    "--eps2 1 --lambda 1 --csv " + path("sim.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(has(r.err, "bracket: inside")) << r.err;
  const std::string csv = slurp(dir_ / "sim.csv");
  EXPECT_EQ(csv.rfind("a,empirical,suen\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
}

TEST_F(Cli, OutFileMatchesStdout) {
  const std::string base = "info --dist " + path("bin.json");
  const Outcome a = run(base);
  const Outcome b = run(base + " --out " + path("info.json"));
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(slurp(dir_ / "info.json"), a.out);
  EXPECT_TRUE(has(b.out, "I(X;Y) = 0.278072"));
}

TEST_F(Cli, WringTraces) {
  std::string prod = "x,y\n";
  auto bits3 = [](int v) { return std::string{char('0' + ((v >> 2) & 1)), char('0' + ((v >> 1) & 1)), char('0' + (v & 1))}; };
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) prod += bits3(x) + "," + bits3(y) + "\n";
  spit(dir_ / "prod.csv", prod);
  const Outcome p = run("wring --edges " + path("prod.csv") + " --delta 0.05");
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(nlohmann::json::parse(p.out)["payload"]["k"], 0);

  std::string match = "x,y\n";
  for (int x = 0; x < 8; ++x) match += bits3(x) + "," + bits3(x) + "\n";
  spit(dir_ / "match.csv", match);
  const Outcome m = run("wring --edges " + path("match.csv") + " --delta 0.05");
  ASSERT_EQ(m.code, 0) << m.err;
  const auto rec = nlohmann::json::parse(m.out);
  EXPECT_GT(rec["payload"]["k"].get<int>(), 0);
  double prev = 1.0;
  for (const auto& s : rec["payload"]["steps"]) {
    const double f = s["surviving_fraction_real"].get<double>();
    EXPECT_LT(f, prev);
    prev = f;
  }

  spit(dir_ / "empty.csv", "");
  EXPECT_EQ(run("wring --edges " + path("empty.csv") + " --delta 0.05").code, 2);
  spit(dir_ / "junk.csv", "x,y\n01,zz\n");
  EXPECT_EQ(run("wring --edges " + path("junk.csv") + " --delta 0.05").code, 2);
}

TEST_F(Cli, GraphExportFeedsWring) {
  const Outcome g = run("graph --dist " + path("bin.json") + " --n 6 --edges " + path("g6.csv") + " --out " +
                    path("g6.json"));
  ASSERT_EQ(g.code, 0) << g.err;
  const Outcome w = run("wring --edges " + path("g6.csv") + " --graph " + path("g6.json"));
  ASSERT_EQ(w.code, 0) << w.err;
  const auto rec = nlohmann::json::parse(w.out);
  EXPECT_TRUE(rec["payload"].contains("per_letter_mi"));
  EXPECT_EQ(run("wring --edges " + path("g6.csv")).code, 2);
}
