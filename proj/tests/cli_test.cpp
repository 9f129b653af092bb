#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "algconn/cli.hpp"

using namespace algconn;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "algconn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(std::stod(f));
  return out;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("algconn-cli-" + std::to_string(::getpid()) + "-" +
                                         std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

}  // namespace

TEST(Cli, StatsOnKarate) {
  const auto r = run_cli({"stats", "--dataset", "karate"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "network,N,L,lambda1,mu,type\nkarate,34,78,6.7257,0.468525,undirected\n");
}

TEST(Cli, StatsOnEdgeListFile) {
  TempDir dir;
  const auto file = dir.path() / "tri.txt";
  std::ofstream(file) << "# triangle plus an isolated pair\na b\nb c\nc a\nx y\n";
  const auto r = run_cli({"stats", "--input", file.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).at(1), "tri,3,3,2,3,undirected");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"stats", "--dataset", "dpath:3"}).code, 2);
  const auto bad = run_cli({"optimize", "--dataset", "karate", "--strategy", "magic"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("unknown strategy"), std::string::npos);
  EXPECT_EQ(run_cli({"stats"}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({"stats", "--input", "/nonexistent/graph.txt"}).code, 2);
  EXPECT_EQ(run_cli({"optimize", "--dataset", "karate", "--strategy", "exact-remu"}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, OptimizeZeroBudgetPrintsHeaderOnly) {
  const auto r = run_cli({"optimize", "--dataset", "karate", "--strategy", "exact-mu", "--k", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "iteration,source_label,target_label,metric_score,exact_objective,wall_ms\n");
}

TEST(Cli, OptimizeUsesNodeLabels) {
  const auto r = run_cli({"optimize", "--dataset", "path:4", "--strategy", "exact-mu", "--k", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).at(1), "1,0,3,2,2,");
}

TEST(Cli, OptimizeIsIndependentOfThreadCount) {
  for (const char* s : {"exact-mu", "metric-omega", "min-eigcent-product"}) {
    const auto a = run_cli({"optimize", "--dataset", "karate", "--strategy", s, "--k", "3"});
    const auto b = run_cli({"optimize", "--dataset", "karate", "--strategy", s, "--k", "3",
                            "--threads", "4"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out) << s;
  }
}

TEST(Cli, OptimizeWritesOneFilePerStrategy) {
  TempDir dir;
  const auto r = run_cli({"optimize", "--dataset", "cycle:6", "--directed", "--bidirect",
                          "--strategy", "exact-remu,metric-lower,metric-upper", "--k", "2",
                          "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* tag : {"exact-remu", "metric-lower", "metric-upper"})
    EXPECT_TRUE(fs::exists(dir.path() / (std::string(tag) + ".csv"))) << tag;
}

TEST(Cli, PerturbCheckOrdering) {
  const auto r = run_cli({"perturb-check", "--dataset", "karate", "--k", "10", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.front(), "K,exact_mu,first_order,second_order");
  ASSERT_EQ(ls.size(), 7u);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = fields(ls[i]);
    EXPECT_EQ(f[0], 2.0 * static_cast<double>(i - 1));
    EXPECT_LE(f[3], f[2] + 1e-12);
  }
}

TEST(Cli, SimulateReportsRate) {
  TempDir dir;
  const auto csv = dir.path() / "traj.csv";
  const auto r = run_cli({"simulate", "--dataset", "dcycle:3", "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 3u);
  EXPECT_EQ(ls[0], "quantity,value");
  EXPECT_EQ(ls[1].rfind("decay_rate,", 0), 0u);
  EXPECT_NEAR(std::stod(ls[1].substr(11)), 1.5, 0.03);
  EXPECT_EQ(ls[2], "connectivity,1.5");
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,v_0,v_1,v_2");
}

TEST(Cli, BoundCheckRows) {
  const auto r = run_cli({"bound-check", "--dataset", "dcycle:5", "--norm", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  EXPECT_EQ(ls.front(), "source_label,target_label,lower_bound,exact_change,upper_bound");
  EXPECT_EQ(ls.size(), 1u + 15u);
  EXPECT_EQ(run_cli({"bound-check", "--dataset", "dcycle:5", "--norm", "3"}).code, 1);
  EXPECT_EQ(run_cli({"bound-check", "--dataset", "cycle:5"}).code, 1);
}

class FetchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    source_ = dir_.path() / "mirror.txt";
    std::ofstream(source_, std::ios::binary) << "0 1\n1 2\n2 0\n";
    ::setenv("SPECAUG_DATA_DIR", (dir_.path() / "data").c_str(), 1);
  }
  void TearDown() override { ::unsetenv("SPECAUG_DATA_DIR"); }

  fs::path manifest(const std::string& sha) {
    const auto p = dir_.path() / "manifest.json";
    std::ofstream(p) << R"({"datasets": [{"name": "tri", "directed": false, "url": "file://)"
                     << source_.string() << R"(", "sha256": )" << sha << R"(, "bytes": 12}]})";
    return p;
  }

  TempDir dir_;
  fs::path source_;
};

TEST_F(FetchTest, DownloadsAndVerifies) {
  const std::string sha = sha256_hex("0 1\n1 2\n2 0\n");
  const auto r = run_cli({"fetch", "--manifest", manifest("\"" + sha + "\"").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(sha), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_.path() / "data" / "tri.txt"));
  // cached files are then loadable by name
  const auto s = run_cli({"stats", "--dataset", "tri"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(lines(s.out).at(1), "tri,3,3,2,3,undirected");
}

TEST_F(FetchTest, HashMismatchIsRejected) {
  const auto r = run_cli({"fetch", "--manifest", manifest("\"" + std::string(64, '0') + "\"").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("SHA-256 mismatch"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_.path() / "data" / "tri.txt"));
}

TEST_F(FetchTest, UnpinnedHashIsReported) {
  const auto r = run_cli({"fetch", "--manifest", manifest("null").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("no pinned hash"), std::string::npos);
}

TEST(Cli, BundledManifestHasNoUrlsYet) {
  const auto r = run_cli({"fetch", "--dataset", "netscience"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("has no URL"), std::string::npos);
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
