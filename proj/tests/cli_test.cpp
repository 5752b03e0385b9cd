#include "sepmeas/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "sepmeas/io.hpp"

namespace sepmeas::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(SEPMEAS_TEST_TMPDIR) / ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::create_directories(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST_F(CliTest, GenerateDefaultsToPrimeFactorization) {
  const Result r = call({"generate", "--n", "5", "--out", path("i5.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("completeness residual"), std::string::npos);
  const json j = json::parse(slurp(path("i5.json")));
  EXPECT_EQ(j["dims"], json::parse("[2,2]"));
  EXPECT_EQ(j["states"].size(), 5u);
  EXPECT_EQ(j["manifest"]["command"], "generate");
}

TEST_F(CliTest, GenerateThreeParties) {
  const Result r = call({"generate", "--n", "13", "--dims", "2,2,3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["states"][0].size(), 12u);
}

TEST_F(CliTest, GenerateSinglePartyIsAllowedButFlagged) {
  const Result r = call({"generate", "--n", "7", "--dims", "6"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("single party"), std::string::npos);
}

TEST_F(CliTest, GenerateRejectsBadInput) {
  EXPECT_EQ(call({"generate", "--n", "9"}).code, kExitInput);
  EXPECT_EQ(call({"generate", "--n", "7", "--dims", "2,2"}).code, kExitInput);
  EXPECT_EQ(call({"generate", "--n", "7", "--dims", "3,2"}).code, kExitInput);
  EXPECT_EQ(call({"generate"}).code, kExitInput);
  EXPECT_EQ(call({}).code, kExitInput);
}

TEST_F(CliTest, InstanceRoundTripIsByteIdentical) {
  ASSERT_EQ(call({"generate", "--n", "11", "--out", path("a.json")}).code, kExitOk);
  const json loaded = json::parse(slurp(path("a.json")));
  const json reemitted = io::instance_to_json(io::instance_from_json(loaded));
  EXPECT_EQ(reemitted["states"].dump(2), loaded["states"].dump(2));
  EXPECT_EQ(reemitted["dims"], loaded["dims"]);
}

TEST_F(CliTest, OptimizeReportsHalf) {
  ASSERT_EQ(call({"generate", "--n", "5", "--out", path("i.json")}).code, kExitOk);
  const Result r = call({"optimize", path("i.json"), "--measurement-out", path("m.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["failure_probability"].get<double>(), 0.5, 1e-12);
  for (const auto& q : j["q_values"]) EXPECT_NEAR(q.get<double>(), 0.625, 1e-10);
  for (const auto& w : j["weights"]) EXPECT_NEAR(w.get<double>(), 0.8, 1e-15);
  EXPECT_TRUE(fs::exists(path("m.json")));
}

TEST_F(CliTest, OptimizeRejectsMalformedFile) {
  std::ofstream(path("bad.json")) << "{\"n\": 5, \"dims\": [2,2], \"states\": [[";
  EXPECT_EQ(call({"optimize", path("bad.json")}).code, kExitInput);
  EXPECT_EQ(call({"optimize", path("missing.json")}).code, kExitInput);
}

TEST_F(CliTest, CertifyVerdicts) {
  ASSERT_EQ(call({"generate", "--n", "5", "--out", path("i.json")}).code, kExitOk);
  ASSERT_EQ(call({"optimize", path("i.json"), "--measurement-out", path("m.json")}).code, kExitOk);
  const Result from_file = call({"certify", path("m.json")});
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  const json j = json::parse(from_file.out);
  EXPECT_EQ(j["total"], 10);
  EXPECT_EQ(j["bound"], 8);
  EXPECT_EQ(j["verdict"], "VIOLATES");
  EXPECT_NE(from_file.err.find("VIOLATES"), std::string::npos);

  ASSERT_EQ(call({"generate", "--n", "11", "--dims", "2,5", "--out", path("i11.json")}).code, kExitOk);
  const json j11 = json::parse(call({"certify", "--from-instance", path("i11.json")}).out);
  EXPECT_EQ(j11["total"], 22);
  EXPECT_EQ(j11["bound"], 20);
  EXPECT_EQ(j11["verdict"], "VIOLATES");
}

TEST_F(CliTest, CertifyLocalProjectiveControl) {
  std::ofstream(path("local.json")) << R"([
    [ [[[1,0],[0,0]],[[0,0],[0,0]]], [[[1,0],[0,0]],[[0,0],[1,0]]] ],
    [ [[[0,0],[0,0]],[[0,0],[1,0]]], [[[1,0],[0,0]],[[0,0],[1,0]]] ]
  ])";
  const Result r = call({"certify", path("local.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["verdict"], "SATISFIES");
}

TEST_F(CliTest, CertifyRejectsUnfactoredOperators) {
  std::ofstream(path("flat.json")) << R"([ [[[1,0],[0,0]],[[0,0],[1,0]]] ])";
  EXPECT_EQ(call({"certify", path("flat.json")}).code, kExitInput);
  EXPECT_EQ(call({"certify"}).code, kExitInput);
}

TEST_F(CliTest, SimulateBandAndDeterminism) {
  const Result a = call({"simulate", "--n", "5", "--trials", "100000", "--seed", "7"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const json ja = json::parse(a.out);
  EXPECT_NEAR(ja["empirical_failure"].get<double>(), 0.5, 0.0048);
  EXPECT_EQ(ja["misidentifications"], 0);
  const json jb = json::parse(call({"simulate", "--n", "5", "--trials", "100000", "--seed", "7"}).out);
  EXPECT_EQ(ja["counts"], jb["counts"]);
  EXPECT_EQ(ja["manifest"]["parameters"], jb["manifest"]["parameters"]);
}

TEST_F(CliTest, SimulateCopiesAndSingleTrial) {
  const json two = json::parse(call({"simulate", "--n", "5", "--copies", "2", "--trials", "1000"}).out);
  EXPECT_NEAR(two["theoretical_failure"].get<double>(), 0.25, 1e-12);
  const json one = json::parse(call({"simulate", "--n", "5", "--trials", "1"}).out);
  int total = 0;
  for (const auto& [k, v] : one["counts"].items()) total += v.get<int>();
  EXPECT_EQ(total, 1);
}

TEST_F(CliTest, SimulateInputErrors) {
  EXPECT_EQ(call({"simulate", "--n", "5", "--weights", "0.9,0.9,0.9,0.9"}).code, kExitInput);
  EXPECT_EQ(call({"simulate", "--n", "5", "--weights", "0.5,0.5"}).code, kExitInput);
  EXPECT_EQ(call({"simulate", "--n", "13", "--copies", "3"}).code, kExitInput);
  EXPECT_EQ(call({"simulate"}).code, kExitInput);
}

TEST_F(CliTest, VerifyAllReferenceInstances) {
  const Result r = call({"verify", "--n", "5,7,11,13", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.out;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  // (2,2); (2,3); (2,5); (2,6), (3,4), (2,2,3)
  ASSERT_EQ(j["rows"].size(), 6u);
  EXPECT_EQ(j["rows"][0]["n"], 5);
  EXPECT_TRUE(j["rows"][0]["checks"].contains("golden"));
  EXPECT_EQ(j["rows"][5]["n"], 13);
}

TEST_F(CliTest, VerifyTableAndUsageErrors) {
  const Result table = call({"verify", "--n", "7"});
  EXPECT_EQ(table.code, kExitOk);
  EXPECT_NE(table.out.find("all checks passed"), std::string::npos);
  EXPECT_EQ(call({"verify", "--n", "8"}).code, kExitInput);
  EXPECT_EQ(call({"verify"}).code, kExitInput);
}

TEST_F(CliTest, HelpAndVersion) {
  EXPECT_EQ(call({"--help"}).code, kExitOk);
  const Result v = call({"--version"});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_FALSE(v.out.empty());
}

}  // namespace
}  // namespace sepmeas::cli
