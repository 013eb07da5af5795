#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  fs::path d = fs::temp_directory_path() / "sptq_cli_test";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path put(const std::string& name, const std::string& body) {
  fs::path p = workdir() / name;
  std::ofstream(p) << body;
  return p;
}

int sptq(const std::string& args) {
  std::string cmd = std::string(SPTQ_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST(Cli, FlatbandWritesCommentedCsv) {
  fs::path cfg = put("fb.json", R"({"experiment": "flatband", "seed": 3, "parameters": {"N_max": 3, "t_steps": 5}})");
  fs::path out = workdir() / "fb.csv";
  ASSERT_EQ(sptq("flatband --config " + cfg.string() + " --out " + out.string()), 0);
  std::string s = slurp(out);
  EXPECT_NE(s.find("# config_hash: "), std::string::npos);
  EXPECT_NE(s.find("# seed: 3"), std::string::npos);
  EXPECT_NE(s.find("\nt,N,index,xi_numeric,xi_analytic\n"), std::string::npos);
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  fs::path cfg = put("dis.json", R"({"experiment": "disorder-ssh", "parameters": {"l": 3, "realizations": 5, "t_steps": 4}})");
  fs::path a = workdir() / "dis1.csv", b = workdir() / "dis3.csv";
  ASSERT_EQ(sptq("disorder-ssh --config " + cfg.string() + " --threads 1 --out " + a.string()), 0);
  ASSERT_EQ(sptq("disorder-ssh --config " + cfg.string() + " --threads 3 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Cli, OverrideChangesHash) {
  fs::path cfg = put("fb2.json", R"({"experiment": "flatband", "parameters": {"N_max": 2, "t_steps": 3}})");
  fs::path a = workdir() / "o1.csv", b = workdir() / "o2.csv";
  ASSERT_EQ(sptq("flatband --config " + cfg.string() + " --out " + a.string()), 0);
  ASSERT_EQ(sptq("flatband --config " + cfg.string() + " --parameters.t_steps=4 --out " + b.string()), 0);
  auto hash = [](const std::string& s) {
    auto i = s.find("# config_hash: ");
    return s.substr(i, s.find('\n', i) - i);
  };
  EXPECT_NE(hash(slurp(a)), hash(slurp(b)));
}

TEST(Cli, ConfigErrorsExitOne) {
  fs::path unknown = put("bad1.json", R"({"experiment": "flatband", "parameters": {"bogus": 1}})");
  EXPECT_EQ(sptq("flatband --config " + unknown.string() + " --out /dev/null"), 1);
  fs::path top = put("bad2.json", R"({"experiment": "flatband", "extra": 1})");
  EXPECT_EQ(sptq("flatband --config " + top.string() + " --out /dev/null"), 1);
  fs::path type = put("bad3.json", R"({"experiment": "flatband", "parameters": {"N_max": "three"}})");
  EXPECT_EQ(sptq("flatband --config " + type.string() + " --out /dev/null"), 1);
  fs::path mismatch = put("bad4.json", R"({"experiment": "mbl"})");
  EXPECT_EQ(sptq("flatband --config " + mismatch.string() + " --out /dev/null"), 1);
  EXPECT_EQ(sptq("flatband --parameters.nope=2 --out /dev/null"), 1);
}

TEST(Cli, NumericalFailureExitsTwo) {
  fs::path cfg = put("mbl.json", R"({"experiment": "mbl", "parameters": {"L": 9}})");
  EXPECT_EQ(sptq("mbl --config " + cfg.string() + " --out /dev/null"), 2);
}

TEST(Cli, ValidateReportAndInjectedTolerance) {
  fs::path ok = put("v1.json", R"({"experiment": "validate", "parameters": {"criteria": [5]}})");
  fs::path rep = workdir() / "v1.json.out";
  ASSERT_EQ(sptq("validate --config " + ok.string() + " --out " + rep.string()), 0);
  auto j = nlohmann::json::parse(slurp(rep));
  ASSERT_EQ(j["criteria"].size(), 1u);
  EXPECT_TRUE(j["criteria"][0]["pass"].get<bool>());

  fs::path bad = put("v2.json", R"({"experiment": "validate", "parameters": {"criteria": [5], "tol_scale": {"5": 0}}})");
  fs::path rep2 = workdir() / "v2.json.out";
  EXPECT_EQ(sptq("validate --config " + bad.string() + " --out " + rep2.string()), 2);
  auto j2 = nlohmann::json::parse(slurp(rep2));
  EXPECT_FALSE(j2["criteria"][0]["pass"].get<bool>());
}

TEST(Cli, ValidateReportCarriesMeasuredC) {
  fs::path cfg = put("v3.json", R"({"experiment": "validate", "parameters": {"criteria": [3]}})");
  fs::path rep = workdir() / "v3.json.out";
  sptq("validate --config " + cfg.string() + " --out " + rep.string());
  auto j = nlohmann::json::parse(slurp(rep));
  bool found = false;
  for (auto& [k, v] : j["criteria"][0]["measured"].items())
    if (k.rfind("C", 0) == 0) found = true;
  EXPECT_TRUE(found);
}
