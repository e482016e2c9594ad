#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "greencube/cli.hpp"

using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = greencube::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json report(std::vector<std::string> args) {
  const auto r = run(std::move(args));
  EXPECT_EQ(r.code, 0) << r.err;
  return json::parse(r.out);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content = "") {
  const auto p = std::filesystem::temp_directory_path() / ("greencube_test_" + name);
  if (!content.empty()) std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST(Cli, LambdaExample) {
  const auto r = report({"lambda", "--family-known-margins-V", "", "--m", "3", "--measure", "lebesgue"});
  const double lam = (std::pow(4.0 / 3.0, 3) - 2.0) / 64.0;
  EXPECT_NEAR(r["result"]["lambda"].get<double>(), lam, 1e-15);
  EXPECT_NEAR(r["result"]["inverse"].get<double>(), 64.0 / (64.0 / 27.0 - 2.0), 1e-10);
  EXPECT_EQ(r["command"], "lambda");
  EXPECT_EQ(r["config"]["m"], 3);
  EXPECT_TRUE(r.contains("timing"));
  EXPECT_TRUE(r.contains("version"));
}

TEST(Cli, CoeffsExample) {
  const auto r = report({"coeffs", "--family", "[[1,2]]", "--m", "2"});
  EXPECT_EQ(r["result"]["a"], json::parse(R"({"{1,2}": 1})"));
  const auto pillow = report({"coeffs", "--family", "pillow", "--m", "3"});
  EXPECT_EQ(pillow["result"]["a"]["{1,2,3}"], 1);
  EXPECT_EQ(pillow["result"]["a"]["{1,2}"], -1);
  EXPECT_EQ(pillow["result"]["a"]["{2}"], 1);
}

TEST(Cli, StatFootruleExample) {
  const auto path = temp_file("comonotone.csv", "x,y\n0.1,0.2\n0.4,0.5\n0.2,0.3\n0.9,0.8\n");
  const auto r = report({"stat", "--name", "footrule", "--input", path.string()});
  EXPECT_EQ(r["result"]["value"], 0);
  EXPECT_EQ(r["result"]["n"], 4);
  const auto rho = report({"stat", "--name", "rho", "--input", path.string()});
  EXPECT_EQ(rho["result"]["value"].get<double>(), 1.0);
}

TEST(Cli, OtherCommands) {
  EXPECT_NEAR(report({"efficiency", "--family-known-margins-V", "", "--m", "2", "--measure",
                      "diagonal"})["result"]["coefficient"]
                  .get<double>(),
              90.0, 1e-8);
  const auto g = report({"green-eval", "--family", "empty", "--m", "2", "--x", "0.3,0.6", "--xi",
                         "0.5,0.4"});
  EXPECT_NEAR(g["result"]["value"].get<double>(), 0.12, 1e-15);
  const auto f = report({"family", "--m", "3", "--enumerate"});
  EXPECT_EQ(f["result"]["count"], 19);
  const auto e = report({"eigen", "--family", "pillow", "--m", "2", "--grid-n", "8"});
  EXPECT_NEAR(e["result"]["value"].get<double>(), 1.0 / std::pow(M_PI, 4), 0.02 / std::pow(M_PI, 4));
  const auto s = report({"solve", "--family-known-margins-V", "", "--m", "2", "--eval-at",
                         "0.5,0.5;0.3,0.6"});
  EXPECT_GT(s["result"]["lambda"].get<double>(), 0.0);
}

TEST(Cli, ExitCodes) {
  auto r = run({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  const auto e = json::parse(r.err);
  EXPECT_TRUE(e["error"].contains("kind"));
  EXPECT_TRUE(e["error"].contains("message"));
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_EQ(run({"coeffs", "--family", "[[1,2", "--m", "2"}).code, 2);
  EXPECT_EQ(run({"coeffs", "--family", "[[1]]", "--m", "2"}).code, 2);  // not upward closed
  EXPECT_EQ(run({"lambda", "--m", "2", "--measure", "{\"points\": 3}"}).code, 2);
  EXPECT_EQ(run({"simulate", "--R", "10"}).code, 2);
  const auto io = run({"stat", "--name", "rho", "--input", "/nonexistent/x.csv"});
  EXPECT_EQ(io.code, 1);
  EXPECT_EQ(json::parse(io.err)["error"]["kind"], "io");
  EXPECT_EQ(run({"coeffs", "--m", "2", "--out-file", "/nonexistent/dir/out.json"}).code, 1);
}

TEST(Cli, ConfigRoundTrip) {
  const std::vector<std::vector<std::string>> commands{
      {"simulate", "--mode", "nulldist", "--stat", "rho", "--m", "2", "--n", "20", "--R", "200",
       "--seed", "99"},
      {"simulate", "--mode", "tiedcov", "--m", "2", "--n", "30", "--R", "150", "--seed", "5"},
      {"lambda", "--family", "top", "--m", "3", "--measure", "diagonal", "--method", "quadrature"},
      {"solve", "--family-known-margins-V", "{1}", "--m", "2", "--measure", "diag+anti"}};
  for (const auto& cmd : commands) {
    const auto first = report(cmd);
    const auto path = temp_file("report.json", first.dump());
    const auto again = report({"--config", path.string()});
    EXPECT_EQ(first["config"], again["config"]) << cmd[0];
    EXPECT_EQ(first["result"], again["result"]) << cmd[0];
  }
}

TEST(Cli, CsvOutput) {
  const auto r = run({"simulate", "--mode", "cov", "--m", "2", "--grid-n", "2", "--n", "20", "--R",
                      "100", "--output", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# empirical"), std::string::npos);
  const auto lam = run({"lambda", "--family", "pillow", "--m", "2", "--output", "csv"});
  const auto body = lam.out.find('\n') + 1;
  EXPECT_EQ(json::parse(lam.out.substr(2, body - 2))["config"]["family"], "[{1},{2},{1,2}]");
  EXPECT_EQ(lam.out.compare(body, 15, "inverse,lambda\n"), 0) << lam.out;
  const auto path = temp_file("field.csv");
  ASSERT_EQ(run({"simulate", "--mode", "field", "--family", "pillow", "--m", "2", "--grid-n", "3",
                 "--R", "100", "--output", "csv", "--out-file", path.string()})
                .code,
            0);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) lines += !line.empty() && line[0] != '#';
  EXPECT_EQ(lines, 100);
}

TEST(Cli, ThreadsDoNotChangeResults) {
  for (const char* mode : {"cov", "tiedcov", "field", "nulldist"}) {
    std::vector<json> results;
    for (const char* t : {"1", "4", "8"}) {
      results.push_back(report({"simulate", "--mode", mode, "--m", "2", "--n", "40", "--R", "200",
                                "--grid-n", "3", "--seed", "17", "--threads", t})["result"]);
    }
    EXPECT_EQ(results[0], results[1]) << mode;
    EXPECT_EQ(results[0], results[2]) << mode;
  }
}

TEST(Cli, ToolBinary) {
  const auto out = temp_file("version.txt");
  const std::string cmd = std::string(GREENCUBE_TOOL) + " --version > " + out.string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("greencube ", 0), 0u) << line;

  const std::string bad = std::string(GREENCUBE_TOOL) + " nonsense > /dev/null 2>&1";
  const int status = std::system(bad.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
  const std::string help = std::string(GREENCUBE_TOOL) + " simulate --help > " + out.string();
  ASSERT_EQ(std::system(help.c_str()), 0);
  std::stringstream all;
  all << std::ifstream(out).rdbuf();
  EXPECT_NE(all.str().find("--threads"), std::string::npos);
}
