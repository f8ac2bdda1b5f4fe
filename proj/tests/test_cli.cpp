#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "ncfree/cli.hpp"

using namespace ncfree;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "ncfree");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("ncfree_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::string tuple_file(const std::string& name, const MatrixTuple& t) {
  return write_temp(name, tuple_to_json(t).dump());
}

}  // namespace

TEST(Cli, GirardText) {
  const CliRun r = run({"girard", "--n", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2*(alpha^3 + alpha*beta + gamma + beta*alpha)\n");
}

TEST(Cli, GirardVerify) {
  const CliRun r = run({"girard", "--n", "-2", "--verify", "--trials", "3", "--seed", "5"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out.substr(r.out.find('{')));
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Cli, Decompose) {
  const CliRun r = run({"decompose", "--expr", "x^3 + y^3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["generators"], "2*U^3 + 2*U*M0 + 2*M0*U + 2*M1");
  EXPECT_EQ(run({"decompose", "--expr", "x*y"}).code, 2);
}

TEST(Cli, SqrtEnumeration) {
  const std::string id2 = tuple_file("id2.json", MatrixTuple({CMatrix::Identity(2, 2)}));
  const CliRun r = run({"sqrt", "--matrix", id2, "--enumerate"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["exists"].get<bool>());
  EXPECT_EQ(j["roots"]["roots"].size(), 2u);

  CMatrix n = CMatrix::Zero(2, 2);
  n(0, 1) = 1.0;
  const CliRun none = run({"sqrt", "--matrix", tuple_file("nil.json", MatrixTuple({n}))});
  EXPECT_EQ(none.code, 0);
  EXPECT_FALSE(nlohmann::json::parse(none.out)["exists"].get<bool>());
}

TEST(Cli, PiAndFiber) {
  const MatrixTuple w({scalar_matrix(4.0, 1), scalar_matrix(2.0, 1)});
  const std::string path = tuple_file("w.json", w);
  const CliRun p = run({"pi", "--input", path});
  ASSERT_EQ(p.code, 0) << p.err;
  const auto pj = nlohmann::json::parse(p.out);
  EXPECT_EQ(matrix_from_json(pj["alpha"], 1)(0, 0), cd(3.0));
  const CliRun f = run({"fiber", "--input", path});
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_EQ(nlohmann::json::parse(f.out)["count"], 2);
}

TEST(Cli, VerifySuites) {
  const CliRun r = run({"verify", "--suite", "pascoe", "--seed", "7"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["pass"].get<bool>());
  EXPECT_EQ(run({"verify", "--suite", "bogus"}).code, 2);
}

TEST(Cli, CheckDomain) {
  const std::string x = tuple_file("x14.json", MatrixTuple({diagonal({1, 4})}));
  const CliRun d = run({"check-domain", "--pred", "D", "--input", x, "--centers", "1,4"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_TRUE(nlohmann::json::parse(d.out)["member"].get<bool>());
  const CliRun q = run({"check-domain", "--pred", "Q", "--input", x});
  EXPECT_TRUE(nlohmann::json::parse(q.out)["member"].get<bool>());
  EXPECT_EQ(run({"check-domain", "--pred", "D", "--input", x}).code, 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"girard"}).code, 2);
  EXPECT_EQ(run({"decompose", "--expr", "x +"}).code, 3);
  EXPECT_EQ(run({"pi", "--input", write_temp("bad.json", "{not json")}).code, 3);
  EXPECT_EQ(run({"pi", "--input", "/nonexistent/ncfree.json"}).code, 2);
}

TEST(Cli, Binary) {
  const std::string out = write_temp("bin_out.txt", "");
  const std::string cmd = std::string(NCFREE_CLI_PATH) + " girard --n 1 > " + out;
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "2*alpha");
  const std::string fail = std::string(NCFREE_CLI_PATH) + " decompose --expr 'x +' 2>/dev/null";
  const int status = std::system(fail.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 3);
}
