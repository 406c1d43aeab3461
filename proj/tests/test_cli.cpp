#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

using carleman::cli::run;
using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  [[nodiscard]] json report() const { return json::parse(out); }
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "carleman_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("analyze reports indices and a regularity verdict") {
  auto o = call({"analyze", "--seq", "gevrey:1", "--prefix", "10000"});
  REQUIRE(o.code == 0);
  auto j = o.report();
  CHECK(j["tool"] == "carleman");
  CHECK(j["config"]["command"] == "analyze");
  CHECK(j["status"] == "PASS");
  CHECK(j["result"]["omega"]["value"].get<double>() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(j["config"]["seq"] == "gevrey:1");

  auto q = call({"analyze", "--seq", "qpower:2", "--prefix", "2000"});
  CHECK(q.code == 0);
  CHECK(q.report()["status"] == "FAIL");
}

TEST_CASE("identical runs give identical reports") {
  std::vector<std::string> args{"extend", "--seq", "gevrey:1", "--weight", "gevrey:1", "--coeffs",
                                "random-signs:8", "--seed", "7", "--eval", "0.1,0.2:0.3"};
  auto a = call(args);
  auto b = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  args[8] = "8";
  CHECK(call(args).out != a.out);
}

TEST_CASE("moments writes a CSV") {
  auto csv = scratch("moments.csv");
  auto o = call({"moments", "--weight", "gevrey:2", "--kernel", "classical:2", "--count", "10", "--csv", csv.string()});
  REQUIRE(o.code == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "p,m,logm,relerr");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("quasi verdicts") {
  auto o = call({"quasi", "--seq", "alphabeta:1:3", "--gamma", "1", "--prefix", "10000"});
  REQUIRE(o.code == 0);
  CHECK(o.out.find("not quasianalytic") != std::string::npos);
}

TEST_CASE("extend evaluates the constant extension") {
  auto o = call({"extend", "--seq", "gevrey:1", "--weight", "gevrey:1", "--coeffs",
                 CARLEMAN_TEST_DATA "/delta0.json", "--eval", "0.1"});
  REQUIRE(o.code == 0);
  CHECK(o.out.find("0.99995460007") != std::string::npos);
}

TEST_CASE("certify exit codes") {
  CHECK(call({"certify", "flatness", "--seq", "gevrey:1", "--weight", "gevrey:1", "--subsector", "0.8:1"}).code == 0);
  CHECK(call({"certify", "flatness", "--seq", "gevrey:1", "--weight", "gevrey:1", "--function", "const:1"}).code == 1);
  CHECK(call({"certify", "regularity", "--seq", "qpower:2", "--prefix", "200"}).code == 1);
  CHECK(call({"certify", "kernel", "--seq", "gevrey:1", "--weight", "gevrey:1"}).code == 0);
}

TEST_CASE("report goes to --out") {
  auto path = scratch("report.json");
  std::filesystem::remove(path);
  auto o = call({"flat", "--seq", "gevrey:1", "--weight", "gevrey:1", "--subsector", "0.8:1", "--out", path.string()});
  REQUIRE(o.code == 0);
  std::ifstream in(path);
  auto j = json::parse(in);
  CHECK(j["status"] == "PASS");
}

TEST_CASE("invalid input exits with 2") {
  CHECK(call({"analyze", "--seq", "bogus:1"}).code == 2);
  CHECK(call({"analyze"}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"certify", "nonsense", "--seq", "gevrey:1"}).code == 2);
  CHECK(call({"extend", "--seq", "gevrey:1", "--weight", "gevrey:1", "--coeffs", "delta:3", "--eval", "0.1:2.0"}).code == 2);
  CHECK(call({"extend", "--seq", "gevrey:1", "--weight", "gevrey:1", "--coeffs", "/no/such/file.json"}).code == 2);
  auto o = call({"analyze", "--seq", "gevrey:-1"});
  CHECK(o.code == 2);
  CHECK_FALSE(o.err.empty());
}
