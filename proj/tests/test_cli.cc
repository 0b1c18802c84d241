#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mrs/cli.hh"
#include "mrs/json_io.hh"

using namespace mrs;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "mrs_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mrs");
  if (args.size() > 1 && (args[1] == "generate" || args[1] == "oracle" || args[1] == "feasible")) {
    args.push_back("--cache-dir");
    args.push_back((scratch() / "cache").string());
  }
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(MRS_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_CASE("generate through the pipeline") {
  auto r = run({"generate", "--group", "Z9+Z2+Z8", "--rows", "9", "--cols", "4", "--count", "4", "--trace"});
  REQUIRE(r.code == kExitOk);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["arrays"].size() == 4);
  CHECK(doc.contains("trace"));
  RectSet s = rect_set_from_json(doc);
  CHECK(verify(s, {.zero_sum = true}).ok);
}

TEST_CASE("generate reports infeasible shapes") {
  auto r = run({"generate", "--group", "Z6", "--rows", "2", "--cols", "3", "--count", "1"});
  CHECK(r.code == kExitNegative);
  CHECK(r.out.find("violates-sylow-cyclic") != std::string::npos);
}

TEST_CASE("generate falls back to search") {
  auto path = (scratch() / "z4.json").string();
  auto r = run({"generate", "--group", "Z4", "--rows", "2", "--cols", "2", "--count", "1", "--out", path});
  REQUIRE(r.code == kExitOk);
  CHECK(verify(read_rect_set(path)).ok);
}

TEST_CASE("generate marks feasible shapes it cannot build") {
  auto r = run({"generate", "--group", "Z2+Z2+Z2+Z2+Z2+Z2+Z2", "--rows", "8", "--cols", "16", "--count", "1"});
  CHECK(r.code == kExitNotConstructed);
}

TEST_CASE("generate output is byte stable") {
  std::vector<std::string> args{"generate", "--group", "Z45+Z4+Z4", "--rows", "15", "--cols", "16", "--count", "3"};
  auto x = run(args);
  auto y = run(args);
  REQUIRE(x.code == kExitOk);
  CHECK(x.out == y.out);
  auto csv = run({"generate", "--group", "Z3+Z2+Z2", "--rows", "3", "--cols", "4", "--count", "1", "--format", "csv"});
  REQUIRE(csv.code == kExitOk);
  CHECK(csv.out.rfind("array,row", 0) == 0);
}

TEST_CASE("verify exit codes") {
  CHECK(run({"verify", fixture("imrs_p_2_8_p3.json")}).code == kExitOk);
  CHECK(run({"verify", "--zero-sum", fixture("imrs_p_2_8_p3.json")}).code == kExitOk);

  auto doc = nlohmann::json::parse(std::ifstream(fixture("base_3_2_2.json")));
  doc["arrays"][0][0][1] = doc["arrays"][0][0][0];
  auto dup = (scratch() / "dup.json").string();
  std::ofstream(dup) << doc.dump();
  auto r = run({"verify", "--format", "pretty", dup});
  CHECK(r.code == kExitNegative);
  CHECK(r.out.find("duplicate") != std::string::npos);

  auto bad = (scratch() / "bad.json").string();
  std::ofstream(bad) << "{ not json";
  CHECK(run({"verify", bad}).code == kExitUsage);
}

TEST_CASE("feasible and oracle") {
  auto f = run({"feasible", "--group", "Z2+Z2+Z3", "--rows", "2", "--cols", "3", "--count", "2"});
  CHECK(f.code == kExitNegative);
  CHECK(f.out.find("violates-2xodd") != std::string::npos);
  auto o = run({"oracle", "--group", "Z6", "--rows", "2", "--cols", "3", "--count", "1", "--format", "pretty"});
  CHECK(o.code == kExitNegative);
  CHECK(o.out.find("nonexistence confirmed") != std::string::npos);
  auto big = run({"oracle", "--group", "Z30", "--rows", "5", "--cols", "6", "--count", "1"});
  CHECK(big.code == kExitUsage);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"generate", "--group", "Z4"}).code == kExitUsage);
  CHECK(run({"feasible", "--group", "Z4", "--rows", "0", "--cols", "2", "--count", "1"}).code == kExitUsage);
  CHECK(run({"feasible", "--group", "Y4", "--rows", "2", "--cols", "2", "--count", "1"}).code == kExitUsage);
  CHECK(run({"feasible", "--group", "Z4", "--rows", "2", "--cols", "3", "--count", "1"}).code == kExitUsage);
}
