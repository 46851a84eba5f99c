#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "gzavg/error.hpp"
#include "gzavg/kernel.hpp"

using namespace gzavg;
using namespace gzavg::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "gzavg");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
  const std::string path = "gzavg_test_" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("ranges") {
  CHECK(parse_range("5..500").lo == 5);
  CHECK(parse_range("5..500").hi == 500);
  CHECK(parse_range("7").lo == 7);
  CHECK_THROWS_AS(parse_range("9..3"), Error);
  CHECK_THROWS_AS(parse_range("a..3"), Error);
}

TEST_CASE("eigenvalue ingestion") {
  std::istringstream one("level,weight,p,a_p\n1,12,2,-24\n");
  CHECK(parse_eigenvalues(one).rows.size() == 1);

  std::istringstream bad("level,weight,p,a_p\n1,12,2,-24\n1,12,3,abc\n");
  try {
    parse_eigenvalues(bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  std::istringstream wild("level weight p a_p\n1 12 2 1000\n");
  const auto t = parse_eigenvalues(wild);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].ramanujan_violation);  // 2 * 2^{5.5} ~ 90.5

  CHECK_THROWS_AS(ingest_eigenvalues("/nonexistent/table.csv"), Error);
  const auto real = ingest_eigenvalues(GZAVG_TEST_DATA_DIR "/eigenvalues.csv");
  CHECK(real.rows.size() == 7);
  for (const auto& r : real.rows) CHECK_FALSE(r.ramanujan_violation);
}

TEST_CASE("csv quoting") {
  Table t;
  t.columns = {"a", "b"};
  t.rows.push_back({std::string("x,y"), std::string("say \"hi\"")});
  t.rows.push_back({0.1, std::monostate{}});
  CHECK(to_csv(t) == "a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n0.10000000000000001,\r\n");
}

TEST_CASE("classgroup and effective-bound commands") {
  const auto cg = invoke({"classgroup", "--D", "-7", "--m", "1..1"});
  CHECK(cg.code == kExitOk);
  CHECK(cg.out == "class,a,b,c,h,u,m,r_A\r\n0,1,1,2,1,1,1,1\r\n");

  const auto eb = invoke({"effective-bound", "--k", "2", "--D", "-7", "--p", "140000"});
  CHECK(eb.code == kExitOk);
  CHECK(eb.out.find("140000,2,-7,140000,false") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"kernel", "--tail-tol", "-1"}).code == kExitConfig);
  CHECK(invoke({"nonsense"}).code == kExitConfig);
  CHECK(invoke({"certify", "--D", "-7", "--primes", "9..3"}).code == kExitConfig);
  CHECK(invoke({"selftest-oldforms", "--eigenvalues", "/nonexistent/e.csv"}).code == kExitIo);
  const auto bad = temp_file("bad.csv", "level,weight,p,a_p\n1,12,2,x\n");
  CHECK(invoke({"selftest-oldforms", "--eigenvalues", bad}).code == kExitParse);
  std::remove(bad.c_str());
  CHECK(invoke({"classgroup", "--D", "-8"}).code == kExitDomain);
  CHECK(invoke({"kernel", "--D", "-7", "--p", "7", "--m", "1..1"}).code == kExitDomain);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("selftest with an eigenvalue table") {
  const auto r = invoke({"selftest-oldforms", "--eigenvalues", GZAVG_TEST_DATA_DIR "/eigenvalues.csv",
                         "--format", "json"});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"].size() == 7);
}

TEST_CASE("kernel JSON round-trips the coefficient map") {
  const auto r = invoke({"kernel", "--k", "2", "--D", "-7", "--p", "11", "--m", "1..4", "--tail-tol",
                         "1e-2", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  const FieldData f = validate_discriminant(-7);
  const auto ctx = make_kernel_context(f, class_group(f).principal_form(), 2);
  const auto assembly = assemble_g(ctx, Level{LevelKind::PrimeSquare, 11}, 4, 1e-2);
  std::map<i64, double> parsed;
  for (const auto& row : j["rows"])
    if (row["term"] == "g") parsed[row["m"].get<i64>()] = row["value"].get<double>();
  CHECK(parsed == assembly.coefficients);
}

TEST_CASE("worker count does not change output") {
  for (const char* cmd : {"kernel", "certify"}) {
    std::vector<std::string> base{cmd, "--k", "2", "--D", "-7", "--tail-tol", "1e-2"};
    if (std::string(cmd) == "kernel") base.insert(base.end(), {"--p", "11", "--m", "1..6"});
    else base.insert(base.end(), {"--primes", "40..80"});
    auto one = base, many = base;
    one.insert(one.end(), {"--workers", "1"});
    many.insert(many.end(), {"--workers", "4"});
    const auto a = invoke(one), b = invoke(many);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("certify rows follow the splitting type") {
  const auto r = invoke({"certify", "--k", "2", "--D", "-7", "--primes", "50..70", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"].size() == 4);  // 53 59 61 67
  for (const auto& row : j["rows"]) {
    const bool inert = row["eps"].get<int>() == -1;
    CHECK(row["conditionality"] == (inert ? "unconditional" : "conditional_on_nonnegativity"));
  }
}
