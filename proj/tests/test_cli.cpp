#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "indexfiber/cli.hpp"
#include "indexfiber/report.hpp"
#include "indexfiber/selftest.hpp"

using namespace indexfiber;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "indexfiber");
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("problem spec parsing") {
  const auto spec = parse_problem_spec(json::parse(R"({"d":4,"profile":[2,1,1],"indices":[-3,"1",{"re":"2","im":0}]})"));
  CHECK(spec.spectrum.is_exact());
  CHECK(spec.spectrum.profile() == MultiplicityProfile({1, 1, 2}));
  // pairs follow the sorted profile
  CHECK(spec.spectrum.exact_values()[2] == GaussianRational(-3));

  const auto numeric = parse_problem_spec(json::parse(R"({"profile":[1,2],"indices":[[0.5,1],[-0.5,-1]]})"));
  CHECK_FALSE(numeric.spectrum.is_exact());

  const auto completed = parse_problem_spec(json::parse(R"({"profile":[1,1,2],"indices":["1/2",1]})"), true);
  CHECK(completed.spectrum.exact_values()[2] == GaussianRational(Rational(-3, 2)));

  const auto with_options = parse_problem_spec(
      json::parse(R"({"profile":[1,2],"indices":[1,-1],"options":{"seed":5,"backend":"homotopy","threads":2}})"));
  CHECK(with_options.seed == 5u);
  CHECK(with_options.backend == "homotopy");

  CHECK_THROWS_AS(parse_problem_spec(json::parse(R"({"profile":[1,2],"indices":[1,1]})")), ArgumentError);
  CHECK_THROWS_AS(parse_problem_spec(json::parse(R"({"d":5,"profile":[1,2],"indices":[1,-1]})")), ArgumentError);
  CHECK_THROWS_AS(parse_problem_spec(json::parse(R"({"profile":[1,2]})")), ArgumentError);
  CHECK_THROWS_AS(parse_problem_spec(json::parse(R"({"profile":[1,2],"indices":["x",1]})")), ArgumentError);
}

TEST_CASE("canonical dump sorts keys and prints 17 significant digits") {
  const json doc = {{"b", 0.1}, {"a", {{"z", 1}, {"y", std::nan("")}}}};
  const std::string text = dump_canonical(doc);
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  CHECK(text.find("\"y\"") < text.find("\"z\""));
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(text.find("null") != std::string::npos);
  CHECK(json::parse(text)["a"]["z"] == 1);
}

TEST_CASE("count: generic spectrum exits 0 with the expected counts") {
  const auto r = run({"count"}, R"({"d":4,"profile":[1,1,2],"indices":[1,2,-3]})");
  CHECK(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["mp_count"] == 2);
  CHECK(doc["mc_count"] == 6);
  CHECK(doc["status"] == "generic");
  CHECK(doc["solver"]["seed"] == SolverOptions{}.seed);
  CHECK(doc["command"] == "count");
}

TEST_CASE("JSON output is byte-stable for a fixed seed") {
  const std::string input = R"({"profile":[1,1,1,2],"indices":[1,2,3,-6]})";
  const auto a = run({"enumerate", "--seed", "42"}, input);
  const auto b = run({"enumerate", "--seed", "42"}, input);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["representatives"].size() == 24);
}

TEST_CASE("exit codes") {
  CHECK(run({"count"}, R"({"profile":[1,1,1],"indices":[1,1,-2]})").code == 2);
  CHECK(run({"count"}, R"({"profile":[1,1,1],"indices":[0,0,0]})").code == 2);
  CHECK(run({"count"}, R"({"profile":[1,1,1,1,1,1],"indices":[1,-1,1,-1,1,-1]})").code == 3);
  CHECK(run({"count"}, R"({"profile":[1,1,2],"indices":[1,2,-3.0]})").code == 2);
  CHECK(run({"count"}, R"({"profile":[1,1,2],"indices":[1,2,-2]})").code == 1);
  CHECK(run({"count"}, "{not json").code == 1);
  CHECK(run({"count", "/nonexistent/spec.json"}).code == 1);
  CHECK(run({"count", "--backend", "bogus"}, R"({"profile":[1,2],"indices":[1,-1]})").code == 1);
  CHECK(run({"frobnicate"}).code == 1);
}

TEST_CASE("--complete-last") {
  const auto r = run({"count", "--complete-last"}, R"({"profile":[1,1,2],"indices":[1,2]})");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["mc_count"] == 6);
  CHECK(run({"count"}, R"({"profile":[1,1,2],"indices":[1,2]})").code == 1);
}

TEST_CASE("seed precedence: flag over spec over environment") {
  const std::string input = R"({"profile":[1,2],"indices":[1,-1],"options":{"seed":7}})";
  CHECK(json::parse(run({"count"}, input).out)["solver"]["seed"] == 7);
  CHECK(json::parse(run({"count", "--seed", "9"}, input).out)["solver"]["seed"] == 9);
  ::setenv("INDEXFIBER_SEED", "11", 1);
  CHECK(json::parse(run({"count"}, R"({"profile":[1,2],"indices":[1,-1]})").out)["solver"]["seed"] == 11);
  CHECK(json::parse(run({"count"}, input).out)["solver"]["seed"] == 7);
  ::setenv("INDEXFIBER_SEED", "junk", 1);
  CHECK(run({"count"}, R"({"profile":[1,2],"indices":[1,-1]})").code == 1);
  ::unsetenv("INDEXFIBER_SEED");
}

TEST_CASE("text format") {
  const auto r = run({"enumerate", "--format", "text"}, R"({"profile":[1,2],"indices":[1,-1]})");
  CHECK(r.code == 0);
  CHECK(r.out.find("generic") != std::string::npos);
}

TEST_CASE("selftest passes and each corrupted row fails on its own") {
  const auto clean = run_selftest(1);
  for (const auto& row : clean) CHECK_MESSAGE(row.passed, row.name << ": " << row.detail);
  for (const auto& name : {std::string("similarity"), std::string("psi-reference"), std::string("index-sum")}) {
    const auto rows = run_selftest(1, name);
    for (const auto& row : rows) CHECK(row.passed == (row.name != name));
  }
  CHECK(run({"selftest", "--corrupt", "kernel-annihilation"}).code == 3);
  CHECK(run({"selftest", "--corrupt", "no-such-row"}).code == 1);
}

TEST_CASE("roundtrip and sweep subcommands") {
  CHECK(run({"roundtrip", "--profile", "1,1,2", "--trials", "3"}).code == 0);
  const auto sweep = run({"sweep", "--d-max", "4", "--inject-nongeneric", "--format", "json"});
  CHECK(sweep.code == 0);
  const auto doc = json::parse(sweep.out);
  bool any_injected = false;
  for (const auto& row : doc["rows"]) any_injected = any_injected || row["injected_nongeneric"].get<bool>();
  CHECK(any_injected);
}
