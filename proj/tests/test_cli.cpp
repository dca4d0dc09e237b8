#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using Catch::Matchers::ContainsSubstring;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  static int counter = 0;
  std::string path = "cli_out_" + std::to_string(counter++) + ".txt";
  std::string cmd = std::string(KKTLAB_CLI_PATH) + " " + args + " > " + path + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = (status >= 0) ? (status >> 8) & 0xff : -1;
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(path.c_str());
  return r;
}

nlohmann::json run_json(const std::string& args, int expect_code = 0) {
  RunResult r = run(args + " --emit json");
  REQUIRE(r.code == expect_code);
  return nlohmann::json::parse(r.out);
}

}  // namespace

TEST_CASE("tower command reports dims and fingerprints") {
  RunResult r = run("tower --jordan H2:R");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("con=10"));

  auto j = run_json("tower --jordan H3:C");
  CHECK(j["schema"] == "kktlab/1");
  CHECK(j["results"]["dims"]["der"] == 8);
  CHECK(j["results"]["dims"]["str_reduced"] == 16);
  CHECK(j["results"]["dims"]["con"] == 35);
  CHECK(j["results"]["con_graded_dims"] == nlohmann::json({9, 17, 9}));
  CHECK(j["results"]["fingerprints"]["con"]["killing_nondegenerate"] == true);
}

TEST_CASE("json output is reproducible once timing is dropped") {
  auto a = run_json("verify --identity gjts --target H2:C^2 --mode sampled=200 --seed 11", 0);
  auto b = run_json("verify --identity gjts --target H2:C^2 --mode sampled=200 --seed 11", 0);
  a.erase("timing_ms");
  b.erase("timing_ms");
  CHECK(a.dump() == b.dump());
  CHECK(a["seed"] == 11);
  CHECK(a["results"]["report"]["checked"] == 200);
}

TEST_CASE("verify exit codes distinguish failure from usage error") {
  CHECK(run("verify --identity jordan --target H3:O").code == 0);
  RunResult neg = run("verify --identity jordan --target H4:O");
  CHECK(neg.code == 1);
  CHECK_THAT(neg.out, ContainsSubstring("FAIL"));
  CHECK_THAT(neg.out, ContainsSubstring("witness"));

  CHECK(run("verify --identity nonsense --target H2:R").code == 2);
  CHECK(run("tower --jordan X9").code == 2);
  CHECK(run("tower").code == 2);
  CHECK(run("bogus").code == 2);
}

TEST_CASE("grade command reports depth and level dims") {
  RunResult r = run("grade --type E6 --node trivalent");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("depth 7"));

  auto j = run_json("grade --type E7 --node black");
  CHECK(j["results"]["depth"] == 3);
  CHECK(j["results"]["graded_dims"] == nlohmann::json({27, 79, 27}));
  CHECK(j["results"]["dim"] == 133);
}

TEST_CASE("extend command classifies the sequence finite/affine/hyperbolic") {
  auto cls = [&](int n) {
    return run_json("extend --type E7 --node black --n " + std::to_string(n))["results"]["class"]
        .get<std::string>();
  };
  CHECK(cls(2) == "finite");
  CHECK(cls(3) == "affine");
  CHECK(cls(4) == "hyperbolic");

  auto j = run_json("extend --type A2 --node end --n 2");
  CHECK(j["results"]["rank"] == 3);
  CHECK(j["results"]["extended"]["matrix"].size() == 3);
}

TEST_CASE("theorem1 command verifies slotted isomorphisms") {
  RunResult r = run("theorem1 --type B3 --node vector --n 2");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("PASS"));
  auto j = run_json("theorem1 --type A2 --node end --n 2");
  CHECK(j["results"]["pass"] == true);
  CHECK(j["results"]["dim_h1"] == 2);
  CHECK(j["results"]["dim_g1"] == 4);
}

TEST_CASE("fields command prints definitions and closure data") {
  RunResult r = run("fields --family conformal --signature 1,3");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("closure dim 15"));
  CHECK_THAT(r.out, ContainsSubstring("d/dx"));

  auto j = run_json("fields --family generalized --signature 1,2 --n 2");
  CHECK(j["results"]["dim"] == 21);
  CHECK(j["results"]["graded_dims"] == nlohmann::json({1, 6, 7, 6, 1}));
  CHECK(j["results"]["fields"].size() == 21);
}

TEST_CASE("magic command reproduces the 3x3 corner") {
  RunResult r = run("magic");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("all 9 cells match"));
  auto j = run_json("magic");
  CHECK(j["results"]["all_match"] == true);
  CHECK(j["results"]["cells"].size() == 9);
}
