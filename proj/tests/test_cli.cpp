#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "phcalc/json_io.hpp"

using namespace phcalc;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PHCALC_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("normalize") {
    const Run r = run("normalize -n 2 \"p1 + (p2 v 0)\"");
    CHECK(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(nf_from_json(j) == normalize(parse_term("p1 + (p2 v 0)", 2)));
    CHECK(j.at("clauses").size() == 2);
  }

  TEST_CASE("eval") {
    const Run r = run("eval -n 2 \"p1 v p2\" --point 1,0");
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out).at("term_value") == "1/1");
  }

  TEST_CASE("lexicographic obstruction demo") {
    const Run r = run("demo lex");
    CHECK(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.at("forced_phi1").at("c1") == "1/1");
    CHECK(r.out.find("\"route_b\":\"1/1\"") != std::string::npos);
  }

  TEST_CASE("axioms") {
    const Run r = run("axioms --model lex --trials 1000 --seed 7");
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out).at("pass") == true);

    const Run bad = run("axioms --model finite --trials 50 --seed 1 --corrupt sum");
    CHECK(bad.code == 1);
    const Json j = Json::parse(bad.out);
    CHECK(j.at("pass") == false);
    CHECK(j.at("axioms").at(0).contains("witness"));
  }

  TEST_CASE("calculus") {
    const Run r = run("calculus --model finite --x \"[3,0,-3];[4,0,4]\" --g euclidean --direct");
    CHECK(r.code == 0);
    const LatticeElement v = element_from_json(Json::parse(r.out).at("value"));
    CHECK(std::get<FiniteVec>(v) == FiniteVec{{5, 0, 5}});

    const Run lex = run("calculus --model lex --x \"(1,0);(0,1)\" --g \"|p1| v |p2|\"");
    CHECK(lex.code == 0);
    CHECK(std::get<LexVec>(element_from_json(Json::parse(lex.out).at("value"))) == LexVec{1, 0});
  }

  TEST_CASE("composition and probes") {
    CHECK(run("verify-comp --model finite --x \"[1,2];[3,-1]\" --f \"p1 v p2\" --f \"p1 ^ p2\" "
              "--g \"p1 - p2\" --eps 0.01")
              .code == 0);
    CHECK(run("probe contractivity --model finite --trials 50 --seed 3").code == 0);
    CHECK(run("demo density --f \"[(0,0),(1,1)]\" --eps 1/4").code == 0);
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(run("").code == 2);
    CHECK(run("bogus").code == 2);
    CHECK(run("normalize").code == 2);
    CHECK(run("normalize -n 2 \"p3\"").code == 2);
    CHECK(run("calculus --model finite --x \"[3,0\" --g euclidean").code == 2);
    CHECK(run("axioms --model nonsense").code == 2);
    CHECK(run("--format xml normalize -n 1 p1").code == 2);
  }

  TEST_CASE("text output") {
    const Run r = run("--format text demo lex");
    CHECK(r.code == 0);
    CHECK(r.out.find("c1: 1/1") != std::string::npos);
  }

  TEST_CASE("same seed gives byte-identical reports") {
    for (const char* args : {"axioms --model pl --trials 200 --seed 11", "demo archimedean --model germ --trials 50 --seed 4",
                             "probe fidelity --model lex --trials 200 --seed 2"}) {
      const Run a = run(args), b = run(args);
      CHECK(a.code == 0);
      CHECK(a.out == b.out);
      CHECK_FALSE(a.out.empty());
    }
    CHECK(run("axioms --model pl --trials 50 --seed 1").out != run("axioms --model pl --trials 50 --seed 2").out);
  }
}
