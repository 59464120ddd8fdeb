#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kspos/cli.hpp"
#include "kspos/curvature.hpp"
#include "kspos/tensor_io.hpp"

using json = nlohmann::json;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.status = kspos::cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

}  // namespace

TEST_CASE("bott subcommand") {
  const Outcome o = run({"bott", "--weight", "-2,0", "--rank", "2"});
  REQUIRE(o.status == 0);
  const json d = o.doc();
  CHECK(d["kind"] == "single");
  CHECK(d["degree"] == 1);
  CHECK(d["weight"] == json({-1, -1}));
  CHECK(d["dimension"] == 1);
  CHECK(d["config"]["seed"] == 0);
  CHECK(d["config"]["tolerance"] == 1e-9);

  const json zero = run({"bott", "--weight", "-1,0", "--rank", "2"}).doc();
  CHECK(zero["kind"] == "zero");
}

TEST_CASE("hodge subcommand") {
  const Outcome o = run({"hodge", "--flag", "0,1,2,3"});
  REQUIRE(o.status == 0);
  const json t = o.doc()["table"];
  REQUIRE(t.size() == 4);
  const int diag[] = {1, 2, 2, 1};
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) CHECK(t[p][q] == (p == q ? diag[p] : 0));
}

TEST_CASE("positivity subcommand") {
  const Outcome o = run({"positivity", "--builtin", "grassmannian:4,2", "--k", "1", "--s", "1", "--samples", "500", "--seed", "0"});
  REQUIRE(o.status == 0);
  const json d = o.doc();
  CHECK(d["verdict"] == "not_refuted");
  CHECK(d["config"]["samples"] == 500);

  // a refutation is still a successful computation
  const Outcome r = run({"positivity", "--builtin", "grassmannian:4,2", "--k", "0", "--s", "1", "--samples", "100"});
  CHECK(r.status == 0);
  CHECK(r.doc()["verdict"] == "refuted");
}

TEST_CASE("identical arguments give identical bytes") {
  const std::vector<std::vector<std::string>> cases = {
      {"positivity", "--builtin", "grassmannian:5,2", "--k", "3", "--s", "2", "--samples", "50", "--seed", "7"},
      {"bkn", "--builtin", "griffiths:3,2,1", "--p", "3", "--q", "2", "--seed", "3"},
      {"crosscheck", "--n", "3", "--trials", "5", "--seed", "11"},
      {"vanish", "--expr", "K*E{n=3,r=2,griffiths_k=1}*det(E)", "--p", "0", "--q", "2"},
      {"omega", "--flag", "0,1,3"},
      {"sharpness", "--dims", "1,2", "--twists", "0,5"},
  };
  for (const auto& args : cases) {
    CAPTURE(args[0]);
    const Outcome a = run(args), b = run(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(json::accept(a.out));
  }
  const json s1 = run({"crosscheck", "--n", "3", "--trials", "5", "--seed", "11"}).doc();
  const json s2 = run({"crosscheck", "--n", "3", "--trials", "5", "--seed", "12"}).doc();
  CHECK(s1["config"]["seed"] == 11);
  CHECK(s1 != s2);
}

TEST_CASE("tensor files") {
  const std::string path = "cli_tensor.json";
  {
    std::ofstream out(path);
    out << kspos::write_tensor_json(kspos::identity_curvature(2, 2));
  }
  const Outcome o = run({"positivity", "--tensor", path, "--k", "0", "--s", "2", "--samples", "20"});
  CHECK(o.status == 0);
  CHECK(o.doc()["verdict"] == "not_refuted");
  std::remove(path.c_str());
  CHECK(run({"positivity", "--tensor", "missing.json", "--k", "0", "--s", "1"}).status == 2);
}

TEST_CASE("exit codes") {
  CHECK(run({}).status == 2);
  CHECK(run({"frobnicate"}).status == 2);
  CHECK(run({"bott", "--rank", "2"}).status == 2);
  CHECK(run({"bott", "--weight", "1,x", "--rank", "2"}).status == 2);
  CHECK(run({"hodge", "--flag", "0,2,1"}).status == 2);
  CHECK(run({"vanish", "--expr", "E{r=2", "--n", "3", "--p", "0", "--q", "1"}).status == 2);
  CHECK(run({"vanish", "--expr", "E{r=2}", "--n", "3", "--p", "4", "--q", "1"}).status == 2);
  const Outcome bad = run({"bott", "--rank", "2"});
  CHECK(bad.out.empty());
  CHECK_FALSE(bad.err.empty());
  const Outcome help = run({"--help"});
  CHECK(help.status == 0);
  CHECK(help.out.find("bott") != std::string::npos);
}

TEST_CASE("table format") {
  const Outcome t = run({"hodge", "--flag", "0,1,2,3", "--format", "table"});
  REQUIRE(t.status == 0);
  CHECK(t.out.find("dimension  3") != std::string::npos);
  CHECK(t.out.find("   0 2 0 0") != std::string::npos);
  CHECK(t.out.find("seed") != std::string::npos);
  CHECK(run({"hodge", "--flag", "0,1,2,3", "--format", "xml"}).status == 2);
}
