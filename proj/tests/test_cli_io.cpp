#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "hvr2/cli.hpp"
#include "hvr2/element_io.hpp"
#include "hvr2/serialize.hpp"

using namespace hvr2;

namespace {

int run(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  std::ostringstream out, err;
  int rc = cli_run(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

// Scratch file that deletes itself when the test block ends.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& contents) {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path);
    f << contents;
  }
  ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
  std::string str() const { return path.string(); }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("element text round trips through parse and print") {
  std::vector<std::string> canonical = {
      "1*E[1,0]",
      "3/2*E[1,0] + 1*K1",
      "-1*t[0,-1] + 1*d2",
      "2*E[-1,3] - 5/7*t[2,2] + 1*K4",
      "0",
  };
  for (const std::string& s : canonical) {
    LieElement x = parse_element(s);
    CHECK(print_element(x) == s);
    CHECK(print_element(parse_element(print_element(x))) == s);
  }
}

TEST_CASE("parsing normalizes order, whitespace and coefficients") {
  CHECK(print_element(parse_element("E[1,0]")) == "1*E[1,0]");
  CHECK(print_element(parse_element("  K1+ E[1,0]  ")) == "1*E[1,0] + 1*K1");
  CHECK(print_element(parse_element("2*E[1,0] - 2*E[1,0]")) == "0");
  CHECK(print_element(parse_element("-E[1,0]")) == "-1*E[1,0]");
  CHECK(print_element(parse_element("1/2*t[3,4] + 1/2*t[3,4]")) == "1*t[3,4]");
  CHECK(print_element(parse_element("d1 - d2")) == "1*d1 - 1*d2");
}

TEST_CASE("parse errors carry the offending position") {
  auto check_fails = [](const std::string& text) {
    try {
      parse_element(text);
      FAIL_CHECK("expected a parse failure for: " << text);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
  };
  check_fails("");
  check_fails("E[1]");
  check_fails("E[1,2");
  check_fails("K5");
  check_fails("d3");
  check_fails("E[1,0] @ K1");
  check_fails("E[0,0]");
  check_fails("3//2*K1");
  check_fails("*K1");
}

TEST_CASE("rational and geometry codecs round trip") {
  for (const char* s : {"0", "7", "-3/2", "22/7"}) {
    Rational r = Rational::from_string(s);
    CHECK(rational_from_json(rational_to_json(r)) == r);
  }
  CHECK(rational_from_json(Json(5)) == Rational(5));
  Vec2 v{3, -4};
  CHECK(vec2_from_json(vec2_to_json(v)) == v);
  BasisPair b{{1, 1}, {0, 1}};
  CHECK(basis_from_json(basis_to_json(b)) == b);
  Truncation t = Truncation::make(3, 7, 12);
  Truncation t2 = truncation_from_json(truncation_to_json(t));
  CHECK(t2.depth == 3);
  CHECK(t2.window == 7);
  CHECK(t2.raising_bound == 12);
  // Omitted raising bound falls back to the default.
  Truncation t3 = truncation_from_json(Json{{"depth", 2}, {"window", 5}});
  CHECK(t3.raising_bound == 10);
}

TEST_CASE("action-data codecs round trip both kinds") {
  RhoSpec table = RhoSpec::table({{1, Rational(1)}, {-1, Rational(1, 2)}},
                                 {{3, Rational(-2)}}, Rational(2), Rational(0));
  RhoSpec t2 = rho_from_json(rho_to_json(table));
  CHECK(t2.kind() == RhoSpec::Kind::Table);
  CHECK(t2.rho_E(-1) == Rational(1, 2));
  CHECK(t2.rho_t(3) == Rational(-2));
  CHECK(t2.f_b2(standard_basis()) == Rational(2));

  RhoSpec closed = RhoSpec::exp_poly(
      ExpPolynomial({{Rational(1), 1, Rational(2)}}),
      ExpPolynomial({{Rational(-1, 3), 0, Rational(1)}}));
  RhoSpec c2 = rho_from_json(rho_to_json(closed));
  CHECK(c2.kind() == RhoSpec::Kind::ExpPoly);
  for (long m = -5; m <= 5; ++m) {
    if (m == 0) continue;
    CHECK(c2.rho_E(m) == closed.rho_E(m));
    CHECK(c2.rho_t(m) == closed.rho_t(m));
  }
}

TEST_CASE("construction descriptors round trip and build") {
  Json j = {{"construction", "verma_H"},
            {"c", {"1", "0", "0", "0"}},
            {"epsilon", "+"},
            {"basis", {{"b1", {1, 0}}, {"b2", {0, 1}}}},
            {"truncation", {{"depth", 4}, {"window", 8}}}};
  ConstructionDescriptor d = construction_from_json(j);
  CHECK(d.construction == "verma_H");
  REQUIRE(d.c.has_value());
  CHECK((*d.c)[0] == Rational(1));
  ModulePtr m = build_construction(d);
  CHECK(m->dim({0, 0}) == 1);
  // to-json then from-json reproduces the same module shape.
  ConstructionDescriptor d2 = construction_from_json(construction_to_json(d));
  ModulePtr m2 = build_construction(d2);
  CHECK(m->weights() == m2->weights());

  Json bad = {{"construction", "unknown_thing"}};
  CHECK_THROWS_AS(build_construction(construction_from_json(bad)), std::invalid_argument);
}

TEST_CASE("dimension tables serialize to the pinned CSV shape") {
  std::map<WeightKey, int> dims = {{{0, 0}, 1}, {{-1, -1}, 2}};
  std::ostringstream os;
  dims_to_csv(dims, os);
  CHECK(os.str() == "offset_b1,offset_b2,dim\n-1,-1,2\n0,0,1\n");
}

TEST_CASE("bracket command prints canonical elements") {
  std::string out;
  CHECK(run({"bracket", "t[1,0]", "E[0,1]"}, &out) == 0);
  CHECK(out == "-1*t[1,1]\n");
  CHECK(run({"bracket", "K1", "E[5,5]"}, &out) == 0);
  CHECK(out == "0\n");
  CHECK(run({"bracket", "d1", "E[3,5]"}, &out) == 0);
  CHECK(out == "3*E[3,5]\n");
  CHECK(run({"bracket", "E[1,0]", "E[-1,0]"}, &out) == 0);
  CHECK(out == "1*K3\n");
  // Malformed element text is a usage error.
  std::string err;
  CHECK(run({"bracket", "E[1", "K1"}, &out, &err) == 2);
  CHECK(err.find("error") != std::string::npos);
}

TEST_CASE("identity fuzzing command reports success and rejects bad counts") {
  std::string out;
  CHECK(run({"jacobi-fuzz", "--trials", "50", "--seed", "7"}, &out) == 0);
  CHECK(out.find("50") != std::string::npos);
  std::string err;
  CHECK(run({"jacobi-fuzz", "--trials", "0"}, &out, &err) == 2);
}

TEST_CASE("dims command writes a table for a configured construction") {
  TempFile cfg("hvr2_test_dims_cfg.json", R"({
    "construction": "fock",
    "epsilon": "+",
    "a": "1",
    "basis": {"b1": [1, 0], "b2": [0, 1]},
    "truncation": {"depth": 5, "window": 5}
  })");
  TempFile out_file("hvr2_test_dims_out.csv", "");
  std::string out;
  CHECK(run({"dims", "--config", cfg.str(), "--out", out_file.str(),
             "--format", "csv"}, &out) == 0);
  std::string csv = slurp(out_file.path);
  CHECK(csv.find("offset_b1,offset_b2,dim\n") == 0);
  CHECK(csv.find("-5,0,7") != std::string::npos);  // five has seven partitions
  CHECK(csv.find("0,0,1") != std::string::npos);

  // The same config rendered as JSON carries the weight base.
  TempFile out_json("hvr2_test_dims_out.json", "");
  CHECK(run({"dims", "--config", cfg.str(), "--out", out_json.str(),
             "--format", "json"}, &out) == 0);
  Json j = Json::parse(slurp(out_json.path));
  CHECK(j.contains("rows"));
  CHECK(j.contains("base1"));
}

TEST_CASE("experiment command honours expectations") {
  TempFile cfg("hvr2_test_exp_cfg.json", R"({
    "experiment": "stabilization",
    "rho": {"kind": "exppoly", "g1": [{"c": "1", "m": 1, "a": "1"}], "g2": []},
    "levels": 2,
    "sweep": [4, 6, 8]
  })");
  TempFile report("hvr2_test_exp_report.json", "");
  std::string out;
  CHECK(run({"experiment", "--config", cfg.str(), "--out", report.str()}, &out) == 0);
  CHECK(out.find("verdict: stabilized") != std::string::npos);
  CHECK(slurp(report.path).find("\"verdict\": \"stabilized\"") != std::string::npos);
  // Without an output file the report itself lands on stdout.
  std::string body;
  CHECK(run({"experiment", "--config", cfg.str()}, &body) == 0);
  CHECK(body.find("\"verdict\": \"stabilized\"") != std::string::npos);
  // A wrong expectation flips the exit code without changing the output.
  std::string out2;
  CHECK(run({"experiment", "--config", cfg.str(), "--expect", "growing"}, &out2) == 1);
  CHECK(run({"experiment", "--config", cfg.str(), "--expect", "stabilized"}, &out2) == 0);
}

TEST_CASE("runs with identical configuration are byte-identical") {
  TempFile cfg("hvr2_test_det_cfg.json", R"({
    "construction": "verma_H",
    "c": ["1", "1", "0", "0"],
    "epsilon": "+",
    "basis": {"b1": [1, 0], "b2": [0, 1]},
    "truncation": {"depth": 4, "window": 4}
  })");
  TempFile out_a("hvr2_test_det_a.json", "");
  TempFile out_b("hvr2_test_det_b.json", "");
  std::string oa, ob;
  CHECK(run({"dims", "--config", cfg.str(), "--out", out_a.str(), "--format", "json"}, &oa) == 0);
  CHECK(run({"dims", "--config", cfg.str(), "--out", out_b.str(), "--format", "json"}, &ob) == 0);
  CHECK(oa == ob);
  CHECK(slurp(out_a.path) == slurp(out_b.path));
  CHECK(!slurp(out_a.path).empty());
}

TEST_CASE("configuration errors exit with the usage code") {
  std::string out, err;
  CHECK(run({"dims", "--config", "/nonexistent/path.json"}, &out, &err) == 2);
  CHECK(err.find("error") != std::string::npos);
  TempFile cfg("hvr2_test_bad_cfg.json", R"({"construction": "fock"})");
  CHECK(run({"dims", "--config", cfg.str()}, &out, &err) == 2);
  CHECK(run({"no-such-command"}, &out, &err) == 2);
}
