#include <catch2/catch_amalgamated.hpp>

#include "kktlab/jsonio.hpp"
#include "kktlab/kkt.hpp"

using namespace kktlab;

TEST_CASE("rationals serialize as p/q strings") {
  CHECK(rational_to_json(Rational(3, 4)) == "3/4");
  CHECK(rational_to_json(Rational(-7)) == "-7");
  CHECK(rational_to_json(Rational(5, 1)) == "5");
  CHECK(rational_from_json(Json("3/4")) == Rational(3, 4));
  CHECK(rational_from_json(Json("-7")) == Rational(-7));
  CHECK_THROWS_AS(rational_from_json(Json(3)), std::invalid_argument);
}

TEST_CASE("triple tensor round trip") {
  TripleTensor t = jts_tensor(build_jordan(2, CompositionKind::C));
  Json j = tensor_to_json(t);
  CHECK(j["dim"] == 4);
  CHECK(j["labels"].size() == 4);
  TripleTensor back = tensor_from_json(j);
  CHECK(back == t);
  CHECK(back.labels() == t.labels());

  // deterministic serialization: identical dumps
  CHECK(tensor_to_json(back).dump() == j.dump());

  Json bad = j;
  bad["entries"].push_back(Json::array({9, 0, 0, 0, "1"}));
  CHECK_THROWS_AS(tensor_from_json(bad), std::invalid_argument);
}

TEST_CASE("algebra round trip keeps brackets and grading") {
  StructureLieAlgebra con = kkt_construct(build_jordan(2, CompositionKind::R)).con;
  Json j = algebra_to_json(con);
  StructureLieAlgebra back = algebra_from_json(j);
  REQUIRE(back.dim() == con.dim());
  CHECK(back.grading == con.grading);
  for (std::size_t i = 0; i < con.dim(); ++i)
    for (std::size_t k = i + 1; k < con.dim(); ++k)
      CHECK(back.bracket_basis(i, k) == con.bracket_basis(i, k));
}

TEST_CASE("fingerprint and check report payloads") {
  Fingerprint f = fingerprint(kkt_construct(build_jordan(2, CompositionKind::R)).con);
  Json j = fingerprint_to_json(f);
  CHECK(j["dim"] == 10);
  CHECK(j["graded_dims"] == Json({3, 4, 3}));
  CHECK(j["killing_nondegenerate"] == true);

  CheckReport r;
  r.pass = false;
  r.checked = 7;
  r.witness = {1, 2};
  r.detail = "boom";
  Json rj = check_report_to_json(r);
  CHECK(rj["pass"] == false);
  CHECK(rj["witness"] == Json({1, 2}));
}

TEST_CASE("gcm json round trip and validation") {
  GCM g = gcm_named("G2");
  Json j = gcm_to_json(g);
  GCM back = gcm_from_json(j);
  CHECK(back.a == g.a);
  CHECK(back.labels == g.labels);

  Json bad = {{"matrix", {{2, 1}, {1, 2}}}};  // positive off-diagonal
  CHECK_THROWS_AS(gcm_from_json(bad), std::invalid_argument);
}

TEST_CASE("polynomial and field rendering") {
  std::vector<std::string> names{"x", "y"};
  Poly p;
  p.add(0, Rational(-1, 2));
  p.add(vfdetail::mono_mul(vfdetail::mono_var(0), vfdetail::mono_var(0)), Rational(3));
  p.add(vfdetail::mono_mul(vfdetail::mono_var(0), vfdetail::mono_var(1)), Rational(1));
  CHECK(poly_str(p, names) == "-1/2 + 3 x^2 + x*y");
  CHECK(poly_str(Poly{}, names) == "0");

  CoordSpace s{{"x", "y"}, {1, 1}, {1, 1}};
  PolyVectorField f = vf_zero(s);
  f.comp[1].add(vfdetail::mono_var(0), Rational(1));
  CHECK(field_str(f) == "(x) d/dy");
  CHECK(field_str(vf_zero(s)) == "0");
}

TEST_CASE("report envelope carries the schema tag") {
  Json rep = make_report("tower", Json{{"jordan", "H2:R"}}, Json{{"dim", 10}}, 424242, 1.5);
  CHECK(rep["schema"] == "kktlab/1");
  CHECK(rep["command"] == "tower");
  CHECK(rep["seed"] == 424242);
  // key order is fixed: schema first
  CHECK(rep.dump().rfind("{\"schema\":\"kktlab/1\"", 0) == 0);
}
