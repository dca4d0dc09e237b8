#include <catch2/catch_amalgamated.hpp>
#include <fstream>
#include <map>

#include "kktlab/chevalley.hpp"
#include "kktlab/kkt.hpp"

using namespace kktlab;

namespace {

const KKTTower& tower(int n, CompositionKind k) {
  static std::map<std::pair<int, CompositionKind>, KKTTower> cache;
  auto it = cache.find({n, k});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(n, k), kkt_construct(build_jordan(n, k))).first;
  return it->second;
}

Fingerprint named_fingerprint(const char* name, std::optional<std::size_t> node = std::nullopt) {
  auto ca = build_chevalley(gcm_named(name));
  if (node) ca.algebra.grading = node_grading(ca, *node);
  return fingerprint(ca.algebra);
}

}  // namespace

TEST_CASE("structure algebra dimensions and the scalar line") {
  CHECK(tower(2, CompositionKind::R).str.basis.size() == 4);
  CHECK(tower(2, CompositionKind::O).str.basis.size() == 46);
  CHECK(tower(3, CompositionKind::O).str.basis.size() == 79);

  // the identity operator L(1,1) spans a central line inside str
  const auto& str = tower(2, CompositionKind::C).str;
  LinearSpan span(/*track_coords=*/true);
  for (const auto& m : str.basis) span.insert(flatten_matrix(m));
  CHECK(span.coords(flatten_matrix(RatMatrix::identity(4))).has_value());
  CHECK(center(str.algebra).size() == 1);

  // an algebra without the identity operator has no scalar line to factor
  RatMatrix e(2, 2), f(2, 2), h(2, 2);
  e.at(0, 1) = 1;
  f.at(1, 0) = 1;
  h.at(0, 0) = 1;
  h.at(1, 1) = -1;
  auto sl2 = lie_closure({e, f, h});
  CHECK_THROWS_AS(reduced_structure(sl2), std::invalid_argument);
}

TEST_CASE("reduced structure algebras match the magic-square row") {
  CHECK(tower(2, CompositionKind::R).str_reduced.dim() == 3);   // so(1,2)
  CHECK(tower(2, CompositionKind::C).str_reduced.dim() == 6);   // so(1,3)
  CHECK(tower(2, CompositionKind::H).str_reduced.dim() == 15);  // so(1,5)
  CHECK(tower(2, CompositionKind::O).str_reduced.dim() == 45);  // so(1,9)

  CHECK(fingerprint(tower(3, CompositionKind::R).str_reduced) == named_fingerprint("A2"));
  CHECK(tower(3, CompositionKind::R).str_reduced.dim() == 8);
  CHECK(fingerprint(tower(3, CompositionKind::O).str_reduced) == named_fingerprint("E6"));
  CHECK(tower(3, CompositionKind::O).str_reduced.dim() == 78);
}

TEST_CASE("derivation algebras") {
  CHECK(tower(2, CompositionKind::R).der.basis.size() == 1);   // so(2)
  CHECK(tower(2, CompositionKind::O).der.basis.size() == 36);  // so(9)
  CHECK(tower(3, CompositionKind::O).der.basis.size() == 52);
  CHECK(fingerprint(tower(3, CompositionKind::O).der.algebra) == named_fingerprint("F4"));

  for (auto k : {CompositionKind::R, CompositionKind::C, CompositionKind::H, CompositionKind::O})
    for (int n : {2, 3}) {
      const auto& tw = tower(n, k);
      CHECK(check_derivation_properties(tw.J, tw.der.basis).pass);
    }
}

TEST_CASE("conformal algebra invariants") {
  for (auto k : {CompositionKind::R, CompositionKind::C, CompositionKind::H, CompositionKind::O})
    for (int n : {2, 3}) {
      const auto& tw = tower(n, k);
      INFO(tw.J.name());
      CHECK(tw.con.dim() == 2 * tw.J.dim() + tw.str.basis.size());
      CHECK(tw.con.graded_dims() ==
            std::vector<std::size_t>{tw.J.dim(), tw.str.basis.size(), tw.J.dim()});
      CHECK(check_grading(tw.con).pass);
      CHECK(check_graded_involution(tw.con).pass);
      CHECK(check_jacobi(tw.con, CheckMode::Full()).pass);
      CHECK(check_embedding(tw.der.algebra, tw.str.algebra, tw.der_in_str).pass);
      CHECK(check_embedding(tw.der.algebra, tw.str_reduced, tw.der_in_str_reduced).pass);
      CHECK(check_embedding(tw.str.algebra, tw.con, tw.str_in_con).pass);
    }
  CHECK(tower(2, CompositionKind::R).con.dim() == 10);
  CHECK(tower(2, CompositionKind::O).con.dim() == 66);
  CHECK(tower(3, CompositionKind::O).con.dim() == 133);
}

TEST_CASE("conformal algebras of H2(K) are the orthogonal series") {
  struct Row {
    CompositionKind k;
    const char* name;
    std::size_t node;
  } rows[] = {{CompositionKind::R, "B2", 0},
              {CompositionKind::C, "A3", 1},
              {CompositionKind::H, "D4", 0},
              {CompositionKind::O, "D6", 0}};
  for (const auto& r : rows) {
    INFO(r.name);
    CHECK(fingerprint(tower(2, r.k).con) == named_fingerprint(r.name, r.node));
  }
}

TEST_CASE("conformal algebras of H3(K) are the magic-square middle row") {
  struct Row {
    CompositionKind k;
    const char* name;
    std::size_t node;
  } rows[] = {{CompositionKind::R, "C3", 2},
              {CompositionKind::C, "A5", 2},
              {CompositionKind::H, "D6", 5},
              {CompositionKind::O, "E7", 6}};
  for (const auto& r : rows) {
    INFO(r.name);
    CHECK(fingerprint(tower(3, r.k).con) == named_fingerprint(r.name, r.node));
  }
}

TEST_CASE("tower fingerprints match the golden file") {
  std::ifstream in(std::string(KKTLAB_DATA_DIR) + "/kkt_fingerprints.txt");
  REQUIRE(in.good());
  std::map<std::string, std::string> golden;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto a = line.find(' ');
    auto b = line.find(' ', a + 1);
    golden[line.substr(0, b)] = line.substr(b + 1);
  }
  REQUIRE(golden.size() == 32);
  for (int n : {2, 3})
    for (auto k :
         {CompositionKind::R, CompositionKind::C, CompositionKind::H, CompositionKind::O}) {
      const auto& tw = tower(n, k);
      const std::string j = tw.J.name();
      INFO(j);
      CHECK(fingerprint_brief(fingerprint(tw.der.algebra)) == golden.at(j + " der"));
      CHECK(fingerprint_brief(fingerprint(tw.str_reduced)) == golden.at(j + " str_reduced"));
      CHECK(fingerprint_brief(fingerprint(tw.str.algebra)) == golden.at(j + " str"));
      CHECK(fingerprint_brief(fingerprint(tw.con)) == golden.at(j + " con"));
    }
}
