#include <catch2/catch_amalgamated.hpp>

#include "kktlab/liealg.hpp"

using namespace kktlab;

namespace {

StructureLieAlgebra so3() {
  StructureLieAlgebra l(3);
  l.set_bracket(0, 1, SparseVec::unit(2));
  l.set_bracket(1, 2, SparseVec::unit(0));
  l.set_bracket(2, 0, SparseVec::unit(1));
  return l;
}

StructureLieAlgebra sl2() {
  // h, e, f with [h,e]=2e, [h,f]=-2f, [e,f]=h
  StructureLieAlgebra l(3);
  l.set_bracket(0, 1, SparseVec::unit(1, Rational(2)));
  l.set_bracket(0, 2, SparseVec::unit(2, Rational(-2)));
  l.set_bracket(1, 2, SparseVec::unit(0));
  return l;
}

RatMatrix random_invertible(std::size_t d, Rng& rng) {
  while (true) {
    RatMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m.at(i, j) = rng.small_rational();
    if (mat_rank(m) == d) return m;
  }
}

}  // namespace

TEST_CASE("Jacobi identity on pinned algebras") {
  CHECK(check_jacobi(so3(), CheckMode::Full()).pass);
  CHECK(check_jacobi(sl2(), CheckMode::Full()).pass);
  CHECK(check_jacobi(sl2(), CheckMode::Sampled(1000)).pass);

  StructureLieAlgebra bad = so3();
  SparseVec perturbed = SparseVec::unit(2);
  perturbed.add_term(0, Rational(1));  // [e0,e1] = e2 + e0 breaks Jacobi
  bad.set_bracket(0, 1, perturbed);
  auto rep = check_jacobi(bad, CheckMode::Full());
  CHECK_FALSE(rep.pass);
  CHECK(rep.witness.size() == 3);
}

TEST_CASE("Jacobi rational fallback agrees with the integer fast path") {
  // tiny denominators force the scaled table; huge ones force the fallback
  StructureLieAlgebra l(3);
  l.set_bracket(0, 1, SparseVec::unit(2, rat(1, 1) * Rational("1/18446744073709551616")));
  auto rep = check_jacobi(l, CheckMode::Full());
  CHECK(rep.pass);  // nilpotent Heisenberg-like bracket satisfies Jacobi
}

TEST_CASE("grading checks") {
  StructureLieAlgebra l = sl2();
  l.grading = std::vector<int>{0, 1, -1};
  CHECK(check_grading(l).pass);
  CHECK(l.graded_dims() == std::vector<std::size_t>{1, 1, 1});
  l.grading = std::vector<int>{0, 1, 1};  // perturbed degree map
  CHECK_FALSE(check_grading(l).pass);

  StructureLieAlgebra abelian(3);
  abelian.grading = std::vector<int>{5, -2, 0};
  CHECK(check_grading(abelian).pass);
  CHECK_THROWS_AS(check_grading(so3()), std::invalid_argument);
}

TEST_CASE("graded involution checks") {
  StructureLieAlgebra l = sl2();
  l.grading = std::vector<int>{0, 1, -1};
  // Chevalley-style involution: h -> -h, e -> -f, f -> -e
  RatMatrix tau(3, 3);
  tau.at(0, 0) = -1;
  tau.at(2, 1) = -1;
  tau.at(1, 2) = -1;
  l.involution = tau;
  CHECK(check_graded_involution(l).pass);

  l.involution = RatMatrix::identity(3);  // fails degree reversal on g_1
  CHECK_FALSE(check_graded_involution(l).pass);

  StructureLieAlgebra abelian(2);
  abelian.grading = std::vector<int>{0, 0};
  RatMatrix neg(2, 2);
  neg.at(0, 0) = -1;
  neg.at(1, 1) = -1;
  abelian.involution = neg;
  CHECK(check_graded_involution(abelian).pass);
}

TEST_CASE("Killing form pinned values") {
  CHECK(killing_form(StructureLieAlgebra(3)) == RatMatrix(3, 3));
  RatMatrix k = killing_form(so3());
  RatMatrix expect(3, 3);
  for (int i = 0; i < 3; ++i) expect.at(i, i) = -2;
  CHECK(k == expect);
  CHECK(mat_rank(killing_form(sl2())) == 3);
}

TEST_CASE("derived subalgebra and center") {
  StructureLieAlgebra abelian(3);
  CHECK(derived_subalgebra(abelian).empty());
  CHECK(center(abelian).size() == 3);
  CHECK(derived_series_dims(abelian) == std::vector<std::size_t>{0});

  CHECK(derived_subalgebra(sl2()).size() == 3);
  CHECK(center(sl2()).empty());

  // 2-dim solvable: [x,y] = y
  StructureLieAlgebra solv(2);
  solv.set_bracket(0, 1, SparseVec::unit(1));
  CHECK(derived_series_dims(solv) == std::vector<std::size_t>{1, 0});
}

TEST_CASE("quotients by ideals") {
  StructureLieAlgebra l = sl2();
  CHECK(fingerprint_equal(fingerprint(quotient_by_ideal(l, {})), fingerprint(l)));
  std::vector<SparseVec> all = {SparseVec::unit(0), SparseVec::unit(1), SparseVec::unit(2)};
  CHECK(quotient_by_ideal(l, all).dim() == 0);
  // the span of e is not an ideal of sl2
  CHECK_THROWS_AS(quotient_by_ideal(l, {SparseVec::unit(1)}), std::invalid_argument);

  // gl-style: sl2 + central line; quotient by the center gives back sl2
  StructureLieAlgebra gl(4);
  gl.set_bracket(0, 1, SparseVec::unit(1, Rational(2)));
  gl.set_bracket(0, 2, SparseVec::unit(2, Rational(-2)));
  gl.set_bracket(1, 2, SparseVec::unit(0));
  auto q = quotient_by_ideal(gl, {SparseVec::unit(3)});
  CHECK(q.dim() == 3);
  CHECK(check_jacobi(q, CheckMode::Full()).pass);
  CHECK(fingerprint_equal(fingerprint(q), fingerprint(sl2())));
}

TEST_CASE("Lie closure of matrix sets") {
  CHECK(lie_closure({}).algebra.dim() == 0);
  CHECK(lie_closure({RatMatrix(2, 2)}).algebra.dim() == 0);
  auto one = lie_closure({RatMatrix::identity(2)});
  CHECK(one.algebra.dim() == 1);
  CHECK(derived_subalgebra(one.algebra).empty());

  RatMatrix e(2, 2), f(2, 2);
  e.at(0, 1) = 1;
  f.at(1, 0) = 1;
  auto cl = lie_closure({e, f});
  CHECK(cl.algebra.dim() == 3);
  CHECK(check_jacobi(cl.algebra, CheckMode::Full()).pass);
  CHECK(fingerprint_equal(fingerprint(cl.algebra), fingerprint(sl2())));

  // idempotence: closing the closure basis adds nothing
  auto cl2 = lie_closure(cl.basis);
  CHECK(cl2.algebra.dim() == cl.algebra.dim());

  CHECK_THROWS_AS(lie_closure({e, f}, 2), std::runtime_error);
}

TEST_CASE("fingerprints are basis-change invariants") {
  Rng rng(CheckMode::kDefaultSeed);
  for (const auto& l : {so3(), sl2()}) {
    Fingerprint base = fingerprint(l);
    CHECK(base == base);
    for (int t = 0; t < 10; ++t) {
      StructureLieAlgebra moved = change_basis(l, random_invertible(l.dim(), rng));
      CHECK(fingerprint_equal(fingerprint(moved), base));
    }
  }
  CHECK_FALSE(fingerprint_equal(fingerprint(sl2()), fingerprint(StructureLieAlgebra(3))));
}
