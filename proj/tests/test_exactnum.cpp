#include <catch2/catch_amalgamated.hpp>

#include "kktlab/matrix.hpp"
#include "kktlab/rational.hpp"
#include "kktlab/report.hpp"
#include "kktlab/rng.hpp"

using namespace kktlab;

TEST_CASE("rational arithmetic is exact and canonical") {
  Rational a = rat(2, 4);
  CHECK(a == rat(1, 2));
  CHECK(a * rat(2, 1) == 1);
  Rational b = rat(-3, 6);
  CHECK(a + b == 0);
  // (a/b)*(b/a) = 1
  Rational x = rat(17, 5), y = rat(5, 17);
  CHECK(x * y == 1);
  CHECK_THROWS_AS(rat(1, 0), std::invalid_argument);
}

TEST_CASE("rational serialization round-trips") {
  CHECK(rat_str(rat(3, 4)) == "3/4");
  CHECK(rat_str(rat(-3, 4)) == "-3/4");
  CHECK(rat_str(rat(5)) == "5");
  CHECK(rat_str(Rational(0)) == "0");
  CHECK(rat_parse("3/4") == rat(3, 4));
  CHECK(rat_parse("-7") == rat(-7));
  CHECK(rat_parse("6/4") == rat(3, 2));
  CHECK_THROWS_AS(rat_parse(""), std::invalid_argument);
  CHECK_THROWS_AS(rat_parse("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(rat_parse("x"), std::invalid_argument);
}

TEST_CASE("mat_rank on pinned cases") {
  CHECK(mat_rank(RatMatrix::identity(2)) == 2);
  CHECK(mat_rank(RatMatrix(3, 3)) == 0);
  RatMatrix m(2, 2);
  m.at(0, 0) = 1; m.at(0, 1) = 2;
  m.at(1, 0) = 2; m.at(1, 1) = 4;
  CHECK(mat_rank(m) == 1);
}

TEST_CASE("mat_kernel on pinned cases") {
  CHECK(mat_kernel(RatMatrix::identity(3)).empty());
  CHECK(mat_kernel(RatMatrix(2, 2)).size() == 2);
  RatMatrix m(1, 2);
  m.at(0, 0) = 1; m.at(0, 1) = 1;
  auto k = mat_kernel(m);
  REQUIRE(k.size() == 1);
  CHECK(k[0][0] == -k[0][1]);
  CHECK(sgn(k[0][0]) != 0);
}

TEST_CASE("rank-nullity holds for random matrices") {
  Rng rng(CheckMode::kDefaultSeed);
  for (int t = 0; t < 50; ++t) {
    std::size_t r = 1 + rng.index(5), c = 1 + rng.index(5);
    RatMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rng.small_rational();
    auto kernel = mat_kernel(m);
    CHECK(mat_rank(m) + kernel.size() == c);
    for (const auto& v : kernel) {
      RatVec image = m.apply(v);
      for (const auto& e : image) CHECK(e == 0);
    }
  }
}

TEST_CASE("mat_solve on pinned cases") {
  RatVec b{rat(3), rat(-1, 2)};
  auto x = mat_solve(RatMatrix::identity(2), b);
  REQUIRE(x);
  CHECK(*x == b);

  RatMatrix row(1, 2);
  row.at(0, 0) = 1; row.at(0, 1) = 1;
  auto y = mat_solve(row, RatVec{rat(2)});
  REQUIRE(y);
  CHECK((*y)[0] + (*y)[1] == 2);  // free variable set to zero by convention
  CHECK((*y)[1] == 0);

  RatMatrix col(2, 1);
  col.at(0, 0) = 1; col.at(1, 0) = 1;
  CHECK_FALSE(mat_solve(col, RatVec{rat(1), rat(2)}));
}

TEST_CASE("sparse vectors merge and cancel exactly") {
  SparseVec v = SparseVec::unit(2, rat(1, 2));
  v.add_term(5, rat(3));
  v.axpy(rat(-1, 2), SparseVec::unit(2));  // 1/2 - 1/2: the zero term must vanish
  CHECK(v.get(2) == 0);
  CHECK(v.nnz() == 1);
  SparseVec w;
  w.axpy(rat(2), v);
  CHECK(w.get(5) == 6);
  CHECK(to_sparse(to_dense(w, 6)) == w);
}

TEST_CASE("LinearSpan tracks coordinates over inserted vectors") {
  LinearSpan span(true);
  SparseVec a = SparseVec::unit(0);
  a.add_term(1, rat(2));
  SparseVec b = SparseVec::unit(1, rat(3));
  REQUIRE(span.insert(a) == 0);
  REQUIRE(span.insert(b) == 1);
  CHECK_FALSE(span.insert(a));
  CHECK(span.dim() == 2);

  SparseVec c = SparseVec::unit(0, rat(5));
  c.add_term(1, rat(4));
  auto coords = span.coords(c);
  REQUIRE(coords);
  // c = 5a + (4 - 10)/3 b
  CHECK((*coords)[0] == 5);
  CHECK((*coords)[1] == rat(-2));
  CHECK(span.contains(c));
  CHECK_FALSE(span.contains(SparseVec::unit(7)));
  CHECK(span.reduce_copy(c).empty());
}
