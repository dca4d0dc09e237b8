#include <catch2/catch_amalgamated.hpp>

#include "kktlab/triplesys.hpp"

using namespace kktlab;

namespace {

const CompositionKind kAll[] = {CompositionKind::R, CompositionKind::C, CompositionKind::H,
                                CompositionKind::O};

TripleTensor scaled_tensor(const TripleTensor& t, const Rational& c) {
  TripleTensor s(t.dim());
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = 0; j < t.dim(); ++j)
      for (std::size_t k = 0; k < t.dim(); ++k) s.col(i, j, k) = t.col(i, j, k).scaled(c);
  return s;
}

}  // namespace

TEST_CASE("tensor_from_product basics") {
  TripleTensor zero = tensor_from_product(1, [](std::size_t, std::size_t, std::size_t) {
    return SparseVec{};
  });
  CHECK(zero.dim() == 1);
  CHECK(check_outer_symmetry(zero).pass);
  CHECK(check_gjts(zero, CheckMode::Full()).pass);
  CHECK_THROWS_AS(tensor_from_product(1,
                                      [](std::size_t, std::size_t, std::size_t) {
                                        return SparseVec::unit(3);
                                      }),
                  std::invalid_argument);
}

TEST_CASE("Jordan triple systems pass the generalized identity and outer symmetry") {
  for (auto k : kAll) {
    JordanAlgebra alg(2, k);
    TripleTensor t = jts_tensor(alg);
    CHECK(t.dim() == alg.dim());
    CHECK(check_outer_symmetry(t).pass);
    auto mode = alg.dim() <= 10 ? CheckMode::Full() : CheckMode::Sampled(20000);
    auto rep = check_gjts(t, mode);
    INFO(alg.name() << ": " << rep.detail);
    CHECK(rep.pass);
  }
  for (auto k : kAll) {
    JordanAlgebra alg(3, k);
    TripleTensor t = jts_tensor(alg);
    CHECK(check_outer_symmetry(t).pass);
    auto mode = alg.dim() <= 10 ? CheckMode::Full() : CheckMode::Sampled(20000);
    auto rep = check_gjts(t, mode);
    INFO(alg.name() << ": " << rep.detail);
    CHECK(rep.pass);
  }
}

TEST_CASE("corrupted tensor fails with a 5-tuple witness") {
  JordanAlgebra alg(2, CompositionKind::R);
  TripleTensor t = jts_tensor(alg);
  t.col(0, 1, 2).add_term(0, Rational(1));
  auto rep = check_gjts(t, CheckMode::Full());
  CHECK_FALSE(rep.pass);
  CHECK(rep.witness.size() == 5);
}

TEST_CASE("five-term product: delta structure") {
  JordanAlgebra alg(3, CompositionKind::C);
  const std::size_t n = 3;
  // a≠b, b≠c → 0
  CHECK(eq7_product(alg, n, {0, 0}, {1, 1}, {2, 2}).empty());
  // a≠b, b=c → (x,y) z^a
  SparseVec r = eq7_product(alg, n, {0, 2}, {0, 1}, {4, 1});
  SparseVec expect = SparseVec::unit(static_cast<std::uint32_t>(2 * alg.dim() + 4),
                                     alg.trace_form(SparseVec::unit(0), SparseVec::unit(0)));
  CHECK(r == expect);
  CHECK_THROWS_AS(eq7_product(alg, n, {0, 3}, {0, 0}, {0, 0}), std::invalid_argument);
}

TEST_CASE("five-term product at n=1 is twice the Jordan triple product") {
  for (auto k : kAll) {
    JordanAlgebra alg(2, k);
    CHECK(eq7_tensor(alg, 1) == scaled_tensor(jts_tensor(alg), Rational(2)));
  }
  JordanAlgebra h3r(3, CompositionKind::R);
  CHECK(eq7_tensor(h3r, 1) == scaled_tensor(jts_tensor(h3r), Rational(2)));
}

TEST_CASE("five-term tensor on H2(R)^2 is a generalized JTS but not symmetric") {
  JordanAlgebra alg(2, CompositionKind::R);
  TripleTensor t = eq7_tensor(alg, 2);
  CHECK(t.dim() == 6);
  CHECK(check_gjts(t, CheckMode::Full()).pass);
  auto sym = check_outer_symmetry(t);
  CHECK_FALSE(sym.pass);
  CHECK(sym.witness.size() == 3);
}

TEST_CASE("five-term tensors pass the generalized identity across n and K") {
  for (auto k : kAll)
    for (std::size_t n : {1u, 2u, 3u}) {
      JordanAlgebra alg(2, k);
      TripleTensor t = eq7_tensor(alg, n);
      auto mode = t.dim() <= 12 ? CheckMode::Full() : CheckMode::Sampled(10000);
      auto rep = check_gjts(t, mode);
      INFO(alg.name() << " n=" << n << ": " << rep.detail);
      CHECK(rep.pass);
    }
  for (auto k : kAll) {
    JordanAlgebra alg(3, k);
    auto rep = check_gjts(eq7_tensor(alg, 2), CheckMode::Sampled(10000));
    INFO(alg.name() << "^2: " << rep.detail);
    CHECK(rep.pass);
  }
}

TEST_CASE("three-term product: delta structure and n=1 degeneration") {
  // any valid triple data exercises the delta algebra; use a Jordan JTS with
  // its trace form
  JordanAlgebra alg(2, CompositionKind::C);
  SliceTripleData h;
  h.triple = jts_tensor(alg);
  h.form = RatMatrix(alg.dim(), alg.dim());
  for (std::size_t i = 0; i < alg.dim(); ++i)
    for (std::size_t j = 0; j < alg.dim(); ++j)
      h.form.at(i, j) = alg.trace_form(SparseVec::unit(static_cast<std::uint32_t>(i)),
                                       SparseVec::unit(static_cast<std::uint32_t>(j)));
  // n=1: tensor-identical to the slice's own triple product
  CHECK(theorem1_tensor(h, 1) == h.triple);
  // a=b=c: the inner triple product in that slot
  const std::size_t d = alg.dim();
  SparseVec r = theorem1_product(h, 3, {0, 2}, {1, 2}, {2, 2});
  SparseVec expect;
  for (const auto& [l, c] : h.triple.col(0, 1, 2).terms())
    expect.add_term(static_cast<std::uint32_t>(2 * d + l), c);
  CHECK(r == expect);
  // a≠b, b=c → (x,y) z^a
  SparseVec r2 = theorem1_product(h, 2, {0, 1}, {0, 0}, {2, 0});
  CHECK(r2 == SparseVec::unit(static_cast<std::uint32_t>(d + 2), h.form.at(0, 0)));
  // a≠b, b≠c would need n≥3 slots all distinct → 0
  CHECK(theorem1_product(h, 3, {0, 0}, {1, 1}, {2, 2}).empty());
  CHECK_THROWS_AS(theorem1_product(h, 2, {0, 2}, {0, 0}, {0, 0}), std::invalid_argument);
}
