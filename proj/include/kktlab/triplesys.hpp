#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kktlab/jordan.hpp"
#include "kktlab/matrix.hpp"
#include "kktlab/report.hpp"
#include "kktlab/rng.hpp"

namespace kktlab {

/// Rank-4 structure tensor of a trilinear product on a finite basis:
/// (xyz)^l = t_{ijk}^l x^i y^j z^k. No symmetry assumed.
class TripleTensor {
 public:
  TripleTensor() : dim_(0) {}
  explicit TripleTensor(std::size_t dim) : dim_(dim), cols_(dim * dim * dim) {}

  std::size_t dim() const { return dim_; }

  const SparseVec& col(std::size_t i, std::size_t j, std::size_t k) const {
    return cols_[(i * dim_ + j) * dim_ + k];
  }
  SparseVec& col(std::size_t i, std::size_t j, std::size_t k) {
    return cols_[(i * dim_ + j) * dim_ + k];
  }

  std::vector<std::string>& labels() { return labels_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// contraction with a vector in one slot (0, 1 or 2), other slots basis
  SparseVec contract(int slot, const SparseVec& v, std::size_t a, std::size_t b) const {
    SparseVec r;
    for (const auto& [m, c] : v.terms()) {
      switch (slot) {
        case 0: r.axpy(c, col(m, a, b)); break;
        case 1: r.axpy(c, col(a, m, b)); break;
        default: r.axpy(c, col(a, b, m)); break;
      }
    }
    return r;
  }

  SparseVec apply(const SparseVec& x, const SparseVec& y, const SparseVec& z) const {
    SparseVec r;
    for (const auto& [i, xi] : x.terms())
      for (const auto& [j, yj] : y.terms())
        for (const auto& [k, zk] : z.terms()) r.axpy(xi * yj * zk, col(i, j, k));
    return r;
  }

  bool operator==(const TripleTensor& o) const { return dim_ == o.dim_ && cols_ == o.cols_; }

 private:
  std::size_t dim_;
  std::vector<SparseVec> cols_;
  std::vector<std::string> labels_;
};

/// Tabulates a triple product given on basis triples into an explicit tensor.
inline TripleTensor tensor_from_product(
    std::size_t dim,
    const std::function<SparseVec(std::size_t, std::size_t, std::size_t)>& product) {
  TripleTensor t(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k) {
        SparseVec v = product(i, j, k);
        if (!v.empty() && v.terms().back().first >= dim)
          throw std::invalid_argument("tensor_from_product: product output out of range");
        t.col(i, j, k) = std::move(v);
      }
  return t;
}

inline TripleTensor jts_tensor(const JordanAlgebra& alg) {
  TripleTensor t = tensor_from_product(
      alg.dim(), [&](std::size_t i, std::size_t j, std::size_t k) { return alg.jts_basis(i, j, k); });
  for (std::size_t b = 0; b < alg.dim(); ++b) t.labels().push_back(alg.label(b));
  return t;
}

/// Generalized Jordan triple system identity, Eq-style on basis 5-tuples:
/// (uv(xyz)) - (xy(uvz)) = ((uvx)yz) - (x(vuy)z).
inline CheckReport check_gjts(const TripleTensor& t, const CheckMode& mode) {
  CheckReport rep;
  const std::size_t d = t.dim();
  auto eval = [&](std::size_t u, std::size_t v, std::size_t x, std::size_t y, std::size_t z) {
    SparseVec r = t.contract(2, t.col(x, y, z), u, v);      //  (uv(xyz))
    r.axpy(Rational(-1), t.contract(2, t.col(u, v, z), x, y));  // -(xy(uvz))
    r.axpy(Rational(-1), t.contract(0, t.col(u, v, x), y, z));  // -((uvx)yz)
    r.axpy(Rational(1), t.contract(1, t.col(v, u, y), x, z));   // +(x(vuy)z)
    return r;
  };
  if (mode.full) {
    for (std::size_t u = 0; u < d; ++u)
      for (std::size_t v = 0; v < d; ++v)
        for (std::size_t x = 0; x < d; ++x)
          for (std::size_t y = 0; y < d; ++y)
            for (std::size_t z = 0; z < d; ++z) {
              ++rep.checked;
              if (!eval(u, v, x, y, z).empty()) {
                rep.pass = false;
                rep.witness = {u, v, x, y, z};
                rep.detail = "generalized JTS identity fails at basis 5-tuple";
                return rep;
              }
            }
  } else {
    Rng rng(mode.seed);
    for (std::uint64_t s = 0; s < mode.samples; ++s) {
      std::size_t u = rng.index(d), v = rng.index(d), x = rng.index(d), y = rng.index(d),
                  z = rng.index(d);
      ++rep.checked;
      if (!eval(u, v, x, y, z).empty()) {
        rep.pass = false;
        rep.witness = {u, v, x, y, z};
        rep.detail = "generalized JTS identity fails at sampled 5-tuple (seed " +
                     std::to_string(mode.seed) + ")";
        return rep;
      }
    }
  }
  return rep;
}

/// Outer symmetry (xyz) = (zyx), i.e. t_{ijk}^l = t_{kji}^l entrywise.
inline CheckReport check_outer_symmetry(const TripleTensor& t) {
  CheckReport rep;
  const std::size_t d = t.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = i; k < d; ++k) {
        ++rep.checked;
        if (!(t.col(i, j, k) == t.col(k, j, i))) {
          rep.pass = false;
          rep.witness = {i, j, k};
          rep.detail = "triple product not symmetric in outer arguments";
          return rep;
        }
      }
  return rep;
}

/// Index into the slotted basis of J^n: inner basis index plus slot (0-based
/// internally; the paper counts slots from 1).
struct SlottedBasisIndex {
  std::size_t inner;
  std::size_t slot;
};

inline std::size_t slotted_flat(const SlottedBasisIndex& s, std::size_t inner_dim) {
  return s.slot * inner_dim + s.inner;
}

/// The five-term triple product on H_n(K)^n slots:
///   (x^a y^b z^c) = 2δ^{ab}((z∘y)∘x)^c - 2δ^{ab}((z∘x)∘y)^c + 2δ^{ab}((x∘y)∘z)^c
///                   - δ^{ab}(x,y)z^c + δ^{bc}(x,y)z^a
/// with (x,y) = tr(x∘y).
inline SparseVec eq7_product(const JordanAlgebra& alg, std::size_t n, const SlottedBasisIndex& x,
                             const SlottedBasisIndex& y, const SlottedBasisIndex& z) {
  if (x.slot >= n || y.slot >= n || z.slot >= n)
    throw std::invalid_argument("eq7_product: slot out of range");
  const std::size_t d = alg.dim();
  SparseVec out;
  SparseVec zx = SparseVec::unit(static_cast<std::uint32_t>(z.inner));
  Rational form = alg.trace_form(SparseVec::unit(static_cast<std::uint32_t>(x.inner)),
                                 SparseVec::unit(static_cast<std::uint32_t>(y.inner)));
  if (x.slot == y.slot) {
    SparseVec w = alg.product(alg.basis_product(z.inner, y.inner),
                              SparseVec::unit(static_cast<std::uint32_t>(x.inner)));
    w.axpy(Rational(-1), alg.product(alg.basis_product(z.inner, x.inner),
                                     SparseVec::unit(static_cast<std::uint32_t>(y.inner))));
    w.axpy(Rational(1), alg.product(alg.basis_product(x.inner, y.inner),
                                    SparseVec::unit(static_cast<std::uint32_t>(z.inner))));
    w.scale(Rational(2));
    w.axpy(-form, zx);
    for (const auto& [l, c] : w.terms())
      out.add_term(static_cast<std::uint32_t>(z.slot * d + l), c);
  }
  if (y.slot == z.slot)
    out.add_term(static_cast<std::uint32_t>(x.slot * d + z.inner), form);
  return out;
}

inline TripleTensor eq7_tensor(const JordanAlgebra& alg, std::size_t n) {
  const std::size_t d = alg.dim();
  TripleTensor t = tensor_from_product(n * d, [&](std::size_t i, std::size_t j, std::size_t k) {
    return eq7_product(alg, n, {i % d, i / d}, {j % d, j / d}, {k % d, k / d});
  });
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < d; ++b)
      t.labels().push_back(alg.label(b) + "^" + std::to_string(a + 1));
  return t;
}

/// Triple product on a graded -1 slice together with the bilinear form
/// associated to the graded involution, as tabulated by the Chevalley layer.
struct SliceTripleData {
  TripleTensor triple;   // (uvw) = [[u, τ(v)], w] on the slice basis
  RatMatrix form;        // (x, y) in the slice basis
};

/// The three-term product on (h_{-1})^n:
///   (x^a y^b z^c) = δ^{ab}[[x,τ(y)],z]^c - δ^{ab}(x,y)z^c + δ^{bc}(x,y)z^a
inline SparseVec theorem1_product(const SliceTripleData& h, std::size_t n,
                                  const SlottedBasisIndex& x, const SlottedBasisIndex& y,
                                  const SlottedBasisIndex& z) {
  if (x.slot >= n || y.slot >= n || z.slot >= n)
    throw std::invalid_argument("theorem1_product: slot out of range");
  const std::size_t d = h.triple.dim();
  SparseVec out;
  const Rational& form = h.form.at(x.inner, y.inner);
  if (x.slot == y.slot) {
    SparseVec w = h.triple.col(x.inner, y.inner, z.inner);
    for (const auto& [l, c] : w.terms())
      out.add_term(static_cast<std::uint32_t>(z.slot * d + l), c);
    out.add_term(static_cast<std::uint32_t>(z.slot * d + z.inner), -form);
  }
  if (y.slot == z.slot)
    out.add_term(static_cast<std::uint32_t>(x.slot * d + z.inner), form);
  return out;
}

inline TripleTensor theorem1_tensor(const SliceTripleData& h, std::size_t n) {
  const std::size_t d = h.triple.dim();
  return tensor_from_product(n * d, [&](std::size_t i, std::size_t j, std::size_t k) {
    return theorem1_product(h, n, {i % d, i / d}, {j % d, j / d}, {k % d, k / d});
  });
}

}  // namespace kktlab
