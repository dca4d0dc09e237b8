#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kktlab/compalg.hpp"
#include "kktlab/matrix.hpp"
#include "kktlab/report.hpp"
#include "kktlab/rng.hpp"

namespace kktlab {

/// Jordan algebra H_n(K) of hermitian n x n matrices over K with the
/// symmetrized product x∘y = (xy + yx)/2, stored as a rank-3 structure
/// tensor over a fixed basis.
///
/// Basis order: diagonal units E_1..E_n, then off-diagonal units
/// F_{ij}(e_k) for slots (1,2),(1,3),...,(2,3),... sweeping the K-basis.
/// n = 2,3 are the supported Jordan algebras; n = 4 builds the same tensor
/// but is not a Jordan algebra (negative control for the identity checker).
class JordanAlgebra {
 public:
  struct BasisInfo {
    int i, j, k;  // i == j: diagonal unit (k = 0); i < j: F_{ij}(e_k)
  };

  JordanAlgebra(int n, CompositionKind kind) : n_(n), kind_(kind) {
    if (n < 2 || n > 4) throw std::invalid_argument("unsupported matrix size for H_n(K)");
    const int dk = ca_dim(kind);
    for (int i = 0; i < n; ++i) basis_.push_back({i, i, 0});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < dk; ++k) basis_.push_back({i, j, k});
    dim_ = basis_.size();
    tabulate();
    for (int i = 0; i < n; ++i) unit_.add_term(i, Rational(1));
  }

  int n() const { return n_; }
  CompositionKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const std::vector<BasisInfo>& basis() const { return basis_; }
  const SparseVec& unit() const { return unit_; }

  std::string label(std::size_t b) const {
    const auto& info = basis_[b];
    if (info.i == info.j) return "E" + std::to_string(info.i + 1);
    return "F" + std::to_string(info.i + 1) + std::to_string(info.j + 1) + "(e" +
           std::to_string(info.k) + ")";
  }

  std::string name() const { return "H" + std::to_string(n_) + ":" + ca_name(kind_); }

  const SparseVec& basis_product(std::size_t a, std::size_t b) const {
    return prod_[sym_index(a, b)];
  }

  SparseVec product(const SparseVec& x, const SparseVec& y) const {
    SparseVec r;
    for (const auto& [a, xa] : x.terms())
      for (const auto& [b, yb] : y.terms()) r.axpy(xa * yb, basis_product(a, b));
    return r;
  }

  /// real trace of the hermitian matrix with these coordinates
  Rational trace(const SparseVec& x) const {
    Rational t(0);
    for (const auto& [a, c] : x.terms())
      if (basis_[a].i == basis_[a].j) t += c;
    return t;
  }

  /// (x, y) = tr(x ∘ y)
  Rational trace_form(const SparseVec& x, const SparseVec& y) const {
    return trace(product(x, y));
  }

  /// (xyz) = (x∘y)∘z + x∘(y∘z) - y∘(x∘z)
  SparseVec jts(const SparseVec& x, const SparseVec& y, const SparseVec& z) const {
    SparseVec r = product(product(x, y), z);
    r.axpy(Rational(1), product(x, product(y, z)));
    r.axpy(Rational(-1), product(y, product(x, z)));
    return r;
  }

  SparseVec jts_basis(std::size_t x, std::size_t y, std::size_t z) const {
    SparseVec r = product(basis_product(x, y), SparseVec::unit(z));
    r.axpy(Rational(1), product(SparseVec::unit(x), basis_product(y, z)));
    r.axpy(Rational(-1), product(SparseVec::unit(y), basis_product(x, z)));
    return r;
  }

  /// L(u,v): x ↦ (uvx) as a dim x dim matrix, for basis u, v
  RatMatrix jts_left_operator(std::size_t u, std::size_t v) const {
    RatMatrix m(dim_, dim_);
    for (std::size_t x = 0; x < dim_; ++x) {
      SparseVec col = jts_basis(u, v, x);
      for (const auto& [r, c] : col.terms()) m.at(r, x) = c;
    }
    return m;
  }

  /// Corrupts one structure-tensor entry (test hook; keeps commutativity).
  void perturb_entry(std::size_t a, std::size_t b, std::size_t l, const Rational& delta) {
    prod_[sym_index(a, b)].add_term(static_cast<std::uint32_t>(l), delta);
  }

  SparseVec random_element(Rng& rng) const {
    SparseVec v;
    for (std::size_t i = 0; i < dim_; ++i) v.add_term(static_cast<std::uint32_t>(i), rng.small_rational());
    return v;
  }

 private:
  std::size_t sym_index(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    return a * dim_ + b;  // upper triangle of a dim x dim grid
  }

  using KMatrix = std::vector<CompositionElement>;  // n x n, row-major

  KMatrix basis_matrix(const BasisInfo& info) const {
    KMatrix m(n_ * n_, CompositionElement::zero(kind_));
    if (info.i == info.j) {
      m[info.i * n_ + info.i] = CompositionElement::one(kind_);
    } else {
      m[info.i * n_ + info.j] = CompositionElement::basis(kind_, info.k);
      m[info.j * n_ + info.i] = ca_conj(CompositionElement::basis(kind_, info.k));
    }
    return m;
  }

  KMatrix matmul(const KMatrix& x, const KMatrix& y) const {
    KMatrix z(n_ * n_, CompositionElement::zero(kind_));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          z[i * n_ + j] = ca_add(z[i * n_ + j], ca_mul(x[i * n_ + k], y[k * n_ + j]));
    return z;
  }

  SparseVec decompose(const KMatrix& m) const {
    SparseVec v;
    for (std::size_t b = 0; b < dim_; ++b) {
      const auto& info = basis_[b];
      const auto& entry = m[info.i * n_ + info.j];
      v.add_term(static_cast<std::uint32_t>(b),
                 info.i == info.j ? ca_real(entry) : entry.coords[info.k]);
    }
    return v;
  }

  void tabulate() {
    std::vector<KMatrix> mats;
    mats.reserve(dim_);
    for (const auto& info : basis_) mats.push_back(basis_matrix(info));
    prod_.assign(dim_ * dim_, SparseVec{});
    const Rational half = rat(1, 2);
    for (std::size_t a = 0; a < dim_; ++a)
      for (std::size_t b = a; b < dim_; ++b) {
        KMatrix xy = matmul(mats[a], mats[b]);
        KMatrix yx = matmul(mats[b], mats[a]);
        KMatrix s(n_ * n_, CompositionElement::zero(kind_));
        for (int e = 0; e < n_ * n_; ++e)
          s[e] = ca_scale(ca_add(xy[e], yx[e]), half);
        prod_[sym_index(a, b)] = decompose(s);
      }
  }

  int n_;
  CompositionKind kind_;
  std::size_t dim_ = 0;
  std::vector<BasisInfo> basis_;
  std::vector<SparseVec> prod_;
  SparseVec unit_;
};

inline JordanAlgebra build_jordan(int n, CompositionKind kind) { return JordanAlgebra(n, kind); }

/// Parses "H2:R", "H3:O", ...
inline JordanAlgebra parse_jordan_spec(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos || s.size() < 2 || s[0] != 'H')
    throw std::invalid_argument("bad Jordan spec (expect Hn:K): " + s);
  int n = std::stoi(s.substr(1, colon - 1));
  return build_jordan(n, ca_parse(s.substr(colon + 1)));
}

/// Full linearization of the Jordan identity a²∘(b∘a) = (a²∘b)∘a over all
/// basis quadruples (valid over Q), plus exact random-element trials.
/// The linearized form: with F(u,v;w,b) = (u∘v)∘(b∘w) - ((u∘v)∘b)∘w,
///   F(x,y;z,b) + F(x,z;y,b) + F(y,z;x,b) = 0  for all basis x,y,z,b.
inline CheckReport check_jordan_identity(const JordanAlgebra& alg, std::uint64_t trials,
                                         std::uint64_t seed = CheckMode::kDefaultSeed) {
  CheckReport rep;
  const std::size_t d = alg.dim();
  auto F = [&](std::size_t u, std::size_t v, std::size_t w, std::size_t b) {
    const SparseVec& uv = alg.basis_product(u, v);
    SparseVec t = alg.product(uv, alg.basis_product(b, w));
    t.axpy(Rational(-1), alg.product(alg.product(uv, SparseVec::unit(b)), SparseVec::unit(w)));
    return t;
  };
  for (std::size_t x = 0; x < d && rep.pass; ++x)
    for (std::size_t y = x; y < d && rep.pass; ++y)
      for (std::size_t z = y; z < d && rep.pass; ++z)
        for (std::size_t b = 0; b < d; ++b) {
          SparseVec g = F(x, y, z, b);
          g.axpy(Rational(1), F(x, z, y, b));
          g.axpy(Rational(1), F(y, z, x, b));
          ++rep.checked;
          if (!g.empty()) {
            rep.pass = false;
            rep.witness = {x, y, z, b};
            rep.detail = "linearized Jordan identity fails at basis quadruple";
            break;
          }
        }
  Rng rng(seed);
  for (std::uint64_t t = 0; t < trials && rep.pass; ++t) {
    SparseVec a = alg.random_element(rng);
    SparseVec b = alg.random_element(rng);
    SparseVec a2 = alg.product(a, a);
    SparseVec lhs = alg.product(a2, alg.product(b, a));
    lhs.axpy(Rational(-1), alg.product(alg.product(a2, b), a));
    ++rep.checked;
    if (!lhs.empty()) {
      rep.pass = false;
      rep.detail = "Jordan identity fails on random trial " + std::to_string(t);
    }
  }
  return rep;
}

}  // namespace kktlab
