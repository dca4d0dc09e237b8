#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kktlab/jordan.hpp"
#include "kktlab/kantorvf.hpp"
#include "kktlab/liealg.hpp"
#include "kktlab/matrix.hpp"
#include "kktlab/triplesys.hpp"

namespace kktlab {

/// str J: Lie closure of all L(u,v): x ↦ (uvx) for basis pairs u, v.
inline MatrixLieClosure structure_closure(const JordanAlgebra& J) {
  std::vector<RatMatrix> ops;
  const std::size_t d = J.dim();
  ops.reserve(d * d);
  for (std::size_t u = 0; u < d; ++u)
    for (std::size_t v = 0; v < d; ++v) ops.push_back(J.jts_left_operator(u, v));
  return lie_closure(ops);
}

inline StructureLieAlgebra structure_algebra(const JordanAlgebra& J) {
  return structure_closure(J).algebra;
}

namespace kktdetail {

/// coordinates of the identity operator in the str basis; the scalar line
inline RatVec scalar_line(const MatrixLieClosure& str) {
  LinearSpan span(/*track_coords=*/true);
  for (const auto& m : str.basis) span.insert(flatten_matrix(m));
  std::size_t n = str.basis.empty() ? 0 : str.basis.front().rows();
  auto c = span.coords(flatten_matrix(RatMatrix::identity(n)));
  if (!c)
    throw std::invalid_argument("reduced_structure: no scalar line (algebra has no identity)");
  c->resize(str.basis.size(), Rational(0));
  return *c;
}

/// projection matrix onto the complement of the ideal's pivot coordinates,
/// matching the complement convention of quotient_by_ideal
inline RatMatrix ideal_projection(std::size_t dim, const std::vector<SparseVec>& ideal) {
  LinearSpan span;
  for (const auto& v : ideal) span.insert(v);
  std::vector<bool> is_lead(dim, false);
  for (std::size_t i = 0; i < span.dim(); ++i) is_lead[span.row(i).lead()] = true;
  std::vector<std::int64_t> pos(dim, -1);
  std::size_t q = 0;
  for (std::size_t i = 0; i < dim; ++i)
    if (!is_lead[i]) pos[i] = static_cast<std::int64_t>(q++);
  RatMatrix proj(q, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    SparseVec w = span.reduce_copy(SparseVec::unit(static_cast<std::uint32_t>(i)));
    for (const auto& [k, c] : w.terms()) {
      if (pos[k] < 0) throw std::logic_error("ideal_projection: reduction left a pivot");
      proj.at(static_cast<std::size_t>(pos[k]), i) = c;
    }
  }
  return proj;
}

}  // namespace kktdetail

/// str′ J = str J / (scalar multiplications). The scalar line is detected as
/// the span coordinate of the identity operator and verified to be central.
inline StructureLieAlgebra reduced_structure(const MatrixLieClosure& str) {
  RatVec line = kktdetail::scalar_line(str);
  SparseVec v = to_sparse(line);
  LinearSpan central;
  for (const auto& z : center(str.algebra)) central.insert(to_sparse(z));
  if (!central.contains(v))
    throw std::logic_error("reduced_structure: scalar line is not central");
  return quotient_by_ideal(str.algebra, {v});
}

inline StructureLieAlgebra reduced_structure(const JordanAlgebra& J) {
  return reduced_structure(structure_closure(J));
}

/// der J: kernel of the Leibniz system D(x∘y) = D(x)∘y + x∘D(y) over basis
/// pairs, tabulated and verified to close under the commutator.
inline MatrixLieClosure derivation_closure(const JordanAlgebra& J) {
  const std::size_t d = J.dim();
  std::vector<SparseVec> rows;
  rows.reserve(d * (d + 1) / 2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const SparseVec& prod = J.basis_product(i, j);
      for (std::size_t m = 0; m < d; ++m) {
        SparseVec row;  // unknowns D_{pq} at index p*d+q
        for (const auto& [k, c] : prod.terms())
          row.add_term(static_cast<std::uint32_t>(m * d + k), c);
        for (std::size_t p = 0; p < d; ++p) {
          const Rational& cj = J.basis_product(p, j).get(static_cast<std::uint32_t>(m));
          if (sgn(cj) != 0) row.add_term(static_cast<std::uint32_t>(p * d + i), -cj);
          const Rational& ci = J.basis_product(i, p).get(static_cast<std::uint32_t>(m));
          if (sgn(ci) != 0) row.add_term(static_cast<std::uint32_t>(p * d + j), -ci);
        }
        if (!row.empty()) rows.push_back(std::move(row));
      }
    }
  auto kernel = sparse_kernel(rows, d * d);
  std::vector<RatMatrix> mats;
  for (const auto& v : kernel) {
    RatMatrix m(d, d);
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q) m.at(p, q) = v[p * d + q];
    mats.push_back(std::move(m));
  }
  // max_dim = kernel size: any escape means the kernel is not a subalgebra
  return lie_closure(mats, kernel.size());
}

inline StructureLieAlgebra derivation_algebra(const JordanAlgebra& J) {
  return derivation_closure(J).algebra;
}

/// D(1) = 0 and (Dx, y) + (x, Dy) = 0 for the trace form, on basis pairs.
inline CheckReport check_derivation_properties(const JordanAlgebra& J,
                                               const std::vector<RatMatrix>& ders) {
  CheckReport rep;
  const std::size_t d = J.dim();
  RatMatrix G(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      G.at(a, b) = J.trace_form(SparseVec::unit(static_cast<std::uint32_t>(a)),
                                SparseVec::unit(static_cast<std::uint32_t>(b)));
      G.at(b, a) = G.at(a, b);
    }
  RatVec one = to_dense(J.unit(), d);
  for (std::size_t i = 0; i < ders.size(); ++i) {
    RatVec img = ders[i].apply(one);
    ++rep.checked;
    for (const auto& c : img)
      if (sgn(c) != 0) {
        rep.pass = false;
        rep.witness = {i};
        rep.detail = "derivation does not annihilate the identity element";
        return rep;
      }
    RatMatrix skew = G * ders[i];
    RatMatrix dtg = ders[i].transposed() * G;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        ++rep.checked;
        if (skew.at(a, b) + dtg.at(a, b) != 0) {
          rep.pass = false;
          rep.witness = {i, a, b};
          rep.detail = "derivation is not skew for the trace form";
          return rep;
        }
      }
  }
  return rep;
}

/// φ intertwines the brackets: φ([x,y]_sub) = [φx, φy]_sup on basis pairs.
inline CheckReport check_embedding(const StructureLieAlgebra& sub,
                                   const StructureLieAlgebra& sup, const RatMatrix& phi) {
  CheckReport rep;
  if (phi.rows() != sup.dim() || phi.cols() != sub.dim())
    throw std::invalid_argument("check_embedding: shape mismatch");
  auto image = [&](std::size_t j) {
    SparseVec v;
    for (std::size_t i = 0; i < phi.rows(); ++i)
      if (sgn(phi.at(i, j)) != 0) v.add_term(static_cast<std::uint32_t>(i), phi.at(i, j));
    return v;
  };
  std::vector<SparseVec> img;
  for (std::size_t j = 0; j < sub.dim(); ++j) img.push_back(image(j));
  for (std::size_t a = 0; a < sub.dim(); ++a)
    for (std::size_t b = a + 1; b < sub.dim(); ++b) {
      SparseVec lhs;
      SparseVec sub_col = sub.bracket_basis(a, b);
      for (const auto& [k, c] : sub_col.terms()) lhs.axpy(c, img[k]);
      SparseVec rhs = sup.bracket(img[a], img[b]);
      ++rep.checked;
      lhs.axpy(Rational(-1), rhs);
      if (!lhs.empty()) {
        rep.pass = false;
        rep.witness = {a, b};
        rep.detail = "embedding does not intertwine the brackets";
        return rep;
      }
    }
  return rep;
}

/// The KKT tower der J ⊆ str′ J ⊆ str J with the 3-graded conformal algebra
/// con J = g₋₁ ⊕ g₀ ⊕ g₁ realized by the Eq-style polynomial maps
/// x ↦ u (constant), x ↦ (uvx) (linear), x ↦ −½(xux) (quadratic).
struct KKTTower {
  JordanAlgebra J;
  MatrixLieClosure str;             // matrices on J plus tabulated brackets
  MatrixLieClosure der;
  StructureLieAlgebra str_reduced;  // str / scalars
  StructureLieAlgebra con;          // graded, with the graded involution
  std::vector<PolyVectorField> con_basis;

  RatMatrix der_in_str;          // dim str × dim der: der basis in str coords
  RatMatrix der_in_str_reduced;  // dim str′ × dim der: composed with the quotient
  RatMatrix str_in_con;          // dim con × dim str: g₀ block embedding

  std::size_t const_index(std::size_t u) const { return u; }
  std::size_t linear_index(std::size_t i) const { return J.dim() + i; }
  std::size_t quad_index(std::size_t u) const { return J.dim() + str.basis.size() + u; }
};

inline KKTTower kkt_construct(const JordanAlgebra& J) {
  KKTTower tw{J, structure_closure(J), derivation_closure(J), {}, {}, {}, {}, {}, {}};
  const std::size_t dJ = J.dim();
  const std::size_t dS = tw.str.basis.size();

  // der into str: every derivation of H_n(K) is inner, i.e. lies in the span
  // of the L(u,v); failure here is a hard error
  LinearSpan str_span(/*track_coords=*/true);
  for (const auto& m : tw.str.basis) str_span.insert(flatten_matrix(m));
  tw.der_in_str = RatMatrix(dS, tw.der.basis.size());
  for (std::size_t j = 0; j < tw.der.basis.size(); ++j) {
    auto c = str_span.coords(flatten_matrix(tw.der.basis[j]));
    if (!c) throw std::logic_error("kkt_construct: derivation outside the structure algebra");
    c->resize(dS, Rational(0));
    for (std::size_t i = 0; i < dS; ++i) tw.der_in_str.at(i, j) = (*c)[i];
  }

  // str′ and the projection of der into it
  RatVec line = kktdetail::scalar_line(tw.str);
  tw.str_reduced = reduced_structure(tw.str);
  RatMatrix proj = kktdetail::ideal_projection(dS, {to_sparse(line)});
  tw.der_in_str_reduced = proj * tw.der_in_str;

  // conformal algebra on J coordinates via the polynomial-map engine
  CoordSpace s;
  for (std::size_t i = 0; i < dJ; ++i) {
    s.names.push_back(J.label(i));
    s.weight.push_back(1);
  }
  auto var = [](std::size_t i) { return vfdetail::mono_var(static_cast<std::uint32_t>(i)); };
  std::vector<PolyVectorField> seeds;
  for (std::size_t u = 0; u < dJ; ++u) {  // g₋₁: x ↦ u
    PolyVectorField f = vf_zero(s);
    f.comp[u].add(0, Rational(1));
    seeds.push_back(std::move(f));
  }
  // g₀: x ↦ −M x. The sign makes M ↦ field a Lie homomorphism (the naive
  // M ↦ Mx·∂ is an anti-homomorphism) and gives [u, τ(v)] the action
  // +L(u,v) on the constants, matching the bracket tables of str.
  for (std::size_t i = 0; i < dS; ++i) {
    PolyVectorField f = vf_zero(s);
    for (std::size_t r = 0; r < dJ; ++r)
      for (std::size_t c = 0; c < dJ; ++c)
        if (sgn(tw.str.basis[i].at(r, c)) != 0) f.comp[r].add(var(c), -tw.str.basis[i].at(r, c));
    seeds.push_back(std::move(f));
  }
  for (std::size_t u = 0; u < dJ; ++u) {  // g₁: x ↦ −½(xux)
    PolyVectorField f = vf_zero(s);
    for (std::size_t a = 0; a < dJ; ++a)
      for (std::size_t b = 0; b < dJ; ++b) {
        Monomial m = vfdetail::mono_mul(var(a), var(b));
        SparseVec col = J.jts_basis(a, u, b);
        for (const auto& [k, c] : col.terms()) f.comp[k].add(m, rat(-1, 2) * c);
      }
    seeds.push_back(std::move(f));
  }
  auto cl = vf_closure(seeds, 2 * dJ + dS);
  if (cl.basis.size() != 2 * dJ + dS)
    throw std::runtime_error("kkt_construct: conformal closure dimension " +
                             std::to_string(cl.basis.size()) + " != " +
                             std::to_string(2 * dJ + dS));
  tw.con = std::move(cl.algebra);
  tw.con_basis = std::move(cl.basis);

  tw.str_in_con = RatMatrix(2 * dJ + dS, dS);
  for (std::size_t i = 0; i < dS; ++i) tw.str_in_con.at(dJ + i, i) = 1;

  // graded involution: u ↔ −½(xux), M ↦ −G⁻¹MᵀG with G the trace form
  RatMatrix G(dJ, dJ);
  for (std::size_t a = 0; a < dJ; ++a)
    for (std::size_t b = a; b < dJ; ++b) {
      G.at(a, b) = J.trace_form(SparseVec::unit(static_cast<std::uint32_t>(a)),
                                SparseVec::unit(static_cast<std::uint32_t>(b)));
      G.at(b, a) = G.at(a, b);
    }
  auto Ginv = mat_inverse(G);
  if (!Ginv) throw std::logic_error("kkt_construct: degenerate trace form");
  RatMatrix tau(2 * dJ + dS, 2 * dJ + dS);
  for (std::size_t u = 0; u < dJ; ++u) {
    tau.at(tw.quad_index(u), tw.const_index(u)) = 1;
    tau.at(tw.const_index(u), tw.quad_index(u)) = 1;
  }
  for (std::size_t i = 0; i < dS; ++i) {
    RatMatrix m = *Ginv * tw.str.basis[i].transposed() * G;
    for (std::size_t r = 0; r < dJ; ++r)
      for (std::size_t c = 0; c < dJ; ++c) m.at(r, c) = -m.at(r, c);
    auto coords = str_span.coords(flatten_matrix(m));
    if (!coords) throw std::logic_error("kkt_construct: involution leaves the structure algebra");
    coords->resize(dS, Rational(0));
    for (std::size_t k = 0; k < dS; ++k)
      if (sgn((*coords)[k]) != 0) tau.at(tw.linear_index(k), tw.linear_index(i)) = (*coords)[k];
  }
  tw.con.involution = std::move(tau);
  return tw;
}

}  // namespace kktlab
