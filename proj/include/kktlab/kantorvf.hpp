#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "kktlab/liealg.hpp"
#include "kktlab/matrix.hpp"
#include "kktlab/triplesys.hpp"

namespace kktlab {

/// Monomial over at most 255 coordinates, packed as ascending (var+1) bytes;
/// 0 is the constant monomial. Total degree ≤ 8 fits the word.
using Monomial = std::uint64_t;

namespace vfdetail {

inline int mono_degree(Monomial m) {
  int d = 0;
  while (m) {
    ++d;
    m >>= 8;
  }
  return d;
}

inline Monomial mono_var(std::uint32_t v) {
  if (v >= 255) throw std::invalid_argument("coordinate index too large for monomial packing");
  return static_cast<Monomial>(v + 1);
}

inline Monomial mono_mul(Monomial a, Monomial b) {
  if (mono_degree(a) + mono_degree(b) > 8)
    throw std::runtime_error("polynomial degree overflow in monomial product");
  std::array<std::uint8_t, 16> out{};  // degree guard bounds writes to 8
  int n = 0;
  while (a || b) {
    std::uint8_t xa = a & 0xff, xb = b & 0xff;
    if (xb == 0 || (xa != 0 && xa <= xb)) {
      out[n++] = xa;
      a >>= 8;
    } else {
      out[n++] = xb;
      b >>= 8;
    }
  }
  Monomial r = 0;
  while (n) r = (r << 8) | out[--n];
  return r;
}

/// removes one occurrence of var v; returns multiplicity before removal
inline int mono_extract(Monomial m, std::uint32_t v, Monomial* rest) {
  std::uint8_t target = static_cast<std::uint8_t>(v + 1);
  int count = 0;
  Monomial r = 0;
  int shift = 0;
  bool removed = false;
  for (Monomial t = m; t; t >>= 8) {
    std::uint8_t byte = t & 0xff;
    if (byte == target) {
      ++count;
      if (!removed) {
        removed = true;
        continue;
      }
    }
    r |= static_cast<Monomial>(byte) << shift;
    shift += 8;
  }
  *rest = r;
  return count;
}

}  // namespace vfdetail

/// Exact-coefficient polynomial: sorted (monomial, coefficient) pairs.
class Poly {
 public:
  const std::vector<std::pair<Monomial, Rational>>& terms() const { return t_; }
  bool zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }

  void add(Monomial m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto it = std::lower_bound(t_.begin(), t_.end(), m,
                               [](const auto& p, Monomial k) { return p.first < k; });
    if (it != t_.end() && it->first == m) {
      it->second += c;
      if (sgn(it->second) == 0) t_.erase(it);
    } else {
      t_.insert(it, {m, c});
    }
  }

  static Poly from_accumulator(std::unordered_map<Monomial, Rational>&& acc) {
    Poly p;
    p.t_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (sgn(c) != 0) p.t_.emplace_back(m, std::move(c));
    std::sort(p.t_.begin(), p.t_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return p;
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : t_) d = std::max(d, vfdetail::mono_degree(m));
    return d;
  }

  bool operator==(const Poly& o) const { return t_ == o.t_; }

  /// ∂/∂x_v
  Poly derivative(std::uint32_t v) const {
    Poly r;
    for (const auto& [m, c] : t_) {
      Monomial rest;
      int k = vfdetail::mono_extract(m, v, &rest);
      if (k) r.add(rest, c * k);
    }
    return r;
  }

 private:
  std::vector<std::pair<Monomial, Rational>> t_;
};

/// Coordinate space: names, grading weights, and (optionally) the diagonal
/// metric η with entries ±1 on the vector block.
struct CoordSpace {
  std::vector<std::string> names;
  std::vector<int> weight;
  std::vector<int> eta;  // may be shorter than names (weight-2 block has none)

  std::size_t dim() const { return names.size(); }
  bool operator==(const CoordSpace&) const = default;
};

struct PolyVectorField {
  CoordSpace space;
  std::vector<Poly> comp;  // one polynomial per coordinate

  bool zero() const {
    for (const auto& p : comp)
      if (!p.zero()) return false;
    return true;
  }
};

inline PolyVectorField vf_zero(const CoordSpace& s) {
  PolyVectorField f;
  f.space = s;
  f.comp.resize(s.dim());
  return f;
}

/// weighted degree of the coefficient minus the weight of the coordinate
/// being differentiated; nullopt for the zero field, error if inhomogeneous
inline std::optional<int> field_grade(const PolyVectorField& f) {
  std::optional<int> grade;
  for (std::size_t k = 0; k < f.comp.size(); ++k)
    for (const auto& [m, c] : f.comp[k].terms()) {
      int g = -f.space.weight[k];
      for (Monomial t = m; t; t >>= 8) g += f.space.weight[(t & 0xff) - 1];
      if (grade && *grade != g) throw std::logic_error("vector field is not weight-homogeneous");
      grade = g;
    }
  return grade;
}

/// Lie bracket of vector fields, [f, g] = f(g) − g(f); the result must stay
/// within polynomial degree 4 (the cap catches transcription errors).
inline PolyVectorField vf_bracket(const PolyVectorField& f, const PolyVectorField& g) {
  if (!(f.space == g.space)) throw std::invalid_argument("vf_bracket: coordinate space mismatch");
  const std::size_t n = f.comp.size();
  PolyVectorField r = vf_zero(f.space);
  for (std::size_t k = 0; k < n; ++k) {
    std::unordered_map<Monomial, Rational> acc;
    auto dir = [&](const PolyVectorField& a, const PolyVectorField& b, int sign) {
      // sign · Σ_i a_i ∂_i b_k
      for (std::size_t i = 0; i < n; ++i) {
        if (a.comp[i].zero()) continue;
        Poly db = b.comp[k].derivative(static_cast<std::uint32_t>(i));
        if (db.zero()) continue;
        for (const auto& [ma, ca] : a.comp[i].terms())
          for (const auto& [mb, cb] : db.terms()) {
            Rational prod = ca * cb;
            if (sign < 0) prod = -prod;
            auto [it, fresh] = acc.try_emplace(vfdetail::mono_mul(ma, mb), prod);
            if (!fresh) {
              it->second += prod;
            }
          }
      }
    };
    dir(f, g, +1);
    dir(g, f, -1);
    r.comp[k] = Poly::from_accumulator(std::move(acc));
    if (r.comp[k].degree() > 4)
      throw std::runtime_error("vf_bracket: resulting polynomial degree exceeds 4");
  }
  return r;
}

namespace vfdetail {

/// registry mapping (component, monomial) pairs to flat sparse indices
class FieldFlattener {
 public:
  SparseVec flatten(const PolyVectorField& f) {
    SparseVec v;
    for (std::size_t k = 0; k < f.comp.size(); ++k)
      for (const auto& [m, c] : f.comp[k].terms()) {
        auto [it, fresh] = index_.try_emplace({k, m}, next_);
        if (fresh) ++next_;
        v.add_term(it->second, c);
      }
    return v;
  }

 private:
  std::map<std::pair<std::size_t, Monomial>, std::uint32_t> index_;
  std::uint32_t next_ = 0;
};

}  // namespace vfdetail

struct VFClosure {
  std::vector<PolyVectorField> basis;
  StructureLieAlgebra algebra;  // graded by the weight grading when homogeneous
};

/// Smallest Lie algebra of vector fields containing the given ones; mirrors
/// the matrix lie_closure. `max_abs_grade` aborts when the weight grading
/// escapes the expected band (used for the 5-grading diagnosis).
inline VFClosure vf_closure(const std::vector<PolyVectorField>& ops,
                            std::optional<std::size_t> max_dim = std::nullopt,
                            std::optional<int> max_abs_grade = std::nullopt) {
  VFClosure out;
  LinearSpan span(/*track_coords=*/true);
  vfdetail::FieldFlattener flat;
  std::vector<int> grades;
  auto try_insert = [&](const PolyVectorField& f) -> bool {
    SparseVec v = flat.flatten(f);
    if (v.empty()) return false;
    if (!span.insert(v)) return false;
    out.basis.push_back(f);
    auto g = field_grade(f);
    grades.push_back(g ? *g : 0);
    if (max_abs_grade && g && (*g > *max_abs_grade || *g < -*max_abs_grade))
      throw std::runtime_error("vf_closure: not second order — grade " + std::to_string(*g) +
                               " element appears");
    if (max_dim && out.basis.size() > *max_dim)
      throw std::runtime_error("vf_closure: exceeded expected dimension");
    return true;
  };
  for (const auto& f : ops) try_insert(f);
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> cols;
  for (std::size_t j = 1; j < out.basis.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) {
      PolyVectorField b = vf_bracket(out.basis[i], out.basis[j]);
      SparseVec v = flat.flatten(b);
      if (v.empty()) continue;
      auto coords = span.coords(v);
      if (!coords) {
        try_insert(b);
        cols[{i, j}] = SparseVec::unit(static_cast<std::uint32_t>(out.basis.size() - 1));
      } else {
        cols[{i, j}] = to_sparse(*coords);
      }
    }
  out.algebra = StructureLieAlgebra(out.basis.size());
  for (auto& [ij, col] : cols) out.algebra.set_bracket(ij.first, ij.second, std::move(col));
  out.algebra.grading = grades;
  return out;
}

/// Conformal realization on d = p+q coordinates with η = diag(−1×p, +1×q):
///   P_μ = ∂_μ,  G^μ_ν = x_ν ∂^μ − x^μ ∂_ν (μ<ν),  D = x^μ ∂_μ,
///   K^μ = −2 x^ν x^μ ∂_ν + x^ν x_ν ∂^μ.
inline std::vector<PolyVectorField> conformal_fields(std::size_t p, std::size_t q) {
  const std::size_t d = p + q;
  if (d < 1) throw std::invalid_argument("conformal_fields: empty coordinate space");
  CoordSpace s;
  for (std::size_t mu = 0; mu < d; ++mu) {
    s.names.push_back("x" + std::to_string(mu));
    s.weight.push_back(1);
    s.eta.push_back(mu < p ? -1 : 1);
  }
  auto var = [&](std::size_t mu) { return vfdetail::mono_var(static_cast<std::uint32_t>(mu)); };
  std::vector<PolyVectorField> fields;
  for (std::size_t mu = 0; mu < d; ++mu) {  // P_μ
    PolyVectorField f = vf_zero(s);
    f.comp[mu].add(0, Rational(1));
    fields.push_back(std::move(f));
  }
  for (std::size_t mu = 0; mu < d; ++mu)  // G^μ_ν, μ < ν
    for (std::size_t nu = mu + 1; nu < d; ++nu) {
      PolyVectorField f = vf_zero(s);
      f.comp[mu].add(var(nu), Rational(s.eta[nu] * s.eta[mu]));
      f.comp[nu].add(var(mu), Rational(-1));
      fields.push_back(std::move(f));
    }
  {  // D
    PolyVectorField f = vf_zero(s);
    for (std::size_t mu = 0; mu < d; ++mu) f.comp[mu].add(var(mu), Rational(1));
    fields.push_back(std::move(f));
  }
  for (std::size_t mu = 0; mu < d; ++mu) {  // K^μ
    PolyVectorField f = vf_zero(s);
    for (std::size_t nu = 0; nu < d; ++nu) {
      f.comp[nu].add(vfdetail::mono_mul(var(nu), var(mu)), Rational(-2));
      f.comp[mu].add(vfdetail::mono_mul(var(nu), var(nu)), Rational(s.eta[nu] * s.eta[mu]));
    }
    fields.push_back(std::move(f));
  }
  return fields;
}

/// Generalized realization of so(p+n, q+n) on coordinates x^μ_a (weight 1)
/// and antisymmetric x_{ab} (weight 2), the six families P^{ab}, P_μ^a,
/// G^μ_ν, D^a_b, K^μ_a, K_{ab}. Contractions over antisymmetric index pairs
/// count each independent coordinate X_{ab} (a < b) twice, so every ∂^{ab}
/// realizes as ±½ ∂/∂X_{ab}; without the ½ the families do not close.
inline std::vector<PolyVectorField> generalized_fields(std::size_t p, std::size_t q,
                                                       std::size_t n) {
  const std::size_t d = p + q;
  if (d < 1 || n < 1) throw std::invalid_argument("generalized_fields: bad parameters");
  CoordSpace s;
  auto xi = [&](std::size_t mu, std::size_t a) { return a * d + mu; };  // x^μ_a
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t mu = 0; mu < d; ++mu) {
      s.names.push_back("x(" + std::to_string(mu) + "," + std::to_string(a) + ")");
      s.weight.push_back(1);
      s.eta.push_back(mu < p ? -1 : 1);
    }
  // antisymmetric block: independent coordinates X_{ab}, a < b
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> xab_index;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      xab_index[{a, b}] = s.names.size();
      s.names.push_back("x[" + std::to_string(a) + std::to_string(b) + "]");
      s.weight.push_back(2);
    }
  auto eta = [&](std::size_t mu) { return Rational(mu < p ? -1 : 1); };
  auto var = [&](std::size_t i) { return vfdetail::mono_var(static_cast<std::uint32_t>(i)); };
  // x_{ab} as (sign, coordinate); zero when a == b
  auto xab = [&](std::size_t a, std::size_t b) -> std::pair<int, std::size_t> {
    if (a == b) return {0, 0};
    return a < b ? std::make_pair(1, xab_index.at({a, b}))
                 : std::make_pair(-1, xab_index.at({b, a}));
  };

  std::vector<PolyVectorField> fields;
  for (std::size_t a = 0; a < n; ++a)  // P^{ab} = −2 ∂^{ab}, a < b
    for (std::size_t b = a + 1; b < n; ++b) {
      PolyVectorField f = vf_zero(s);
      f.comp[xab_index.at({a, b})].add(0, Rational(-1));
      fields.push_back(std::move(f));
    }
  for (std::size_t a = 0; a < n; ++a)  // P_μ^a = ∂_μ^a − 2 x_{μb} ∂^{ab}
    for (std::size_t mu = 0; mu < d; ++mu) {
      PolyVectorField f = vf_zero(s);
      f.comp[xi(mu, a)].add(0, Rational(1));
      for (std::size_t b = 0; b < n; ++b) {
        auto [sg, idx] = xab(a, b);
        if (sg) f.comp[idx].add(var(xi(mu, b)), Rational(-sg) * eta(mu));
      }
      fields.push_back(std::move(f));
    }
  for (std::size_t mu = 0; mu < d; ++mu)  // G^μ_ν = x_{νa} ∂^{μa} − x^μ_a ∂_ν^a, μ < ν
    for (std::size_t nu = mu + 1; nu < d; ++nu) {
      PolyVectorField f = vf_zero(s);
      for (std::size_t a = 0; a < n; ++a) {
        f.comp[xi(mu, a)].add(var(xi(nu, a)), eta(nu) * eta(mu));
        f.comp[xi(nu, a)].add(var(xi(mu, a)), Rational(-1));
      }
      fields.push_back(std::move(f));
    }
  for (std::size_t a = 0; a < n; ++a)  // D^a_b = x^μ_b ∂_μ^a + 2 x_{bc} ∂^{ac}
    for (std::size_t b = 0; b < n; ++b) {
      PolyVectorField f = vf_zero(s);
      for (std::size_t mu = 0; mu < d; ++mu) f.comp[xi(mu, a)].add(var(xi(mu, b)), Rational(1));
      for (std::size_t c = 0; c < n; ++c) {
        auto [s1, i1] = xab(b, c);
        auto [s2, i2] = xab(a, c);
        if (s1 && s2) f.comp[i2].add(var(i1), Rational(s1 * s2));
      }
      fields.push_back(std::move(f));
    }
  for (std::size_t a = 0; a < n; ++a)  // K^μ_a (five terms)
    for (std::size_t mu = 0; mu < d; ++mu) {
      PolyVectorField f = vf_zero(s);
      for (std::size_t nu = 0; nu < d; ++nu)
        for (std::size_t b = 0; b < n; ++b) {
          // −2 x^ν_a x^μ_b ∂_ν^b
          f.comp[xi(nu, b)].add(vfdetail::mono_mul(var(xi(nu, a)), var(xi(mu, b))), Rational(-2));
          // + x^ν_a x_{νb} ∂^{μb}
          f.comp[xi(mu, b)].add(vfdetail::mono_mul(var(xi(nu, a)), var(xi(nu, b))),
                                eta(nu) * eta(mu));
        }
      for (std::size_t b = 0; b < n; ++b) {  // − x_{ab} ∂^{μb}
        auto [sg, idx] = xab(a, b);
        if (sg) f.comp[xi(mu, b)].add(var(idx), Rational(-sg) * eta(mu));
      }
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          auto [st, it] = xab(b, c);
          if (!st) continue;
          // −2 x^ν_a x^μ_b x_{νc} ∂^{bc}
          for (std::size_t nu = 0; nu < d; ++nu)
            f.comp[it].add(vfdetail::mono_mul(vfdetail::mono_mul(var(xi(nu, a)), var(xi(mu, b))),
                                              var(xi(nu, c))),
                           Rational(-st) * eta(nu));
          // +2 x_{ab} x^μ_c ∂^{bc}
          auto [sa, ia] = xab(a, b);
          if (sa)
            f.comp[it].add(vfdetail::mono_mul(var(ia), var(xi(mu, c))), Rational(sa * st));
        }
      fields.push_back(std::move(f));
    }
  for (std::size_t a = 0; a < n; ++a)  // K_{ab}, a < b (six terms)
    for (std::size_t b = a + 1; b < n; ++b) {
      PolyVectorField f = vf_zero(s);
      for (std::size_t mu = 0; mu < d; ++mu)
        for (std::size_t nu = 0; nu < d; ++nu)
          for (std::size_t c = 0; c < n; ++c) {
            // (x^μ_a x^ν_b − x^μ_b x^ν_a) x_{μc} ∂_ν^c
            Monomial m1 = vfdetail::mono_mul(vfdetail::mono_mul(var(xi(mu, a)), var(xi(nu, b))),
                                             var(xi(mu, c)));
            Monomial m2 = vfdetail::mono_mul(vfdetail::mono_mul(var(xi(mu, b)), var(xi(nu, a))),
                                             var(xi(mu, c)));
            f.comp[xi(nu, c)].add(m1, eta(mu));
            f.comp[xi(nu, c)].add(m2, -eta(mu));
          }
      for (std::size_t mu = 0; mu < d; ++mu)
        for (std::size_t c = 0; c < n; ++c) {
          // − x_{ac} x^μ_b ∂_μ^c + x_{bc} x^μ_a ∂_μ^c
          auto [s1, i1] = xab(a, c);
          if (s1) f.comp[xi(mu, c)].add(vfdetail::mono_mul(var(i1), var(xi(mu, b))),
                                        Rational(-s1));
          auto [s2, i2] = xab(b, c);
          if (s2) f.comp[xi(mu, c)].add(vfdetail::mono_mul(var(i2), var(xi(mu, a))),
                                        Rational(s2));
        }
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t e = 0; e < n; ++e) {
          auto [st, it] = xab(c, e);
          if (!st) continue;
          // +2 x^μ_a x^ν_b x_{μc} x_{νd} ∂^{cd}
          for (std::size_t mu = 0; mu < d; ++mu)
            for (std::size_t nu = 0; nu < d; ++nu) {
              Monomial m = vfdetail::mono_mul(
                  vfdetail::mono_mul(var(xi(mu, a)), var(xi(nu, b))),
                  vfdetail::mono_mul(var(xi(mu, c)), var(xi(nu, e))));
              f.comp[it].add(m, Rational(st) * eta(mu) * eta(nu));
            }
          // −2 x_{ac} x_{bd} ∂^{cd}
          auto [s1, i1] = xab(a, c);
          auto [s2, i2] = xab(b, e);
          if (s1 && s2)
            f.comp[it].add(vfdetail::mono_mul(var(i1), var(i2)), Rational(-s1 * s2 * st));
        }
      fields.push_back(std::move(f));
    }
  return fields;
}

/// Kantor pair space for a triple system: the Z-part is the span of the
/// antisymmetrized operators ⟨u,v⟩: z ↦ (uzv) − (vzu) inside End(g₋₁).
class KantorPairSpace {
 public:
  explicit KantorPairSpace(const TripleTensor& t) : t_(t), span_(/*track_coords=*/true) {
    const std::size_t N = t.dim();
    for (std::size_t u = 0; u < N; ++u)
      for (std::size_t v = u + 1; v < N; ++v) {
        RatMatrix m = angle_matrix(SparseVec::unit(static_cast<std::uint32_t>(u)),
                                   SparseVec::unit(static_cast<std::uint32_t>(v)));
        SparseVec f = flatten_matrix(m);
        if (f.empty()) continue;
        if (span_.insert(f)) basis_.push_back(std::move(m));
      }
  }

  const TripleTensor& triple() const { return t_; }
  std::size_t base_dim() const { return t_.dim(); }
  std::size_t z_dim() const { return basis_.size(); }
  const std::vector<RatMatrix>& basis() const { return basis_; }

  /// ⟨u,v⟩ as a matrix: z ↦ (uzv) − (vzu)
  RatMatrix angle_matrix(const SparseVec& u, const SparseVec& v) const {
    const std::size_t N = t_.dim();
    RatMatrix m(N, N);
    for (std::size_t z = 0; z < N; ++z) {
      SparseVec col = t_.apply(u, SparseVec::unit(static_cast<std::uint32_t>(z)), v);
      col.axpy(Rational(-1), t_.apply(v, SparseVec::unit(static_cast<std::uint32_t>(z)), u));
      for (const auto& [k, c] : col.terms()) m.at(k, z) = c;
    }
    return m;
  }

  /// coordinates of ⟨u,v⟩ in the Z basis
  RatVec angle_coords(const SparseVec& u, const SparseVec& v) const {
    RatMatrix m = angle_matrix(u, v);
    SparseVec f = flatten_matrix(m);
    if (f.empty()) return RatVec(z_dim(), Rational(0));
    auto coords = span_.coords(f);
    if (!coords) throw std::logic_error("angle operator escapes the Z-space span");
    coords->resize(z_dim(), Rational(0));
    return *coords;
  }

 private:
  TripleTensor t_;
  LinearSpan span_;
  std::vector<RatMatrix> basis_;
};

/// The five operator families of the Kantor construction realized as
/// polynomial maps on (z, Z) and closed under the vector-field bracket.
/// Fails with "not second order" when the closure leaves the 5-grading.
struct KantorRealization {
  std::size_t base_dim = 0;
  std::size_t z_space_dim = 0;
  VFClosure closure;
};

inline KantorRealization kantor_operators(const TripleTensor& t) {
  KantorRealization out;
  KantorPairSpace ks(t);
  const std::size_t N = ks.base_dim(), M = ks.z_dim();
  out.base_dim = N;
  out.z_space_dim = M;

  CoordSpace s;
  for (std::size_t i = 0; i < N; ++i) {
    s.names.push_back("z" + std::to_string(i));
    s.weight.push_back(1);
  }
  for (std::size_t a = 0; a < M; ++a) {
    s.names.push_back("Z" + std::to_string(a));
    s.weight.push_back(2);
  }
  auto zv = [&](std::size_t i) { return vfdetail::mono_var(static_cast<std::uint32_t>(i)); };
  auto Zv = [&](std::size_t a) { return vfdetail::mono_var(static_cast<std::uint32_t>(N + a)); };
  auto unit = [](std::size_t i) { return SparseVec::unit(static_cast<std::uint32_t>(i)); };
  // B_α e_v as a sparse vector
  auto zbasis_apply = [&](std::size_t alpha, std::size_t v) {
    SparseVec r;
    for (std::size_t i = 0; i < N; ++i) {
      const Rational& c = ks.basis()[alpha].at(i, v);
      if (sgn(c) != 0) r.add_term(static_cast<std::uint32_t>(i), c);
    }
    return r;
  };
  // Z-basis coordinates of ⟨e_i, e_j⟩, precomputed for all basis pairs
  std::vector<RatVec> angle_tab(N * N);
  for (std::size_t i = 0; i < N; ++i) {
    angle_tab[i * N + i] = RatVec(M, Rational(0));
    for (std::size_t j = i + 1; j < N; ++j) {
      angle_tab[i * N + j] = ks.angle_coords(unit(i), unit(j));
      RatVec neg = angle_tab[i * N + j];
      for (auto& c : neg) c = -c;
      angle_tab[j * N + i] = std::move(neg);
    }
  }
  // add coords(⟨x, y⟩) · mono to the Z components, bilinearly via the table
  auto add_angle = [&](PolyVectorField& f, const SparseVec& x, const SparseVec& y, Monomial mono,
                       const Rational& scale) {
    if (sgn(scale) == 0) return;
    for (const auto& [i, xi] : x.terms())
      for (const auto& [j, yj] : y.terms()) {
        const RatVec& tab = angle_tab[i * N + j];
        Rational c = scale * xi * yj;
        for (std::size_t a = 0; a < M; ++a)
          if (sgn(tab[a]) != 0) f.comp[N + a].add(mono, c * tab[a]);
      }
  };

  std::vector<PolyVectorField> ops;
  // g_{-2}: z + Z ↦ ⟨u, v⟩ — constants on the Z block (the Z basis itself)
  for (std::size_t a = 0; a < M; ++a) {
    PolyVectorField f = vf_zero(s);
    f.comp[N + a].add(0, Rational(1));
    ops.push_back(std::move(f));
  }
  // g_{-1}: z + Z ↦ u + ½⟨u, z⟩
  for (std::size_t u = 0; u < N; ++u) {
    PolyVectorField f = vf_zero(s);
    f.comp[u].add(0, Rational(1));
    for (std::size_t j = 0; j < N; ++j) add_angle(f, unit(u), unit(j), zv(j), rat(1, 2));
    ops.push_back(std::move(f));
  }
  // g_0: z + Z ↦ (u v z) − ⟨u, Z(v)⟩
  for (std::size_t u = 0; u < N; ++u)
    for (std::size_t v = 0; v < N; ++v) {
      PolyVectorField f = vf_zero(s);
      for (std::size_t j = 0; j < N; ++j) {
        SparseVec col = t.col(u, v, j);
        for (const auto& [k, c] : col.terms()) f.comp[k].add(zv(j), c);
      }
      for (std::size_t a = 0; a < M; ++a)
        add_angle(f, unit(u), zbasis_apply(a, v), Zv(a), Rational(-1));
      ops.push_back(std::move(f));
    }
  // g_1: z + Z ↦ −½(zuz) − Z(u) + 1/12⟨(zuz), z⟩ − ½⟨Z(u), z⟩
  for (std::size_t u = 0; u < N; ++u) {
    PolyVectorField f = vf_zero(s);
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k) {
        Monomial m = vfdetail::mono_mul(zv(j), zv(k));
        SparseVec col = t.col(j, u, k);
        for (const auto& [l, c] : col.terms()) f.comp[l].add(m, rat(-1, 2) * c);
        if (col.empty()) continue;
        // 1/12 ⟨(e_j u e_k), e_l⟩ z_j z_k z_l
        for (std::size_t l = 0; l < N; ++l)
          add_angle(f, col, unit(l), vfdetail::mono_mul(m, zv(l)), rat(1, 12));
      }
    for (std::size_t a = 0; a < M; ++a) {
      SparseVec w = zbasis_apply(a, u);
      for (const auto& [k, c] : w.terms()) f.comp[k].add(Zv(a), -c);
      for (std::size_t l = 0; l < N; ++l)
        add_angle(f, w, unit(l), vfdetail::mono_mul(Zv(a), zv(l)), rat(-1, 2));
    }
    ops.push_back(std::move(f));
  }
  // g_2: z + Z ↦ −1/6 (z W(z) z) − Z(W(z)) + 1/24 ⟨(z W(z) z), z⟩ + ⟨Z(u), Z(v)⟩
  //      with W = ⟨u, v⟩
  for (std::size_t u = 0; u < N; ++u)
    for (std::size_t v = u + 1; v < N; ++v) {
      PolyVectorField f = vf_zero(s);
      RatMatrix W = ks.angle_matrix(unit(u), unit(v));
      // (z W(z) z) = Σ_{a,b,m,j} z_a z_b W_{mj} z_j (e_a e_m e_b)
      for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b)
          for (std::size_t m = 0; m < N; ++m) {
            const SparseVec& col = t.col(a, m, b);
            if (col.empty()) continue;
            Monomial mab = vfdetail::mono_mul(zv(a), zv(b));
            for (std::size_t j = 0; j < N; ++j) {
              if (sgn(W.at(m, j)) == 0) continue;
              Monomial mono = vfdetail::mono_mul(mab, zv(j));
              for (const auto& [l, c] : col.terms())
                f.comp[l].add(mono, rat(-1, 6) * W.at(m, j) * c);
              for (std::size_t l = 0; l < N; ++l)
                add_angle(f, col, unit(l), vfdetail::mono_mul(mono, zv(l)),
                          rat(1, 24) * W.at(m, j));
            }
          }
      // − Z(W(z)): components − Σ_α Z_α (B_α W)_{k j} z_j
      for (std::size_t a = 0; a < M; ++a) {
        RatMatrix BW = ks.basis()[a] * W;
        for (std::size_t k = 0; k < N; ++k)
          for (std::size_t j = 0; j < N; ++j)
            if (sgn(BW.at(k, j)) != 0)
              f.comp[k].add(vfdetail::mono_mul(Zv(a), zv(j)), -BW.at(k, j));
      }
      // + ⟨Z(u), Z(v)⟩: Σ_{αβ} Z_α Z_β ⟨B_α(u), B_β(v)⟩
      for (std::size_t a = 0; a < M; ++a)
        for (std::size_t b = 0; b < M; ++b)
          add_angle(f, zbasis_apply(a, u), zbasis_apply(b, v),
                    vfdetail::mono_mul(Zv(a), Zv(b)), Rational(1));
      ops.push_back(std::move(f));
    }

  out.closure = vf_closure(ops, std::nullopt, /*max_abs_grade=*/2);
  return out;
}

/// g_k = 0 for |k| > 2 and nonzero for |k| ≤ 2
inline CheckReport check_five_grading(const StructureLieAlgebra& l) {
  CheckReport rep;
  if (!l.grading) throw std::invalid_argument("check_five_grading: no grading attached");
  std::map<int, std::size_t> dims;
  for (int g : *l.grading) ++dims[g];
  for (const auto& [g, cnt] : dims)
    if (g > 2 || g < -2) {
      rep.pass = false;
      rep.detail = "nonzero component at grade " + std::to_string(g);
      return rep;
    }
  for (int g = -2; g <= 2; ++g) {
    ++rep.checked;
    if (!dims.count(g)) {
      rep.pass = false;
      rep.detail = "grade " + std::to_string(g) + " component is empty";
      return rep;
    }
  }
  return rep;
}

}  // namespace kktlab
