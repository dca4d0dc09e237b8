#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "kktlab/rational.hpp"

namespace kktlab {

/// The four real composition (division) algebras.
enum class CompositionKind { R, C, H, O };

inline int ca_dim(CompositionKind k) {
  switch (k) {
    case CompositionKind::R: return 1;
    case CompositionKind::C: return 2;
    case CompositionKind::H: return 4;
    case CompositionKind::O: return 8;
  }
  throw std::logic_error("bad kind");
}

inline std::string ca_name(CompositionKind k) {
  switch (k) {
    case CompositionKind::R: return "R";
    case CompositionKind::C: return "C";
    case CompositionKind::H: return "H";
    case CompositionKind::O: return "O";
  }
  throw std::logic_error("bad kind");
}

inline CompositionKind ca_parse(const std::string& s) {
  if (s == "R") return CompositionKind::R;
  if (s == "C") return CompositionKind::C;
  if (s == "H") return CompositionKind::H;
  if (s == "O") return CompositionKind::O;
  throw std::invalid_argument("unknown composition algebra: " + s);
}

/// Signed basis product e_i * e_j = sign * e_index.
struct BasisProduct {
  int sign;
  int index;
};

/// Multiplication table generated by Cayley-Dickson doubling,
///   (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)),
/// starting from R with basis e0 = 1. Basis ordering: the first half of a
/// doubled algebra is the previous algebra, the second half its shift.
class CayleyDicksonTable {
 public:
  explicit CayleyDicksonTable(int dim) : dim_(dim), tab_(dim * dim) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) tab_[i * dim + j] = mul_basis(dim, i, j);
  }

  int dim() const { return dim_; }
  const BasisProduct& at(int i, int j) const { return tab_[i * dim_ + j]; }

 private:
  // conj(e_k) = e_k for k = 0, -e_k otherwise
  static BasisProduct conj(BasisProduct p) {
    if (p.index != 0) p.sign = -p.sign;
    return p;
  }

  static BasisProduct mul_basis(int dim, int i, int j) {
    if (dim == 1) return {1, 0};
    int h = dim / 2;
    // x = (a,b), y = (c,d) with exactly one nonzero component each
    bool ib = i >= h, jb = j >= h;
    int ii = ib ? i - h : i, jj = jb ? j - h : j;
    if (!ib && !jb) {  // (a,0)(c,0) = (ac, 0)
      return mul_basis(h, ii, jj);
    }
    if (!ib && jb) {  // (a,0)(0,d) = (0, d a)
      BasisProduct p = mul_basis(h, jj, ii);
      return {p.sign, p.index + h};
    }
    if (ib && !jb) {  // (0,b)(c,0) = (0, b conj(c))
      BasisProduct q = conj({1, jj});
      BasisProduct r = mul_basis(h, ii, q.index);
      return {q.sign * r.sign, r.index + h};
    }
    // (0,b)(0,d) = (-conj(d) b, 0)
    BasisProduct q = conj({1, jj});
    BasisProduct r = mul_basis(h, q.index, ii);
    return {-q.sign * r.sign, r.index};
  }

  int dim_;
  std::vector<BasisProduct> tab_;
};

inline const CayleyDicksonTable& ca_table(CompositionKind k) {
  static const CayleyDicksonTable r(1), c(2), h(4), o(8);
  switch (k) {
    case CompositionKind::R: return r;
    case CompositionKind::C: return c;
    case CompositionKind::H: return h;
    case CompositionKind::O: return o;
  }
  throw std::logic_error("bad kind");
}

/// Element of K with exact rational coordinates over the basis e0 = 1, e1, ...
struct CompositionElement {
  CompositionKind kind;
  std::vector<Rational> coords;

  static CompositionElement zero(CompositionKind k) {
    return {k, std::vector<Rational>(ca_dim(k), Rational(0))};
  }
  static CompositionElement basis(CompositionKind k, int i) {
    auto e = zero(k);
    e.coords.at(i) = 1;
    return e;
  }
  static CompositionElement one(CompositionKind k) { return basis(k, 0); }

  bool is_zero() const {
    for (const auto& c : coords)
      if (sgn(c) != 0) return false;
    return true;
  }
};

inline void ca_check_same(const CompositionElement& x, const CompositionElement& y) {
  if (x.kind != y.kind) throw std::invalid_argument("composition algebra kind mismatch");
}

inline CompositionElement ca_add(const CompositionElement& x, const CompositionElement& y) {
  ca_check_same(x, y);
  CompositionElement z = x;
  for (std::size_t i = 0; i < z.coords.size(); ++i) z.coords[i] += y.coords[i];
  return z;
}

inline CompositionElement ca_scale(const CompositionElement& x, const Rational& c) {
  CompositionElement z = x;
  for (auto& v : z.coords) v *= c;
  return z;
}

inline CompositionElement ca_mul(const CompositionElement& x, const CompositionElement& y) {
  ca_check_same(x, y);
  const auto& tab = ca_table(x.kind);
  CompositionElement z = CompositionElement::zero(x.kind);
  const int d = tab.dim();
  for (int i = 0; i < d; ++i) {
    if (sgn(x.coords[i]) == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (sgn(y.coords[j]) == 0) continue;
      const auto& p = tab.at(i, j);
      Rational v = x.coords[i] * y.coords[j];
      if (p.sign < 0) v = -v;
      z.coords[p.index] += v;
    }
  }
  return z;
}

inline CompositionElement ca_conj(const CompositionElement& x) {
  CompositionElement z = x;
  for (std::size_t i = 1; i < z.coords.size(); ++i) z.coords[i] = -z.coords[i];
  return z;
}

inline Rational ca_norm(const CompositionElement& x) {
  Rational n(0);
  for (const auto& c : x.coords) n += c * c;
  return n;
}

inline Rational ca_real(const CompositionElement& x) { return x.coords[0]; }

}  // namespace kktlab
