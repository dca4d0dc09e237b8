#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kktlab/matrix.hpp"
#include "kktlab/report.hpp"
#include "kktlab/rng.hpp"

namespace kktlab {

/// Finite-dimensional Lie algebra given by an antisymmetric structure tensor
/// [e_i, e_j] = f_{ij}^k e_k over exact rationals, with optional integer
/// grading (degree per basis element) and optional involution matrix.
class StructureLieAlgebra {
 public:
  StructureLieAlgebra() : dim_(0) {}
  explicit StructureLieAlgebra(std::size_t dim) : dim_(dim), cols_(dim * (dim + 1) / 2) {}

  std::size_t dim() const { return dim_; }

  void set_bracket(std::size_t i, std::size_t j, SparseVec v) {
    if (i == j) {
      if (!v.empty()) throw std::invalid_argument("[x,x] must vanish");
      return;
    }
    if (i < j)
      cols_[tri_index(i, j)] = std::move(v);
    else
      cols_[tri_index(j, i)] = v.negated();
  }

  /// [e_i, e_j]
  SparseVec bracket_basis(std::size_t i, std::size_t j) const {
    if (i == j) return {};
    if (i < j) return cols_[tri_index(i, j)];
    return cols_[tri_index(j, i)].negated();
  }

  /// stored upper-triangle column, no copy
  const SparseVec& upper(std::size_t i, std::size_t j) const { return cols_[tri_index(i, j)]; }

  SparseVec bracket(const SparseVec& x, const SparseVec& y) const {
    SparseVec r;
    for (const auto& [i, xi] : x.terms())
      for (const auto& [j, yj] : y.terms()) {
        if (i == j) continue;
        if (i < j)
          r.axpy(xi * yj, cols_[tri_index(i, j)]);
        else
          r.axpy(-xi * yj, cols_[tri_index(j, i)]);
      }
    return r;
  }

  /// ad(e_i) as a matrix
  RatMatrix ad_basis(std::size_t i) const {
    RatMatrix m(dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      SparseVec col = bracket_basis(i, j);
      for (const auto& [k, c] : col.terms()) m.at(k, j) = c;
    }
    return m;
  }

  std::optional<std::vector<int>> grading;
  std::optional<RatMatrix> involution;
  std::vector<std::string> labels;

  /// dims of g_k for k = -depth..depth (grading must be present)
  std::vector<std::size_t> graded_dims() const {
    if (!grading) throw std::logic_error("no grading attached");
    int lo = 0, hi = 0;
    for (int d : *grading) {
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    int span = std::max(hi, -lo);
    std::vector<std::size_t> dims(2 * span + 1, 0);
    for (int d : *grading) ++dims[d + span];
    return dims;
  }

  StructureLieAlgebra without_grading() const {
    StructureLieAlgebra l = *this;
    l.grading.reset();
    l.involution.reset();
    return l;
  }

 private:
  std::size_t tri_index(std::size_t i, std::size_t j) const {
    // i < j
    return i * dim_ - i * (i + 1) / 2 + (j - i - 1);
  }

  std::size_t dim_;
  std::vector<SparseVec> cols_;
};

namespace detail {

/// Integer-scaled copy of the structure tensor for fast Jacobi scans.
/// Falls back to rational arithmetic when entries do not fit comfortably.
struct ScaledTable {
  bool ok = false;
  std::vector<std::vector<std::pair<std::uint32_t, long long>>> cols;  // full dim x dim

  static ScaledTable build(const StructureLieAlgebra& l) {
    ScaledTable t;
    const std::size_t d = l.dim();
    BigInt lcm = 1;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        for (const auto& [k, c] : l.upper(i, j).terms()) {
          mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
          if (!lcm.fits_slong_p() || lcm > 65536) return t;
        }
    const long long kMax = 1LL << 20;
    t.cols.assign(d * d, {});
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        for (const auto& [k, c] : l.upper(i, j).terms()) {
          BigInt num = c.get_num() * (lcm / c.get_den());
          if (!num.fits_slong_p()) return t;
          long long v = num.get_si();
          if (v > kMax || v < -kMax) return t;
          t.cols[i * d + j].emplace_back(k, v);
          t.cols[j * d + i].emplace_back(k, -v);
        }
      }
    t.ok = true;
    return t;
  }
};

}  // namespace detail

/// Jacobi identity [[x,y],z] + [[y,z],x] + [[z,x],y] = 0 on basis triples.
inline CheckReport check_jacobi(const StructureLieAlgebra& l, const CheckMode& mode) {
  CheckReport rep;
  const std::size_t d = l.dim();
  if (d == 0) return rep;

  auto scaled = detail::ScaledTable::build(l);
  if (scaled.ok) {
    std::vector<long long> acc(d, 0);
    std::vector<std::uint32_t> touched;
    auto add_term = [&](std::size_t a, std::size_t b, long long s) {
      for (const auto& [m, c] : scaled.cols[a * d + b])
        for (const auto& [k, c2] : scaled.cols[m * d + s]) {
          if (acc[k] == 0) touched.push_back(k);
          acc[k] += c * c2;
        }
    };
    auto jacobi_zero = [&](std::size_t i, std::size_t j, std::size_t k) {
      touched.clear();
      add_term(i, j, k);
      add_term(j, k, i);
      add_term(k, i, j);
      bool zero = true;
      for (auto m : touched) {
        if (acc[m] != 0) zero = false;
        acc[m] = 0;
      }
      return zero;
    };
    if (mode.full) {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
          for (std::size_t k = j + 1; k < d; ++k) {
            ++rep.checked;
            if (!jacobi_zero(i, j, k)) {
              rep.pass = false;
              rep.witness = {i, j, k};
              rep.detail = "Jacobi identity fails at basis triple";
              return rep;
            }
          }
    } else {
      Rng rng(mode.seed);
      for (std::uint64_t s = 0; s < mode.samples; ++s) {
        std::size_t i = rng.index(d), j = rng.index(d), k = rng.index(d);
        ++rep.checked;
        if (!jacobi_zero(i, j, k)) {
          rep.pass = false;
          rep.witness = {i, j, k};
          rep.detail = "Jacobi identity fails at sampled triple";
          return rep;
        }
      }
    }
    return rep;
  }

  // rational fallback
  auto jacobi_vec = [&](std::size_t i, std::size_t j, std::size_t k) {
    SparseVec r = l.bracket(l.bracket_basis(i, j), SparseVec::unit(k));
    r.axpy(Rational(1), l.bracket(l.bracket_basis(j, k), SparseVec::unit(i)));
    r.axpy(Rational(1), l.bracket(l.bracket_basis(k, i), SparseVec::unit(j)));
    return r;
  };
  if (mode.full) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        for (std::size_t k = j + 1; k < d; ++k) {
          ++rep.checked;
          if (!jacobi_vec(i, j, k).empty()) {
            rep.pass = false;
            rep.witness = {i, j, k};
            rep.detail = "Jacobi identity fails at basis triple";
            return rep;
          }
        }
  } else {
    Rng rng(mode.seed);
    for (std::uint64_t s = 0; s < mode.samples; ++s) {
      std::size_t i = rng.index(d), j = rng.index(d), k = rng.index(d);
      ++rep.checked;
      if (!jacobi_vec(i, j, k).empty()) {
        rep.pass = false;
        rep.witness = {i, j, k};
        rep.detail = "Jacobi identity fails at sampled triple";
        return rep;
      }
    }
  }
  return rep;
}

/// degree additivity [g_m, g_n] ⊆ g_{m+n} for every nonzero constant
inline CheckReport check_grading(const StructureLieAlgebra& l) {
  if (!l.grading) throw std::invalid_argument("check_grading: no grading attached");
  CheckReport rep;
  const auto& deg = *l.grading;
  for (std::size_t i = 0; i < l.dim(); ++i)
    for (std::size_t j = i + 1; j < l.dim(); ++j)
      for (const auto& [k, c] : l.upper(i, j).terms()) {
        ++rep.checked;
        if (deg[k] != deg[i] + deg[j]) {
          rep.pass = false;
          rep.witness = {i, j, k};
          rep.detail = "grading violated: deg " + std::to_string(deg[i]) + " + " +
                       std::to_string(deg[j]) + " -> " + std::to_string(deg[k]);
          return rep;
        }
      }
  return rep;
}

/// τ is an automorphism, squares to the identity, and reverses the grading.
inline CheckReport check_graded_involution(const StructureLieAlgebra& l) {
  if (!l.involution) throw std::invalid_argument("check_graded_involution: no involution");
  CheckReport rep;
  const RatMatrix& tau = *l.involution;
  const std::size_t d = l.dim();
  if (!(tau * tau == RatMatrix::identity(d))) {
    rep.pass = false;
    rep.detail = "involution does not square to the identity";
    return rep;
  }
  std::vector<SparseVec> tau_cols(d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i)
      if (sgn(tau.at(i, j)) != 0) tau_cols[j].add_term(static_cast<std::uint32_t>(i), tau.at(i, j));
  if (l.grading) {
    const auto& deg = *l.grading;
    for (std::size_t j = 0; j < d; ++j)
      for (const auto& [i, c] : tau_cols[j].terms())
        if (deg[i] != -deg[j]) {
          rep.pass = false;
          rep.witness = {j, i};
          rep.detail = "involution does not reverse the grading";
          return rep;
        }
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      ++rep.checked;
      // τ[e_i, e_j] vs [τ e_i, τ e_j]
      SparseVec lhs;
      for (const auto& [k, c] : l.upper(i, j).terms()) lhs.axpy(c, tau_cols[k]);
      SparseVec rhs = l.bracket(tau_cols[i], tau_cols[j]);
      rhs.axpy(Rational(-1), lhs);
      if (!rhs.empty()) {
        rep.pass = false;
        rep.witness = {i, j};
        rep.detail = "involution is not an automorphism";
        return rep;
      }
    }
  return rep;
}

/// K(x, y) = trace(ad x ∘ ad y) on basis pairs
inline RatMatrix killing_form(const StructureLieAlgebra& l) {
  const std::size_t d = l.dim();
  RatMatrix K(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      Rational s(0);
      for (std::size_t m = 0; m < d; ++m) {
        SparseVec ad_i_col = l.bracket_basis(i, m);
        for (const auto& [k, c] : ad_i_col.terms())
          s += c * l.bracket_basis(j, k).get(static_cast<std::uint32_t>(m));
      }
      K.at(i, j) = s;
      K.at(j, i) = s;
    }
  return K;
}

/// span of all brackets [x, y] for x, y in the given subspace (default: L)
inline std::vector<SparseVec> derived_subalgebra(
    const StructureLieAlgebra& l, const std::vector<SparseVec>* subspace = nullptr) {
  LinearSpan span;
  std::vector<SparseVec> rows;
  auto add = [&](const SparseVec& v) {
    if (span.insert(v)) rows.push_back(v);
  };
  if (!subspace) {
    for (std::size_t i = 0; i < l.dim() && span.dim() < l.dim(); ++i)
      for (std::size_t j = i + 1; j < l.dim(); ++j) add(l.upper(i, j));
  } else {
    for (std::size_t i = 0; i < subspace->size(); ++i)
      for (std::size_t j = i + 1; j < subspace->size(); ++j)
        add(l.bracket((*subspace)[i], (*subspace)[j]));
  }
  return rows;
}

inline std::vector<std::size_t> derived_series_dims(const StructureLieAlgebra& l) {
  std::vector<std::size_t> dims;
  std::vector<SparseVec> cur = derived_subalgebra(l);
  dims.push_back(cur.size());
  while (true) {
    std::vector<SparseVec> next = derived_subalgebra(l, &cur);
    if (next.size() == cur.size()) break;
    dims.push_back(next.size());
    cur = std::move(next);
    if (cur.empty()) break;
  }
  return dims;
}

/// center = kernel of the stacked ad maps, via the Gram matrix
/// A = Σ_i (ad e_i)ᵀ (ad e_i): over Q, ker A = ∩ ker ad e_i.
inline std::vector<RatVec> center(const StructureLieAlgebra& l) {
  const std::size_t d = l.dim();
  RatMatrix A(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    // rows of ad e_i are sparse; accumulate outer products
    for (std::size_t j = 0; j < d; ++j) {
      SparseVec col = l.bracket_basis(i, j);  // [e_i, e_j]
      if (col.empty()) continue;
      // contribution of column j against column j2 of ad e_i happens via
      // A_{j j2} += <ad e_i e_j, ad e_i e_j2>; do it column by column
      for (std::size_t j2 = j; j2 < d; ++j2) {
        SparseVec col2 = l.bracket_basis(i, j2);
        if (col2.empty()) continue;
        Rational dot(0);
        for (const auto& [k, c] : col.terms()) dot += c * col2.get(k);
        if (sgn(dot) != 0) {
          A.at(j, j2) += dot;
          if (j != j2) A.at(j2, j) += dot;
        }
      }
    }
  }
  return mat_kernel(A);
}

/// Quotient by a verified ideal; structure constants on the complement of the
/// ideal's pivot coordinates. Errors with a witness bracket on non-ideals.
inline StructureLieAlgebra quotient_by_ideal(const StructureLieAlgebra& l,
                                             const std::vector<SparseVec>& ideal) {
  LinearSpan span;
  std::vector<SparseVec> reduced;
  for (const auto& v : ideal)
    if (span.insert(v)) reduced.push_back(v);
  for (std::size_t i = 0; i < l.dim(); ++i)
    for (const auto& v : reduced)
      if (!span.contains(l.bracket(SparseVec::unit(static_cast<std::uint32_t>(i)), v)))
        throw std::invalid_argument("quotient_by_ideal: input is not an ideal (bracket with e" +
                                    std::to_string(i) + " escapes)");
  // complement = coordinates that are not leads of the ideal span
  std::vector<bool> is_lead(l.dim(), false);
  {
    LinearSpan tmp;
    for (const auto& v : reduced) tmp.insert(v);
    for (std::size_t i = 0; i < tmp.dim(); ++i) is_lead[tmp.row(i).lead()] = true;
  }
  std::vector<std::size_t> comp;
  std::vector<std::int64_t> pos(l.dim(), -1);
  for (std::size_t i = 0; i < l.dim(); ++i)
    if (!is_lead[i]) {
      pos[i] = static_cast<std::int64_t>(comp.size());
      comp.push_back(i);
    }
  StructureLieAlgebra q(comp.size());
  for (std::size_t a = 0; a < comp.size(); ++a)
    for (std::size_t b = a + 1; b < comp.size(); ++b) {
      SparseVec w = span.reduce_copy(l.bracket_basis(comp[a], comp[b]));
      SparseVec col;
      for (const auto& [k, c] : w.terms()) {
        if (pos[k] < 0) throw std::logic_error("quotient reduction left an ideal coordinate");
        col.add_term(static_cast<std::uint32_t>(pos[k]), c);
      }
      q.set_bracket(a, b, std::move(col));
    }
  return q;
}

inline SparseVec flatten_matrix(const RatMatrix& m) {
  SparseVec v;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m.at(i, j)) != 0)
        v.add_term(static_cast<std::uint32_t>(i * m.cols() + j), m.at(i, j));
  return v;
}

inline RatMatrix commutator(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix c = a * b;
  RatMatrix d = b * a;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) c.at(i, j) -= d.at(i, j);
  return c;
}

struct MatrixLieClosure {
  std::vector<RatMatrix> basis;
  StructureLieAlgebra algebra;
};

/// Smallest matrix Lie algebra containing the given operators: iterate
/// commutators and extend the span until stable, then tabulate the bracket.
inline MatrixLieClosure lie_closure(const std::vector<RatMatrix>& ops,
                                    std::optional<std::size_t> max_dim = std::nullopt) {
  MatrixLieClosure out;
  LinearSpan span(/*track_coords=*/true);
  for (const auto& m : ops) {
    SparseVec f = flatten_matrix(m);
    if (f.empty()) continue;
    if (span.insert(f)) out.basis.push_back(m);
    if (max_dim && out.basis.size() > *max_dim)
      throw std::runtime_error("lie_closure: exceeded expected dimension");
  }
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> cols;
  for (std::size_t j = 1; j < out.basis.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) {
      RatMatrix c = commutator(out.basis[i], out.basis[j]);
      SparseVec f = flatten_matrix(c);
      if (f.empty()) continue;
      auto coords = span.coords(f);
      if (!coords) {
        span.insert(f);
        out.basis.push_back(c);
        if (max_dim && out.basis.size() > *max_dim)
          throw std::runtime_error("lie_closure: exceeded expected dimension");
        cols[{i, j}] = SparseVec::unit(static_cast<std::uint32_t>(out.basis.size() - 1));
      } else {
        cols[{i, j}] = to_sparse(*coords);
      }
    }
  out.algebra = StructureLieAlgebra(out.basis.size());
  for (auto& [ij, col] : cols) out.algebra.set_bracket(ij.first, ij.second, std::move(col));
  return out;
}

/// Isomorphism evidence at desk scale.
struct Fingerprint {
  std::size_t dim = 0;
  std::optional<std::vector<std::size_t>> graded_dims;
  std::size_t killing_rank = 0;
  bool killing_nondegenerate = false;
  std::vector<std::size_t> derived_dims;
  std::size_t center_dim = 0;

  bool operator==(const Fingerprint&) const = default;
};

inline Fingerprint fingerprint(const StructureLieAlgebra& l) {
  Fingerprint f;
  f.dim = l.dim();
  if (l.grading) f.graded_dims = l.graded_dims();
  f.killing_rank = mat_rank(killing_form(l));
  f.killing_nondegenerate = (f.killing_rank == f.dim);
  f.derived_dims = derived_series_dims(l);
  f.center_dim = center(l).size();
  return f;
}

inline bool fingerprint_equal(const Fingerprint& a, const Fingerprint& b) { return a == b; }

/// One-line canonical rendering, used for golden files and CLI tables.
inline std::string fingerprint_brief(const Fingerprint& f) {
  auto join = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s.empty() ? std::string("-") : s;
  };
  std::string s = "dim=" + std::to_string(f.dim);
  s += " graded=" + (f.graded_dims ? join(*f.graded_dims) : std::string("-"));
  s += " killing_rank=" + std::to_string(f.killing_rank);
  s += " nondeg=" + std::to_string(f.killing_nondegenerate ? 1 : 0);
  s += " derived=" + join(f.derived_dims);
  s += " center=" + std::to_string(f.center_dim);
  return s;
}

/// Transported algebra under an invertible basis change e'_j = Σ_i M_{ij} e_i.
inline StructureLieAlgebra change_basis(const StructureLieAlgebra& l, const RatMatrix& m) {
  const std::size_t d = l.dim();
  std::vector<SparseVec> new_basis(d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i)
      if (sgn(m.at(i, j)) != 0) new_basis[j].add_term(static_cast<std::uint32_t>(i), m.at(i, j));
  StructureLieAlgebra out(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      RatVec w = to_dense(l.bracket(new_basis[a], new_basis[b]), d);
      auto coords = mat_solve(m, w);
      if (!coords) throw std::invalid_argument("change_basis: matrix not invertible");
      out.set_bracket(a, b, to_sparse(*coords));
    }
  return out;
}

}  // namespace kktlab
