#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "kktlab/rational.hpp"

namespace kktlab {

/// Sparse vector of rationals: sorted (index, value) pairs, no explicit zeros.
class SparseVec {
 public:
  using Term = std::pair<std::uint32_t, Rational>;

  SparseVec() = default;

  static SparseVec unit(std::uint32_t i, Rational c = Rational(1)) {
    SparseVec v;
    if (sgn(c) != 0) v.terms_.emplace_back(i, std::move(c));
    return v;
  }

  bool empty() const { return terms_.empty(); }
  std::size_t nnz() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  std::uint32_t lead() const { return terms_.front().first; }
  const Rational& lead_coeff() const { return terms_.front().second; }

  Rational get(std::uint32_t i) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), i,
                               [](const Term& t, std::uint32_t j) { return t.first < j; });
    return (it != terms_.end() && it->first == i) ? it->second : Rational(0);
  }

  void add_term(std::uint32_t i, const Rational& c) {
    // accumulate; caller may add indices in any order
    auto it = std::lower_bound(terms_.begin(), terms_.end(), i,
                               [](const Term& t, std::uint32_t j) { return t.first < j; });
    if (it != terms_.end() && it->first == i) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    } else if (sgn(c) != 0) {
      terms_.insert(it, {i, c});
    }
  }

  void scale(const Rational& c) {
    if (sgn(c) == 0) {
      terms_.clear();
      return;
    }
    for (auto& t : terms_) t.second *= c;
  }

  SparseVec scaled(const Rational& c) const {
    SparseVec v = *this;
    v.scale(c);
    return v;
  }

  SparseVec negated() const {
    SparseVec v = *this;
    for (auto& t : v.terms_) t.second = -t.second;
    return v;
  }

  /// *this += c * other (linear-time merge)
  void axpy(const Rational& c, const SparseVec& other) {
    if (sgn(c) == 0 || other.empty()) return;
    std::vector<Term> out;
    out.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin(), ae = terms_.end();
    auto b = other.terms_.begin(), be = other.terms_.end();
    while (a != ae || b != be) {
      if (b == be || (a != ae && a->first < b->first)) {
        out.push_back(*a++);
      } else if (a == ae || b->first < a->first) {
        Rational v = c * b->second;
        if (sgn(v) != 0) out.emplace_back(b->first, std::move(v));
        ++b;
      } else {
        Rational v = a->second + c * b->second;
        if (sgn(v) != 0) out.emplace_back(a->first, std::move(v));
        ++a;
        ++b;
      }
    }
    terms_ = std::move(out);
  }

  bool operator==(const SparseVec& o) const { return terms_ == o.terms_; }

 private:
  std::vector<Term> terms_;
};

using RatVec = std::vector<Rational>;

inline SparseVec to_sparse(const RatVec& v) {
  SparseVec s;
  for (std::uint32_t i = 0; i < v.size(); ++i) s.add_term(i, v[i]);
  return s;
}

inline RatVec to_dense(const SparseVec& v, std::size_t n) {
  RatVec d(n, Rational(0));
  for (const auto& [i, c] : v.terms()) d[i] = c;
  return d;
}

/// Dense matrix of exact rationals, row-major. Dimensions fixed at creation.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RatVec row(std::size_t i) const {
    return RatVec(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  RatMatrix transposed() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  RatMatrix operator*(const RatMatrix& o) const {
    RatMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Rational& a = at(i, k);
        if (sgn(a) == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          const Rational& b = o.at(k, j);
          if (sgn(b) != 0) r.at(i, j) += a * b;
        }
      }
    return r;
  }

  RatVec apply(const RatVec& x) const {
    RatVec y(rows_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(at(i, j)) != 0) y[i] += at(i, j) * x[j];
    return y;
  }

  bool operator==(const RatMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  /// In-place reduced row echelon form; returns the pivot column of each
  /// pivot row, in order. Deterministic: first nonzero entry scanning down.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t p = r;
      while (p < rows_ && sgn(at(p, c)) == 0) ++p;
      if (p == rows_) continue;
      if (p != r)
        for (std::size_t j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
      Rational inv = 1 / at(r, c);
      for (std::size_t j = c; j < cols_; ++j) at(r, j) *= inv;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r || sgn(at(i, c)) == 0) continue;
        Rational f = at(i, c);
        for (std::size_t j = c; j < cols_; ++j) at(i, j) -= f * at(r, j);
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Rational> data_;
};

inline std::size_t mat_rank(RatMatrix m) { return m.rref().size(); }

/// Canonical kernel basis derived from the RREF: one vector per free column,
/// with a 1 in the free position. Deterministic across runs.
inline std::vector<RatVec> mat_kernel(RatMatrix m) {
  const std::size_t n = m.cols();
  auto pivots = m.rref();
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    RatVec v(n, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Exact inverse via Gauss–Jordan on the augmented matrix; nullopt if singular.
inline std::optional<RatMatrix> mat_inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  auto pivots = aug.rref();
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

/// Kernel basis of a sparse homogeneous system (one SparseVec per equation,
/// ncols unknowns): sparse echelon + back-reduction, then the same canonical
/// free-column extraction as mat_kernel. Suited to large, very sparse systems.
inline std::vector<RatVec> sparse_kernel(const std::vector<SparseVec>& rows, std::size_t ncols) {
  std::map<std::uint32_t, SparseVec> ech;  // pivot column -> normalized row
  for (const SparseVec& in : rows) {
    SparseVec r = in;
    while (!r.empty()) {
      auto it = ech.find(r.lead());
      if (it == ech.end()) break;
      r.axpy(-r.lead_coeff(), it->second);
    }
    if (r.empty()) continue;
    r.scale(1 / r.lead_coeff());
    ech.emplace(r.lead(), std::move(r));
  }
  // back-reduce to RREF, highest pivot first
  for (auto it = ech.rbegin(); it != ech.rend(); ++it) {
    SparseVec& row = it->second;
    std::vector<std::pair<std::uint32_t, Rational>> elim;
    for (const auto& [k, c] : row.terms())
      if (k != it->first && ech.count(k)) elim.emplace_back(k, c);
    for (const auto& [k, c] : elim) row.axpy(-c, ech.at(k));
  }
  std::vector<RatVec> basis;
  for (std::uint32_t f = 0; f < ncols; ++f) {
    if (ech.count(f)) continue;
    RatVec v(ncols, Rational(0));
    v[f] = 1;
    for (const auto& [p, row] : ech) v[p] = -row.get(f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Exact solve of m x = b. Returns nullopt when the system is inconsistent.
/// Free variables are set to zero (solution canonical given the RREF).
inline std::optional<RatVec> mat_solve(const RatMatrix& m, const RatVec& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("mat_solve: size mismatch");
  RatMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = b[i];
  }
  auto pivots = aug.rref();
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  RatVec x(m.cols(), Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, m.cols());
  return x;
}

/// Incremental row span in echelon form. Optionally tracks how each reduced
/// row decomposes over the independent vectors inserted so far, so arbitrary
/// vectors can be expressed in that basis (used for closure tabulation).
class LinearSpan {
 public:
  explicit LinearSpan(bool track_coords = false) : track_(track_coords) {}

  std::size_t dim() const { return rows_.size(); }

  /// Inserts v; returns its basis index if independent, nullopt otherwise.
  std::optional<std::size_t> insert(const SparseVec& v) {
    SparseVec r = v;
    RatVec combo(track_ ? dim() : 0, Rational(0));
    reduce(r, track_ ? &combo : nullptr);
    if (r.empty()) return std::nullopt;
    std::size_t new_idx = ndim_++;
    Row row;
    Rational inv = 1 / r.lead_coeff();
    row.vec = r.scaled(inv);
    if (track_) {
      // reduced row = (v - sum combo_j * B_j) / lead
      for (auto& c : combo) c = -c * inv;
      combo.push_back(inv);  // coefficient of the new basis vector itself
      row.combo = std::move(combo);
    }
    auto it = std::lower_bound(rows_.begin(), rows_.end(), row.vec.lead(),
                               [](const Row& a, std::uint32_t l) { return a.vec.lead() < l; });
    rows_.insert(it, std::move(row));
    return new_idx;
  }

  bool contains(const SparseVec& v) const {
    SparseVec r = v;
    reduce(r, nullptr);
    return r.empty();
  }

  /// v with the span projected out (fully reduced against the echelon rows)
  SparseVec reduce_copy(const SparseVec& v) const {
    SparseVec r = v;
    reduce(r, nullptr);
    return r;
  }

  /// echelon row i, ordered by leading index (deterministic given insertions)
  const SparseVec& row(std::size_t i) const { return rows_[i].vec; }

  /// Coordinates of v over the inserted independent vectors, or nullopt.
  std::optional<RatVec> coords(const SparseVec& v) const {
    SparseVec r = v;
    RatVec combo(ndim_, Rational(0));
    reduce_tracked(r, combo);
    if (!r.empty()) return std::nullopt;
    return combo;
  }

 private:
  struct Row {
    SparseVec vec;          // leading coefficient 1
    RatVec combo;           // expression over basis indices 0..k (when tracked)
  };

  // one ascending pass over the echelon rows clears every row-lead
  // coordinate: a row only touches indices >= its own lead
  void reduce(SparseVec& r, RatVec* combo) const {
    for (const Row& row : rows_) {
      if (r.empty()) return;
      Rational f = r.get(row.vec.lead());
      if (sgn(f) == 0) continue;
      r.axpy(-f, row.vec);
      if (combo)
        for (std::size_t j = 0; j < row.combo.size(); ++j) (*combo)[j] += f * row.combo[j];
    }
  }

  void reduce_tracked(SparseVec& r, RatVec& combo) const {
    if (!track_) throw std::logic_error("LinearSpan: coordinate tracking disabled");
    reduce(r, &combo);
  }

  bool track_;
  std::size_t ndim_ = 0;
  std::vector<Row> rows_;  // sorted by leading index
};

}  // namespace kktlab
