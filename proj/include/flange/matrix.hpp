// Exact dense/sparse matrices and the row-reduction toolkit built on them.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "flange/error.hpp"
#include "flange/field.hpp"

namespace flange {

/// Matrix over a FieldSpec.  Narrow matrices (cols <= kDenseMaxCols) are
/// stored as a dense row-major array, wider ones as per-row sorted
/// coordinate lists.  Every algorithm below is expressed through the
/// shared row operations, so results never depend on the layout.
class Matrix {
 public:
  static constexpr int kDenseMaxCols = 64;

  Matrix(FieldSpec field, int rows, int cols)
      : field_(field), rows_(rows), cols_(cols), dense_(cols <= kDenseMaxCols) {
    if (rows < 0 || cols < 0) throw Error("matrix dimensions must be nonnegative");
    if (dense_)
      dense_data_.assign(static_cast<std::size_t>(rows) * cols, field_.zero());
    else
      sparse_rows_.assign(rows, {});
  }

  static Matrix identity(const FieldSpec& field, int n) {
    Matrix m(field, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, field.one());
    return m;
  }

  /// Build from integer entries (mapped through FieldSpec::from_int).
  static Matrix from_rows(const FieldSpec& field, const std::vector<std::vector<std::int64_t>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    Matrix m(field, r, c);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rows[i].size()) != c) throw Error("from_rows: ragged rows");
      for (int j = 0; j < c; ++j) m.set(i, j, field.from_int(rows[i][j]));
    }
    return m;
  }

  static Matrix column(const FieldSpec& field, const std::vector<Scalar>& v) {
    Matrix m(field, static_cast<int>(v.size()), 1);
    for (int i = 0; i < m.rows_; ++i) m.set(i, 0, v[i]);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldSpec& field() const { return field_; }
  bool dense_layout() const { return dense_; }

  Scalar at(int r, int c) const {
    check_index(r, c);
    if (dense_) return dense_data_[static_cast<std::size_t>(r) * cols_ + c];
    const auto& row = sparse_rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& e, int col) { return e.first < col; });
    if (it != row.end() && it->first == c) return it->second;
    return field_.zero();
  }

  void set(int r, int c, const Scalar& v) {
    check_index(r, c);
    if (dense_) {
      dense_data_[static_cast<std::size_t>(r) * cols_ + c] = v;
      return;
    }
    auto& row = sparse_rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& e, int col) { return e.first < col; });
    bool present = it != row.end() && it->first == c;
    if (field_.is_zero(v)) {
      if (present) row.erase(it);
    } else if (present) {
      it->second = v;
    } else {
      row.insert(it, {c, v});
    }
  }

  /// Nonzero entries of one row as (column, value), columns ascending.
  std::vector<std::pair<int, Scalar>> row_entries(int r) const {
    if (!dense_) return sparse_rows_[r];
    std::vector<std::pair<int, Scalar>> out;
    for (int c = 0; c < cols_; ++c) {
      const Scalar& v = dense_data_[static_cast<std::size_t>(r) * cols_ + c];
      if (!field_.is_zero(v)) out.push_back({c, v});
    }
    return out;
  }

  bool is_zero() const {
    if (dense_) {
      for (const Scalar& v : dense_data_)
        if (!field_.is_zero(v)) return false;
      return true;
    }
    for (const auto& row : sparse_rows_)
      if (!row.empty()) return false;
    return true;
  }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (int r = 0; r < rows_; ++r) {
      auto entries = row_entries(r);
      if (entries.size() != 1 || entries[0].first != r || !field_.is_one(entries[0].second))
        return false;
    }
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.field_ != b.field_ || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (int r = 0; r < a.rows_; ++r)
      if (a.row_entries(r) != b.row_entries(r)) return false;
    return true;
  }

  // --- elementary row operations -----------------------------------------

  void swap_rows(int i, int j) {
    if (i == j) return;
    if (dense_) {
      for (int c = 0; c < cols_; ++c)
        std::swap(dense_data_[static_cast<std::size_t>(i) * cols_ + c],
                  dense_data_[static_cast<std::size_t>(j) * cols_ + c]);
    } else {
      std::swap(sparse_rows_[i], sparse_rows_[j]);
    }
  }

  void scale_row(int i, const Scalar& c) {
    if (field_.is_one(c)) return;
    if (dense_) {
      for (int k = 0; k < cols_; ++k) {
        Scalar& v = dense_data_[static_cast<std::size_t>(i) * cols_ + k];
        v = field_.mul(v, c);
      }
    } else {
      if (field_.is_zero(c)) {
        sparse_rows_[i].clear();
        return;
      }
      for (auto& e : sparse_rows_[i]) e.second = field_.mul(e.second, c);
    }
  }

  /// row[dst] += c * row[src]
  void add_scaled_row(int dst, int src, const Scalar& c) {
    if (field_.is_zero(c)) return;
    if (dense_) {
      for (int k = 0; k < cols_; ++k) {
        const Scalar& s = dense_data_[static_cast<std::size_t>(src) * cols_ + k];
        if (field_.is_zero(s)) continue;
        Scalar& d = dense_data_[static_cast<std::size_t>(dst) * cols_ + k];
        d = field_.add(d, field_.mul(c, s));
      }
      return;
    }
    const auto& s = sparse_rows_[src];
    const auto& d = sparse_rows_[dst];
    std::vector<std::pair<int, Scalar>> merged;
    merged.reserve(s.size() + d.size());
    std::size_t is = 0, id = 0;
    while (is < s.size() || id < d.size()) {
      if (id == d.size() || (is < s.size() && s[is].first < d[id].first)) {
        merged.push_back({s[is].first, field_.mul(c, s[is].second)});
        ++is;
      } else if (is == s.size() || d[id].first < s[is].first) {
        merged.push_back(d[id]);
        ++id;
      } else {
        Scalar v = field_.add(d[id].second, field_.mul(c, s[is].second));
        if (!field_.is_zero(v)) merged.push_back({d[id].first, v});
        ++is;
        ++id;
      }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [&](const auto& e) { return field_.is_zero(e.second); }),
                 merged.end());
    sparse_rows_[dst] = std::move(merged);
  }

  // --- whole-matrix operations --------------------------------------------

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.field_ != b.field_) throw Error("matrix product: field mismatch");
    if (a.cols_ != b.rows_) throw Error("matrix product: shape mismatch");
    Matrix out(a.field_, a.rows_, b.cols_);
    for (int r = 0; r < a.rows_; ++r) {
      for (const auto& [k, av] : a.row_entries(r)) {
        for (const auto& [c, bv] : b.row_entries(k)) {
          out.set(r, c, a.field_.add(out.at(r, c), a.field_.mul(av, bv)));
        }
      }
    }
    return out;
  }

  std::vector<Scalar> apply(const std::vector<Scalar>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw Error("apply: length mismatch");
    std::vector<Scalar> out(rows_, field_.zero());
    for (int r = 0; r < rows_; ++r)
      for (const auto& [c, a] : row_entries(r)) out[r] = field_.add(out[r], field_.mul(a, v[c]));
    return out;
  }

  Matrix transpose() const {
    Matrix out(field_, cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (const auto& [c, v] : row_entries(r)) out.set(c, r, v);
    return out;
  }

  /// Columns of this matrix listed in `which`, in that order.
  Matrix select_columns(const std::vector<int>& which) const {
    Matrix out(field_, rows_, static_cast<int>(which.size()));
    for (int j = 0; j < static_cast<int>(which.size()); ++j)
      for (int r = 0; r < rows_; ++r) out.set(r, j, at(r, which[j]));
    return out;
  }

  friend Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.field_ != b.field_) throw Error("hcat: field mismatch");
    if (a.rows_ != b.rows_) throw Error("hcat: row mismatch");
    Matrix out(a.field_, a.rows_, a.cols_ + b.cols_);
    for (int r = 0; r < a.rows_; ++r) {
      for (const auto& [c, v] : a.row_entries(r)) out.set(r, c, v);
      for (const auto& [c, v] : b.row_entries(r)) out.set(r, a.cols_ + c, v);
    }
    return out;
  }

  friend Matrix vcat(const Matrix& a, const Matrix& b) {
    if (a.field_ != b.field_) throw Error("vcat: field mismatch");
    if (a.cols_ != b.cols_) throw Error("vcat: column mismatch");
    Matrix out(a.field_, a.rows_ + b.rows_, a.cols_);
    for (int r = 0; r < a.rows_; ++r)
      for (const auto& [c, v] : a.row_entries(r)) out.set(r, c, v);
    for (int r = 0; r < b.rows_; ++r)
      for (const auto& [c, v] : b.row_entries(r)) out.set(a.rows_ + r, c, v);
    return out;
  }

 private:
  void check_index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw Error("matrix index out of range");
  }

  FieldSpec field_;
  int rows_, cols_;
  bool dense_;
  std::vector<Scalar> dense_data_;                            // row-major, dense layout
  std::vector<std::vector<std::pair<int, Scalar>>> sparse_rows_;  // sorted by column
};

inline Matrix hcat_all(const FieldSpec& field, int rows, const std::vector<Matrix>& parts) {
  Matrix out(field, rows, 0);
  for (const Matrix& p : parts) out = hcat(out, p);
  return out;
}

inline Matrix vcat_all(const FieldSpec& field, int cols, const std::vector<Matrix>& parts) {
  Matrix out(field, 0, cols);
  for (const Matrix& p : parts) out = vcat(out, p);
  return out;
}

/// Reduced row echelon data.  The pivot rule is fixed: scan columns left
/// to right and pick the not-yet-used row of smallest index with a
/// nonzero entry.  This makes every downstream basis deterministic.
struct RankProfile {
  int rank = 0;
  std::vector<int> pivot_cols;
  Matrix rref;
};

inline RankProfile rank_profile(const Matrix& a) {
  RankProfile out{0, {}, a};
  Matrix& m = out.rref;
  const FieldSpec& f = a.field();
  for (int c = 0; c < m.cols(); ++c) {
    int pivot = -1;
    for (int r = out.rank; r < m.rows(); ++r) {
      if (!f.is_zero(m.at(r, c))) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    m.swap_rows(out.rank, pivot);
    m.scale_row(out.rank, f.inv(m.at(out.rank, c)));
    for (int r = 0; r < m.rows(); ++r) {
      if (r == out.rank) continue;
      Scalar v = m.at(r, c);
      if (!f.is_zero(v)) m.add_scaled_row(r, out.rank, f.neg(v));
    }
    out.pivot_cols.push_back(c);
    ++out.rank;
  }
  return out;
}

inline int rank_of(const Matrix& a) { return rank_profile(a).rank; }

/// One solution of a x = b, or nullopt when the system is inconsistent.
/// Free variables are set to zero.
inline std::optional<std::vector<Scalar>> solve(const Matrix& a, const std::vector<Scalar>& b) {
  RankProfile rp = rank_profile(hcat(a, Matrix::column(a.field(), b)));
  std::vector<Scalar> x(a.cols(), a.field().zero());
  for (int i = 0; i < rp.rank; ++i) {
    if (rp.pivot_cols[i] >= a.cols()) return std::nullopt;
    x[rp.pivot_cols[i]] = rp.rref.at(i, a.cols());
  }
  return x;
}

/// Solve a X = b for a matrix right-hand side; nullopt when any column is
/// inconsistent.  Free variables are zero, so the result is deterministic.
inline std::optional<Matrix> solve_matrix(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw Error("solve_matrix: row mismatch");
  RankProfile rp = rank_profile(hcat(a, b));
  for (int p : rp.pivot_cols)
    if (p >= a.cols()) return std::nullopt;
  Matrix x(a.field(), a.cols(), b.cols());
  for (int i = 0; i < rp.rank; ++i)
    for (int j = 0; j < b.cols(); ++j) x.set(rp.pivot_cols[i], j, rp.rref.at(i, a.cols() + j));
  return x;
}

/// Basis of the kernel of `a`, one column per free column of the RREF,
/// ordered by ascending free-column index.
inline Matrix kernel_basis(const Matrix& a) {
  RankProfile rp = rank_profile(a);
  std::vector<int> free_cols;
  {
    std::size_t pi = 0;
    for (int c = 0; c < a.cols(); ++c) {
      if (pi < rp.pivot_cols.size() && rp.pivot_cols[pi] == c)
        ++pi;
      else
        free_cols.push_back(c);
    }
  }
  Matrix k(a.field(), a.cols(), static_cast<int>(free_cols.size()));
  for (int j = 0; j < static_cast<int>(free_cols.size()); ++j) {
    k.set(free_cols[j], j, a.field().one());
    for (int i = 0; i < rp.rank; ++i)
      k.set(rp.pivot_cols[i], j, a.field().neg(rp.rref.at(i, free_cols[j])));
  }
  return k;
}

/// The columns of `a` that form a basis of its column space (the pivot
/// columns of the RREF, in ascending order).
inline Matrix column_space_basis(const Matrix& a) {
  return a.select_columns(rank_profile(a).pivot_cols);
}

/// Given independent columns v (rows x k), return a (rows x (rows-k))
/// complement drawn greedily from the standard basis vectors e_0, e_1, ...
/// so that [v | result] is invertible.  Throws if v is not independent.
inline Matrix extend_to_basis(const Matrix& v, int ambient_dim) {
  if (v.rows() != ambient_dim) throw Error("extend_to_basis: ambient dimension mismatch");
  if (rank_of(v) != v.cols()) throw Error("extend_to_basis: columns are dependent");
  Matrix current = v;
  Matrix complement(v.field(), ambient_dim, 0);
  for (int i = 0; i < ambient_dim && current.cols() < ambient_dim; ++i) {
    Matrix e(v.field(), ambient_dim, 1);
    e.set(i, 0, v.field().one());
    Matrix candidate = hcat(current, e);
    if (rank_of(candidate) == candidate.cols()) {
      current = std::move(candidate);
      complement = hcat(complement, e);
    }
  }
  if (current.cols() != ambient_dim)
    throw AssertionFailure("extend_to_basis: failed to complete a basis");
  return complement;
}

/// Inverse of a square invertible matrix; throws Error when singular.
inline Matrix inverse_of(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error("inverse_of: matrix is not square");
  std::optional<Matrix> x = solve_matrix(a, Matrix::identity(a.field(), a.rows()));
  if (!x) throw Error("inverse_of: matrix is singular");
  return *x;
}

}  // namespace flange
