#pragma once

// Dense exact linear algebra over a prime field F_p.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cotorsion {

using Residue = std::uint32_t;

/// Contract violations (shape mismatch, wrong field, bad indices).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The prime field F_p. Arithmetic is on residues in [0, p).
struct PrimeField {
  Residue p = 2;

  constexpr Residue add(Residue a, Residue b) const {
    Residue s = a + b;
    return s >= p ? s - p : s;
  }
  constexpr Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + p - b; }
  constexpr Residue neg(Residue a) const { return a == 0 ? 0 : p - a; }
  constexpr Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % p);
  }
  Residue inv(Residue a) const {
    if (a == 0) throw ContractViolation("inverse of zero in F_p");
    // Fermat: a^(p-2)
    Residue result = 1, base = a;
    std::uint64_t e = p - 2;
    while (e > 0) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }
  Residue reduce(long long v) const {
    long long r = v % static_cast<long long>(p);
    return static_cast<Residue>(r < 0 ? r + p : r);
  }
  friend bool operator==(const PrimeField&, const PrimeField&) = default;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Row-major dense matrix over F_p. The field travels with the value.
class Matrix {
 public:
  Matrix() = default;
  Matrix(PrimeField f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(PrimeField f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Builds from nested rows; entries are reduced mod p.
  static Matrix from_rows(PrimeField f, const std::vector<std::vector<long long>>& rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw ContractViolation("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = f.reduce(rows[i][j]);
    }
    return m;
  }

  /// Matrix whose columns are the given vectors (all of length `height`).
  static Matrix from_columns(PrimeField f, std::size_t height,
                             const std::vector<std::vector<Residue>>& cols) {
    Matrix m(f, height, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != height) throw ContractViolation("column length mismatch");
      for (std::size_t i = 0; i < height; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  const PrimeField& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Residue& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Residue> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  const std::vector<Residue>& data() const { return data_; }

  std::vector<Residue> column(std::size_t c) const {
    std::vector<Residue> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Residue e) { return e == 0; });
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw ContractViolation("matrix product shape mismatch");
    check_field(o);
    Matrix out(field_, rows_, o.cols_);
    const std::uint64_t p = field_.p;
    std::vector<std::uint64_t> acc(o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t k = 0; k < cols_; ++k) {
        Residue a = (*this)(i, k);
        if (a == 0) continue;
        auto orow = o.row(k);
        for (std::size_t j = 0; j < o.cols_; ++j) acc[j] += static_cast<std::uint64_t>(a) * orow[j];
        // keep the accumulator bounded
        if ((k & 255) == 255)
          for (auto& v : acc) v %= p;
      }
      for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) = static_cast<Residue>(acc[j] % p);
    }
    return out;
  }

  std::vector<Residue> operator*(std::span<const Residue> v) const {
    if (v.size() != cols_) throw ContractViolation("matrix-vector shape mismatch");
    std::vector<Residue> out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      std::uint64_t acc = 0;
      auto r = row(i);
      for (std::size_t j = 0; j < cols_; ++j) acc += static_cast<std::uint64_t>(r[j]) * v[j] % field_.p;
      out[i] = static_cast<Residue>(acc % field_.p);
    }
    return out;
  }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o);
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.add(data_[i], o.data_[i]);
    return out;
  }
  Matrix operator-(const Matrix& o) const {
    check_same_shape(o);
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_.sub(data_[i], o.data_[i]);
    return out;
  }
  Matrix operator-() const {
    Matrix out = *this;
    for (auto& e : out.data_) e = field_.neg(e);
    return out;
  }
  Matrix scaled(Residue s) const {
    Matrix out = *this;
    for (auto& e : out.data_) e = field_.mul(e, s);
    return out;
  }
  /// this += s * o
  void axpy(Residue s, const Matrix& o) {
    check_same_shape(o);
    if (s == 0) return;
    for (std::size_t i = 0; i < data_.size(); ++i)
      data_[i] = field_.add(data_[i], field_.mul(s, o.data_[i]));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw ContractViolation("block out of range");
    Matrix b(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw ContractViolation("block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
  Matrix select_columns(const std::vector<std::size_t>& idx) const {
    Matrix out(field_, rows_, idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
      for (std::size_t i = 0; i < rows_; ++i) out(i, j) = (*this)(i, idx[j]);
    return out;
  }
  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix out(field_, idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(idx[i], j);
    return out;
  }

  /// Column-major flattening, used to treat a space of maps as vectors.
  std::vector<Residue> vectorize() const {
    std::vector<Residue> v(rows_ * cols_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t i = 0; i < rows_; ++i) v[j * rows_ + i] = (*this)(i, j);
    return v;
  }
  static Matrix unvectorize(PrimeField f, std::size_t rows, std::size_t cols,
                            std::span<const Residue> v) {
    if (v.size() != rows * cols) throw ContractViolation("unvectorize length mismatch");
    Matrix m(f, rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = v[j * rows + i];
    return m;
  }

  void check_field(const Matrix& o) const {
    if (!(field_ == o.field_)) throw ContractViolation("matrices over different fields");
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ContractViolation("matrix shape mismatch");
    check_field(o);
  }

  PrimeField field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Residue> data_;
};

inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw ContractViolation("hstack row mismatch");
  Matrix out(a.field(), a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw ContractViolation("vstack column mismatch");
  Matrix out(a.field(), a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

inline Matrix block_diagonal(const Matrix& a, const Matrix& b) {
  Matrix out(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), a.cols(), b);
  return out;
}

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
};

/// Reduced row echelon form. Pivot choice is the first nonzero entry scanning
/// columns left to right, rows top to bottom, so results are reproducible.
inline RrefResult rref(Matrix m) {
  const PrimeField f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    Residue inv = f.inv(m(r, c));
    if (inv != 1)
      for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), inv);
    auto prow = m.row(r);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      Residue factor = m(i, c);
      if (factor == 0) continue;
      auto irow = m.row(i);
      Residue nf = f.neg(factor);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (prow[j] != 0) irow[j] = f.add(irow[j], f.mul(nf, prow[j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots), r};
}

inline std::size_t rank(const Matrix& m) {
  if (m.empty()) return 0;
  // Eliminate along the shorter side.
  return m.rows() <= m.cols() ? rref(m).rank : rref(m.transpose()).rank;
}

/// Basis of the null space {v : m v = 0}, as column vectors.
inline std::vector<std::vector<Residue>> kernel_basis(const Matrix& m) {
  const PrimeField f = m.field();
  auto [red, pivots, rk] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Residue>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Residue> v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < rk; ++i) v[pivots[i]] = f.neg(red(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Kernel basis packed as the columns of a matrix (cols(m) x nullity).
inline Matrix kernel_matrix(const Matrix& m) {
  return Matrix::from_columns(m.field(), m.cols(), kernel_basis(m));
}

/// Some x with a x = b, or nullopt when the system is inconsistent.
inline std::optional<std::vector<Residue>> solve(const Matrix& a, std::span<const Residue> b) {
  if (a.rows() != b.size()) throw ContractViolation("solve: rows(a) != length(b)");
  const PrimeField f = a.field();
  Matrix aug(f, a.rows(), a.cols() + 1);
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < b.size(); ++i) aug(i, a.cols()) = b[i];
  auto [red, pivots, rk] = rref(std::move(aug));
  if (rk > 0 && pivots[rk - 1] == a.cols()) return std::nullopt;
  std::vector<Residue> x(a.cols(), 0);
  for (std::size_t i = 0; i < rk; ++i) x[pivots[i]] = red(i, a.cols());
  return x;
}

/// Solves a X = B column by column; nullopt when any column is inconsistent.
inline std::optional<Matrix> solve_matrix(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw ContractViolation("solve_matrix: row mismatch");
  const PrimeField f = a.field();
  Matrix aug = hstack(a, b);
  auto [red, pivots, rk] = rref(std::move(aug));
  for (std::size_t i = 0; i < rk; ++i)
    if (pivots[i] >= a.cols()) return std::nullopt;
  Matrix x(f, a.cols(), b.cols());
  for (std::size_t i = 0; i < rk; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(pivots[i], j) = red(i, a.cols() + j);
  return x;
}

/// Column-space basis of m, as the subset of pivot columns.
inline Matrix column_space(const Matrix& m) {
  if (m.cols() == 0) return Matrix(m.field(), m.rows(), 0);
  auto r = rref(m);
  return m.select_columns(r.pivots);
}

inline Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw ContractViolation("inverse of non-square matrix");
  auto x = solve_matrix(m, Matrix::identity(m.field(), m.rows()));
  if (!x) throw ContractViolation("matrix is singular");
  return *x;
}

/// Coordinates with respect to a basis of a subspace. The basis columns are
/// independent; coordinates are read off through an invertible row subset.
class SubspaceCoordinates {
 public:
  SubspaceCoordinates() = default;
  explicit SubspaceCoordinates(Matrix basis) : basis_(std::move(basis)) {
    const std::size_t k = basis_.cols();
    if (k == 0) return;
    auto r = rref(basis_.transpose());
    if (r.rank != k) throw ContractViolation("SubspaceCoordinates: dependent basis");
    rows_ = r.pivots;
    left_inverse_ = inverse(basis_.select_rows(rows_));
  }
  const Matrix& basis() const { return basis_; }
  std::size_t dim() const { return basis_.cols(); }

  /// Coordinates of v, assuming v lies in the subspace.
  std::vector<Residue> coordinates(std::span<const Residue> v) const {
    if (dim() == 0) return {};
    std::vector<Residue> sub(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) sub[i] = v[rows_[i]];
    return left_inverse_ * std::span<const Residue>(sub);
  }
  /// Coordinates of each column of m (all assumed in the subspace).
  Matrix coordinates(const Matrix& m) const {
    if (dim() == 0) return Matrix(basis_.field(), 0, m.cols());
    return left_inverse_ * m.select_rows(rows_);
  }
  bool contains(std::span<const Residue> v) const {
    auto c = coordinates(v);
    auto back = dim() == 0 ? std::vector<Residue>(basis_.rows(), 0)
                           : basis_ * std::span<const Residue>(c);
    return std::equal(back.begin(), back.end(), v.begin(), v.end());
  }

 private:
  Matrix basis_;
  std::vector<std::size_t> rows_;
  Matrix left_inverse_;
};

}  // namespace cotorsion
