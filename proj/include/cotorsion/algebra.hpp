#pragma once

// Finite-dimensional associative unital algebras given by structure constants.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cotorsion/linalg.hpp"

namespace cotorsion {

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AssociativityViolation : public AlgebraError {
 public:
  AssociativityViolation(std::size_t i, std::size_t j, std::size_t k, std::size_t l)
      : AlgebraError(describe(i, j, k, l)), i(i), j(j), k(k), l(l) {}
  std::size_t i, j, k, l;

 private:
  static std::string describe(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    std::ostringstream os;
    os << "associativity fails: coefficient of e_" << l << " in (e_" << i << " e_" << j
       << ") e_" << k << " differs from e_" << i << " (e_" << j << " e_" << k << ")";
    return os.str();
  }
};

class UnitViolation : public AlgebraError {
 public:
  explicit UnitViolation(std::size_t i)
      : AlgebraError("unit law fails on basis element e_" + std::to_string(i)), i(i) {}
  std::size_t i;
};

class UnsupportedQuiver : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

/// Structure constants: e_i e_j = sum_k mul[i][j][k] e_k.
using StructureConstants = std::vector<std::vector<std::vector<Residue>>>;

class Algebra : public std::enable_shared_from_this<Algebra> {
 public:
  struct Private {};  // restricts construction to check_algebra

  Algebra(Private, PrimeField field, std::vector<std::string> names, StructureConstants mul,
          std::vector<Residue> unit)
      : field_(field), names_(std::move(names)), mul_(std::move(mul)), unit_(std::move(unit)) {
    const std::size_t n = dim();
    left_.reserve(n);
    right_.reserve(n);
    for (std::size_t a = 0; a < n; ++a) {
      Matrix l(field_, n, n), r(field_, n, n);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          l(k, j) = mul_[a][j][k];  // e_a * e_j
          r(k, j) = mul_[j][a][k];  // e_j * e_a
        }
      left_.push_back(std::move(l));
      right_.push_back(std::move(r));
    }
  }

  std::size_t dim() const { return names_.size(); }
  const PrimeField& field() const { return field_; }
  Residue characteristic() const { return field_.p; }
  const std::vector<std::string>& basis_names() const { return names_; }
  const StructureConstants& structure_constants() const { return mul_; }
  const std::vector<Residue>& unit() const { return unit_; }

  /// Matrix of left multiplication by e_a on the regular module.
  const Matrix& left_mult(std::size_t a) const { return left_.at(a); }
  /// Matrix of right multiplication by e_a.
  const Matrix& right_mult(std::size_t a) const { return right_.at(a); }

  std::vector<Residue> multiply(std::span<const Residue> x, std::span<const Residue> y) const {
    const std::size_t n = dim();
    std::vector<Residue> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j] == 0) continue;
        Residue c = field_.mul(x[i], y[j]);
        for (std::size_t k = 0; k < n; ++k)
          if (mul_[i][j][k] != 0) out[k] = field_.add(out[k], field_.mul(c, mul_[i][j][k]));
      }
    }
    return out;
  }

  /// Same algebra: identical pointer or identical structure.
  bool same_as(const Algebra& o) const {
    return this == &o || (field_ == o.field_ && mul_ == o.mul_ && unit_ == o.unit_);
  }

  /// The opposite algebra, e_i * e_j := e_j e_i. opposite()->opposite() is this.
  std::shared_ptr<const Algebra> opposite() const;

  /// A small set of basis indices whose generated subalgebra is everything.
  const std::vector<std::size_t>& generators() const;

  /// Basis (columns) of a nilpotent two-sided ideal I, grown greedily from
  /// basis elements. For basic algebras given on a path-like basis this is
  /// the Jacobson radical; I = 0 is always a valid answer.
  const Matrix& nilpotent_ideal() const;
  /// True when A / nilpotent_ideal() is separable, i.e. the ideal is the
  /// Jacobson radical (finite fields are perfect).
  bool nilpotent_ideal_is_radical() const {
    nilpotent_ideal();
    return ideal_is_radical_;
  }

 private:
  PrimeField field_;
  std::vector<std::string> names_;
  StructureConstants mul_;
  std::vector<Residue> unit_;
  std::vector<Matrix> left_, right_;

  mutable std::mutex lazy_mutex_;
  mutable std::shared_ptr<const Algebra> opposite_strong_;
  mutable std::weak_ptr<const Algebra> opposite_weak_;
  mutable std::vector<std::size_t> generators_;
  mutable bool generators_ready_ = false;
  mutable std::optional<Matrix> nil_ideal_;
  mutable bool ideal_is_radical_ = false;

  bool quotient_is_separable(const Matrix& ideal) const;

  friend std::shared_ptr<const Algebra> make_opposite_pair(const Algebra&);
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Validates the raw table and returns an algebra. Associativity and the unit
/// laws are checked exhaustively.
inline AlgebraPtr check_algebra(PrimeField field, std::vector<std::string> names,
                                const std::vector<std::vector<std::vector<long long>>>& raw,
                                const std::vector<long long>& raw_unit) {
  if (!is_prime(field.p) || field.p >= 65536)
    throw AlgebraError("characteristic must be a prime below 65536, got " + std::to_string(field.p));
  const std::size_t n = raw.size();
  if (names.empty()) {
    for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  }
  if (names.size() != n) throw AlgebraError("basis name count does not match dimension");
  if (raw_unit.size() != n) throw AlgebraError("unit vector has wrong length");
  StructureConstants mul(n, std::vector<std::vector<Residue>>(n, std::vector<Residue>(n)));
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i].size() != n) throw AlgebraError("structure constants are not a cubic table");
    for (std::size_t j = 0; j < n; ++j) {
      if (raw[i][j].size() != n) throw AlgebraError("structure constants are not a cubic table");
      for (std::size_t k = 0; k < n; ++k) mul[i][j][k] = field.reduce(raw[i][j][k]);
    }
  }
  std::vector<Residue> unit(n);
  for (std::size_t i = 0; i < n; ++i) unit[i] = field.reduce(raw_unit[i]);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          Residue lhs = 0, rhs = 0;
          for (std::size_t m = 0; m < n; ++m) {
            lhs = field.add(lhs, field.mul(mul[i][j][m], mul[m][k][l]));
            rhs = field.add(rhs, field.mul(mul[j][k][m], mul[i][m][l]));
          }
          if (lhs != rhs) throw AssociativityViolation(i, j, k, l);
        }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      Residue left = 0, right = 0;
      for (std::size_t u = 0; u < n; ++u) {
        left = field.add(left, field.mul(unit[u], mul[u][i][k]));
        right = field.add(right, field.mul(unit[u], mul[i][u][k]));
      }
      Residue expect = (i == k) ? 1 : 0;
      if (left != expect || right != expect) throw UnitViolation(i);
    }
  }
  return std::make_shared<const Algebra>(Algebra::Private{}, field, std::move(names), std::move(mul),
                                         std::move(unit));
}

inline std::shared_ptr<const Algebra> make_opposite_pair(const Algebra& a) {
  const std::size_t n = a.dim();
  StructureConstants op(n, std::vector<std::vector<Residue>>(n, std::vector<Residue>(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) op[i][j] = a.mul_[j][i];
  std::vector<std::string> names;
  for (const auto& s : a.names_) names.push_back(s);
  return std::make_shared<const Algebra>(Algebra::Private{}, a.field_, std::move(names),
                                         std::move(op), a.unit_);
}

inline std::shared_ptr<const Algebra> Algebra::opposite() const {
  std::lock_guard lock(lazy_mutex_);
  if (auto w = opposite_weak_.lock()) return w;
  if (opposite_strong_) return opposite_strong_;
  auto op = make_opposite_pair(*this);
  // The opposite keeps a weak back-link, so op->opposite() returns this
  // object without a reference cycle.
  {
    std::lock_guard lock2(op->lazy_mutex_);
    op->opposite_weak_ = weak_from_this();
  }
  opposite_strong_ = op;
  return op;
}

inline const std::vector<std::size_t>& Algebra::generators() const {
  std::lock_guard lock(lazy_mutex_);
  if (generators_ready_) return generators_;
  const std::size_t n = dim();
  // Span of products of chosen generators (and the unit), closed under
  // multiplication by iterating to a fixed point.
  auto closure = [&](const std::vector<std::size_t>& gens) {
    std::vector<std::vector<Residue>> span{unit_};
    for (auto g : gens) {
      std::vector<Residue> e(n, 0);
      e[g] = 1;
      span.push_back(e);
    }
    std::size_t prev = 0;
    Matrix basis = column_space(Matrix::from_columns(field_, n, span));
    while (basis.cols() != prev) {
      prev = basis.cols();
      std::vector<std::vector<Residue>> cols;
      for (std::size_t c = 0; c < basis.cols(); ++c) cols.push_back(basis.column(c));
      for (std::size_t c = 0; c < basis.cols(); ++c)
        for (auto g : gens) cols.push_back(left_[g] * std::span<const Residue>(cols[c]));
      basis = column_space(Matrix::from_columns(field_, n, cols));
    }
    return basis;
  };
  std::vector<std::size_t> gens;
  Matrix span = closure(gens);
  for (std::size_t i = 0; i < n && span.cols() < n; ++i) {
    std::vector<Residue> e(n, 0);
    e[i] = 1;
    if (SubspaceCoordinates(span).contains(e)) continue;
    gens.push_back(i);
    span = closure(gens);
  }
  generators_ = gens;
  generators_ready_ = true;
  return generators_;
}

inline const Matrix& Algebra::nilpotent_ideal() const {
  std::lock_guard lock(lazy_mutex_);
  if (nil_ideal_) return *nil_ideal_;
  const std::size_t n = dim();
  auto closure = [&](Matrix basis) {
    std::size_t prev = static_cast<std::size_t>(-1);
    while (basis.cols() != prev) {
      prev = basis.cols();
      Matrix all = basis;
      for (std::size_t b = 0; b < n; ++b) all = hstack(all, hstack(left_[b] * basis, right_[b] * basis));
      basis = column_space(all);
    }
    return basis;
  };
  auto nilpotent = [&](const Matrix& ideal) {
    Matrix power = ideal;
    for (std::size_t step = 0; step <= n && power.cols() > 0; ++step) {
      std::vector<std::vector<Residue>> prods;
      for (std::size_t i = 0; i < power.cols(); ++i) {
        auto x = power.column(i);
        for (std::size_t j = 0; j < ideal.cols(); ++j) prods.push_back(multiply(x, ideal.column(j)));
      }
      Matrix next = column_space(Matrix::from_columns(field_, n, prods));
      if (next.cols() >= power.cols()) return false;
      power = std::move(next);
    }
    return power.cols() == 0;
  };
  Matrix ideal(field_, n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Residue> e(n, 0);
    e[i] = 1;
    if (ideal.cols() > 0 && SubspaceCoordinates(ideal).contains(e)) continue;
    Matrix cand = closure(hstack(ideal, Matrix::from_columns(field_, n, {e})));
    if (nilpotent(cand)) ideal = std::move(cand);
  }
  ideal_is_radical_ = quotient_is_separable(ideal);
  nil_ideal_ = std::move(ideal);
  return *nil_ideal_;
}

// B = A / I is separable iff some e in B (x) B has mu(e) = 1 and b e = e b
// for every b.
inline bool Algebra::quotient_is_separable(const Matrix& ideal) const {
  const std::size_t n = dim();
  auto piv = rref(hstack(ideal, Matrix::identity(field_, n))).pivots;
  std::vector<std::size_t> comp;
  for (auto c : piv)
    if (c >= ideal.cols()) comp.push_back(c - ideal.cols());
  const std::size_t m = comp.size();
  if (m == 0) return true;
  Matrix full = hstack(ideal, Matrix::identity(field_, n).select_columns(comp));
  Matrix to_coords = inverse(full);
  auto project = [&](std::span<const Residue> v) {
    auto c = to_coords * v;
    return std::vector<Residue>(c.begin() + static_cast<std::ptrdiff_t>(ideal.cols()), c.end());
  };
  std::vector<std::vector<std::vector<Residue>>> prod(m, std::vector<std::vector<Residue>>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) prod[i][j] = project(mul_[comp[i]][comp[j]]);
  // Unknown e_{ij} at index i*m + j; rows: m equations for mu(e) = 1, then
  // m^3 equations for b_c e - e b_c = 0 with coordinates (c, r, s).
  Matrix sys(field_, m + m * m * m, m * m);
  std::vector<Residue> rhs(sys.rows(), 0);
  auto one = project(unit_);
  for (std::size_t k = 0; k < m; ++k) rhs[k] = one[k];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t u = i * m + j;
      for (std::size_t k = 0; k < m; ++k) sys(k, u) = field_.add(sys(k, u), prod[i][j][k]);
      for (std::size_t c = 0; c < m; ++c) {
        const std::size_t base = m + c * m * m;
        // b_c (x_i (x) y_j) = (b_c x_i) (x) y_j
        for (std::size_t r = 0; r < m; ++r)
          if (prod[c][i][r] != 0) sys(base + r * m + j, u) = field_.add(sys(base + r * m + j, u), prod[c][i][r]);
        // (x_i (x) y_j) b_c = x_i (x) (y_j b_c)
        for (std::size_t t = 0; t < m; ++t)
          if (prod[j][c][t] != 0) sys(base + i * m + t, u) = field_.sub(sys(base + i * m + t, u), prod[j][c][t]);
      }
    }
  return solve(sys, rhs).has_value();
}

/// k[x]/(x^n) with basis 1, x, ..., x^{n-1}.
inline AlgebraPtr truncated_poly(Residue p, std::size_t n) {
  if (n < 1) throw AlgebraError("truncated_poly needs n >= 1");
  std::vector<std::vector<std::vector<long long>>> mul(
      n, std::vector<std::vector<long long>>(n, std::vector<long long>(n, 0)));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(i == 0 ? "1" : (i == 1 ? "x" : "x^" + std::to_string(i)));
    for (std::size_t j = 0; j < n; ++j)
      if (i + j < n) mul[i][j][i + j] = 1;
  }
  std::vector<long long> unit(n, 0);
  unit[0] = 1;
  return check_algebra(PrimeField{p}, names, mul, unit);
}

struct Arrow {
  std::size_t source;
  std::size_t target;
  std::string name;
};

/// Path algebra of an acyclic quiver without relations. Basis: all paths,
/// trivial ones first. Product q*r is "r then q" (composition order), so the
/// arrow a: i -> j satisfies a = e_j a e_i and A e_i is the projective at i.
inline AlgebraPtr path_algebra_acyclic(std::size_t vertices, const std::vector<Arrow>& arrows,
                                       Residue p) {
  for (const auto& a : arrows)
    if (a.source >= vertices || a.target >= vertices)
      throw AlgebraError("arrow endpoint out of range");
  // Paths stored as arrow index sequences in travel order.
  struct Path {
    std::size_t start, end;
    std::vector<std::size_t> arrows;
  };
  std::vector<Path> paths;
  for (std::size_t v = 0; v < vertices; ++v) paths.push_back({v, v, {}});
  std::vector<Path> frontier;
  for (std::size_t a = 0; a < arrows.size(); ++a)
    frontier.push_back({arrows[a].source, arrows[a].target, {a}});
  const std::size_t max_len = vertices + 1;
  while (!frontier.empty()) {
    std::vector<Path> next;
    for (auto& pth : frontier) {
      if (pth.arrows.size() > max_len)
        throw UnsupportedQuiver("quiver has an oriented cycle; path algebra is infinite-dimensional");
      for (std::size_t a = 0; a < arrows.size(); ++a)
        if (arrows[a].source == pth.end) {
          Path q = pth;
          q.arrows.push_back(a);
          q.end = arrows[a].target;
          next.push_back(std::move(q));
        }
      paths.push_back(std::move(pth));
    }
    frontier = std::move(next);
  }
  const std::size_t n = paths.size();
  std::vector<std::string> names;
  for (const auto& pth : paths) {
    if (pth.arrows.empty()) {
      names.push_back("e" + std::to_string(pth.start + 1));
    } else {
      std::string s;
      for (auto it = pth.arrows.rbegin(); it != pth.arrows.rend(); ++it) {
        if (!s.empty()) s += "*";
        s += arrows[*it].name;
      }
      names.push_back(s);
    }
  }
  auto find = [&](const Path& q) -> std::size_t {
    for (std::size_t i = 0; i < n; ++i)
      if (paths[i].start == q.start && paths[i].end == q.end && paths[i].arrows == q.arrows) return i;
    throw AlgebraError("internal: path not found");
  };
  std::vector<std::vector<std::vector<long long>>> mul(
      n, std::vector<std::vector<long long>>(n, std::vector<long long>(n, 0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // e_i * e_j = path j followed by path i
      const Path& first = paths[j];
      const Path& second = paths[i];
      if (first.end != second.start) continue;
      Path q{first.start, second.end, first.arrows};
      q.arrows.insert(q.arrows.end(), second.arrows.begin(), second.arrows.end());
      mul[i][j][find(q)] = 1;
    }
  std::vector<long long> unit(n, 0);
  for (std::size_t v = 0; v < vertices; ++v) unit[v] = 1;
  return check_algebra(PrimeField{p}, names, mul, unit);
}

/// Upper triangular 2x2 matrices over R. Basis order: E11 (x) r, E12 (x) r,
/// E22 (x) r for each basis element r of R.
inline AlgebraPtr triangular2(const Algebra& r) {
  const std::size_t m = r.dim();
  const std::size_t n = 3 * m;
  const auto& c = r.structure_constants();
  // positions: 0 = (1,1), 1 = (1,2), 2 = (2,2)
  const std::size_t row_of[3] = {0, 0, 1};
  const std::size_t col_of[3] = {0, 1, 1};
  auto pos = [](std::size_t a, std::size_t b) -> int {
    if (a == 0 && b == 0) return 0;
    if (a == 0 && b == 1) return 1;
    if (a == 1 && b == 1) return 2;
    return -1;
  };
  std::vector<std::vector<std::vector<long long>>> mul(
      n, std::vector<std::vector<long long>>(n, std::vector<long long>(n, 0)));
  std::vector<std::string> names;
  const char* tags[3] = {"E11", "E12", "E22"};
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t a = 0; a < m; ++a) names.push_back(std::string(tags[s]) + "." + r.basis_names()[a]);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t t = 0; t < 3; ++t) {
      if (col_of[s] != row_of[t]) continue;
      int u = pos(row_of[s], col_of[t]);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          for (std::size_t k = 0; k < m; ++k)
            mul[s * m + a][t * m + b][static_cast<std::size_t>(u) * m + k] = c[a][b][k];
    }
  std::vector<long long> unit(n, 0);
  for (std::size_t a = 0; a < m; ++a) {
    unit[a] = r.unit()[a];
    unit[2 * m + a] = r.unit()[a];
  }
  return check_algebra(r.field(), names, mul, unit);
}

}  // namespace cotorsion
