#pragma once

// Finite-dimensional left modules as representations rho: A -> End(V), and
// the module maps between them.

#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <variant>

#include "cotorsion/algebra.hpp"

namespace cotorsion {

class ModuleInvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class AlgebraMismatch : public ContractViolation {
 public:
  AlgebraMismatch() : ContractViolation("modules live over different algebras") {}
};

namespace detail {

/// One step of a free resolution: generators of K_i inside the ambient space
/// (M itself for i = 0, the free module F_{i-1} otherwise), the cover
/// F_i = A^{rank} -> ambient, and a basis of its kernel K_{i+1} in F_i.
struct ResolutionStep {
  std::size_t rank = 0;
  Matrix generators;  // ambient_dim x rank
  Matrix cover;       // ambient_dim x (n * rank)
  Matrix kernel;      // (n * rank) x dim K_{i+1}
};

struct FreeResolutionData {
  std::vector<ResolutionStep> steps;
  Matrix section;  // (n * g_0) x dim M, a linear right inverse of steps[0].cover
  bool has_section = false;
};

}  // namespace detail

class ModuleRep;

namespace detail {

struct ModuleCache {
  std::mutex mutex;
  std::shared_ptr<const FreeResolutionData> resolution;  // replaced, never mutated
  std::shared_ptr<ModuleRep> dual;
  std::map<std::uint64_t, bool> membership;  // keyed by oracle id
  std::map<std::uint64_t, std::shared_ptr<const void>> derived;
};

/// rho(a) = sum_b a_b rho(e_b).
inline Matrix act_element(const std::vector<Matrix>& action, PrimeField f, std::size_t dim,
                          std::span<const Residue> a) {
  Matrix out(f, dim, dim);
  for (std::size_t b = 0; b < a.size(); ++b)
    if (a[b] != 0) out.axpy(a[b], action[b]);
  return out;
}

/// Applies left multiplication by e_b blockwise to vectors (columns) of A^g.
inline Matrix free_act(const Algebra& alg, std::size_t b, const Matrix& cols) {
  const std::size_t n = alg.dim();
  const std::size_t g = cols.rows() / n;
  Matrix out(alg.field(), cols.rows(), cols.cols());
  const Matrix& l = alg.left_mult(b);
  for (std::size_t blk = 0; blk < g; ++blk) out.set_block(blk * n, 0, l * cols.block(blk * n, 0, n, cols.cols()));
  return out;
}

}  // namespace detail

class ModuleRep {
 public:
  ModuleRep() = default;

  /// Validated construction: rho must be an algebra homomorphism with
  /// rho(1) = id.
  static ModuleRep make(AlgebraPtr alg, std::size_t dim, std::vector<Matrix> action) {
    ModuleRep m(std::move(alg), dim, std::move(action));
    m.check_invariants();
    return m;
  }

  static ModuleRep zero(AlgebraPtr alg) {
    std::vector<Matrix> action(alg->dim(), Matrix(alg->field(), 0, 0));
    return ModuleRep(std::move(alg), 0, std::move(action));
  }

  /// The regular module A acting on itself from the left.
  static ModuleRep regular(AlgebraPtr alg) { return free(std::move(alg), 1); }

  /// A^g with block-diagonal action.
  static ModuleRep free(AlgebraPtr alg, std::size_t g) {
    const std::size_t n = alg->dim();
    std::vector<Matrix> action;
    for (std::size_t b = 0; b < n; ++b) {
      Matrix m(alg->field(), n * g, n * g);
      for (std::size_t blk = 0; blk < g; ++blk) m.set_block(blk * n, blk * n, alg->left_mult(b));
      action.push_back(std::move(m));
    }
    return ModuleRep(std::move(alg), n * g, std::move(action));
  }

  const AlgebraPtr& algebra() const { return alg_; }
  const Algebra& alg() const { return *alg_; }
  const PrimeField& field() const { return alg_->field(); }
  std::size_t dim() const { return dim_; }
  const std::vector<Matrix>& action() const { return action_; }
  const Matrix& action(std::size_t b) const { return action_.at(b); }
  bool is_zero() const { return dim_ == 0; }

  Matrix act(std::span<const Residue> a) const { return detail::act_element(action_, field(), dim_, a); }

  bool same_algebra(const ModuleRep& o) const { return alg_->same_as(*o.alg_); }
  void require_same_algebra(const ModuleRep& o) const {
    if (!same_algebra(o)) throw AlgebraMismatch();
  }

  /// Cache shared by copies of this value; holds the lazily built free
  /// resolution. Results never depend on whether the cache is warm.
  detail::ModuleCache& cache() const { return *cache_; }

  /// The same module with a fresh cache. Cached data that mentions the module
  /// itself stores a detached copy, so the cache does not own itself.
  ModuleRep detached() const {
    ModuleRep c = *this;
    c.cache_ = std::make_shared<detail::ModuleCache>();
    return c;
  }
  bool shares_cache(const ModuleRep& o) const { return cache_ == o.cache_; }

  void check_invariants() const {
    const Algebra& a = *alg_;
    const std::size_t n = a.dim();
    if (action_.size() != n) throw ModuleInvariantViolation("action list length differs from algebra dimension");
    for (const auto& m : action_)
      if (m.rows() != dim_ || m.cols() != dim_ || !(m.field() == field()))
        throw ModuleInvariantViolation("action matrix has wrong shape");
    if (!(act(a.unit()) == Matrix::identity(field(), dim_)))
      throw ModuleInvariantViolation("rho(1) is not the identity");
    // Multiplicativity on generators times basis implies it everywhere.
    for (auto g : a.generators())
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<Residue> prod(a.structure_constants()[g][j]);
        if (!(action_[g] * action_[j] == act(prod)))
          throw ModuleInvariantViolation("rho(e_" + std::to_string(g) + ") rho(e_" + std::to_string(j) +
                                         ") != rho(e_" + std::to_string(g) + " e_" + std::to_string(j) + ")");
      }
  }

 private:
  ModuleRep(AlgebraPtr alg, std::size_t dim, std::vector<Matrix> action)
      : alg_(std::move(alg)), dim_(dim), action_(std::move(action)),
        cache_(std::make_shared<detail::ModuleCache>()) {}

  AlgebraPtr alg_;
  std::size_t dim_ = 0;
  std::vector<Matrix> action_;
  std::shared_ptr<detail::ModuleCache> cache_ = std::make_shared<detail::ModuleCache>();
};

class ModuleMap {
 public:
  ModuleMap() = default;

  /// Validated: the matrix must intertwine the two actions.
  ModuleMap(ModuleRep source, ModuleRep target, Matrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    source_.require_same_algebra(target_);
    if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
      throw ContractViolation("module map matrix has wrong shape");
    for (auto g : source_.alg().generators())
      if (!(matrix_ * source_.action(g) == target_.action(g) * matrix_))
        throw ModuleInvariantViolation("matrix does not intertwine the actions");
  }

  static ModuleMap zero(const ModuleRep& s, const ModuleRep& t) {
    return ModuleMap(s, t, Matrix(s.field(), t.dim(), s.dim()));
  }
  static ModuleMap identity(const ModuleRep& m) {
    return ModuleMap(m, m, Matrix::identity(m.field(), m.dim()));
  }

  const ModuleRep& source() const { return source_; }
  const ModuleRep& target() const { return target_; }
  const Matrix& matrix() const { return matrix_; }

  std::size_t rank() const { return cotorsion::rank(matrix_); }
  bool is_mono() const { return rank() == source_.dim(); }
  bool is_epi() const { return rank() == target_.dim(); }
  bool is_zero() const { return matrix_.is_zero(); }

  /// (*this) after `first`: first: X -> source, result X -> target.
  ModuleMap after(const ModuleMap& first) const {
    if (first.target_.dim() != source_.dim()) throw ContractViolation("maps are not composable");
    return ModuleMap(first.source_, target_, matrix_ * first.matrix_, Trusted{});
  }
  ModuleMap operator+(const ModuleMap& o) const {
    return ModuleMap(source_, target_, matrix_ + o.matrix_, Trusted{});
  }
  ModuleMap operator-(const ModuleMap& o) const {
    return ModuleMap(source_, target_, matrix_ - o.matrix_, Trusted{});
  }
  ModuleMap scaled(Residue s) const { return ModuleMap(source_, target_, matrix_.scaled(s), Trusted{}); }

  /// Construction without the intertwining check, for maps known to be
  /// module maps by construction (composites, sums, canonical maps).
  struct Trusted {};
  ModuleMap(ModuleRep source, ModuleRep target, Matrix matrix, Trusted)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {}

 private:
  ModuleRep source_;
  ModuleRep target_;
  Matrix matrix_;
};

/// 0 -> A --left--> B --right--> C -> 0
struct ShortExactSeq {
  ModuleMap left;
  ModuleMap right;

  const ModuleRep& first() const { return left.source(); }
  const ModuleRep& middle() const { return left.target(); }
  const ModuleRep& last() const { return right.target(); }

  /// Mono, epi, composite zero and dimension count (so image = kernel).
  bool is_exact() const {
    if (left.target().dim() != right.source().dim()) return false;
    if (!left.is_mono() || !right.is_epi()) return false;
    if (!right.after(left).is_zero()) return false;
    return middle().dim() == first().dim() + last().dim();
  }
};

/// The sequence with every occurrence of `from` (same cache) replaced by `to`.
inline ShortExactSeq swap_module(const ShortExactSeq& s, const ModuleRep& from, const ModuleRep& to) {
  auto pick = [&](const ModuleRep& m) -> const ModuleRep& { return m.shares_cache(from) ? to : m; };
  using T = ModuleMap::Trusted;
  return {ModuleMap(pick(s.left.source()), pick(s.left.target()), s.left.matrix(), T{}),
          ModuleMap(pick(s.right.source()), pick(s.right.target()), s.right.matrix(), T{})};
}

// ---------------------------------------------------------------------------
// Submodules generated by vectors, and generator selection.

namespace detail {

/// Column-space basis of the submodule generated by the columns of `vecs`.
template <class Act>
Matrix generated_span(const Algebra& alg, std::size_t ambient, const Matrix& vecs, Act&& act) {
  if (vecs.cols() == 0) return Matrix(alg.field(), ambient, 0);
  Matrix all(alg.field(), ambient, vecs.cols() * alg.dim());
  for (std::size_t b = 0; b < alg.dim(); ++b) all.set_block(0, b * vecs.cols(), act(b, vecs));
  return column_space(all);
}

/// Basis of I N for the submodule N spanned by `basis`, I the algebra's
/// nilpotent ideal.
template <class Act>
Matrix radical_span(const Algebra& alg, const Matrix& basis, Act&& act) {
  const PrimeField f = alg.field();
  const std::size_t ambient = basis.rows();
  const Matrix& ideal = alg.nilpotent_ideal();
  if (ideal.cols() == 0 || basis.cols() == 0) return Matrix(f, ambient, 0);
  std::vector<Matrix> acted(alg.dim());
  for (std::size_t b = 0; b < alg.dim(); ++b)
    for (std::size_t r = 0; r < ideal.cols(); ++r)
      if (ideal(b, r) != 0) {
        acted[b] = act(b, basis);
        break;
      }
  Matrix all(f, ambient, ideal.cols() * basis.cols());
  for (std::size_t r = 0; r < ideal.cols(); ++r) {
    Matrix img(f, ambient, basis.cols());
    for (std::size_t b = 0; b < alg.dim(); ++b)
      if (ideal(b, r) != 0) img.axpy(ideal(b, r), acted[b]);
    all.set_block(0, r * basis.cols(), img);
  }
  return column_space(all);
}

/// Generators of the submodule N spanned by `basis` (columns): basis vectors
/// lifting a basis of N / I N. Nakayama makes them generate; they are
/// minimal when I is the radical.
template <class Act>
Matrix choose_generators(const Algebra& alg, const Matrix& basis, Act&& act) {
  if (basis.cols() == 0) return Matrix(alg.field(), basis.rows(), 0);
  Matrix rad = radical_span(alg, basis, act);
  auto piv = rref(hstack(rad, basis)).pivots;
  std::vector<std::size_t> pick;
  for (auto c : piv)
    if (c >= rad.cols()) pick.push_back(c - rad.cols());
  return basis.select_columns(pick);
}

inline auto module_act(const ModuleRep& m) {
  return [&m](std::size_t b, const Matrix& v) { return m.action(b) * v; };
}
inline auto free_act_fn(const Algebra& alg) {
  return [&alg](std::size_t b, const Matrix& v) { return free_act(alg, b, v); };
}

/// The cover A^g -> ambient sending the j-th free generator to gens[:, j];
/// column (j, b) is e_b . gens_j.
template <class Act>
Matrix cover_matrix(const Algebra& alg, const Matrix& gens, Act&& act) {
  const std::size_t n = alg.dim();
  Matrix out(alg.field(), gens.rows(), n * gens.cols());
  for (std::size_t b = 0; b < n; ++b) {
    Matrix img = act(b, gens);
    for (std::size_t j = 0; j < gens.cols(); ++j)
      for (std::size_t i = 0; i < gens.rows(); ++i) out(i, j * n + b) = img(i, j);
  }
  return out;
}

/// Extends the cached free resolution of m to at least `length` steps.
inline std::shared_ptr<const FreeResolutionData> ensure_resolution(const ModuleRep& m, std::size_t length) {
  auto& cache = m.cache();
  std::lock_guard lock(cache.mutex);
  if (cache.resolution && cache.resolution->steps.size() >= length && cache.resolution->has_section)
    return cache.resolution;
  auto next = cache.resolution ? std::make_shared<FreeResolutionData>(*cache.resolution)
                               : std::make_shared<FreeResolutionData>();
  auto& res = *next;
  const Algebra& alg = m.alg();
  while (res.steps.size() < length) {
    ResolutionStep step;
    if (res.steps.empty()) {
      Matrix basis = Matrix::identity(m.field(), m.dim());
      step.generators = choose_generators(alg, basis, module_act(m));
      step.cover = cover_matrix(alg, step.generators, module_act(m));
    } else {
      const auto& prev = res.steps.back();
      step.generators = choose_generators(alg, prev.kernel, free_act_fn(alg));
      step.cover = cover_matrix(alg, step.generators, free_act_fn(alg));
    }
    step.rank = step.generators.cols();
    step.kernel = kernel_matrix(step.cover);
    res.steps.push_back(std::move(step));
  }
  if (!res.has_section && !res.steps.empty()) {
    auto s = solve_matrix(res.steps[0].cover, Matrix::identity(m.field(), m.dim()));
    if (!s) throw std::logic_error("internal: free cover is not surjective");
    res.section = std::move(*s);
    res.has_section = true;
  }
  cache.resolution = next;
  return next;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hom spaces.

namespace detail {

/// Block matrix of the map N^{g_i} -> N^{g_{i+1}}, phi -> phi o d, where the
/// columns of `rel` (in A^{g_i}) are the images of the generators of F_{i+1}.
inline Matrix relation_matrix(const ModuleRep& n_mod, const Matrix& rel) {
  const Algebra& alg = n_mod.alg();
  const std::size_t n = alg.dim();
  const std::size_t gi = rel.rows() / n;
  const std::size_t gnext = rel.cols();
  const std::size_t d = n_mod.dim();
  Matrix out(n_mod.field(), gnext * d, gi * d);
  std::vector<Residue> a(n);
  for (std::size_t l = 0; l < gnext; ++l)
    for (std::size_t j = 0; j < gi; ++j) {
      bool nonzero = false;
      for (std::size_t b = 0; b < n; ++b) {
        a[b] = rel(j * n + b, l);
        nonzero = nonzero || a[b] != 0;
      }
      if (nonzero) out.set_block(l * d, j * d, n_mod.act(a));
    }
  return out;
}

/// Phi: A^g -> N determined by generator images v (stacked, length g*dim N).
inline Matrix free_map_matrix(const ModuleRep& n_mod, std::span<const Residue> v, std::size_t g) {
  const std::size_t n = n_mod.alg().dim();
  const std::size_t d = n_mod.dim();
  Matrix gens(n_mod.field(), d, g);
  for (std::size_t j = 0; j < g; ++j)
    for (std::size_t i = 0; i < d; ++i) gens(i, j) = v[j * d + i];
  (void)n;
  return cover_matrix(n_mod.alg(), gens, module_act(n_mod));
}

}  // namespace detail

/// Basis of Hom_A(M, N), computed from a free presentation of M: a map is
/// fixed by the images of M's generators, subject to the relations.
inline std::vector<ModuleMap> hom_space(const ModuleRep& m, const ModuleRep& n_mod) {
  m.require_same_algebra(n_mod);
  if (m.dim() == 0 || n_mod.dim() == 0) return {};
  const auto res_ptr = detail::ensure_resolution(m, 2);
  const auto& res = *res_ptr;
  const auto& s0 = res.steps[0];
  const auto& s1 = res.steps[1];
  Matrix rel = detail::relation_matrix(n_mod, s1.generators);
  auto kernel = kernel_basis(rel);
  std::vector<ModuleMap> out;
  out.reserve(kernel.size());
  for (const auto& v : kernel) {
    Matrix phi = detail::free_map_matrix(n_mod, v, s0.rank) * res.section;
    out.emplace_back(m, n_mod, std::move(phi), ModuleMap::Trusted{});
  }
  return out;
}

/// Hom_A(M, N) by solving the intertwining equations X rho_M(g) = rho_N(g) X
/// directly. Independent of hom_space's presentation route.
inline std::vector<ModuleMap> hom_space_direct(const ModuleRep& m, const ModuleRep& n_mod) {
  m.require_same_algebra(n_mod);
  const std::size_t dm = m.dim(), dn = n_mod.dim();
  if (dm == 0 || dn == 0) return {};
  const auto& gens = m.alg().generators();
  const PrimeField f = m.field();
  // vec(X) column-major: index j*dn + i for X(i, j).
  Matrix eq(f, gens.size() * dn * dm, dn * dm);
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    const Matrix& rm = m.action(gens[gi]);
    const Matrix& rn = n_mod.action(gens[gi]);
    const std::size_t base = gi * dn * dm;
    // (X rm)(i, j) = sum_k X(i, k) rm(k, j);  (rn X)(i, j) = sum_k rn(i, k) X(k, j)
    for (std::size_t i = 0; i < dn; ++i)
      for (std::size_t j = 0; j < dm; ++j) {
        const std::size_t r = base + j * dn + i;
        for (std::size_t k = 0; k < dm; ++k)
          if (rm(k, j) != 0) eq(r, k * dn + i) = f.add(eq(r, k * dn + i), rm(k, j));
        for (std::size_t k = 0; k < dn; ++k)
          if (rn(i, k) != 0) eq(r, j * dn + k) = f.sub(eq(r, j * dn + k), rn(i, k));
      }
  }
  std::vector<ModuleMap> out;
  for (const auto& v : kernel_basis(eq))
    out.emplace_back(m, n_mod, Matrix::unvectorize(f, dn, dm, v), ModuleMap::Trusted{});
  return out;
}

/// Vectorized hom basis packed as the columns of one matrix.
inline Matrix stack_maps(const std::vector<ModuleMap>& maps, std::size_t rows, std::size_t cols,
                         PrimeField f) {
  Matrix out(f, rows * cols, maps.size());
  for (std::size_t c = 0; c < maps.size(); ++c) {
    auto v = maps[c].matrix().vectorize();
    for (std::size_t i = 0; i < v.size(); ++i) out(i, c) = v[i];
  }
  return out;
}

/// A hom space with coordinates: basis maps plus coordinate extraction.
class HomSpace {
 public:
  HomSpace(const ModuleRep& m, const ModuleRep& n)
      : source_(m), target_(n), basis_(hom_space(m, n)),
        coords_(stack_maps(basis_, n.dim(), m.dim(), m.field())) {}

  const ModuleRep& source() const { return source_; }
  const ModuleRep& target() const { return target_; }
  const std::vector<ModuleMap>& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }

  std::vector<Residue> coordinates(const ModuleMap& f) const {
    return coords_.coordinates(f.matrix().vectorize());
  }
  std::vector<Residue> coordinates(const Matrix& f) const { return coords_.coordinates(f.vectorize()); }

  ModuleMap combination(std::span<const Residue> c) const {
    Matrix acc(source_.field(), target_.dim(), source_.dim());
    for (std::size_t i = 0; i < c.size(); ++i) acc.axpy(c[i], basis_[i].matrix());
    return ModuleMap(source_, target_, std::move(acc), ModuleMap::Trusted{});
  }

  /// Columns: vectorized basis maps.
  const Matrix& vectorized() const { return coords_.basis(); }

 private:
  ModuleRep source_, target_;
  std::vector<ModuleMap> basis_;
  SubspaceCoordinates coords_;
};

// ---------------------------------------------------------------------------
// Kernels, images, cokernels, sums, pushouts, pullbacks.

namespace detail {

/// Module structure on the subspace spanned by the independent columns of
/// `basis`, which must be invariant under the action.
inline ModuleRep induced_submodule(const ModuleRep& m, const Matrix& basis) {
  if (basis.cols() == 0) return ModuleRep::zero(m.algebra());
  SubspaceCoordinates coords(basis);
  std::vector<Matrix> action;
  for (std::size_t b = 0; b < m.alg().dim(); ++b) action.push_back(coords.coordinates(m.action(b) * basis));
  return ModuleRep::make(m.algebra(), basis.cols(), std::move(action));
}

}  // namespace detail

struct SubobjectResult {
  ModuleRep module;
  ModuleMap inclusion;
};
struct QuotientResult {
  ModuleRep module;
  ModuleMap projection;
};

inline SubobjectResult kernel_of(const ModuleMap& f) {
  Matrix basis = kernel_matrix(f.matrix());
  ModuleRep k = detail::induced_submodule(f.source(), basis);
  return {k, ModuleMap(k, f.source(), basis, ModuleMap::Trusted{})};
}

inline SubobjectResult image_of(const ModuleMap& f) {
  Matrix basis = column_space(f.matrix());
  ModuleRep im = detail::induced_submodule(f.target(), basis);
  return {im, ModuleMap(im, f.target(), basis, ModuleMap::Trusted{})};
}

/// Quotient of m by the submodule spanned by the columns of `sub` (any
/// spanning set of an invariant subspace).
inline QuotientResult quotient_by(const ModuleRep& m, const Matrix& sub) {
  const PrimeField f = m.field();
  const std::size_t d = m.dim();
  Matrix w = sub.cols() == 0 ? Matrix(f, d, 0) : column_space(sub);
  Matrix ext = hstack(w, Matrix::identity(f, d));
  auto piv = rref(ext).pivots;
  std::vector<std::size_t> comp_idx;
  for (auto c : piv)
    if (c >= w.cols()) comp_idx.push_back(c);
  Matrix comp = ext.select_columns(comp_idx);
  const std::size_t q = comp.cols();
  Matrix full_inv = inverse(hstack(w, comp));
  Matrix proj = full_inv.block(w.cols(), 0, q, d);
  std::vector<Matrix> action;
  for (std::size_t b = 0; b < m.alg().dim(); ++b) action.push_back(proj * m.action(b) * comp);
  ModuleRep qm = q == 0 ? ModuleRep::zero(m.algebra()) : ModuleRep::make(m.algebra(), q, std::move(action));
  return {qm, ModuleMap(m, qm, proj, ModuleMap::Trusted{})};
}

inline QuotientResult cokernel_of(const ModuleMap& f) { return quotient_by(f.target(), f.matrix()); }

inline ModuleRep direct_sum(const ModuleRep& a, const ModuleRep& b) {
  a.require_same_algebra(b);
  std::vector<Matrix> action;
  for (std::size_t i = 0; i < a.alg().dim(); ++i) action.push_back(block_diagonal(a.action(i), b.action(i)));
  if (a.dim() + b.dim() == 0) return ModuleRep::zero(a.algebra());
  return ModuleRep::make(a.algebra(), a.dim() + b.dim(), std::move(action));
}

struct DirectSum {
  ModuleRep sum;
  ModuleMap in1, in2, pr1, pr2;
};

inline DirectSum direct_sum_with_maps(const ModuleRep& a, const ModuleRep& b) {
  ModuleRep s = direct_sum(a, b);
  const PrimeField f = a.field();
  Matrix i1(f, s.dim(), a.dim()), i2(f, s.dim(), b.dim());
  i1.set_block(0, 0, Matrix::identity(f, a.dim()));
  i2.set_block(a.dim(), 0, Matrix::identity(f, b.dim()));
  using T = ModuleMap::Trusted;
  return {s, ModuleMap(a, s, i1, T{}), ModuleMap(b, s, i2, T{}), ModuleMap(s, a, i1.transpose(), T{}),
          ModuleMap(s, b, i2.transpose(), T{})};
}

struct PushoutResult {
  ModuleRep module;
  ModuleMap from_first;   // target(f) -> Q
  ModuleMap from_second;  // target(g) -> Q
};

/// Pushout of f: K -> B and g: K -> C, Q = (B + C) / image(f, -g).
inline PushoutResult pushout(const ModuleMap& f, const ModuleMap& g) {
  if (f.source().dim() != g.source().dim()) throw ContractViolation("pushout: maps have different sources");
  const PrimeField fld = f.source().field();
  auto ds = direct_sum_with_maps(f.target(), g.target());
  Matrix h = vstack(f.matrix(), -g.matrix());
  auto q = quotient_by(ds.sum, h);
  using T = ModuleMap::Trusted;
  (void)fld;
  return {q.module, ModuleMap(f.target(), q.module, q.projection.matrix() * ds.in1.matrix(), T{}),
          ModuleMap(g.target(), q.module, q.projection.matrix() * ds.in2.matrix(), T{})};
}

struct PullbackResult {
  ModuleRep module;
  ModuleMap to_first;   // P -> source(f)
  ModuleMap to_second;  // P -> source(g)
};

/// Pullback of f: B -> L and g: C -> L, P = ker (f, -g).
inline PullbackResult pullback(const ModuleMap& f, const ModuleMap& g) {
  if (f.target().dim() != g.target().dim()) throw ContractViolation("pullback: maps have different targets");
  auto ds = direct_sum_with_maps(f.source(), g.source());
  Matrix h = hstack(f.matrix(), -g.matrix());
  ModuleMap hm(ds.sum, f.target(), h, ModuleMap::Trusted{});
  auto k = kernel_of(hm);
  using T = ModuleMap::Trusted;
  return {k.module, ModuleMap(k.module, f.source(), ds.pr1.matrix() * k.inclusion.matrix(), T{}),
          ModuleMap(k.module, g.source(), ds.pr2.matrix() * k.inclusion.matrix(), T{})};
}

/// k-dual D(M) = Hom_k(M, k) as a left module over the opposite algebra.
inline ModuleRep dual_module(const ModuleRep& m) {
  {
    std::lock_guard lock(m.cache().mutex);
    if (m.cache().dual) return *m.cache().dual;
  }
  AlgebraPtr op = m.alg().opposite();
  std::vector<Matrix> action;
  for (const auto& a : m.action()) action.push_back(a.transpose());
  ModuleRep d = m.dim() == 0 ? ModuleRep::zero(op) : ModuleRep::make(op, m.dim(), std::move(action));
  std::lock_guard lock(m.cache().mutex);
  if (!m.cache().dual) m.cache().dual = std::make_shared<ModuleRep>(d);
  return *m.cache().dual;
}

/// D(f): D(N) -> D(M). Callers pass the duals they already hold so the
/// cached data stays attached to them.
inline ModuleMap dual_map(const ModuleMap& f, const ModuleRep& d_target, const ModuleRep& d_source) {
  return ModuleMap(d_target, d_source, f.matrix().transpose(), ModuleMap::Trusted{});
}
inline ModuleMap dual_map(const ModuleMap& f) {
  return dual_map(f, dual_module(f.target()), dual_module(f.source()));
}

/// Smallest submodule of m containing the given vectors (columns), with its
/// inclusion.
inline std::pair<ModuleRep, ModuleMap> submodule_generated(const ModuleRep& m, const Matrix& vectors) {
  if (vectors.rows() != m.dim()) throw ContractViolation("submodule_generated: vectors do not lie in M");
  Matrix span = detail::generated_span(m.alg(), m.dim(), vectors, detail::module_act(m));
  ModuleRep sub = detail::induced_submodule(m, span);
  return {sub, ModuleMap(sub, m, span, ModuleMap::Trusted{})};
}

// ---------------------------------------------------------------------------
// Isomorphism testing.

enum class IsoVerdict { yes, no, unknown };

struct IsoResult {
  IsoVerdict verdict = IsoVerdict::unknown;
  std::optional<ModuleMap> certificate;  // invertible map M -> N when yes
  std::string witness;                   // distinguishing invariant when no
};

struct IsoOptions {
  std::vector<ModuleRep> test_modules;
  std::uint64_t seed = 0x5eed;
  std::size_t random_attempts = 64;
  std::uint64_t exhaustive_limit = 1u << 16;  // p^{dim Hom} bound for enumeration
};

inline IsoResult is_isomorphic(const ModuleRep& m, const ModuleRep& n, const IsoOptions& opt = {}) {
  m.require_same_algebra(n);
  if (m.dim() != n.dim())
    return {IsoVerdict::no, std::nullopt,
            "dimension " + std::to_string(m.dim()) + " vs " + std::to_string(n.dim())};
  if (m.dim() == 0) return {IsoVerdict::yes, ModuleMap::zero(m, n), ""};
  for (std::size_t t = 0; t < opt.test_modules.size(); ++t) {
    const auto& tm = opt.test_modules[t];
    auto a = hom_space(tm, m).size(), b = hom_space(tm, n).size();
    if (a != b)
      return {IsoVerdict::no, std::nullopt,
              "dim Hom(T" + std::to_string(t) + ", -): " + std::to_string(a) + " vs " + std::to_string(b)};
    a = hom_space(m, tm).size();
    b = hom_space(n, tm).size();
    if (a != b)
      return {IsoVerdict::no, std::nullopt,
              "dim Hom(-, T" + std::to_string(t) + "): " + std::to_string(a) + " vs " + std::to_string(b)};
  }
  HomSpace hom(m, n);
  const auto end_m = hom_space(m, m).size();
  const auto end_n = hom_space(n, n).size();
  if (end_m != end_n)
    return {IsoVerdict::no, std::nullopt,
            "dim End: " + std::to_string(end_m) + " vs " + std::to_string(end_n)};
  if (hom.dim() != end_m)
    return {IsoVerdict::no, std::nullopt,
            "dim Hom(M, N) = " + std::to_string(hom.dim()) + " differs from dim End(M) = " + std::to_string(end_m)};
  const std::size_t d = m.dim();
  const Residue p = m.field().p;
  auto try_coeffs = [&](const std::vector<Residue>& c) -> std::optional<ModuleMap> {
    auto f = hom.combination(c);
    if (rank(f.matrix()) == d) return f;
    return std::nullopt;
  };
  std::mt19937_64 rng(opt.seed);
  std::vector<Residue> c(hom.dim());
  for (std::size_t attempt = 0; attempt < opt.random_attempts; ++attempt) {
    for (auto& x : c) x = static_cast<Residue>(rng() % p);
    if (auto f = try_coeffs(c)) return {IsoVerdict::yes, *f, ""};
  }
  // Exhaustive enumeration when p^{dim Hom} is within the limit.
  long double total = 1;
  for (std::size_t i = 0; i < hom.dim(); ++i) total *= p;
  if (total <= static_cast<long double>(opt.exhaustive_limit)) {
    std::fill(c.begin(), c.end(), 0);
    while (true) {
      if (auto f = try_coeffs(c)) return {IsoVerdict::yes, *f, ""};
      std::size_t i = 0;
      while (i < c.size() && ++c[i] == p) c[i++] = 0;
      if (i == c.size()) break;
    }
    return {IsoVerdict::no, std::nullopt, "no invertible element in Hom(M, N) (exhaustive)"};
  }
  return {IsoVerdict::unknown, std::nullopt, "search budget exhausted"};
}

}  // namespace cotorsion

namespace cotorsion {

/// beta with g o beta = alpha (beta: M -> Y, g: Y -> L, alpha: M -> L).
inline std::optional<ModuleMap> factor_through_post(const ModuleMap& g, const ModuleMap& alpha) {
  const ModuleRep& m = alpha.source();
  const ModuleRep& y = g.source();
  if (alpha.target().dim() != g.target().dim()) throw ContractViolation("factor_through_post: shape mismatch");
  if (alpha.is_zero()) return ModuleMap::zero(m, y);
  auto basis = hom_space(m, y);
  std::vector<ModuleMap> imgs;
  for (const auto& b : basis) imgs.push_back(g.after(b));
  Matrix sys = stack_maps(imgs, g.target().dim(), m.dim(), m.field());
  auto x = solve(sys, alpha.matrix().vectorize());
  if (!x) return std::nullopt;
  Matrix acc(m.field(), y.dim(), m.dim());
  for (std::size_t i = 0; i < basis.size(); ++i) acc.axpy((*x)[i], basis[i].matrix());
  return ModuleMap(m, y, std::move(acc), ModuleMap::Trusted{});
}

/// beta with beta o k = alpha (k: K -> X, alpha: K -> M, beta: X -> M).
inline std::optional<ModuleMap> factor_through_pre(const ModuleMap& k, const ModuleMap& alpha) {
  const ModuleRep& x = k.target();
  const ModuleRep& m = alpha.target();
  if (alpha.source().dim() != k.source().dim()) throw ContractViolation("factor_through_pre: shape mismatch");
  if (alpha.is_zero()) return ModuleMap::zero(x, m);
  auto basis = hom_space(x, m);
  std::vector<ModuleMap> imgs;
  for (const auto& b : basis) imgs.push_back(b.after(k));
  Matrix sys = stack_maps(imgs, m.dim(), k.source().dim(), m.field());
  auto sol = solve(sys, alpha.matrix().vectorize());
  if (!sol) return std::nullopt;
  Matrix acc(m.field(), m.dim(), x.dim());
  for (std::size_t i = 0; i < basis.size(); ++i) acc.axpy((*sol)[i], basis[i].matrix());
  return ModuleMap(x, m, std::move(acc), ModuleMap::Trusted{});
}

/// The map Q -> T out of a pushout determined by b: B -> T and c: C -> T
/// (which must agree on K).
inline ModuleMap pushout_induced(const PushoutResult& po, const ModuleMap& b, const ModuleMap& c) {
  Matrix legs = hstack(po.from_first.matrix(), po.from_second.matrix());
  Matrix rhs = hstack(b.matrix(), c.matrix());
  auto q = solve_matrix(legs.transpose(), rhs.transpose());
  if (!q) throw ContractViolation("pushout_induced: maps do not agree on the common source");
  ModuleMap out(po.module, b.target(), q->transpose(), ModuleMap::Trusted{});
  if (!(out.after(po.from_first).matrix() == b.matrix()) || !(out.after(po.from_second).matrix() == c.matrix()))
    throw ContractViolation("pushout_induced: maps do not agree on the common source");
  return out;
}

/// The map T -> P into a pullback determined by b: T -> B and c: T -> C.
inline ModuleMap pullback_induced(const PullbackResult& pb, const ModuleMap& b, const ModuleMap& c) {
  Matrix legs = vstack(pb.to_first.matrix(), pb.to_second.matrix());
  Matrix rhs = vstack(b.matrix(), c.matrix());
  auto q = solve_matrix(legs, rhs);
  if (!q) throw ContractViolation("pullback_induced: maps do not agree on the common target");
  return ModuleMap(b.source(), pb.module, std::move(*q), ModuleMap::Trusted{});
}

/// Dimension of the subspace of Hom(M, N) spanned by the given maps.
inline std::size_t span_dim(const std::vector<ModuleMap>& maps, std::size_t rows, std::size_t cols,
                            PrimeField f) {
  if (maps.empty()) return 0;
  return rank(stack_maps(maps, rows, cols, f));
}

}  // namespace cotorsion
