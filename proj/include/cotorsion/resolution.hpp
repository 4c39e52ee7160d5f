#pragma once

// Free covers, syzygies, free resolutions and injective coresolutions (the
// latter always by duality), absolute Ext, projective/injective dimension.

#include "cotorsion/module.hpp"

namespace cotorsion {

/// A count found within a search bound, or the distinguished ExceedsBound.
struct BoundedDim {
  std::optional<std::size_t> value;
  std::size_t bound = 0;

  static BoundedDim exactly(std::size_t v, std::size_t bound) { return {v, bound}; }
  static BoundedDim exceeds(std::size_t bound) { return {std::nullopt, bound}; }
  bool exceeds_bound() const { return !value.has_value(); }
  bool at_most(std::size_t n) const { return value && *value <= n; }

  std::string str() const {
    return value ? std::to_string(*value) : "ExceedsBound(" + std::to_string(bound) + ")";
  }
  /// Comparison ignores the bound: two ExceedsBound values are equal.
  friend bool operator==(const BoundedDim& a, const BoundedDim& b) { return a.value == b.value; }
};

/// max over a family; ExceedsBound dominates.
inline BoundedDim sup(const std::vector<BoundedDim>& dims, std::size_t bound) {
  std::size_t best = 0;
  for (const auto& d : dims) {
    if (d.exceeds_bound()) return BoundedDim::exceeds(bound);
    best = std::max(best, *d.value);
  }
  return BoundedDim::exactly(best, bound);
}

enum class ResolutionFlavor { free, injective_co, proper_x, proper_y };

inline const char* to_string(ResolutionFlavor f) {
  switch (f) {
    case ResolutionFlavor::free: return "free";
    case ResolutionFlavor::injective_co: return "injective-co";
    case ResolutionFlavor::proper_x: return "proper-X";
    case ResolutionFlavor::proper_y: return "proper-Y";
  }
  return "?";
}

/// A chain of short exact sequences.
///   resolutions:   steps[i] = 0 -> K_{i+1} -> X_i -> K_i -> 0,  K_0 = target
///   coresolutions: steps[i] = 0 -> L^i -> Y^i -> L^{i+1} -> 0,  L^0 = target
struct Resolution {
  ModuleRep target;
  std::vector<ShortExactSeq> steps;
  ResolutionFlavor flavor = ResolutionFlavor::free;

  bool is_coresolution() const {
    return flavor == ResolutionFlavor::injective_co || flavor == ResolutionFlavor::proper_y;
  }
  std::size_t length() const { return steps.size(); }
  const ModuleRep& term(std::size_t i) const { return steps.at(i).middle(); }

  /// K_i (resolution) or L^i (coresolution); i may equal length().
  const ModuleRep& syzygy(std::size_t i) const {
    if (i == 0) return target;
    return is_coresolution() ? steps.at(i - 1).last() : steps.at(i - 1).first();
  }

  /// Resolution: X_{i+1} -> X_i. Coresolution: Y^i -> Y^{i+1}.
  ModuleMap differential(std::size_t i) const {
    if (is_coresolution()) return steps.at(i + 1).left.after(steps.at(i).right);
    return steps.at(i).left.after(steps.at(i + 1).right);
  }

  /// Each step exact and consecutive steps splice.
  bool is_valid() const {
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (!steps[i].is_exact()) return false;
      const ModuleRep& joined = is_coresolution() ? steps[i].first() : steps[i].last();
      const ModuleRep& prev = syzygy(i);
      if (joined.dim() != prev.dim()) return false;
    }
    return true;
  }
};

namespace detail {

inline ModuleRep syzygy_module(const ModuleRep& m, const FreeResolutionData& res, std::size_t i) {
  if (i == 0) return m;
  const auto& step = res.steps.at(i - 1);
  ModuleRep ambient = ModuleRep::free(m.algebra(), step.rank);
  return induced_submodule(ambient, step.kernel);
}

}  // namespace detail

/// 0 -> K -> F -> M -> 0 with F free on a small generating set of M.
inline ShortExactSeq free_cover(const ModuleRep& m) {
  const auto res_ptr = detail::ensure_resolution(m, 1);
  const auto& res = *res_ptr;
  const auto& s = res.steps[0];
  ModuleRep f = ModuleRep::free(m.algebra(), s.rank);
  ModuleMap epi(f, m, s.cover, ModuleMap::Trusted{});
  auto k = kernel_of(epi);
  return {k.inclusion, epi};
}

/// Free resolution of m with `length` steps; K_i are the syzygies.
inline Resolution free_resolution(const ModuleRep& m, std::size_t length) {
  const auto res_ptr = detail::ensure_resolution(m, length);
  const auto& res = *res_ptr;
  Resolution out{m, {}, ResolutionFlavor::free};
  ModuleRep prev = m;
  for (std::size_t i = 0; i < length; ++i) {
    const auto& s = res.steps[i];
    ModuleRep f = ModuleRep::free(m.algebra(), s.rank);
    ModuleRep k = detail::induced_submodule(f, s.kernel);
    // The cover lands in the ambient F_{i-1}; rewrite it in K_i's basis.
    Matrix cover = i == 0 ? s.cover : SubspaceCoordinates(res.steps[i - 1].kernel).coordinates(s.cover);
    ModuleMap epi(f, prev, std::move(cover), ModuleMap::Trusted{});
    ModuleMap inc(k, f, s.kernel, ModuleMap::Trusted{});
    out.steps.push_back({inc, epi});
    prev = k;
  }
  return out;
}

inline ModuleRep syzygy(const ModuleRep& m, std::size_t i) {
  if (i == 0) return m;
  const auto res_ptr = detail::ensure_resolution(m, i);
  const auto& res = *res_ptr;
  return detail::syzygy_module(m, res, i);
}

/// dim_k Ext^i_A(M, N): cohomology of Hom(F_*, N) where Hom(A^g, N) = N^g.
inline std::size_t ext_dim(const ModuleRep& m, const ModuleRep& n, std::size_t i) {
  m.require_same_algebra(n);
  if (m.dim() == 0 || n.dim() == 0) return 0;
  const auto res_ptr = detail::ensure_resolution(m, i + 2);
  const auto& res = *res_ptr;
  const std::size_t cochain = res.steps[i].rank * n.dim();
  std::size_t out_rank = 0, in_rank = 0;
  if (cochain == 0) return 0;
  out_rank = rank(detail::relation_matrix(n, res.steps[i + 1].generators));
  if (i > 0) in_rank = rank(detail::relation_matrix(n, res.steps[i].generators));
  return cochain - out_rank - in_rank;
}

/// dims of H^0..H^imax of a cochain complex of hom spaces, given the
/// vectorized images of each basis element under the differential:
/// images[j] has the images of a basis of C^j inside the ambient of C^{j+1}.
inline std::vector<std::size_t> cochain_cohomology(const std::vector<std::size_t>& dims,
                                                   const std::vector<Matrix>& images) {
  std::vector<std::size_t> ranks;
  for (const auto& im : images) ranks.push_back(rank(im));
  std::vector<std::size_t> h;
  for (std::size_t j = 0; j + 1 < dims.size() && j < ranks.size(); ++j)
    h.push_back(dims[j] - ranks[j] - (j > 0 ? ranks[j - 1] : 0));
  return h;
}

/// Injective coresolution of N, obtained by dualizing a free resolution of
/// D(N) over the opposite algebra.
inline Resolution injective_coresolution(const ModuleRep& n, std::size_t length) {
  ModuleRep dn = dual_module(n);
  Resolution fr = free_resolution(dn, length);
  Resolution out{n, {}, ResolutionFlavor::injective_co};
  ModuleRep prev = n;
  for (std::size_t i = 0; i < length; ++i) {
    const auto& s = fr.steps[i];  // 0 -> K_{i+1} -> F_i -> K_i -> 0 over A^op
    ModuleRep di = dual_module(s.middle());
    ModuleRep dk = dual_module(s.first());
    // 0 -> D(K_i) -> D(F_i) -> D(K_{i+1}) -> 0; D(K_0) = D(D(N)) = N.
    ModuleMap mono(prev, di, s.right.matrix().transpose(), ModuleMap::Trusted{});
    ModuleMap epi(di, dk, s.left.matrix().transpose(), ModuleMap::Trusted{});
    out.steps.push_back({mono, epi});
    prev = dk;
  }
  return out;
}

/// Ext^i_A(M, N) as cohomology of Hom(M, I^*) for an injective coresolution
/// of N. The second computation route for absolute Ext.
inline std::vector<std::size_t> ext_dims_via_coresolution(const ModuleRep& m, const ModuleRep& n,
                                                          std::size_t imax) {
  Resolution co = injective_coresolution(n, imax + 2);
  std::vector<std::size_t> dims;
  std::vector<Matrix> images;
  std::vector<std::vector<ModuleMap>> homs;
  for (std::size_t j = 0; j <= imax + 1; ++j) homs.push_back(hom_space(m, co.term(j)));
  for (std::size_t j = 0; j <= imax + 1; ++j) dims.push_back(homs[j].size());
  for (std::size_t j = 0; j <= imax; ++j) {
    ModuleMap d = co.differential(j);
    std::vector<ModuleMap> imgs;
    for (const auto& phi : homs[j]) imgs.push_back(d.after(phi));
    images.push_back(stack_maps(imgs, co.term(j + 1).dim(), m.dim(), m.field()));
  }
  return cochain_cohomology(dims, images);
}

namespace detail {

/// With J the radical and 0 -> K -> F -> M -> 0 the free cover on lifts of
/// a basis of M / JM: M is projective iff K meets JF exactly in JK.
inline bool projective_by_radical(const ModuleRep& m) {
  const auto res_ptr = ensure_resolution(m, 1);
  const auto& res = *res_ptr;
  const auto& s0 = res.steps[0];
  const Algebra& alg = m.alg();
  const Matrix& k = s0.kernel;
  if (k.cols() == 0) return true;
  const Matrix& ideal = alg.nilpotent_ideal();
  const std::size_t n = alg.dim();
  Matrix jf(m.field(), n * s0.rank, ideal.cols() * s0.rank);
  for (std::size_t i = 0; i < s0.rank; ++i) jf.set_block(i * n, i * ideal.cols(), ideal);
  const std::size_t meet = k.cols() + jf.cols() - rank(hstack(k, jf));
  const std::size_t jk = radical_span(alg, k, free_act_fn(alg)).cols();
  return meet == jk;
}

/// Dual basis test: id_M is a sum of maps x -> phi(x) g with phi in
/// Hom(M, A) and g a generator. Both sides are A-linear, so it is enough to
/// compare them on the generators.
inline bool projective_by_dual_basis(const ModuleRep& m) {
  const auto res_ptr = ensure_resolution(m, 2);
  const auto& res = *res_ptr;
  const auto& gens = res.steps[0].generators;
  const std::size_t g = res.steps[0].rank, n = m.alg().dim(), d = m.dim();
  const PrimeField f = m.field();
  ModuleRep a = ModuleRep::free(m.algebra(), 1);
  auto homs = kernel_basis(relation_matrix(a, res.steps[1].generators));
  std::vector<Matrix> w;  // w[k] column b = e_b * (generator k)
  for (std::size_t k = 0; k < g; ++k) {
    Matrix wk(f, d, n);
    auto gk = gens.select_columns({k});
    for (std::size_t b = 0; b < n; ++b) wk.set_block(0, b, m.action()[b] * gk);
    w.push_back(std::move(wk));
  }
  Matrix span(f, d * g, homs.size() * g);
  for (std::size_t h = 0; h < homs.size(); ++h) {
    Matrix v(f, n, g);
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t r = 0; r < n; ++r) v(r, i) = homs[h][i * n + r];
    for (std::size_t k = 0; k < g; ++k) {
      Matrix img = w[k] * v;
      for (std::size_t i = 0; i < g; ++i)
        for (std::size_t r = 0; r < d; ++r) span(i * d + r, h * g + k) = img(r, i);
    }
  }
  std::vector<Residue> target(d * g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t r = 0; r < d; ++r) target[i * d + r] = gens(r, i);
  return solve(span, target).has_value();
}

}  // namespace detail

inline bool is_projective(const ModuleRep& m) {
  if (m.dim() == 0) return true;
  if (m.alg().nilpotent_ideal_is_radical()) return detail::projective_by_radical(m);
  return detail::projective_by_dual_basis(m);
}

inline bool is_injective(const ModuleRep& m) { return is_projective(dual_module(m)); }

inline BoundedDim proj_dim(const ModuleRep& m, std::size_t bound) {
  for (std::size_t n = 0; n <= bound; ++n)
    if (is_projective(syzygy(m, n))) return BoundedDim::exactly(n, bound);
  return BoundedDim::exceeds(bound);
}

inline BoundedDim inj_dim(const ModuleRep& m, std::size_t bound) { return proj_dim(dual_module(m), bound); }

}  // namespace cotorsion
