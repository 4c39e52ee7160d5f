#pragma once

// Cotorsion triples (X, Z, Y): membership oracles, certified special
// approximations, Salce completions, and lifting/extension against them.
// Built-in instances: the trivial triple (P, all, I) and the Gorenstein triple
// (GP, finite pd, GI) over a Gorenstein algebra. Left-sided constructions and
// Y-membership go through duality over the opposite algebra.

#include <atomic>

#include "cotorsion/resolution.hpp"

namespace cotorsion {

class ApproximationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotGorensteinWithinBound : public std::runtime_error {
 public:
  NotGorensteinWithinBound(const std::string& side, std::size_t bound)
      : std::runtime_error("self-injective dimension of " + side + " exceeds bound " + std::to_string(bound)) {}
};

enum class TripleKind { trivial, gorenstein };

enum class ModuleClass { X, Z, Y };

inline const char* to_string(ModuleClass c) {
  switch (c) {
    case ModuleClass::X: return "X";
    case ModuleClass::Z: return "Z";
    case ModuleClass::Y: return "Y";
  }
  return "?";
}

struct TripleMetadata {
  std::string name;
  bool hereditary = true;
  bool complete = true;
  std::optional<std::size_t> gorenstein_dim;
  std::size_t membership_bound = 10;
  std::size_t safety_margin = 2;
};

enum class ApproxKind { special_right_x, special_left_y, special_left_z, special_right_z };

inline const char* to_string(ApproxKind k) {
  switch (k) {
    case ApproxKind::special_right_x: return "special-right-X";
    case ApproxKind::special_left_y: return "special-left-Y";
    case ApproxKind::special_left_z: return "special-left-Z";
    case ApproxKind::special_right_z: return "special-right-Z";
  }
  return "?";
}

/// A short exact sequence witnessing a special approximation.
///   special-right-X: 0 -> K -> X -> M -> 0    (X in X, K in Z)
///   special-left-Y:  0 -> M -> Y -> Z -> 0    (Y in Y, Z in Z)
///   special-left-Z:  0 -> M -> Z -> X -> 0    (Z in Z, X in X)
///   special-right-Z: 0 -> Y -> Z -> M -> 0    (Z in Z, Y in Y)
struct ApproxSeq {
  ApproxKind kind;
  ShortExactSeq seq;
  // The two memberships in the order listed above.
  bool first_certified = false;
  bool second_certified = false;

  const ModuleRep& first() const { return seq.first(); }
  const ModuleRep& middle() const { return seq.middle(); }
  const ModuleRep& last() const { return seq.last(); }
};

/// One Ext-vanishing or dimension condition of a user-declared class.
struct MembershipRule {
  enum class Kind {
    ext_vanishes_against,  // Ext^i(M, T) = 0 for lo <= i <= hi
    ext_vanishes_from,     // Ext^i(T, M) = 0 for lo <= i <= hi
    proj_dim_at_most,
    inj_dim_at_most,
    projective,
    injective,
    any
  };
  Kind kind = Kind::any;
  std::string module_name;
  std::optional<ModuleRep> module;
  std::size_t lo = 1, hi = 1;
  std::size_t n = 0;

  bool holds(const ModuleRep& m) const {
    switch (kind) {
      case Kind::ext_vanishes_against:
        for (std::size_t i = lo; i <= hi; ++i)
          if (ext_dim(m, *module, i) != 0) return false;
        return true;
      case Kind::ext_vanishes_from:
        for (std::size_t i = lo; i <= hi; ++i)
          if (ext_dim(*module, m, i) != 0) return false;
        return true;
      case Kind::proj_dim_at_most: return !proj_dim(m, n).exceeds_bound();
      case Kind::inj_dim_at_most: return !inj_dim(m, n).exceeds_bound();
      case Kind::projective: return is_projective(m);
      case Kind::injective: return is_injective(m);
      case Kind::any: return true;
    }
    return false;
  }
};

/// Membership overrides for a declared triple; an empty list keeps the base
/// triple's oracle for that class.
struct DeclaredClasses {
  std::vector<MembershipRule> x, z, y;
};

class CotorsionTriple;
using TriplePtr = std::shared_ptr<const CotorsionTriple>;

namespace detail {

inline std::uint64_t next_oracle_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

/// lambda: G -> A^g whose components generate Hom(G, A) as a right module,
/// so every map G -> A factors through lambda.
inline ModuleMap left_free_approx(const ModuleRep& g) {
  const Algebra& alg = g.alg();
  ModuleRep a = ModuleRep::regular(g.algebra());
  HomSpace hom(g, a);
  const std::size_t h = hom.dim();
  if (h == 0) return ModuleMap::zero(g, ModuleRep::zero(g.algebra()));
  AlgebraPtr op = alg.opposite();
  std::vector<Matrix> action;
  for (std::size_t b = 0; b < alg.dim(); ++b) {
    Matrix act(g.field(), h, h);
    for (std::size_t k = 0; k < h; ++k) {
      auto c = hom.coordinates(alg.right_mult(b) * hom.basis()[k].matrix());
      for (std::size_t r = 0; r < h; ++r) act(r, k) = c[r];
    }
    action.push_back(std::move(act));
  }
  ModuleRep hmod = ModuleRep::make(op, h, std::move(action));
  Matrix gens = choose_generators(*op, Matrix::identity(g.field(), h), module_act(hmod));
  std::vector<Matrix> comps;
  for (std::size_t j = 0; j < gens.cols(); ++j) comps.push_back(hom.combination(gens.column(j)).matrix());
  Matrix lam = comps.front();
  for (std::size_t j = 1; j < comps.size(); ++j) lam = vstack(lam, comps[j]);
  return ModuleMap(g, ModuleRep::free(g.algebra(), comps.size()), std::move(lam), ModuleMap::Trusted{});
}

inline ShortExactSeq identity_seq(const ModuleRep& m) {
  ModuleRep z = ModuleRep::zero(m.algebra());
  return {ModuleMap::zero(z, m), ModuleMap::identity(m)};
}

inline ShortExactSeq identity_seq_left(const ModuleRep& m) {
  ModuleRep z = ModuleRep::zero(m.algebra());
  return {ModuleMap::identity(m), ModuleMap::zero(m, z)};
}

/// 0 -> A -> B -> C -> 0 over the opposite algebra becomes
/// 0 -> new_first -> D(B) -> D(A) -> 0, where new_first stands in for D(C).
inline ShortExactSeq dualize_seq(const ShortExactSeq& s, const ModuleRep& new_first) {
  ModuleRep db = dual_module(s.middle());
  ModuleRep da = dual_module(s.first());
  return {ModuleMap(new_first, db, s.right.matrix().transpose(), ModuleMap::Trusted{}),
          ModuleMap(db, da, s.left.matrix().transpose(), ModuleMap::Trusted{})};
}

}  // namespace detail

class CotorsionTriple {
  struct Private {};

 public:
  CotorsionTriple(Private, AlgebraPtr alg, TripleKind kind, TripleMetadata meta)
      : alg_(std::move(alg)), kind_(kind), meta_(std::move(meta)), id_(detail::next_oracle_id()),
        regular_(ModuleRep::regular(alg_)) {}

  static TriplePtr trivial(AlgebraPtr alg) {
    TripleMetadata meta;
    meta.name = "trivial";
    return std::make_shared<const CotorsionTriple>(Private{}, std::move(alg), TripleKind::trivial, meta);
  }

  /// Gorenstein triple; d is the larger of the two self-injective dimensions.
  static TriplePtr gorenstein(AlgebraPtr alg, std::size_t bound = 10, std::size_t margin = 2) {
    auto left = inj_dim(ModuleRep::regular(alg), bound);
    if (left.exceeds_bound()) throw NotGorensteinWithinBound("A as a left module", bound);
    auto right = inj_dim(ModuleRep::regular(alg->opposite()), bound);
    if (right.exceeds_bound()) throw NotGorensteinWithinBound("A as a right module", bound);
    TripleMetadata meta;
    meta.name = "gorenstein";
    meta.gorenstein_dim = std::max(*left.value, *right.value);
    meta.membership_bound = bound;
    meta.safety_margin = margin;
    return std::make_shared<const CotorsionTriple>(Private{}, std::move(alg), TripleKind::gorenstein, meta);
  }

  /// A user-declared triple: memberships from `classes`, constructions from
  /// `base`. Completeness and hereditary flags are claims, checked by the
  /// approximation certificates and the property suites.
  static TriplePtr declared(TriplePtr base, TripleMetadata meta, DeclaredClasses classes) {
    auto t = std::make_shared<CotorsionTriple>(Private{}, base->alg_, base->kind_, std::move(meta));
    if (!t->meta_.gorenstein_dim) t->meta_.gorenstein_dim = base->meta_.gorenstein_dim;
    t->meta_.safety_margin = base->meta_.safety_margin;
    t->classes_ = std::move(classes);
    t->base_ = std::move(base);
    return t;
  }

  const AlgebraPtr& algebra() const { return alg_; }
  TripleKind kind() const { return kind_; }
  const TripleMetadata& metadata() const { return meta_; }
  const std::string& name() const { return meta_.name; }
  bool is_declared() const { return base_ != nullptr; }
  std::size_t gorenstein_d() const { return meta_.gorenstein_dim.value_or(0); }
  /// Identifies this triple's oracles in per-module caches.
  std::uint64_t oracle_id() const { return id_; }

  bool in_X(const ModuleRep& m) const { return member(ModuleClass::X, m); }
  bool in_Z(const ModuleRep& m) const { return member(ModuleClass::Z, m); }
  bool in_Y(const ModuleRep& m) const { return member(ModuleClass::Y, m); }
  bool in(ModuleClass c, const ModuleRep& m) const { return member(c, m); }

  /// The same kind of triple over the opposite algebra; D swaps its X and Y
  /// with ours.
  const CotorsionTriple& opposite() const {
    if (back_) return *back_;
    if (base_) return base_->opposite();
    std::call_once(opp_once_, [this] {
      auto op = std::make_shared<CotorsionTriple>(Private{}, alg_->opposite(), kind_, meta_);
      op->back_ = this;
      opposite_ = std::move(op);
    });
    return *opposite_;
  }

  // -------------------------------------------------------------------------
  // Approximations. Each result is certified before it is returned.

  // Certified results are cached on the module.

  ApproxSeq right_X_approx(const ModuleRep& m) const {
    return cached(m, 0, [&] { return certify({ApproxKind::special_right_x, build_right_x(m)}); });
  }

  ApproxSeq left_Y_approx(const ModuleRep& m) const {
    return cached(m, 1, [&] { return certify({ApproxKind::special_left_y, build_left_y(m)}); });
  }

  /// 0 -> M -> E -> X -> 0: embed M in an injective, approximate the
  /// cokernel from X, pull back.
  ApproxSeq salce_left_Z_approx(const ModuleRep& m) const {
    if (m.dim() == 0 || in_Z(m)) return certify({ApproxKind::special_left_z, detail::identity_seq_left(m)});
    ShortExactSeq emb = injective_embedding(m);
    ShortExactSeq rx = build_right_x(emb.last());
    auto pb = pullback(emb.right, rx.right);
    ModuleMap into = pullback_induced(pb, emb.left, ModuleMap::zero(m, rx.middle()));
    return certify({ApproxKind::special_left_z, {into, pb.to_second}});
  }

  /// 0 -> Y -> E -> M -> 0: free cover of M, left Y-approximation of its
  /// kernel, push out.
  ApproxSeq salce_right_Z_approx(const ModuleRep& m) const {
    if (m.dim() == 0 || in_Z(m)) return certify({ApproxKind::special_right_z, detail::identity_seq(m)});
    ShortExactSeq cov = free_cover(m);
    ShortExactSeq ly = build_left_y(cov.first());
    auto po = pushout(cov.left, ly.left);
    ModuleMap out = pushout_induced(po, cov.right, ModuleMap::zero(ly.middle(), m));
    return certify({ApproxKind::special_right_z, {po.from_second, out}});
  }

  /// 0 -> M -> I -> C -> 0 with I injective (dual of a free cover of D(M)).
  ShortExactSeq injective_embedding(const ModuleRep& m) const {
    ModuleRep dm = dual_module(m);
    return detail::dualize_seq(free_cover(dm), m);
  }

  /// Runs the certificate of an approximation and throws on failure.
  ApproxSeq certify(ApproxSeq a) const {
    const auto& s = a.seq;
    if (!s.is_exact())
      throw ApproximationFailed(std::string(to_string(a.kind)) + ": sequence is not short exact");
    ModuleClass c1 = ModuleClass::Z, c2 = ModuleClass::Z;
    const ModuleRep* t1 = &s.first();
    const ModuleRep* t2 = &s.middle();
    switch (a.kind) {
      case ApproxKind::special_right_x: c1 = ModuleClass::Z; c2 = ModuleClass::X; break;
      case ApproxKind::special_left_y: t1 = &s.middle(); t2 = &s.last(); c1 = ModuleClass::Y; c2 = ModuleClass::Z; break;
      case ApproxKind::special_left_z: t1 = &s.middle(); t2 = &s.last(); c1 = ModuleClass::Z; c2 = ModuleClass::X; break;
      case ApproxKind::special_right_z: c1 = ModuleClass::Y; c2 = ModuleClass::Z; break;
    }
    a.first_certified = member(c1, *t1);
    a.second_certified = member(c2, *t2);
    if (!a.first_certified || !a.second_certified)
      throw ApproximationFailed(std::string(to_string(a.kind)) + ": membership certificate failed (" +
                                to_string(c1) + ": " + (a.first_certified ? "ok" : "fail") + ", " +
                                to_string(c2) + ": " + (a.second_certified ? "ok" : "fail") + ")");
    return a;
  }

 private:
  // Slots 4 and 5 of the same key space hold proper resolutions.
  struct StoredApprox {
    ModuleRep self;  // detached copy standing in for the module
    ApproxSeq approx;
  };

  template <class F>
  ApproxSeq cached(const ModuleRep& m, std::uint64_t slot, F&& make) const {
    const std::uint64_t key = id_ * 8 + slot;
    std::shared_ptr<const StoredApprox> hit;
    {
      std::lock_guard lock(m.cache().mutex);
      auto it = m.cache().derived.find(key);
      if (it != m.cache().derived.end()) hit = std::static_pointer_cast<const StoredApprox>(it->second);
    }
    if (hit) {
      ApproxSeq a = hit->approx;
      a.seq = swap_module(a.seq, hit->self, m);
      return a;
    }
    ApproxSeq a = make();
    auto stored = std::make_shared<StoredApprox>(StoredApprox{m.detached(), a});
    stored->approx.seq = swap_module(a.seq, m, stored->self);
    std::lock_guard lock(m.cache().mutex);
    m.cache().derived.emplace(key, std::move(stored));
    return a;
  }

  bool member(ModuleClass c, const ModuleRep& m) const {
    const std::uint64_t key = id_ * 4 + static_cast<std::uint64_t>(c);
    {
      std::lock_guard lock(m.cache().mutex);
      auto it = m.cache().membership.find(key);
      if (it != m.cache().membership.end()) return it->second;
    }
    bool v = compute_member(c, m);
    std::lock_guard lock(m.cache().mutex);
    m.cache().membership[key] = v;
    return v;
  }

  bool compute_member(ModuleClass c, const ModuleRep& m) const {
    if (base_) {
      const auto& rules = c == ModuleClass::X ? classes_.x : c == ModuleClass::Z ? classes_.z : classes_.y;
      if (rules.empty()) return base_->member(c, m);
      for (const auto& r : rules)
        if (!r.holds(m)) return false;
      return true;
    }
    if (m.dim() == 0) return true;
    if (kind_ == TripleKind::trivial) {
      switch (c) {
        case ModuleClass::X: return is_projective(m);
        case ModuleClass::Z: return true;
        case ModuleClass::Y: return is_injective(m);
      }
    }
    const std::size_t d = gorenstein_d();
    switch (c) {
      case ModuleClass::X:
        for (std::size_t i = 1; i <= d + meta_.safety_margin; ++i)
          if (ext_dim(m, regular_, i) != 0) return false;
        return true;
      case ModuleClass::Z: return !proj_dim(m, d).exceeds_bound();
      case ModuleClass::Y: return opposite().member(ModuleClass::X, dual_module(m));
    }
    return false;
  }

  /// Uncertified special right X-approximation.
  ShortExactSeq build_right_x(const ModuleRep& m) const {
    if (m.dim() == 0) return detail::identity_seq(m);
    if (kind_ == TripleKind::trivial) return free_cover(m);
    const std::size_t d = gorenstein_d();
    if (d == 0 || member(ModuleClass::X, m)) return detail::identity_seq(m);
    // Ladder: start from 0 -> 0 -> Om^d -> Om^d -> 0 and move down the free
    // resolution one step at a time with two pushouts.
    Resolution fr = free_resolution(m, d);
    ModuleRep top = fr.syzygy(d);
    ModuleMap kin = ModuleMap::zero(ModuleRep::zero(alg_), top);
    ModuleMap pi = ModuleMap::identity(top);
    for (std::size_t i = d; i-- > 0;) {
      ModuleMap lam = detail::left_free_approx(pi.source());
      auto w = pushout(pi, lam);
      const ShortExactSeq& step = fr.steps[i];
      auto v = pushout(step.left, w.from_first);
      pi = pushout_induced(v, step.right, ModuleMap::zero(w.module, step.last()));
      kin = v.from_second;
    }
    return {kin, pi};
  }

  /// Uncertified special left Y-approximation, dual to build_right_x.
  ShortExactSeq build_left_y(const ModuleRep& m) const {
    if (m.dim() == 0) return detail::identity_seq_left(m);
    if (kind_ == TripleKind::gorenstein && member(ModuleClass::Y, m)) return detail::identity_seq_left(m);
    ShortExactSeq s = opposite().build_right_x(dual_module(m));
    return detail::dualize_seq(s, m);
  }

  AlgebraPtr alg_;
  TripleKind kind_;
  TripleMetadata meta_;
  std::uint64_t id_;
  ModuleRep regular_;
  TriplePtr base_;
  DeclaredClasses classes_;
  mutable std::once_flag opp_once_;
  mutable std::shared_ptr<const CotorsionTriple> opposite_;
  const CotorsionTriple* back_ = nullptr;
};

/// beta: M -> Y with g o beta = alpha, for a special left Y-approximation
/// 0 -> N -> Y --g--> L -> 0 and alpha: M -> L.
inline std::optional<ModuleMap> lift_through_left_approx(const ApproxSeq& approx, const ModuleMap& alpha) {
  if (approx.kind != ApproxKind::special_left_y)
    throw ContractViolation("lift_through_left_approx: approximation is not special-left-Y");
  if (alpha.target().dim() != approx.last().dim())
    throw ContractViolation("lift_through_left_approx: alpha does not land in the cokernel object");
  return factor_through_post(approx.seq.right, alpha);
}

/// beta: X -> M with beta o k = alpha, for a special right X-approximation
/// 0 -> K --k--> X -> N -> 0 and alpha: K -> M.
inline std::optional<ModuleMap> extend_through_right_approx(const ApproxSeq& approx, const ModuleMap& alpha) {
  if (approx.kind != ApproxKind::special_right_x)
    throw ContractViolation("extend_through_right_approx: approximation is not special-right-X");
  if (alpha.source().dim() != approx.first().dim())
    throw ContractViolation("extend_through_right_approx: alpha does not start at the kernel object");
  return factor_through_pre(approx.seq.left, alpha);
}

}  // namespace cotorsion
