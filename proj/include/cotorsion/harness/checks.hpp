#pragma once

// The verification checks. Each takes the shared context and returns one
// record; violations carry serialized modules and maps for replay.

#include <chrono>
#include <functional>
#include <set>

#include "cotorsion/harness/config.hpp"

namespace cotorsion::harness {

enum class Status { pass, fail, unknown };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::unknown: return "unknown";
  }
  return "?";
}

struct CheckRecord {
  std::string id;
  std::string anchor;
  Status status = Status::pass;
  std::size_t samples = 0;
  json details = json::object();
  json witnesses = json::array();
  double elapsed_ms = 0;  // reported only with timestamps on
};

/// Counts samples and violations; keeps the first few witnesses.
class Tally {
 public:
  explicit Tally(std::size_t keep = 4) : keep_(keep) {}

  void ok(std::size_t n = 1) { samples_ += n; }

  void violation(const std::string& what, json data) {
    ++samples_;
    ++violations_;
    if (witnesses_.size() < keep_) witnesses_.push_back({{"violation", what}, {"data", std::move(data)}});
  }

  void unknown(const std::string& what, json data) {
    ++samples_;
    ++unknowns_;
    if (witnesses_.size() < keep_) witnesses_.push_back({{"unknown", what}, {"data", std::move(data)}});
  }

  /// Fails the record unless at least n samples were taken.
  void require(std::size_t n, const std::string& what) {
    if (samples_ < n) {
      ++violations_;
      witnesses_.push_back({{"violation", "insufficient samples: " + what},
                            {"data", {{"required", n}, {"taken", samples_}}}});
    }
  }

  /// Runs body; an exception becomes a violation carrying `data`.
  template <class F>
  void guarded(const std::string& label, const std::function<json()>& data, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      json d = data();
      d["exception"] = e.what();
      violation(label + ": exception", std::move(d));
    }
  }

  std::size_t samples() const { return samples_; }
  std::size_t violations() const { return violations_; }

  CheckRecord finish(const std::string& id, json details) {
    CheckRecord r;
    r.id = id;
    for (const auto& c : check_catalog())
      if (id == c.id) r.anchor = c.anchor;
    r.status = violations_ ? Status::fail : unknowns_ ? Status::unknown : Status::pass;
    r.samples = samples_;
    details["violations"] = violations_;
    if (unknowns_) details["unknowns"] = unknowns_;
    r.details = std::move(details);
    r.witnesses = std::move(witnesses_);
    return r;
  }

 private:
  std::size_t keep_;
  std::size_t samples_ = 0, violations_ = 0, unknowns_ = 0;
  json witnesses_ = json::array();
};

// ---------------------------------------------------------------------------
// Witness helpers.

inline json named(const Context& ctx, std::size_t i) {
  return {{"name", ctx.entry(i).name}, {"module", module_to_json(ctx.entry(i).module)}};
}

inline json anon(const ModuleRep& m) { return {{"module", module_to_json(m)}}; }

inline json dim_json(const BoundedDim& d) {
  if (d.value) return *d.value;
  return d.str();
}

inline const char* structure_name(ModelStructure s) { return to_string(s); }

constexpr ModelStructure kStructures[] = {ModelStructure::projective, ModelStructure::injective};

namespace detail {

/// alpha = sum c_k basis_k lifts through g iff the coordinates lie in the
/// span of the images; solving once per (source, approximation) pair.
class FactorSystem {
 public:
  /// Post: find beta with g o beta = alpha, beta: M -> source(g).
  static FactorSystem post(const ModuleRep& m, const ModuleMap& g) {
    FactorSystem fs;
    fs.maps_ = hom_space(m, g.source());
    std::vector<ModuleMap> imgs;
    for (const auto& b : fs.maps_) imgs.push_back(g.after(b));
    fs.sys_ = stack_maps(imgs, g.target().dim(), m.dim(), m.field());
    return fs;
  }

  /// Pre: find beta with beta o k = alpha, beta: target(k) -> M.
  static FactorSystem pre(const ModuleMap& k, const ModuleRep& m) {
    FactorSystem fs;
    fs.maps_ = hom_space(k.target(), m);
    std::vector<ModuleMap> imgs;
    for (const auto& b : fs.maps_) imgs.push_back(b.after(k));
    fs.sys_ = stack_maps(imgs, m.dim(), k.source().dim(), m.field());
    return fs;
  }

  std::optional<Matrix> solve_for(const ModuleMap& alpha, std::size_t rows, std::size_t cols) const {
    if (alpha.is_zero()) return Matrix(alpha.source().field(), rows, cols);
    if (maps_.empty()) return std::nullopt;
    auto x = solve(sys_, alpha.matrix().vectorize());
    if (!x) return std::nullopt;
    Matrix acc(alpha.source().field(), rows, cols);
    for (std::size_t i = 0; i < maps_.size(); ++i) acc.axpy((*x)[i], maps_[i].matrix());
    return acc;
  }

 private:
  std::vector<ModuleMap> maps_;
  Matrix sys_;
};

/// Random module pool: registry entries and terms of random sequences.
inline std::vector<ModuleRep> module_pool(const Context& ctx, Rng& rng, std::size_t n) {
  std::vector<ModuleRep> pool = ctx.registry().modules();
  while (pool.size() < n) {
    ShortExactSeq s = random_ses(rng, ctx.registry());
    for (const ModuleRep* m : {&s.first(), &s.last()})
      if (m->dim() > 0 && pool.size() < n) pool.push_back(*m);
  }
  return pool;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// prop_2_2: X cap Z = projectives, Z cap Y = injectives, and orthogonality
// in degrees 1..imax on registered members.

inline CheckRecord check_prop_2_2(const Context& ctx) {
  const auto& t = ctx.triple();
  Tally tally;
  json table = json::array();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const ModuleRep& m = ctx.entry(i).module;
    tally.guarded("pinching", [&] { return named(ctx, i); }, [&] {
      const bool x = t.in_X(m), z = t.in_Z(m), y = t.in_Y(m);
      const bool p = is_projective(m), inj = is_injective(m);
      table.push_back({{"module", ctx.entry(i).name}, {"X", x}, {"Z", z}, {"Y", y}, {"projective", p}, {"injective", inj}});
      if ((x && z) != p) tally.violation("X and Z membership disagrees with projectivity", named(ctx, i));
      else if ((z && y) != inj) tally.violation("Z and Y membership disagrees with injectivity", named(ctx, i));
      else tally.ok();
    });
  }
  const auto xs = ctx.members(ModuleClass::X), zs = ctx.members(ModuleClass::Z), ys = ctx.members(ModuleClass::Y);
  std::size_t orth = 0;
  auto orthogonal = [&](std::size_t a, std::size_t b, const char* what) {
    tally.guarded(what, [&] { return json{{"first", named(ctx, a)}, {"second", named(ctx, b)}}; }, [&] {
      for (std::size_t d = 1; d <= ctx.config().imax; ++d) {
        if (ext_dim(ctx.entry(a).module, ctx.entry(b).module, d) != 0) {
          tally.violation(std::string(what) + " fails in degree " + std::to_string(d),
                          {{"first", named(ctx, a)}, {"second", named(ctx, b)}, {"degree", d}});
          return;
        }
      }
      ++orth;
      tally.ok();
    });
  };
  for (auto a : xs)
    for (auto b : zs) orthogonal(a, b, "Ext(X, Z) = 0");
  for (auto a : zs)
    for (auto b : ys) orthogonal(a, b, "Ext(Z, Y) = 0");
  return tally.finish("prop_2_2", {{"memberships", table}, {"orthogonal_pairs", orth}});
}

// ---------------------------------------------------------------------------
// prop_2_1: Z is thick (two out of three on random sequences, closed under
// sums and summands); X resolving and Y coresolving on the same sequences.

inline CheckRecord check_prop_2_1(const Context& ctx) {
  const auto& t = ctx.triple();
  const auto& cfg = ctx.config();
  Rng rng(derive_seed(cfg.seed, "prop_2_1"));
  Tally tally;
  std::size_t two_of_three_active = 0;
  for (std::size_t s = 0; s < cfg.samples.ses; ++s) {
    ShortExactSeq seq = random_ses(rng, ctx.registry());
    tally.guarded("random sequence", [&] { return json{{"sequence", ses_to_json(seq)}}; }, [&] {
      const bool a = t.in_Z(seq.first()), b = t.in_Z(seq.middle()), c = t.in_Z(seq.last());
      const int count = a + b + c;
      if (count >= 2) ++two_of_three_active;
      if (count == 2) {
        tally.violation("Z two out of three", {{"sequence", ses_to_json(seq)}, {"in_Z", {a, b, c}}});
        return;
      }
      const bool xa = t.in_X(seq.first()), xb = t.in_X(seq.middle()), xc = t.in_X(seq.last());
      if ((xa && xc && !xb) || (xb && xc && !xa)) {
        tally.violation("X not resolving", {{"sequence", ses_to_json(seq)}, {"in_X", {xa, xb, xc}}});
        return;
      }
      const bool ya = t.in_Y(seq.first()), yb = t.in_Y(seq.middle()), yc = t.in_Y(seq.last());
      if ((ya && yc && !yb) || (ya && yb && !yc)) {
        tally.violation("Y not coresolving", {{"sequence", ses_to_json(seq)}, {"in_Y", {ya, yb, yc}}});
        return;
      }
      tally.ok();
    });
  }
  std::size_t sums = 0;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    for (std::size_t j = i; j < ctx.size(); ++j) {
      tally.guarded("direct sum", [&] { return json{{"first", named(ctx, i)}, {"second", named(ctx, j)}}; }, [&] {
        ModuleRep sum = direct_sum(ctx.entry(i).module, ctx.entry(j).module);
        const bool expect = t.in_Z(ctx.entry(i).module) && t.in_Z(ctx.entry(j).module);
        if (t.in_Z(sum) != expect)
          tally.violation("Z not closed under sums and summands", {{"first", named(ctx, i)}, {"second", named(ctx, j)}});
        else
          tally.ok();
        ++sums;
      });
    }
  }
  tally.require(cfg.samples.ses, "random sequences");
  return tally.finish("prop_2_1", {{"random_sequences", cfg.samples.ses},
                                   {"sequences_with_two_terms_in_Z", two_of_three_active},
                                   {"sum_pairs", sums},
                                   {"hereditary_claimed", t.metadata().hereditary}});
}

// ---------------------------------------------------------------------------
// prop_2_5 / prop_2_7: lifting against left Y-approximations characterizes
// X; extension along right X-approximations characterizes Y.

inline CheckRecord check_prop_2_5(const Context& ctx) {
  const auto& t = ctx.triple();
  const auto& cfg = ctx.config();
  Rng rng(derive_seed(cfg.seed, "prop_2_5"));
  Tally tally;
  std::vector<ApproxSeq> pool;
  for (const auto& n : detail::module_pool(ctx, rng, cfg.samples.approximations)) {
    tally.guarded("left Y-approximation", [&] { return anon(n); }, [&] { pool.push_back(t.left_Y_approx(n)); });
  }
  std::size_t alphas = 0;
  const auto xs = ctx.members(ModuleClass::X);
  for (auto i : xs) {
    const ModuleRep& m = ctx.entry(i).module;
    std::size_t tested = 0;
    for (const auto& ap : pool) {
      tally.guarded("lift", [&] { return json{{"M", named(ctx, i)}, {"approximation", ses_to_json(ap.seq)}}; }, [&] {
        HomSpace hom(m, ap.last());
        auto sys = detail::FactorSystem::post(m, ap.seq.right);
        for (const auto& alpha : hom.basis()) {
          ++alphas;
          auto beta = sys.solve_for(alpha, ap.middle().dim(), m.dim());
          if (!beta || !(ap.seq.right.matrix() * *beta == alpha.matrix())) {
            tally.violation("map into the cokernel does not lift",
                            {{"M", named(ctx, i)}, {"approximation", ses_to_json(ap.seq)}, {"alpha", map_to_json(alpha)}});
            return;
          }
        }
        ++tested;
        tally.ok();
      });
    }
    if (tested < cfg.samples.approximations)
      tally.violation("too few approximations tested", {{"M", named(ctx, i)}, {"tested", tested}});
  }
  // Converse: for M outside X, K -> X_M -> M and K -> Y^K -> L give a map
  // M -> L that does not lift.
  json converse = json::array();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (std::find(xs.begin(), xs.end(), i) != xs.end()) continue;
    const ModuleRep& m = ctx.entry(i).module;
    tally.guarded("converse", [&] { return named(ctx, i); }, [&] {
      const ApproxSeq& rx = ctx.right_x(i);
      ApproxSeq ly = t.left_Y_approx(rx.first());
      HomSpace hom(m, ly.last());
      for (const auto& alpha : hom.basis()) {
        if (!lift_through_left_approx(ly, alpha)) {
          converse.push_back({{"M", ctx.entry(i).name}, {"approximation", ses_to_json(ly.seq)}, {"alpha", map_to_json(alpha)}});
          tally.ok();
          return;
        }
      }
      tally.violation("module outside X lifts against its obstruction approximation", named(ctx, i));
    });
  }
  return tally.finish("prop_2_5", {{"x_members", xs.size()},
                                   {"approximations", pool.size()},
                                   {"basis_maps_lifted", alphas},
                                   {"non_lifting_witnesses", converse}});
}

inline CheckRecord check_prop_2_7(const Context& ctx) {
  const auto& t = ctx.triple();
  const auto& cfg = ctx.config();
  Rng rng(derive_seed(cfg.seed, "prop_2_7"));
  Tally tally;
  std::vector<ApproxSeq> pool;
  for (const auto& n : detail::module_pool(ctx, rng, cfg.samples.approximations)) {
    tally.guarded("right X-approximation", [&] { return anon(n); }, [&] { pool.push_back(t.right_X_approx(n)); });
  }
  std::size_t alphas = 0;
  const auto ys = ctx.members(ModuleClass::Y);
  for (auto i : ys) {
    const ModuleRep& m = ctx.entry(i).module;
    std::size_t tested = 0;
    for (const auto& ap : pool) {
      tally.guarded("extension", [&] { return json{{"M", named(ctx, i)}, {"approximation", ses_to_json(ap.seq)}}; }, [&] {
        HomSpace hom(ap.first(), m);
        auto sys = detail::FactorSystem::pre(ap.seq.left, m);
        for (const auto& alpha : hom.basis()) {
          ++alphas;
          auto beta = sys.solve_for(alpha, m.dim(), ap.middle().dim());
          if (!beta || !(*beta * ap.seq.left.matrix() == alpha.matrix())) {
            tally.violation("map from the kernel does not extend",
                            {{"M", named(ctx, i)}, {"approximation", ses_to_json(ap.seq)}, {"alpha", map_to_json(alpha)}});
            return;
          }
        }
        ++tested;
        tally.ok();
      });
    }
    if (tested < cfg.samples.approximations)
      tally.violation("too few approximations tested", {{"M", named(ctx, i)}, {"tested", tested}});
  }
  json converse = json::array();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (std::find(ys.begin(), ys.end(), i) != ys.end()) continue;
    const ModuleRep& m = ctx.entry(i).module;
    tally.guarded("converse", [&] { return named(ctx, i); }, [&] {
      const ApproxSeq& ly = ctx.left_y(i);
      ApproxSeq rx = t.right_X_approx(ly.last());
      HomSpace hom(rx.first(), m);
      for (const auto& alpha : hom.basis()) {
        if (!extend_through_right_approx(rx, alpha)) {
          converse.push_back({{"M", ctx.entry(i).name}, {"approximation", ses_to_json(rx.seq)}, {"alpha", map_to_json(alpha)}});
          tally.ok();
          return;
        }
      }
      tally.violation("module outside Y extends along its obstruction approximation", named(ctx, i));
    });
  }
  return tally.finish("prop_2_7", {{"y_members", ys.size()},
                                   {"approximations", pool.size()},
                                   {"basis_maps_extended", alphas},
                                   {"non_extending_witnesses", converse}});
}

// ---------------------------------------------------------------------------
// Map sampling for the model-structure checks.

namespace detail {

/// A map between registry modules, an approximation map, an identity or a
/// zero map; random maps dominate.
inline ModuleMap sample_map(const Context& ctx, Rng& rng) {
  const std::size_t n = ctx.size();
  const std::size_t r = uniform_index(rng, 10);
  const std::size_t i = uniform_index(rng, n);
  if (r == 0) return ModuleMap::identity(ctx.entry(i).module);
  if (r == 1) return ctx.right_x(i).seq.right;
  if (r == 2) return ctx.left_y(i).seq.left;
  for (int attempt = 0; attempt < 20; ++attempt) {
    const std::size_t a = uniform_index(rng, n), b = uniform_index(rng, n);
    const HomSpace& h = ctx.hom(a, b);
    if (h.dim() > 0) return random_map(rng, h);
  }
  return ModuleMap::zero(ctx.entry(i).module, ctx.entry(uniform_index(rng, n)).module);
}

/// A map out of `source` into a random registry module.
inline ModuleMap sample_map_from(const Context& ctx, Rng& rng, const ModuleRep& source) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    const std::size_t b = uniform_index(rng, ctx.size());
    HomSpace h(source, ctx.entry(b).module);
    if (h.dim() > 0) return random_map(rng, h);
  }
  return ModuleMap::identity(source);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// thm_3_1_classification: both model structures. Classification coherence,
// two out of three for weak equivalences, certified factorizations,
// lifting, and replacements.

inline CheckRecord check_thm_3_1(const Context& ctx) {
  const auto& t = ctx.triple();
  const auto& cfg = ctx.config();
  Rng rng(derive_seed(cfg.seed, "thm_3_1_classification"));
  Tally tally;
  std::size_t classified = 0, pairs = 0, weq = 0, certified = 0, squares_done = 0;

  auto classify = [&](const ModuleMap& f, ModelStructure s) {
    auto c = classify_map(t, f, s);
    ++classified;
    if (!c.coherent())
      tally.violation(std::string("incoherent classification (") + structure_name(s) + ")",
                      {{"map", map_to_json(f)}, {"witness", c.witness}});
    return c;
  };

  std::vector<ModuleMap> to_factor;
  const std::size_t npairs = (cfg.samples.maps + 2) / 3;
  for (std::size_t k = 0; k < npairs; ++k) {
    ModuleMap f = detail::sample_map(ctx, rng);
    ModuleMap g = detail::sample_map_from(ctx, rng, f.target());
    ModuleMap gf = g.after(f);
    to_factor.push_back(uniform_index(rng, 2) ? f : gf);
    tally.guarded("composable pair", [&] { return json{{"f", map_to_json(f)}, {"g", map_to_json(g)}}; }, [&] {
      for (auto s : kStructures) {
        const bool a = classify(f, s).weak_equivalence;
        const bool b = classify(g, s).weak_equivalence;
        const bool c = classify(gf, s).weak_equivalence;
        weq += a + b + c;
        if (a + b + c == 2)
          tally.violation(std::string("two out of three fails (") + structure_name(s) + ")",
                          {{"f", map_to_json(f)}, {"g", map_to_json(g)}, {"weak_equivalences", {a, b, c}}});
      }
      ++pairs;
      tally.ok();
    });
  }
  if (classified < cfg.samples.maps * 2)
    tally.violation("too few classified maps", {{"required", cfg.samples.maps * 2}, {"classified", classified}});

  // Factorizations, kept for lifting squares: per structure, pairs (i, p).
  // Squares compute Hom between middles, so only small middles are kept.
  constexpr std::size_t kSquareMiddleCap = 48;
  std::vector<Factorization> first_kind[2], second_kind[2];
  for (std::size_t k = 0; k < cfg.samples.factorizations; ++k) {
    const ModuleMap& f = k < to_factor.size() ? to_factor[k] : to_factor[k % to_factor.size()];
    ModuleMap h = k < to_factor.size() ? f : detail::sample_map(ctx, rng);
    tally.guarded("factorization", [&] { return json{{"map", map_to_json(h)}}; }, [&] {
      for (std::size_t si = 0; si < 2; ++si) {
        const ModelStructure s = kStructures[si];
        Factorization a = factor_trivcofib_fib(t, h, s);
        Factorization b = factor_cofib_trivfib(t, h, s);
        std::string why;
        if (!certify_factorization(t, a, &why)) {
          tally.violation(std::string("trivial cofibration then fibration not certified (") + structure_name(s) + "): " + why,
                          {{"map", map_to_json(h)}});
          return;
        }
        if (!certify_factorization(t, b, &why)) {
          tally.violation(std::string("cofibration then trivial fibration not certified (") + structure_name(s) + "): " + why,
                          {{"map", map_to_json(h)}});
          return;
        }
        if (first_kind[si].size() < cfg.samples.squares + 1 && a.middle.dim() <= kSquareMiddleCap)
          first_kind[si].push_back(std::move(a));
        if (second_kind[si].size() < cfg.samples.squares + 1 && b.middle.dim() <= kSquareMiddleCap)
          second_kind[si].push_back(std::move(b));
      }
      ++certified;
      tally.ok();
    });
  }

  // Lifting squares: i from one factorization, p from the next; the top map
  // is random and the bottom solves bottom o i = p o top, plus a term that
  // kills i.
  for (std::size_t si = 0; si < 2; ++si) {
    const ModelStructure s = kStructures[si];
    for (std::size_t k = 0; k < cfg.samples.squares; ++k) {
      const bool use_first = k % 2 == 0;
      const auto& fam = use_first ? first_kind[si] : second_kind[si];
      if (fam.size() < 2) break;
      const Factorization& fi = fam[k % fam.size()];
      const Factorization& fp = fam[(k + 1) % fam.size()];
      const ModuleMap& i = fi.i;
      const ModuleMap& p = fp.p;
      tally.guarded("lifting square", [&] { return json{{"i", map_to_json(i)}, {"p", map_to_json(p)}}; }, [&] {
        HomSpace htop(i.source(), p.source());
        ModuleMap top = htop.dim() ? random_map(rng, htop) : ModuleMap::zero(i.source(), p.source());
        auto bottom = factor_through_pre(i, p.after(top));
        if (!bottom) {
          HomSpace hb(i.target(), p.source());
          ModuleMap h = hb.dim() ? random_map(rng, hb) : ModuleMap::zero(i.target(), p.source());
          top = h.after(i);
          bottom = p.after(h);
        }
        auto q = cokernel_of(i);
        HomSpace hc(q.module, p.target());
        if (hc.dim()) *bottom = *bottom + random_map(rng, hc).after(q.projection);
        LiftingSquare sq{i, p, top, *bottom};
        ModuleMap lift = solve_lifting(t, sq, s);
        if (!(lift.after(i).matrix() == top.matrix()) || !(p.after(lift).matrix() == bottom->matrix())) {
          tally.violation(std::string("lift does not fill the square (") + structure_name(s) + ")",
                          {{"i", map_to_json(i)}, {"p", map_to_json(p)}, {"top", map_to_json(top)}, {"bottom", map_to_json(*bottom)}});
          return;
        }
        ++squares_done;
        tally.ok();
      });
    }
  }
  if (squares_done < 2 * cfg.samples.squares)
    tally.violation("too few lifting squares", {{"required", 2 * cfg.samples.squares}, {"solved", squares_done}});

  // Replacements: X_M -> M is a trivial fibration with cofibrant source in
  // the projective structure; M -> Y^M a trivial cofibration with fibrant
  // target in the injective structure.
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    tally.guarded("replacement", [&] { return named(ctx, i); }, [&] {
      const ApproxSeq& rx = ctx.right_x(i);
      auto cp = classify(rx.seq.right, ModelStructure::projective);
      if (!cp.trivial_fibration || !t.in_X(rx.middle())) {
        tally.violation("cofibrant replacement is not a trivial fibration from X", named(ctx, i));
        return;
      }
      const ApproxSeq& ly = ctx.left_y(i);
      auto ci = classify(ly.seq.left, ModelStructure::injective);
      if (!ci.trivial_cofibration || !t.in_Y(ly.middle())) {
        tally.violation("fibrant replacement is not a trivial cofibration into Y", named(ctx, i));
        return;
      }
      tally.ok();
    });
  }
  return tally.finish("thm_3_1_classification", {{"classified_maps", classified},
                                                 {"composable_pairs", pairs},
                                                 {"weak_equivalences_seen", weq},
                                                 {"factorized_maps", certified},
                                                 {"lifting_squares", squares_done}});
}

// ---------------------------------------------------------------------------
// lemma_3_2_agreement: for f: X -> Y with X in X and Y in Y, weak
// equivalence in one structure iff in the other; weak equivalences also
// get the upgraded factorization. Arbitrary maps are reported as data.

inline CheckRecord check_lemma_3_2(const Context& ctx) {
  const auto& t = ctx.triple();
  const auto& cfg = ctx.config();
  Rng rng(derive_seed(cfg.seed, "lemma_3_2_agreement"));
  Tally tally;
  const auto xs = ctx.members(ModuleClass::X), ys = ctx.members(ModuleClass::Y);
  std::size_t weq = 0, upgraded = 0;
  for (std::size_t k = 0; k < cfg.samples.agreement; ++k) {
    const std::size_t xi = xs[uniform_index(rng, xs.size())];
    const ModuleRep& x = ctx.entry(xi).module;
    ModuleMap f;
    if (k % 2 == 0) {
      const std::size_t yi = ys[uniform_index(rng, ys.size())];
      const HomSpace& h = ctx.hom(xi, yi);
      f = h.dim() ? random_map(rng, h) : ModuleMap::zero(x, ctx.entry(yi).module);
    } else {
      // X -> Y^X, moved by a map through the injective hull.
      const ModuleMap& iota = ctx.left_y(xi).seq.left;
      const ShortExactSeq& emb = ctx.injective_embedding(xi);
      HomSpace h(emb.middle(), iota.target());
      f = h.dim() ? iota + random_map(rng, h).after(emb.left) : iota;
    }
    tally.guarded("map X -> Y", [&] { return json{{"map", map_to_json(f)}}; }, [&] {
      const bool a = is_weak_equivalence(t, f, ModelStructure::projective).value;
      const bool b = is_weak_equivalence(t, f, ModelStructure::injective).value;
      if (a != b) {
        tally.violation("structures disagree on a map X -> Y", {{"map", map_to_json(f)}, {"projective", a}, {"injective", b}});
        return;
      }
      if (a) {
        ++weq;
        Factorization up = upgrade_factorization(t, f);
        std::string why;
        if (!certify_factorization(t, up, &why)) {
          tally.violation("upgraded factorization not certified: " + why, {{"map", map_to_json(f)}});
          return;
        }
        ++upgraded;
      }
      tally.ok();
    });
  }
  tally.require(cfg.samples.agreement, "maps X -> Y");
  std::size_t arbitrary = 0, disagree = 0;
  for (std::size_t k = 0; k < cfg.samples.agreement; ++k) {
    ModuleMap f = detail::sample_map(ctx, rng);
    try {
      const bool a = is_weak_equivalence(t, f, ModelStructure::projective).value;
      const bool b = is_weak_equivalence(t, f, ModelStructure::injective).value;
      ++arbitrary;
      disagree += a != b;
    } catch (const std::exception&) {
    }
  }
  return tally.finish("lemma_3_2_agreement", {{"weak_equivalences", weq},
                                              {"upgraded_factorizations", upgraded},
                                              {"arbitrary_maps", arbitrary},
                                              {"arbitrary_disagreements", disagree}});
}

// ---------------------------------------------------------------------------
// prop_3_3_formulas: both homotopy hom formulas on every registered pair,
// vanishing against Z, and the cylinder homotopy.

inline CheckRecord check_prop_3_3(const Context& ctx) {
  const auto& t = ctx.triple();
  const auto& cfg = ctx.config();
  Rng rng(derive_seed(cfg.seed, "prop_3_3_formulas"));
  Tally tally;
  json table = json::array();
  std::size_t homotopies = 0;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    for (std::size_t j = 0; j < ctx.size(); ++j) {
      const ModuleRep& m = ctx.entry(i).module;
      const ModuleRep& n = ctx.entry(j).module;
      auto pair = [&] { return json{{"M", named(ctx, i)}, {"N", named(ctx, j)}}; };
      tally.guarded("ho_hom", pair, [&] {
        HoHom h = ho_hom(t, m, n, false);
        table.push_back({ctx.entry(i).name, ctx.entry(j).name, h.via_injective, h.via_projective});
        if (!h.agree()) {
          tally.violation("formulas disagree", pair());
          return;
        }
        if ((t.in_Z(m) || t.in_Z(n)) && h.via_injective != 0) {
          tally.violation("nonzero with an argument in Z", pair());
          return;
        }
        // Representatives are pairwise distinct classes: none is homotopic
        // to zero.
        for (const auto& r : h.representatives) {
          if (homotopic(t, ModuleMap::zero(r.source(), r.target()), r).homotopic) {
            tally.violation("representative homotopic to zero", {{"M", named(ctx, i)}, {"N", named(ctx, j)}, {"map", map_to_json(r)}});
            return;
          }
        }
        tally.ok();
      });
      if (!t.in_Y(n)) continue;
      tally.guarded("homotopy", pair, [&] {
        const HomSpace& h = ctx.hom(i, j);
        ModuleMap f = h.dim() ? random_map(rng, h) : ModuleMap::zero(m, n);
        const ShortExactSeq& emb = ctx.injective_embedding(i);
        HomSpace ht(emb.middle(), n);
        ModuleMap g = ht.dim() ? f + random_map(rng, ht).after(emb.left) : f;
        auto r = homotopic(t, f, g);
        if (!r.homotopic || !r.cylinder_verified) {
          tally.violation("f and f + t j not homotopic through the cylinder", {{"f", map_to_json(f)}, {"g", map_to_json(g)}});
          return;
        }
        ++homotopies;
        tally.ok();
      });
    }
  }
  return tally.finish("prop_3_3_formulas", {{"ho_hom", table}, {"homotopies_verified", homotopies}});
}

// ---------------------------------------------------------------------------
// prop_3_4_stability: padding by projectives (X side) or injectives (Y
// side) is a stable equivalence; every yes replays; stable equivalence
// preserves homotopy hom dimensions.

inline CheckRecord check_prop_3_4(const Context& ctx) {
  const auto& t = ctx.triple();
  const auto& cfg = ctx.config();
  Tally tally;
  StableOptions opt;
  opt.seed = derive_seed(cfg.seed, "prop_3_4_stability");
  const ModuleRep regular = ModuleRep::regular(ctx.algebra());
  const ModuleRep dual_regular = dual_module(ModuleRep::regular(ctx.algebra()->opposite()));
  const auto tests = ctx.registry().modules();
  json padding = json::array();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const ModuleRep& m = ctx.entry(i).module;
    for (auto side : {StableSide::x_side, StableSide::y_side}) {
      const bool xs = side == StableSide::x_side;
      ModuleRep padded = direct_sum(m, xs ? regular : dual_regular);
      tally.guarded("padding", [&] { return named(ctx, i); }, [&] {
        StableResult r = stable_equivalent(t, m, padded, side, {}, opt);
        padding.push_back({{"M", ctx.entry(i).name}, {"side", xs ? "X" : "Y"}, {"verdict", r.verdict == IsoVerdict::yes ? "yes" : r.verdict == IsoVerdict::no ? "no" : "unknown"},
                           {"candidates_tried", r.candidates_tried}});
        json w = {{"M", named(ctx, i)}, {"side", xs ? "X" : "Y"}, {"witness", r.witness}};
        if (r.verdict == IsoVerdict::unknown) tally.unknown("padding undecided within budget", w);
        else if (r.verdict == IsoVerdict::no) tally.violation("padding reported not stably equivalent", w);
        else if (!r.replayed) tally.violation("yes certificate does not replay", w);
        else tally.ok();
      });
    }
  }
  // Registry pairs: verdicts as data; yes must replay and preserve ho_hom.
  std::size_t yes = 0, no = 0, unknown = 0;
  json classes = json::array();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    for (std::size_t j = i + 1; j < ctx.size(); ++j) {
      auto pair = [&] { return json{{"M", named(ctx, i)}, {"N", named(ctx, j)}}; };
      tally.guarded("registry pair", pair, [&] {
        StableResult r = stable_equivalent(t, ctx.entry(i).module, ctx.entry(j).module, StableSide::x_side, tests, opt);
        if (r.verdict == IsoVerdict::no) {
          ++no;
          return;
        }
        if (r.verdict == IsoVerdict::unknown) {
          ++unknown;
          return;
        }
        ++yes;
        classes.push_back({ctx.entry(i).name, ctx.entry(j).name});
        if (!r.replayed) {
          tally.violation("yes certificate does not replay", pair());
          return;
        }
        for (std::size_t k = 0; k < ctx.size(); ++k) {
          const ModuleRep& target = ctx.entry(k).module;
          auto a = ho_hom(t, ctx.entry(i).module, target, false).via_projective;
          auto b = ho_hom(t, ctx.entry(j).module, target, false).via_projective;
          if (a != b) {
            tally.violation("stably equivalent modules differ in homotopy hom",
                            {{"M", named(ctx, i)}, {"N", named(ctx, j)}, {"T", named(ctx, k)}});
            return;
          }
        }
        tally.ok();
      });
    }
  }
  return tally.finish("prop_3_4_stability", {{"padding", padding},
                                             {"registry_pairs", {{"yes", yes}, {"no", no}, {"unknown", unknown}}},
                                             {"stably_equivalent_pairs", classes},
                                             {"budget", {{"exhaustive_limit", opt.exhaustive_limit}, {"random_attempts", opt.random_attempts}}}});
}

// ---------------------------------------------------------------------------
// prop_4_2: X-id and Y-pd are 0 or infinite, never positive and finite.

inline CheckRecord check_prop_4_2(const Context& ctx) {
  const auto& cfg = ctx.config();
  Tally tally;
  const auto xs = ctx.member_modules(ModuleClass::X), ys = ctx.member_modules(ModuleClass::Y);
  json table = json::array();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    tally.guarded("dichotomy", [&] { return named(ctx, i); }, [&] {
      auto r = xy_degenerate_dims(ctx.entry(i).module, xs, ys, cfg.bound);
      table.push_back({{"module", ctx.entry(i).name}, {"x_id", to_string(r.x_horn)}, {"y_pd", to_string(r.y_horn)}});
      if (!r.ok())
        tally.violation("intermediate finite value", {{"M", named(ctx, i)}, {"x_id", dim_json(r.x_id)}, {"y_pd", dim_json(r.y_pd)}});
      else
        tally.ok();
    });
  }
  return tally.finish("prop_4_2", {{"horns", table}, {"bound", cfg.bound}});
}

// ---------------------------------------------------------------------------
// def_4_3_balance and prop_4_4.

inline json ext_table_json(const ExtTable& t) {
  json rows = json::array();
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    rows.push_back({{"degree", i}, {"via_x", t.rows[i].via_x}, {"via_y", t.rows[i].via_y}, {"absolute", t.rows[i].absolute}});
  return {{"M", t.m_name}, {"N", t.n_name}, {"triple", t.triple}, {"rows", rows}};
}

inline CheckRecord check_balance(const Context& ctx) {
  Tally tally;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    for (std::size_t j = 0; j < ctx.size(); ++j) {
      auto pair = [&] { return json{{"M", named(ctx, i)}, {"N", named(ctx, j)}}; };
      tally.guarded("ext table", pair, [&] {
        const ExtTable& t = ctx.ext_table(i, j);
        if (!t.balanced()) {
          json w = pair();
          w["table"] = ext_table_json(t);
          tally.violation("relative Ext columns differ", w);
        } else {
          tally.ok();
        }
      });
    }
  }
  return tally.finish("def_4_3_balance", {{"pairs", ctx.size() * ctx.size()}, {"imax", ctx.config().imax}});
}

inline CheckRecord check_prop_4_4(const Context& ctx) {
  const auto& t = ctx.triple();
  Tally tally;
  std::size_t compared = 0, with_z = 0, differing = 0;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    for (std::size_t j = 0; j < ctx.size(); ++j) {
      auto pair = [&] { return json{{"M", named(ctx, i)}, {"N", named(ctx, j)}}; };
      tally.guarded("comparison", pair, [&] {
        const ExtTable& tab = ctx.ext_table(i, j);
        const bool z = t.in_Z(ctx.entry(i).module) || t.in_Z(ctx.entry(j).module);
        bool same = true;
        for (std::size_t d = 1; d < tab.rows.size(); ++d) same = same && tab.rows[d].via_x == tab.rows[d].absolute;
        ++compared;
        if (!z) {
          differing += !same;
          return;
        }
        ++with_z;
        if (!same) {
          json w = pair();
          w["table"] = ext_table_json(tab);
          tally.violation("relative and absolute Ext differ with an argument in Z", w);
        } else {
          tally.ok();
        }
      });
    }
  }
  return tally.finish("prop_4_4", {{"pairs", compared}, {"pairs_with_Z_member", with_z}, {"other_pairs_differing", differing}});
}

// ---------------------------------------------------------------------------
// prop_4_5_les: long exact sequences with explicit connecting maps, on
// approximation sequences (proper by construction) and split sequences.

inline CheckRecord check_prop_4_5(const Context& ctx) {
  const auto& t = ctx.triple();
  const auto& cfg = ctx.config();
  Rng rng(derive_seed(cfg.seed, "prop_4_5_les"));
  Tally tally;
  const auto xs = ctx.member_modules(ModuleClass::X), ys = ctx.member_modules(ModuleClass::Y);
  std::size_t first = 0, second = 0;
  auto run = [&](const ShortExactSeq& seq, LesVariant v, std::size_t fixed) {
    const bool is_first = v == LesVariant::first;
    tally.guarded("long exact sequence",
                  [&] { return json{{"sequence", ses_to_json(seq)}, {"fixed", named(ctx, fixed)}, {"variant", is_first ? "first" : "second"}}; },
                  [&] {
                    LesReport rep = les_check(t, seq, ctx.entry(fixed).module, v, cfg.imax, is_first ? xs : ys);
                    if (!rep.exact()) {
                      tally.violation("not exact at " + rep.first_failure().value_or("?"),
                                      {{"sequence", ses_to_json(seq)}, {"fixed", named(ctx, fixed)}, {"variant", is_first ? "first" : "second"}});
                      return;
                    }
                    (is_first ? first : second) += 1;
                    tally.ok();
                  });
  };
  auto pool = detail::module_pool(ctx, rng, cfg.samples.les);
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const ModuleRep& m = pool[k];
    ShortExactSeq rx, ly;
    try {
      rx = t.right_X_approx(m).seq;
      ly = t.left_Y_approx(m).seq;
    } catch (const std::exception& e) {
      tally.violation(std::string("approximation failed: ") + e.what(), anon(m));
      continue;
    }
    run(rx, LesVariant::first, uniform_index(rng, ctx.size()));
    run(ly, LesVariant::second, uniform_index(rng, ctx.size()));
  }
  for (std::size_t k = 0; k < 4; ++k) {
    const ModuleRep& a = ctx.entry(uniform_index(rng, ctx.size())).module;
    const ModuleRep& b = ctx.entry(uniform_index(rng, ctx.size())).module;
    auto ds = direct_sum_with_maps(a, b);
    ShortExactSeq split{ds.in1, ds.pr2};
    run(split, LesVariant::first, uniform_index(rng, ctx.size()));
    run(split, LesVariant::second, uniform_index(rng, ctx.size()));
  }
  if (first < cfg.samples.les || second < cfg.samples.les)
    tally.violation("too few exact long sequences", {{"required_per_variant", cfg.samples.les}, {"first", first}, {"second", second}});
  return tally.finish("prop_4_5_les", {{"first_variant", first}, {"second_variant", second}, {"degrees", cfg.imax}});
}

// ---------------------------------------------------------------------------
// thm_4_6 / thm_4_7: relative dimension read off the proper (co)resolution
// versus Ext against registered Z-members, and vanishing of Ext_XY beyond it.

inline CheckRecord check_relative_dim(const Context& ctx, bool projective_side) {
  const auto& t = ctx.triple();
  const auto& cfg = ctx.config();
  Tally tally;
  const auto zs = ctx.member_modules(ModuleClass::Z);
  json table = json::array();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    tally.guarded("relative dimension", [&] { return named(ctx, i); }, [&] {
      const ModuleRep& m = ctx.entry(i).module;
      RelativeDim d = projective_side ? z_pd(t, m, cfg.bound, zs) : z_id(t, m, cfg.bound, zs);
      table.push_back({{"module", ctx.entry(i).name}, {"by_resolution", dim_json(d.by_resolution)}, {"by_registry", dim_json(d.by_registry)}});
      if (!d.agree()) {
        tally.violation("resolution and registry criteria disagree",
                        {{"M", named(ctx, i)}, {"by_resolution", dim_json(d.by_resolution)}, {"by_registry", dim_json(d.by_registry)}});
        return;
      }
      if (d.by_resolution.value) {
        const std::size_t n = *d.by_resolution.value;
        for (std::size_t j = 0; j < ctx.size(); ++j) {
          const ExtTable& tab = projective_side ? ctx.ext_table(i, j) : ctx.ext_table(j, i);
          for (std::size_t deg = n + 1; deg < tab.rows.size(); ++deg) {
            if (tab.rows[deg].via_x != 0) {
              tally.violation("relative Ext nonzero beyond the relative dimension",
                              {{"M", named(ctx, i)}, {"other", named(ctx, j)}, {"degree", deg}, {"dimension", n}});
              return;
            }
          }
        }
      }
      tally.ok();
    });
  }
  return tally.finish(projective_side ? "thm_4_6" : "thm_4_7", {{"dimensions", table}, {"bound", cfg.bound}, {"window", 3}});
}

// ---------------------------------------------------------------------------
// cor_4_8 / cor_4_9 over the registry.

inline CheckRecord check_global(const Context& ctx, bool nine) {
  const auto& cfg = ctx.config();
  Tally tally;
  json details;
  tally.guarded("global dimensions", [] { return json::object(); }, [&] {
    GlobalDims g = global_dims(ctx.triple(), ctx.registry().modules(), cfg.bound);
    details = {{"z_pd_sup", dim_json(g.z_pd_sup)}, {"z_id_sup", dim_json(g.z_id_sup)},
               {"pd_sup_over_Z", dim_json(g.pd_sup_z)}, {"id_sup_over_Z", dim_json(g.id_sup_z)}};
    const bool ok = nine ? g.sup_matches_z_members() : g.sups_agree();
    if (ok) tally.ok();
    else tally.violation(nine ? "global dimension differs from pd/id sup over Z" : "Z-pd and Z-id sups differ", details);
  });
  return tally.finish(nine ? "cor_4_9" : "cor_4_8", details.is_null() ? json::object() : details);
}

// ---------------------------------------------------------------------------

inline CheckRecord run_check(const Context& ctx, const std::string& id) {
  if (id == "prop_2_1") return check_prop_2_1(ctx);
  if (id == "prop_2_2") return check_prop_2_2(ctx);
  if (id == "prop_2_5") return check_prop_2_5(ctx);
  if (id == "prop_2_7") return check_prop_2_7(ctx);
  if (id == "thm_3_1_classification") return check_thm_3_1(ctx);
  if (id == "lemma_3_2_agreement") return check_lemma_3_2(ctx);
  if (id == "prop_3_3_formulas") return check_prop_3_3(ctx);
  if (id == "prop_3_4_stability") return check_prop_3_4(ctx);
  if (id == "prop_4_2") return check_prop_4_2(ctx);
  if (id == "def_4_3_balance") return check_balance(ctx);
  if (id == "prop_4_4") return check_prop_4_4(ctx);
  if (id == "prop_4_5_les") return check_prop_4_5(ctx);
  if (id == "thm_4_6") return check_relative_dim(ctx, true);
  if (id == "thm_4_7") return check_relative_dim(ctx, false);
  if (id == "cor_4_8") return check_global(ctx, false);
  if (id == "cor_4_9") return check_global(ctx, true);
  throw ConfigError("unknown check '" + id + "'");
}

/// run_check with timing; an escaping exception fails the record.
inline CheckRecord run_check_timed(const Context& ctx, const std::string& id) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckRecord r;
  try {
    r = run_check(ctx, id);
  } catch (const std::exception& e) {
    Tally tally;
    tally.violation(std::string("check aborted: ") + e.what(), json::object());
    r = tally.finish(id, json::object());
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace cotorsion::harness
