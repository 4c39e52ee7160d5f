#include <gtest/gtest.h>

#include "common.hpp"
#include "cotorsion/model.hpp"

using namespace cotorsion;
using namespace testing_support;

namespace {

TriplePtr trivial(const char* alg) { return CotorsionTriple::trivial(registry(alg).algebra()); }
TriplePtr gorenstein(const char* alg) { return CotorsionTriple::gorenstein(registry(alg).algebra()); }

ModuleMap socle_embedding() { return hom_space(mod("A1", "k"), mod("A1", "A")).front(); }

constexpr ModelStructure kBoth[] = {ModelStructure::projective, ModelStructure::injective};

}  // namespace

TEST(Classify, Identity) {
  for (const char* alg : {"A1", "A3"}) {
    auto t = gorenstein(alg);
    for (const auto& m : registry(alg).modules())
      for (auto s : kBoth) {
        auto c = classify_map(*t, ModuleMap::identity(m), s);
        EXPECT_TRUE(c.weak_equivalence);
        EXPECT_TRUE(c.trivial_cofibration && c.trivial_fibration);
        EXPECT_TRUE(c.coherent());
      }
  }
}

TEST(Classify, ZeroToModuleIsCofibrationIffInX) {
  for (const char* alg : {"A1", "A2", "A3"}) {
    auto t = gorenstein(alg);
    for (const auto& m : registry(alg).modules()) {
      auto z = ModuleMap::zero(ModuleRep::zero(m.algebra()), m);
      EXPECT_EQ(classify_map(*t, z, ModelStructure::projective).cofibration, t->in_X(m)) << alg;
      auto to0 = ModuleMap::zero(m, ModuleRep::zero(m.algebra()));
      EXPECT_EQ(classify_map(*t, to0, ModelStructure::injective).fibration, t->in_Y(m)) << alg;
    }
  }
}

TEST(Classify, SocleEmbeddingIsNotWeakEquivalence) {
  auto f = socle_embedding();
  ASSERT_TRUE(f.is_mono());
  auto c = classify_map(*gorenstein("A1"), f, ModelStructure::projective);
  EXPECT_TRUE(c.cofibration);
  EXPECT_FALSE(c.weak_equivalence);
  EXPECT_FALSE(c.witness.empty());
  EXPECT_TRUE(c.coherent());
  // Trivial triple: Z is everything, so every map is a weak equivalence.
  EXPECT_TRUE(classify_map(*trivial("A1"), f, ModelStructure::projective).weak_equivalence);
}

TEST(Factorization, SocleEmbedding) {
  auto t = gorenstein("A1");
  auto f = socle_embedding();
  for (auto s : kBoth) {
    auto a = factor_trivcofib_fib(*t, f, s);
    std::string why;
    EXPECT_TRUE(certify_factorization(*t, a, &why)) << why;
    auto b = factor_cofib_trivfib(*t, f, s);
    EXPECT_TRUE(certify_factorization(*t, b, &why)) << why;
  }
  // C = k + A1.
  auto c = factor_trivcofib_fib(*t, f, ModelStructure::projective);
  EXPECT_EQ(c.middle.dim(), 3u);
  EXPECT_TRUE(classify_map(*t, c.p, ModelStructure::projective).fibration);
}

TEST(Factorization, RandomMapsCertify) {
  Rng rng(51);
  for (const char* alg : {"A2", "A3"}) {
    auto t = gorenstein(alg);
    auto pool = module_pool(alg, 52, 2);
    int done = 0;
    for (int trial = 0; trial < 60 && done < 12; ++trial) {
      const auto& m = pool[uniform_index(rng, pool.size())];
      const auto& n = pool[uniform_index(rng, pool.size())];
      if (m.dim() + n.dim() > 14) continue;
      HomSpace h(m, n);
      ModuleMap f = h.dim() ? random_map(rng, h) : ModuleMap::zero(m, n);
      for (auto s : kBoth) {
        std::string why;
        EXPECT_TRUE(certify_factorization(*t, factor_trivcofib_fib(*t, f, s), &why)) << alg << " " << why;
        EXPECT_TRUE(certify_factorization(*t, factor_cofib_trivfib(*t, f, s), &why)) << alg << " " << why;
      }
      ++done;
    }
    EXPECT_GT(done, 5);
  }
}

TEST(HoHom, Examples) {
  auto g = gorenstein("A1");
  const auto& k = mod("A1", "k");
  const auto& a = mod("A1", "A");
  EXPECT_EQ(ho_hom(*g, k, k).via_injective, 1u);
  for (const auto& n : registry("A1").modules()) {
    EXPECT_EQ(ho_hom(*g, a, n).via_injective, 0u);
    EXPECT_EQ(ho_hom(*g, n, a).via_injective, 0u);
  }
  // Trivial triple: Y consists of injectives, so every map is null-homotopic.
  auto t = trivial("A1");
  for (const auto& m : registry("A1").modules())
    for (const auto& n : registry("A1").modules()) EXPECT_EQ(ho_hom(*t, m, n).via_injective, 0u);
}

TEST(HoHom, TwoFormulasAgree) {
  Rng rng(53);
  for (const char* alg : {"A1", "A2", "A3"}) {
    for (const auto& t : {trivial(alg), gorenstein(alg)}) {
      auto pool = module_pool(alg, 54, 2);
      for (int trial = 0; trial < 10; ++trial) {
        const auto& m = pool[uniform_index(rng, pool.size())];
        const auto& n = pool[uniform_index(rng, pool.size())];
        HoHom h;
        ASSERT_NO_THROW(h = ho_hom(*t, m, n)) << alg << " " << t->name();
        EXPECT_TRUE(h.agree());
        EXPECT_EQ(h.representatives.size(), h.via_injective);
      }
    }
  }
}

TEST(Homotopic, Examples) {
  auto g = gorenstein("A1");
  const auto& k = mod("A1", "k");
  const auto& a = mod("A1", "A");
  auto r = homotopic(*g, ModuleMap::identity(k), ModuleMap::identity(k));
  EXPECT_TRUE(r.homotopic && r.cylinder_verified);
  EXPECT_FALSE(homotopic(*g, ModuleMap::identity(k), ModuleMap::zero(k, k)).homotopic);
  auto ra = homotopic(*g, ModuleMap::identity(a), ModuleMap::zero(a, a));
  EXPECT_TRUE(ra.homotopic && ra.cylinder_verified);
  // A map factoring through an injective is homotopic to zero.
  auto sq = hom_space(a, k).front().after(socle_embedding());
  EXPECT_TRUE(homotopic(*g, sq, ModuleMap::zero(k, k)).homotopic);
  EXPECT_THROW(homotopic(*trivial("A1"), ModuleMap::identity(k), ModuleMap::identity(k)), PreconditionViolation);
}

TEST(Stable, Examples) {
  auto g = gorenstein("A1");
  const auto& k = mod("A1", "k");
  EXPECT_EQ(stable_equivalent(*g, k, k, StableSide::x_side).verdict, IsoVerdict::yes);
  EXPECT_EQ(stable_equivalent(*g, k, mod("A1", "k+A"), StableSide::x_side).verdict, IsoVerdict::yes);
  auto no = stable_equivalent(*g, k, mod("A1", "A"), StableSide::x_side);
  EXPECT_EQ(no.verdict, IsoVerdict::no);
  EXPECT_FALSE(no.witness.empty());
  EXPECT_EQ(stable_equivalent(*g, k, mod("A1", "k+A"), StableSide::y_side).verdict, IsoVerdict::yes);

  auto g3 = gorenstein("A3");
  const auto& s1 = mod("A3", "S1");
  auto padded = direct_sum(s1, mod("A3", "P2"));
  auto r = stable_equivalent(*g3, s1, padded, StableSide::x_side);
  EXPECT_EQ(r.verdict, IsoVerdict::yes);
  EXPECT_TRUE(r.replayed);
  EXPECT_EQ(stable_equivalent(*g3, s1, mod("A3", "A"), StableSide::x_side).verdict, IsoVerdict::no);
}

TEST(Lifting, IdentitySquares) {
  auto g = gorenstein("A3");
  for (const auto& m : registry("A3").modules()) {
    auto id = ModuleMap::identity(m);
    for (auto s : kBoth) {
      auto h = solve_lifting(*g, {id, id, id, id}, s);
      EXPECT_EQ(h.matrix(), id.matrix());
    }
  }
}

TEST(Lifting, RandomCertifiedSquares) {
  // i: trivial cofibration, p: fibration, both from factorizations; top random,
  // bottom an extension of p o top along i.
  Rng rng(55);
  auto t = gorenstein("A3");
  auto pool = module_pool("A3", 56, 2);
  int solved = 0;
  for (int trial = 0; trial < 80 && solved < 8; ++trial) {
    const auto& a = pool[uniform_index(rng, pool.size())];
    const auto& b = pool[uniform_index(rng, pool.size())];
    const auto& c = pool[uniform_index(rng, pool.size())];
    const auto& d = pool[uniform_index(rng, pool.size())];
    if (a.dim() + b.dim() > 10 || c.dim() + d.dim() > 10) continue;
    auto s = trial % 2 ? ModelStructure::projective : ModelStructure::injective;
    HomSpace hab(a, b), hcd(c, d);
    ModuleMap f1 = hab.dim() ? random_map(rng, hab) : ModuleMap::zero(a, b);
    ModuleMap f2 = hcd.dim() ? random_map(rng, hcd) : ModuleMap::zero(c, d);
    auto fi = factor_trivcofib_fib(*t, f1, s);
    auto fp = factor_trivcofib_fib(*t, f2, s);
    if (fi.middle.dim() > 24 || fp.middle.dim() > 24) continue;
    HomSpace htop(a, fp.middle);
    if (!htop.dim()) continue;
    ModuleMap top = random_map(rng, htop);
    auto bottom = factor_through_pre(fi.i, fp.p.after(top));
    if (!bottom) continue;
    ModuleMap h = solve_lifting(*t, {fi.i, fp.p, top, *bottom}, s);
    EXPECT_EQ(h.after(fi.i).matrix(), top.matrix());
    EXPECT_EQ(fp.p.after(h).matrix(), bottom->matrix());
    ++solved;
  }
  EXPECT_GT(solved, 3);
}

TEST(Lifting, RejectsUncertifiedSquare) {
  auto t = trivial("A1");
  auto f = socle_embedding();
  const auto& k = mod("A1", "k");
  auto to_k = hom_space(mod("A1", "A"), k).front();
  // k -> A is not a cofibration in the projective structure of the trivial triple.
  EXPECT_THROW(solve_lifting(*t, {f, ModuleMap::identity(k), ModuleMap::identity(k), to_k}, ModelStructure::projective),
               PreconditionViolation);
}
