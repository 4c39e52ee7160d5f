#include <gtest/gtest.h>

#include "common.hpp"
#include "cotorsion/triple.hpp"

using namespace cotorsion;
using namespace testing_support;

namespace {

TriplePtr trivial(const char* alg) { return CotorsionTriple::trivial(registry(alg).algebra()); }
TriplePtr gorenstein(const char* alg) { return CotorsionTriple::gorenstein(registry(alg).algebra()); }

// k[x, y]/(x, y)^2: local, radical square zero, not Gorenstein.
AlgebraPtr square_zero_two_loops() {
  std::vector<std::vector<std::vector<long long>>> t(3, std::vector<std::vector<long long>>(3, std::vector<long long>(3, 0)));
  for (int i = 0; i < 3; ++i) t[0][i][i] = t[i][0][i] = 1;
  return check_algebra(PrimeField{2}, {"1", "x", "y"}, t, {1, 0, 0});
}

}  // namespace

TEST(TrivialTriple, Examples) {
  auto t = trivial("A1");
  EXPECT_FALSE(t->in_X(mod("A1", "k")));
  EXPECT_TRUE(t->in_Z(mod("A1", "k")));
  for (const char* alg : {"A1", "A2", "A3"}) {
    auto tt = trivial(alg);
    EXPECT_TRUE(tt->in_X(mod(alg, "A")));
    EXPECT_TRUE(tt->in_Y(dual_module(mod(alg, "A"))));
    for (const auto& m : registry(alg).modules()) {
      auto a = tt->right_X_approx(m);
      EXPECT_EQ(a.middle().dim(), free_cover(m).middle().dim());
      EXPECT_TRUE(is_projective(a.middle()));
      auto b = tt->left_Y_approx(m);
      EXPECT_TRUE(is_injective(b.middle()));
    }
  }
}

TEST(GorensteinTriple, A1) {
  auto t = gorenstein("A1");
  EXPECT_EQ(t->gorenstein_d(), 0u);
  for (const auto& m : registry("A1").modules()) {
    EXPECT_TRUE(t->in_X(m));
    EXPECT_TRUE(t->in_Y(m));
    EXPECT_EQ(t->in_Z(m), is_projective(m));
    auto a = t->right_X_approx(m);
    EXPECT_TRUE(a.first_certified && a.second_certified);
  }
}

TEST(GorensteinTriple, A2CoincidesWithTrivial) {
  auto g = gorenstein("A2");
  auto t = trivial("A2");
  EXPECT_LE(g->gorenstein_d(), 1u);
  for (const auto& m : registry("A2").modules()) {
    EXPECT_TRUE(g->in_Z(m));
    for (auto c : {ModuleClass::X, ModuleClass::Z, ModuleClass::Y}) EXPECT_EQ(g->in(c, m), t->in(c, m));
  }
}

TEST(GorensteinTriple, A3) {
  auto t = gorenstein("A3");
  EXPECT_EQ(t->gorenstein_d(), 1u);
  bool found = false;
  for (const auto& m : registry("A3").modules()) found = found || (t->in_X(m) && !is_projective(m));
  EXPECT_TRUE(found) << "no Gorenstein projective non-projective module in the registry";
  for (const char* s : {"S1", "S2"}) {
    auto r = t->right_X_approx(mod("A3", s));
    EXPECT_TRUE(r.seq.is_exact());
    EXPECT_TRUE(t->in_X(r.middle()));
    EXPECT_TRUE(proj_dim(r.first(), 1).at_most(1));
    auto l = t->left_Y_approx(mod("A3", s));
    EXPECT_TRUE(l.seq.is_exact());
    EXPECT_TRUE(t->in_Y(l.middle()));
    EXPECT_TRUE(t->in_Z(l.last()));
    auto lz = t->salce_left_Z_approx(mod("A3", s));
    EXPECT_TRUE(proj_dim(lz.middle(), 1).at_most(1));
    EXPECT_TRUE(t->in_X(lz.last()));
    auto rz = t->salce_right_Z_approx(mod("A3", s));
    EXPECT_TRUE(t->in_Z(rz.middle()));
    EXPECT_TRUE(t->in_Y(rz.first()));
  }
}

TEST(GorensteinTriple, NotGorensteinWithinBound) {
  EXPECT_THROW(CotorsionTriple::gorenstein(square_zero_two_loops(), 4), NotGorensteinWithinBound);
}

TEST(SalceApprox, InjectiveAndTrivialCases) {
  auto g = gorenstein("A3");
  const auto& inj = mod("A3", "DA");
  auto a = g->salce_left_Z_approx(inj);
  EXPECT_EQ(a.middle().dim(), inj.dim());
  EXPECT_EQ(a.last().dim(), 0u);
  auto t = trivial("A2");
  for (const auto& m : registry("A2").modules()) {
    auto s = t->salce_left_Z_approx(m);
    EXPECT_TRUE(s.seq.is_exact());
    EXPECT_TRUE(is_projective(s.last()));
  }
}

TEST(Lifting, ZeroAlphaLiftsToZero) {
  auto t = gorenstein("A3");
  const auto& m = mod("A3", "S1");
  auto approx = t->left_Y_approx(mod("A3", "S2"));
  auto beta = lift_through_left_approx(approx, ModuleMap::zero(m, approx.last()));
  ASSERT_TRUE(beta.has_value());
  EXPECT_TRUE(approx.seq.right.after(*beta).is_zero());
  auto rx = t->right_X_approx(mod("A3", "S2"));
  auto ext = extend_through_right_approx(rx, ModuleMap::zero(rx.first(), m));
  ASSERT_TRUE(ext.has_value());
  EXPECT_TRUE(ext->after(rx.seq.left).is_zero());
}

TEST(Lifting, A1WitnessesForK) {
  // Trivial triple over A1: 0 -> k -> A1 -> k -> 0 is both approximations of k;
  // every composite k -> A1 -> k vanishes, so id_k neither lifts nor extends.
  auto t = trivial("A1");
  const auto& k = mod("A1", "k");
  auto ly = t->left_Y_approx(k);
  ASSERT_EQ(ly.middle().dim(), 2u);
  EXPECT_FALSE(lift_through_left_approx(ly, ModuleMap::identity(ly.last())).has_value());
  auto rx = t->right_X_approx(k);
  ASSERT_EQ(rx.middle().dim(), 2u);
  EXPECT_FALSE(extend_through_right_approx(rx, ModuleMap::identity(rx.first())).has_value());
}

TEST(TripleProperty, PinchingAndOrthogonality) {
  for (const char* alg : {"A1", "A2", "A3"}) {
    for (const auto& t : {trivial(alg), gorenstein(alg)}) {
      const auto mods = registry(alg).modules();
      for (const auto& m : mods) {
        EXPECT_EQ(t->in_X(m) && t->in_Z(m), is_projective(m)) << alg << " " << t->name();
        EXPECT_EQ(t->in_Z(m) && t->in_Y(m), is_injective(m)) << alg << " " << t->name();
      }
      for (const auto& x : mods) {
        if (!t->in_X(x)) continue;
        for (const auto& z : mods) {
          if (!t->in_Z(z)) continue;
          for (std::size_t i = 1; i <= 3; ++i) EXPECT_EQ(ext_dim(x, z, i), 0u);
        }
      }
      for (const auto& z : mods) {
        if (!t->in_Z(z)) continue;
        for (const auto& y : mods) {
          if (!t->in_Y(y)) continue;
          for (std::size_t i = 1; i <= 3; ++i) EXPECT_EQ(ext_dim(z, y, i), 0u);
        }
      }
    }
  }
}

TEST(TripleProperty, ApproximationsLiftAndExtend) {
  // X-members lift against left Y-approximations; Y-members extend along right X-approximations.
  for (const char* alg : {"A2", "A3"}) {
    auto t = gorenstein(alg);
    const auto mods = registry(alg).modules();
    for (const auto& n : mods) {
      auto ly = t->left_Y_approx(n);
      auto rx = t->right_X_approx(n);
      for (const auto& m : mods) {
        if (t->in_X(m)) {
          for (const auto& a : hom_space(m, ly.last())) EXPECT_TRUE(lift_through_left_approx(ly, a).has_value());
        }
        if (t->in_Y(m)) {
          for (const auto& a : hom_space(rx.first(), m)) EXPECT_TRUE(extend_through_right_approx(rx, a).has_value());
        }
      }
    }
  }
}

TEST(TripleProperty, ApproximationCacheReturnsSameSequence) {
  auto t = gorenstein("A3");
  const auto& m = mod("A3", "syz1(S2)");
  auto a = t->right_X_approx(m);
  auto b = t->right_X_approx(m);
  EXPECT_EQ(a.seq.left.matrix(), b.seq.left.matrix());
  EXPECT_EQ(a.seq.right.matrix(), b.seq.right.matrix());
  EXPECT_TRUE(b.last().shares_cache(m));
}
