#include <gtest/gtest.h>

#include "common.hpp"
#include "cotorsion/relative.hpp"

using namespace cotorsion;
using namespace testing_support;

namespace {

TriplePtr trivial(const char* alg) { return CotorsionTriple::trivial(registry(alg).algebra()); }
TriplePtr gorenstein(const char* alg) { return CotorsionTriple::gorenstein(registry(alg).algebra()); }

std::vector<ModuleRep> members(const CotorsionTriple& t, ModuleClass c, const char* alg) {
  std::vector<ModuleRep> out;
  for (const auto& m : registry(alg).modules())
    if (t.in(c, m)) out.push_back(m);
  return out;
}

}  // namespace

TEST(ExtXY, TrivialTripleIsAbsoluteExt) {
  for (const char* alg : {"A1", "A2", "A3"}) {
    auto t = trivial(alg);
    const auto mods = registry(alg).modules();
    for (std::size_t i = 0; i < mods.size(); i += 2)
      for (std::size_t j = 1; j < mods.size(); j += 3) {
        auto tab = ext_xy(*t, mods[i], mods[j], 3);
        for (const auto& r : tab.rows) {
          EXPECT_EQ(r.via_x, r.absolute) << alg;
          EXPECT_EQ(r.via_y, r.absolute) << alg;
        }
      }
  }
}

TEST(ExtXY, A1GorensteinSimple) {
  auto t = gorenstein("A1");
  auto tab = ext_xy(*t, mod("A1", "k"), mod("A1", "k"), 4);
  ASSERT_EQ(tab.rows.size(), 5u);
  EXPECT_EQ(tab.rows[0].via_x, 1u);
  for (std::size_t i = 1; i <= 4; ++i) {
    EXPECT_EQ(tab.rows[i].via_x, 0u);
    EXPECT_EQ(tab.rows[i].via_y, 0u);
    EXPECT_EQ(tab.rows[i].absolute, 1u);
  }
}

TEST(ExtXY, VanishesAgainstZInjectiveArgument) {
  // N in Y: proper Y-coresolution is N itself, so Ext_XY^i(-, N) = 0 for i >= 1.
  for (const char* alg : {"A2", "A3"}) {
    auto t = gorenstein(alg);
    for (const auto& n : members(*t, ModuleClass::Y, alg))
      for (const auto& m : registry(alg).modules()) {
        auto tab = ext_xy(*t, m, n, 2);
        EXPECT_EQ(tab.rows[0].via_x, hom_space(m, n).size());
        for (std::size_t i = 1; i < tab.rows.size(); ++i) EXPECT_EQ(tab.rows[i].via_x, 0u);
      }
  }
}

TEST(ExtXY, BalanceProperty) {
  for (const char* alg : {"A1", "A2", "A3"}) {
    for (const auto& t : {trivial(alg), gorenstein(alg)}) {
      auto pool = module_pool(alg, 41, 2);
      for (std::size_t i = 0; i < pool.size(); i += 3)
        for (std::size_t j = 1; j < pool.size(); j += 4) {
          ExtTable tab;
          ASSERT_NO_THROW(tab = ext_xy(*t, pool[i], pool[j], 2, false));
          EXPECT_TRUE(tab.balanced()) << alg << " " << t->name();
          // Hom in degree 0 regardless of the triple.
          EXPECT_EQ(tab.rows[0].via_x, hom_space(pool[i], pool[j]).size());
        }
    }
  }
}

TEST(ZDims, Examples) {
  auto t = trivial("A1");
  auto k = z_pd(*t, mod("A1", "k"), 10);
  EXPECT_TRUE(k.by_resolution.exceeds_bound());
  EXPECT_EQ(k.by_resolution.str(), "ExceedsBound(10)");
  auto g = gorenstein("A3");
  const auto zs = members(*g, ModuleClass::Z, "A3");
  for (const auto& m : registry("A3").modules()) {
    auto pd = z_pd(*g, m, 4, zs);
    auto id = z_id(*g, m, 4, zs);
    EXPECT_TRUE(pd.by_resolution.at_most(1));
    EXPECT_TRUE(id.by_resolution.at_most(1));
    EXPECT_TRUE(pd.agree());
    EXPECT_TRUE(id.agree());
    EXPECT_EQ(*pd.by_resolution.value == 0, g->in_X(m));
    EXPECT_EQ(*id.by_resolution.value == 0, g->in_Y(m));
  }
}

TEST(ZDims, AgreeOnTrivialA2) {
  // Trivial triple: Z-pd is pd, Z-id is id.
  auto t = trivial("A2");
  const auto all = registry("A2").modules();
  for (const auto& m : all) {
    auto pd = z_pd(*t, m, 5, all);
    EXPECT_EQ(pd.by_resolution, proj_dim(m, 5));
    EXPECT_TRUE(pd.agree());
    auto id = z_id(*t, m, 5, all);
    EXPECT_EQ(id.by_resolution, inj_dim(m, 5));
  }
}

TEST(Degenerate, Examples) {
  for (const char* alg : {"A1", "A2", "A3"}) {
    auto g = gorenstein(alg);
    const auto xs = members(*g, ModuleClass::X, alg);
    const auto ys = members(*g, ModuleClass::Y, alg);
    for (const auto& m : registry(alg).modules()) {
      auto r = xy_degenerate_dims(m, xs, ys, 5);
      EXPECT_TRUE(r.ok()) << alg << " " << r.x_id.str() << " " << r.y_pd.str();
    }
  }
  // Over A1 every module is in X: Ext^i(X, k) != 0 for all i, so id_X(k) is infinite.
  auto g = gorenstein("A1");
  auto r = xy_degenerate_dims(mod("A1", "k"), members(*g, ModuleClass::X, "A1"), {}, 5);
  EXPECT_EQ(r.x_horn, DegenerateHorn::infinite_within_bound);
  EXPECT_EQ(r.y_horn, DegenerateHorn::zero);
}

TEST(Les, ExactOnApproximationSequences) {
  auto g = gorenstein("A3");
  const auto xs = members(*g, ModuleClass::X, "A3");
  const auto ys = members(*g, ModuleClass::Y, "A3");
  for (const char* s : {"S1", "S2", "syz1(S2)"}) {
    auto rx = g->right_X_approx(mod("A3", s));
    for (const char* n : {"S1", "S2"}) {
      auto rep = les_check(*g, rx.seq, mod("A3", n), LesVariant::first, 2, xs);
      EXPECT_TRUE(rep.exact()) << s << " " << rep.first_failure().value_or("");
    }
    auto ly = g->left_Y_approx(mod("A3", s));
    auto rep = les_check(*g, ly.seq, mod("A3", "S1"), LesVariant::second, 2, ys);
    EXPECT_TRUE(rep.exact()) << s << " " << rep.first_failure().value_or("");
  }
}

TEST(Les, ExactOnSplitSequences) {
  auto t = trivial("A2");
  const auto& a = mod("A2", "S1");
  const auto& b = mod("A2", "P1");
  auto ds = direct_sum_with_maps(a, b);
  ShortExactSeq ses{ds.in1, ds.pr2};
  auto rep = les_check(*t, ses, mod("A2", "S2"), LesVariant::first, 2, registry("A2").modules());
  EXPECT_TRUE(rep.exact());
  // Split sequences: every connecting map vanishes.
  for (const auto& d : rep.connecting) EXPECT_TRUE(d.is_zero());
}

TEST(Les, RejectsImproperSequence) {
  // 0 -> k -> A1 -> k -> 0 is not Hom(k, -)-exact; k is in X for the Gorenstein triple.
  auto g = gorenstein("A1");
  auto proper_test = members(*g, ModuleClass::X, "A1");
  auto cover = free_cover(mod("A1", "k"));
  EXPECT_THROW(les_check(*g, cover, mod("A1", "k"), LesVariant::first, 1, proper_test), PreconditionViolation);
}

TEST(GlobalDims, Examples) {
  const std::pair<const char*, std::size_t> expected[] = {{"A1", 0}, {"A2", 1}, {"A3", 1}};
  for (auto [alg, d] : expected) {
    auto g = gorenstein(alg);
    auto gd = global_dims(*g, registry(alg).modules(), 5);
    EXPECT_EQ(gd.z_pd_sup.value, d) << alg;
    EXPECT_EQ(gd.z_id_sup.value, d) << alg;
    EXPECT_TRUE(gd.sups_agree()) << alg;
    EXPECT_TRUE(gd.sup_matches_z_members()) << alg;
  }
  auto gd = global_dims(*trivial("A1"), registry("A1").modules(), 5);
  EXPECT_TRUE(gd.z_pd_sup.exceeds_bound());
  EXPECT_TRUE(gd.sups_agree());
}
