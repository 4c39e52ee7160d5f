#include <gtest/gtest.h>

#include "common.hpp"

using namespace cotorsion;
using namespace testing_support;

namespace {

const ModuleRep& k() { return mod("A1", "k"); }
const ModuleRep& a1() { return mod("A1", "A"); }

}  // namespace

TEST(FreeCover, Examples) {
  auto c = free_cover(a1());
  EXPECT_EQ(c.middle().dim(), 2u);
  EXPECT_EQ(c.first().dim(), 0u);
  auto z = free_cover(ModuleRep::zero(a1().algebra()));
  EXPECT_EQ(z.middle().dim(), 0u);
  auto ck = free_cover(k());
  EXPECT_TRUE(ck.is_exact());
  EXPECT_EQ(ck.middle().dim(), 2u);
  EXPECT_EQ(is_isomorphic(ck.first(), k()).verdict, IsoVerdict::yes);
}

TEST(Syzygy, Examples) {
  EXPECT_EQ(syzygy(a1(), 1).dim(), 0u);
  for (std::size_t i = 1; i <= 5; ++i) EXPECT_EQ(is_isomorphic(syzygy(k(), i), k()).verdict, IsoVerdict::yes) << i;
}

TEST(ExtDim, Examples) {
  for (const auto& m : registry("A1").modules())
    for (std::size_t i = 1; i <= 3; ++i) EXPECT_EQ(ext_dim(a1(), m, i), 0u);
  for (std::size_t i = 0; i <= 6; ++i) EXPECT_EQ(ext_dim(k(), k(), i), 1u) << i;
  EXPECT_EQ(ext_dim(mod("A2", "S1"), mod("A2", "S2"), 1), 1u);
  EXPECT_EQ(ext_dim(mod("A2", "S2"), mod("A2", "S1"), 1), 0u);
}

TEST(Projectivity, Examples) {
  EXPECT_TRUE(is_projective(a1()));
  EXPECT_FALSE(is_projective(k()));
  EXPECT_TRUE(is_injective(a1()));
  EXPECT_TRUE(is_projective(mod("A2", "S2")));
  EXPECT_FALSE(is_injective(mod("A2", "S2")));
}

TEST(ProjDim, Examples) {
  EXPECT_EQ(proj_dim(a1(), 3).value, 0u);
  auto pk = proj_dim(k(), 10);
  EXPECT_TRUE(pk.exceeds_bound());
  EXPECT_EQ(pk.str(), "ExceedsBound(10)");
  EXPECT_EQ(proj_dim(mod("A2", "S1"), 10).value, 1u);
  EXPECT_EQ(inj_dim(mod("A2", "S2"), 10).value, 1u);
}

TEST(ResolutionProperty, ExtAgreesAcrossRoutes) {
  // Oracle: Ext via an injective coresolution of the second argument.
  for (const char* alg : {"A1", "A2", "A3"}) {
    auto pool = module_pool(alg, 31, 2);
    for (std::size_t i = 0; i < pool.size(); i += 2)
      for (std::size_t j = 1; j < pool.size(); j += 2) {
        auto co = ext_dims_via_coresolution(pool[i], pool[j], 3);
        for (std::size_t d = 0; d <= 3; ++d) ASSERT_EQ(ext_dim(pool[i], pool[j], d), co[d]) << alg << " " << d;
      }
  }
}

TEST(ResolutionProperty, DimensionShift) {
  for (const char* alg : {"A2", "A3"}) {
    auto pool = module_pool(alg, 32, 2);
    for (std::size_t i = 0; i < pool.size(); i += 3)
      for (std::size_t j = 0; j < pool.size(); j += 4) {
        ModuleRep om = syzygy(pool[i], 1);
        for (std::size_t d = 1; d <= 2; ++d) EXPECT_EQ(ext_dim(pool[i], pool[j], d + 1), ext_dim(om, pool[j], d));
        EXPECT_EQ(ext_dim(pool[i], pool[j], 0), hom_space(pool[i], pool[j]).size());
      }
  }
}

TEST(ResolutionProperty, ResolutionsAreValid) {
  for (const char* alg : {"A1", "A2", "A3"}) {
    for (const auto& m : registry(alg).modules()) {
      Resolution r = free_resolution(m, 3);
      EXPECT_TRUE(r.is_valid());
      for (std::size_t i = 0; i < r.length(); ++i) EXPECT_TRUE(is_projective(r.term(i)));
      for (std::size_t i = 0; i + 2 < r.length(); ++i)
        EXPECT_TRUE(r.differential(i).after(r.differential(i + 1)).is_zero());
      Resolution co = injective_coresolution(m, 2);
      EXPECT_TRUE(co.is_valid());
      for (std::size_t i = 0; i < co.length(); ++i) EXPECT_TRUE(is_injective(co.term(i)));
    }
  }
}

TEST(ResolutionProperty, ProjDimMatchesExtVanishing) {
  // pd M = largest i with Ext^i(M, S) != 0 for a simple S (A2 has global dimension 1).
  const auto& reg = registry("A2");
  for (const auto& m : reg.modules()) {
    std::size_t top = 0;
    for (const char* s : {"S1", "S2"})
      for (std::size_t i = 0; i <= 3; ++i)
        if (ext_dim(m, reg.get(s), i)) top = std::max(top, i);
    EXPECT_EQ(proj_dim(m, 10).value, top);
  }
}
