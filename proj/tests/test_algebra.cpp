#include <random>

#include <gtest/gtest.h>

#include "cotorsion/io.hpp"
#include "cotorsion/registry.hpp"

using namespace cotorsion;

namespace {

using Table = std::vector<std::vector<std::vector<long long>>>;

// F_2[x]/(x^2), basis 1, x.
Table dual_numbers() {
  Table t(2, std::vector<std::vector<long long>>(2, std::vector<long long>(2, 0)));
  t[0][0][0] = 1;
  t[0][1][1] = 1;
  t[1][0][1] = 1;
  return t;
}

std::vector<Residue> random_element(std::mt19937_64& rng, const Algebra& a) {
  std::vector<Residue> v(a.dim());
  for (auto& x : v) x = static_cast<Residue>(rng() % a.characteristic());
  return v;
}

}  // namespace

TEST(CheckAlgebra, DualNumbers) {
  auto a = check_algebra(PrimeField{2}, {"1", "x"}, dual_numbers(), {1, 0});
  EXPECT_EQ(a->dim(), 2u);
  std::vector<Residue> x{0, 1};
  EXPECT_EQ(a->multiply(x, x), (std::vector<Residue>{0, 0}));
}

TEST(CheckAlgebra, AssociativityViolationReportsIndices) {
  // Basis 1, a, b with a*a = b, a*b = a, b*a = 0, b*b = 0: (aa)a = ba = 0, a(aa) = ab = a.
  Table t(3, std::vector<std::vector<long long>>(3, std::vector<long long>(3, 0)));
  for (int i = 0; i < 3; ++i) t[0][i][i] = t[i][0][i] = 1;
  t[1][1][2] = 1;
  t[1][2][1] = 1;
  try {
    check_algebra(PrimeField{2}, {}, t, {1, 0, 0});
    FAIL() << "expected AssociativityViolation";
  } catch (const AssociativityViolation& e) {
    EXPECT_EQ(e.i, 1u);
    EXPECT_EQ(e.j, 1u);
    EXPECT_EQ(e.k, 1u);
    EXPECT_NE(std::string(e.what()).find("e_1"), std::string::npos);
  }
}

TEST(CheckAlgebra, UnitViolation) {
  EXPECT_THROW(check_algebra(PrimeField{2}, {}, dual_numbers(), {0, 1}), UnitViolation);
}

TEST(CheckAlgebra, FieldItself) {
  Table t{{{1}}};
  auto a = check_algebra(PrimeField{3}, {"1"}, t, {1});
  EXPECT_EQ(a->dim(), 1u);
  EXPECT_TRUE(a->nilpotent_ideal_is_radical());
}

TEST(CheckAlgebra, RejectsBadCharacteristic) {
  EXPECT_THROW(check_algebra(PrimeField{4}, {}, Table{{{1}}}, {1}), AlgebraError);
}

TEST(Builders, Dimensions) {
  EXPECT_EQ(truncated_poly(2, 2)->dim(), 2u);
  auto a2 = path_algebra_acyclic(2, {{0, 1, "a"}}, 2);
  EXPECT_EQ(a2->dim(), 3u);
  EXPECT_EQ(triangular2(*truncated_poly(2, 2))->dim(), 6u);
  EXPECT_EQ(builtin_algebra("A3", 3)->characteristic(), 3u);
}

TEST(Builders, RadicalIsDetected) {
  for (const auto& name : builtin_algebra_names()) {
    auto a = builtin_algebra(name);
    EXPECT_TRUE(a->nilpotent_ideal_is_radical()) << name;
  }
  // dim(rad) by hand: A1 -> 1 (x), A2 -> 1 (the arrow), A3 -> 4 (T2 of a local algebra of radical length 2).
  EXPECT_EQ(builtin_algebra("A1")->nilpotent_ideal().cols(), 1u);
  EXPECT_EQ(builtin_algebra("A2")->nilpotent_ideal().cols(), 1u);
  EXPECT_EQ(builtin_algebra("A3")->nilpotent_ideal().cols(), 4u);
}

TEST(AlgebraProperty, AssociativeWithUnit) {
  std::mt19937_64 rng(7);
  for (Residue p : {2u, 3u}) {
    for (const auto& name : builtin_algebra_names()) {
      auto a = builtin_algebra(name, p);
      for (int t = 0; t < 25; ++t) {
        auto x = random_element(rng, *a), y = random_element(rng, *a), z = random_element(rng, *a);
        EXPECT_EQ(a->multiply(a->multiply(x, y), z), a->multiply(x, a->multiply(y, z)));
        EXPECT_EQ(a->multiply(a->unit(), x), x);
        EXPECT_EQ(a->multiply(x, a->unit()), x);
      }
    }
  }
}

TEST(AlgebraProperty, OppositeReversesProducts) {
  std::mt19937_64 rng(8);
  for (const auto& name : builtin_algebra_names()) {
    auto a = builtin_algebra(name, 3);
    auto op = a->opposite();
    EXPECT_TRUE(op->opposite()->same_as(*a));
    for (int t = 0; t < 25; ++t) {
      auto x = random_element(rng, *a), y = random_element(rng, *a);
      EXPECT_EQ(op->multiply(x, y), a->multiply(y, x));
    }
  }
}

TEST(AlgebraIo, RoundTrip) {
  for (const auto& name : builtin_algebra_names()) {
    auto a = builtin_algebra(name, 5);
    auto b = algebra_from_json(algebra_to_json(*a));
    EXPECT_TRUE(b->same_as(*a)) << name;
  }
}

TEST(AlgebraIo, MalformedInput) {
  EXPECT_THROW(algebra_from_json(json{{"char", 2}}), AlgebraLoadError);
  json j = algebra_to_json(*builtin_algebra("A1"));
  j["dim"] = 3;
  EXPECT_THROW(algebra_from_json(j), AlgebraLoadError);
  EXPECT_THROW(load_algebra_file("/nonexistent/algebra.json"), AlgebraLoadError);
}
