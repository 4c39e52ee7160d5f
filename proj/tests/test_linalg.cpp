#include <random>
#include <set>

#include <gtest/gtest.h>

#include "cotorsion/linalg.hpp"

using namespace cotorsion;

namespace {

const PrimeField F2{2};

Matrix random_matrix(std::mt19937_64& rng, PrimeField f, std::size_t r, std::size_t c) {
  Matrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<Residue>(rng() % f.p);
  return m;
}

// Brute force: size of the column space by enumerating all combinations.
std::size_t rank_by_enumeration(const Matrix& m) {
  const std::size_t p = m.field().p;
  std::set<std::vector<Residue>> images;
  std::vector<Residue> c(m.cols(), 0);
  while (true) {
    images.insert(m * std::span<const Residue>(c));
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == p) c[i++] = 0;
    if (i == c.size()) break;
  }
  std::size_t r = 0, n = 1;
  while (n < images.size()) n *= p, ++r;
  return r;
}

}  // namespace

TEST(Rref, Identity) {
  auto r = rref(Matrix::identity(F2, 2));
  EXPECT_EQ(r.reduced, Matrix::identity(F2, 2));
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.rank, 2u);
}

TEST(Rref, Zero) {
  auto r = rref(Matrix(F2, 3, 4));
  EXPECT_TRUE(r.reduced.is_zero());
  EXPECT_TRUE(r.pivots.empty());
  EXPECT_EQ(r.rank, 0u);
}

TEST(Rref, AllOnes) {
  auto r = rref(Matrix::from_rows(F2, {{1, 1}, {1, 1}}));
  EXPECT_EQ(r.reduced, Matrix::from_rows(F2, {{1, 1}, {0, 0}}));
  EXPECT_EQ(r.rank, 1u);
}

TEST(KernelBasis, Examples) {
  EXPECT_TRUE(kernel_basis(Matrix::identity(F2, 3)).empty());
  EXPECT_EQ(kernel_basis(Matrix(F2, 3, 3)).size(), 3u);
  auto k = kernel_basis(Matrix::from_rows(F2, {{1, 1}}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (std::vector<Residue>{1, 1}));
}

TEST(Solve, Examples) {
  std::vector<Residue> b{1, 0, 1};
  EXPECT_EQ(solve(Matrix::identity(F2, 3), b), b);
  EXPECT_FALSE(solve(Matrix(F2, 3, 3), b).has_value());
  std::vector<Residue> b2{0, 1};
  EXPECT_EQ(solve(Matrix::from_rows(F2, {{1, 1}, {0, 1}}), b2), (std::vector<Residue>{1, 1}));
}

TEST(Field, InverseAndReduce) {
  const PrimeField f{7};
  for (Residue a = 1; a < 7; ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
  EXPECT_EQ(f.reduce(-1), 6u);
  EXPECT_THROW(f.inv(0), ContractViolation);
}

TEST(Matrix, ShapeMismatchThrows) {
  EXPECT_THROW(Matrix(F2, 2, 3) * Matrix(F2, 2, 3), ContractViolation);
  EXPECT_THROW(Matrix(F2, 2, 2) * Matrix(PrimeField{3}, 2, 2), ContractViolation);
}

TEST(LinalgProperty, RankMatchesEnumeration) {
  std::mt19937_64 rng(1);
  for (Residue p : {2u, 3u, 5u}) {
    const PrimeField f{p};
    for (int t = 0; t < 60; ++t) {
      Matrix m = random_matrix(rng, f, 1 + rng() % 4, 1 + rng() % (p == 2 ? 6 : 4));
      EXPECT_EQ(rank(m), rank_by_enumeration(m));
    }
  }
}

TEST(LinalgProperty, RankNullityAndKernel) {
  std::mt19937_64 rng(2);
  for (Residue p : {2u, 3u, 7u, 65521u}) {
    const PrimeField f{p};
    for (int t = 0; t < 40; ++t) {
      Matrix m = random_matrix(rng, f, 1 + rng() % 8, 1 + rng() % 8);
      auto k = kernel_basis(m);
      EXPECT_EQ(rank(m) + k.size(), m.cols());
      for (const auto& v : k) {
        auto img = m * std::span<const Residue>(v);
        EXPECT_TRUE(std::all_of(img.begin(), img.end(), [](Residue r) { return r == 0; }));
      }
      auto r = rref(m);
      EXPECT_EQ(rref(r.reduced).reduced, r.reduced);  // idempotent
    }
  }
}

TEST(LinalgProperty, SolveIsConsistent) {
  std::mt19937_64 rng(3);
  const PrimeField f{5};
  for (int t = 0; t < 80; ++t) {
    Matrix a = random_matrix(rng, f, 1 + rng() % 6, 1 + rng() % 6);
    std::vector<Residue> x(a.cols());
    for (auto& v : x) v = static_cast<Residue>(rng() % 5);
    auto b = a * std::span<const Residue>(x);
    auto sol = solve(a, b);
    ASSERT_TRUE(sol.has_value());
    EXPECT_EQ(a * std::span<const Residue>(*sol), b);
    // b outside the column space has no solution.
    Matrix aug = hstack(a, Matrix::from_columns(f, a.rows(), {std::vector<Residue>(a.rows(), 1)}));
    auto ones = std::vector<Residue>(a.rows(), 1);
    EXPECT_EQ(solve(a, ones).has_value(), rank(aug) == rank(a));
  }
}

TEST(LinalgProperty, InverseRoundTrip) {
  std::mt19937_64 rng(4);
  const PrimeField f{3};
  int done = 0;
  while (done < 30) {
    Matrix m = random_matrix(rng, f, 4, 4);
    if (rank(m) < 4) continue;
    EXPECT_EQ(m * inverse(m), Matrix::identity(f, 4));
    ++done;
  }
}

TEST(LinalgProperty, SubspaceCoordinates) {
  std::mt19937_64 rng(5);
  const PrimeField f{2};
  for (int t = 0; t < 30; ++t) {
    Matrix b = column_space(random_matrix(rng, f, 6, 3));
    if (b.cols() == 0) continue;
    SubspaceCoordinates sc(b);
    std::vector<Residue> c(b.cols());
    for (auto& v : c) v = static_cast<Residue>(rng() % 2);
    auto v = b * std::span<const Residue>(c);
    EXPECT_TRUE(sc.contains(v));
    EXPECT_EQ(sc.coordinates(std::span<const Residue>(v)), c);
  }
}
