#pragma once

// Built-in testbed algebras, the per-algebra registry of named test modules,
// and seeded samplers for short exact sequences and maps.

#include <random>
#include <string>
#include <vector>

#include "cotorsion/resolution.hpp"

namespace cotorsion {

class UnknownModuleName : public std::runtime_error {
 public:
  explicit UnknownModuleName(const std::string& name)
      : std::runtime_error("no registered module named '" + name + "'"), name(name) {}
  std::string name;
};

/// "A1" = k[x]/(x^2), "A2" = path algebra of 1 -> 2, "A3" = T2(A1); all over F_p.
inline AlgebraPtr builtin_algebra(const std::string& name, Residue p = 2) {
  if (name == "A1") return truncated_poly(p, 2);
  if (name == "A2") return path_algebra_acyclic(2, {{0, 1, "a"}}, p);
  if (name == "A3") return triangular2(*truncated_poly(p, 2));
  throw AlgebraError("unknown builtin algebra '" + name + "' (expected A1, A2 or A3)");
}

inline const std::vector<std::string>& builtin_algebra_names() {
  static const std::vector<std::string> names{"A1", "A2", "A3"};
  return names;
}

struct NamedModule {
  std::string name;
  ModuleRep module;
};

class Registry {
 public:
  explicit Registry(AlgebraPtr alg) : alg_(std::move(alg)) {}

  const AlgebraPtr& algebra() const { return alg_; }
  const std::vector<NamedModule>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::vector<ModuleRep> modules() const {
    std::vector<ModuleRep> out;
    for (const auto& e : entries_) out.push_back(e.module);
    return out;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.name);
    return out;
  }

  const ModuleRep& get(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return e.module;
    throw UnknownModuleName(name);
  }

  bool contains(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return true;
    return false;
  }

  /// Adds m unless it is zero or isomorphic to an entry. Returns the name it
  /// is registered under.
  std::string add(const std::string& name, const ModuleRep& m) {
    if (m.dim() == 0) return {};
    IsoOptions opt;
    for (std::size_t i = 0; i < entries_.size() && i < 4; ++i) opt.test_modules.push_back(entries_[i].module);
    for (const auto& e : entries_) {
      if (e.module.dim() != m.dim()) continue;
      if (is_isomorphic(e.module, m, opt).verdict == IsoVerdict::yes) return e.name;
    }
    entries_.push_back({name, m});
    return name;
  }

 private:
  AlgebraPtr alg_;
  std::vector<NamedModule> entries_;
};

namespace detail {

inline std::vector<Residue> basis_vector(std::size_t n, std::size_t i) {
  std::vector<Residue> v(n, 0);
  v[i] = 1;
  return v;
}

/// Basis elements e with e^2 = e forming a complete orthogonal set of
/// non-unit idempotents; empty if the basis has none.
inline std::vector<std::size_t> basis_idempotents(const Algebra& a) {
  const std::size_t n = a.dim();
  std::vector<std::size_t> idem;
  for (std::size_t i = 0; i < n; ++i) {
    auto e = basis_vector(n, i);
    if (e == a.unit()) continue;
    if (a.multiply(e, e) == e) idem.push_back(i);
  }
  std::vector<Residue> sum(n, 0);
  for (auto i : idem) {
    sum[i] = a.field().add(sum[i], 1);
    for (auto j : idem) {
      if (i == j) continue;
      auto prod = a.multiply(basis_vector(n, i), basis_vector(n, j));
      if (std::any_of(prod.begin(), prod.end(), [](Residue r) { return r != 0; })) return {};
    }
  }
  if (sum != a.unit()) return {};
  return idem;
}

inline ModuleRep top_of(const ModuleRep& m) {
  Matrix rad = radical_span(m.alg(), Matrix::identity(m.field(), m.dim()), module_act(m));
  return quotient_by(m, rad).module;
}

}  // namespace detail

/// Registry of named test modules: simples, indecomposable projectives and
/// injectives (one per basis idempotent, or k, A, DA for a local algebra),
/// sums of two simples and of a simple with A, cyclic submodules of A on
/// basis vectors and their quotients, first and second syzygies (of the free
/// resolution) and first cosyzygies of simples.
/// Entries are pairwise non-isomorphic; the first name found wins.
inline Registry build_registry(const AlgebraPtr& alg) {
  Registry reg(alg);
  const Algebra& a = *alg;
  const std::size_t n = a.dim();
  const PrimeField f = a.field();
  ModuleRep regular = ModuleRep::regular(alg);
  ModuleRep regular_op = ModuleRep::regular(a.opposite());
  auto column = [&](std::size_t i) { return Matrix::from_columns(f, n, {detail::basis_vector(n, i)}); };

  auto idem = detail::basis_idempotents(a);
  std::vector<std::string> simple_names;
  std::vector<ModuleRep> simples, projectives, injectives;
  if (idem.empty()) {
    simples.push_back(detail::top_of(regular));
    simple_names.push_back(a.nilpotent_ideal().cols() + 1 == n ? "k" : "top(A)");
  } else {
    for (std::size_t v = 0; v < idem.size(); ++v) {
      ModuleRep p = submodule_generated(regular, column(idem[v])).first;
      projectives.push_back(p);
      simples.push_back(detail::top_of(p));
      simple_names.push_back("S" + std::to_string(v + 1));
      injectives.push_back(dual_module(submodule_generated(regular_op, column(idem[v])).first));
    }
  }
  for (std::size_t v = 0; v < simples.size(); ++v) reg.add(simple_names[v], simples[v]);
  for (std::size_t v = 0; v < projectives.size(); ++v) reg.add("P" + std::to_string(v + 1), projectives[v]);
  for (std::size_t v = 0; v < injectives.size(); ++v) reg.add("I" + std::to_string(v + 1), injectives[v]);
  reg.add("A", regular);
  reg.add("DA", dual_module(regular_op));
  for (std::size_t v = 0; v < simples.size(); ++v)
    for (std::size_t w = v; w < simples.size(); ++w)
      reg.add(simple_names[v] + "+" + simple_names[w], direct_sum(simples[v], simples[w]));
  reg.add(simple_names[0] + "+A", direct_sum(simples[0], regular));

  for (std::size_t i = 0; i < n; ++i) {
    auto [sub, inc] = submodule_generated(regular, column(i));
    const std::string& b = a.basis_names()[i];
    reg.add("A." + b, sub);
    reg.add("A/A." + b, cokernel_of(inc).module);
  }

  for (std::size_t v = 0; v < simples.size(); ++v) {
    const std::string& s = simple_names[v];
    reg.add("syz1(" + s + ")", syzygy(simples[v], 1));
    reg.add("syz2(" + s + ")", syzygy(simples[v], 2));
    ModuleRep dual_syz = syzygy(dual_module(simples[v]), 1);
    reg.add("cosyz1(" + s + ")", dual_module(dual_syz));
  }

  return reg;
}

// ---------------------------------------------------------------------------
// Seeded sampling.

using Rng = std::mt19937_64;

/// Per-check seed: the master seed mixed with a stable hash of the label.
inline std::uint64_t derive_seed(std::uint64_t master, const std::string& label) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline std::vector<Residue> random_vector(Rng& rng, PrimeField f, std::size_t len) {
  std::uniform_int_distribution<Residue> d(0, f.p - 1);
  std::vector<Residue> v(len);
  for (auto& x : v) x = d(rng);
  return v;
}

/// A random element of Hom(M, N) as a combination of basis maps.
inline ModuleMap random_map(Rng& rng, const HomSpace& hom) {
  return hom.combination(random_vector(rng, hom.source().field(), hom.dim()));
}

/// 0 -> S -> E -> E/S -> 0 with E a registry module or a sum of two, and S
/// generated by one or two random vectors.
inline ShortExactSeq random_ses(Rng& rng, const Registry& reg) {
  const auto& es = reg.entries();
  ModuleRep e = es[uniform_index(rng, es.size())].module;
  if (uniform_index(rng, 2) == 1) e = direct_sum(e, es[uniform_index(rng, es.size())].module);
  const std::size_t gens = 1 + uniform_index(rng, 2);
  std::vector<std::vector<Residue>> cols;
  for (std::size_t i = 0; i < gens; ++i) cols.push_back(random_vector(rng, e.field(), e.dim()));
  auto [sub, inc] = submodule_generated(e, Matrix::from_columns(e.field(), e.dim(), cols));
  auto q = cokernel_of(inc);
  return {inc, q.projection};
}

}  // namespace cotorsion
