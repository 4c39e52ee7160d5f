#pragma once

// Shared fixtures: builtin algebras with their registries, and seeded random
// modules built from the registry.

#include <map>

#include "cotorsion/registry.hpp"

namespace testing_support {

using namespace cotorsion;

inline const Registry& registry(const std::string& name, Residue p = 2) {
  static std::map<std::pair<std::string, Residue>, Registry> cache;
  auto key = std::make_pair(name, p);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_registry(builtin_algebra(name, p))).first;
  return it->second;
}

inline const ModuleRep& mod(const std::string& alg, const std::string& name, Residue p = 2) {
  return registry(alg, p).get(name);
}

/// Registry modules plus the terms of a few random short exact sequences.
inline std::vector<ModuleRep> module_pool(const std::string& alg, std::uint64_t seed, std::size_t extra,
                                          Residue p = 2) {
  const Registry& reg = registry(alg, p);
  std::vector<ModuleRep> out = reg.modules();
  Rng rng(seed);
  for (std::size_t i = 0; i < extra; ++i) {
    ShortExactSeq s = random_ses(rng, reg);
    for (const auto* m : {&s.first(), &s.last()})
      if (m->dim() > 0 && m->dim() <= 12) out.push_back(*m);
  }
  return out;
}

}  // namespace testing_support
