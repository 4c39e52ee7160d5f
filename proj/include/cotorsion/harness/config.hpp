#pragma once

// Run configuration and the shared per-run context: algebra, registry,
// triple, plus lazily filled caches that several checks read.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "cotorsion/io.hpp"
#include "cotorsion/model.hpp"
#include "cotorsion/registry.hpp"
#include "cotorsion/relative.hpp"

namespace cotorsion::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SampleCounts {
  std::size_t ses = 200;             // random short exact sequences
  std::size_t approximations = 50;   // approximations per lifting / extension pool
  std::size_t maps = 200;            // classified maps
  std::size_t factorizations = 100;  // maps factored both ways in both structures
  std::size_t agreement = 100;       // maps X -> Y compared across structures
  std::size_t les = 20;              // proper sequences per long exact sequence variant
  std::size_t squares = 30;          // lifting squares per structure
};

inline json to_json(const SampleCounts& s) {
  return {{"ses", s.ses},           {"approximations", s.approximations}, {"maps", s.maps},
          {"factorizations", s.factorizations}, {"agreement", s.agreement}, {"les", s.les},
          {"squares", s.squares}};
}

struct SuiteConfig {
  std::string algebra_source = "builtin:A1";
  std::string triple_source = "gorenstein";
  Residue prime = 2;  // characteristic for builtin algebras
  std::uint64_t seed = 42;
  std::size_t bound = 10;
  std::size_t imax = 4;
  std::size_t margin = 2;
  std::size_t jobs = 1;
  SampleCounts samples;
  std::vector<std::string> suites;  // empty: all
  bool timestamps = true;
  bool strict_unknown = false;
};

struct CheckInfo {
  const char* id;
  const char* anchor;
};

/// Check ids in report order, with the result each one verifies.
inline const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> c{
      {"cor_4_8", "Cor 4.8"},
      {"cor_4_9", "Cor 4.9"},
      {"def_4_3_balance", "Def 4.3"},
      {"lemma_3_2_agreement", "Lemma 3.2"},
      {"prop_2_1", "Prop 2.1"},
      {"prop_2_2", "Prop 2.2"},
      {"prop_2_5", "Prop 2.5"},
      {"prop_2_7", "Prop 2.7"},
      {"prop_3_3_formulas", "Prop 3.3"},
      {"prop_3_4_stability", "Prop 3.4"},
      {"prop_4_2", "Prop 4.2"},
      {"prop_4_4", "Prop 4.4"},
      {"prop_4_5_les", "Prop 4.5"},
      {"thm_3_1_classification", "Thm 3.1"},
      {"thm_4_6", "Thm 4.6"},
      {"thm_4_7", "Thm 4.7"},
  };
  return c;
}

inline std::vector<std::string> resolve_suites(const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  const auto& cat = check_catalog();
  bool all = requested.empty();
  for (const auto& r : requested)
    if (r == "all") all = true;
  if (all) {
    for (const auto& c : cat) out.push_back(c.id);
    return out;
  }
  for (const auto& r : requested) {
    bool found = false;
    for (const auto& c : cat) found = found || r == c.id;
    if (!found) {
      std::string known;
      for (const auto& c : cat) known += std::string(known.empty() ? "" : ", ") + c.id;
      throw ConfigError("unknown suite '" + r + "'; known suites: all, " + known);
    }
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Declarative triple files.
//
// { "name": "...", "base": "trivial" | "gorenstein", "hereditary": bool,
//   "complete": bool, "bound": n, "margin": n,
//   "classes": { "X": [rule...], "Z": [...], "Y": [...] } }
// rule: { "kind": "ext_vanishes_against" | "ext_vanishes_from" |
//         "proj_dim_at_most" | "inj_dim_at_most" | "projective" |
//         "injective" | "any",
//         "module": registry name, "degrees": [lo, hi], "n": n }

inline MembershipRule::Kind rule_kind(const std::string& s) {
  using K = MembershipRule::Kind;
  static const std::map<std::string, K> kinds{{"ext_vanishes_against", K::ext_vanishes_against},
                                              {"ext_vanishes_from", K::ext_vanishes_from},
                                              {"proj_dim_at_most", K::proj_dim_at_most},
                                              {"inj_dim_at_most", K::inj_dim_at_most},
                                              {"projective", K::projective},
                                              {"injective", K::injective},
                                              {"any", K::any}};
  auto it = kinds.find(s);
  if (it == kinds.end()) throw ConfigError("triple file: unknown rule kind '" + s + "'");
  return it->second;
}

inline TriplePtr triple_from_json(const json& j, const AlgebraPtr& alg, const Registry& reg, std::size_t bound,
                                  std::size_t margin) {
  try {
    const std::string base_name = j.value("base", "trivial");
    TriplePtr base;
    if (base_name == "trivial") {
      base = CotorsionTriple::trivial(alg);
    } else if (base_name == "gorenstein") {
      base = CotorsionTriple::gorenstein(alg, j.value("bound", bound), j.value("margin", margin));
    } else {
      throw ConfigError("triple file: base must be 'trivial' or 'gorenstein', got '" + base_name + "'");
    }
    TripleMetadata meta = base->metadata();
    meta.name = j.value("name", std::string("declared"));
    meta.hereditary = j.value("hereditary", true);
    meta.complete = j.value("complete", true);
    DeclaredClasses classes;
    if (j.contains("classes")) {
      const auto& cls = j.at("classes");
      for (const auto& [key, rules] : cls.items()) {
        std::vector<MembershipRule>* dst = key == "X" ? &classes.x : key == "Z" ? &classes.z : key == "Y" ? &classes.y : nullptr;
        if (!dst) throw ConfigError("triple file: class key must be X, Z or Y, got '" + key + "'");
        for (const auto& r : rules) {
          MembershipRule rule;
          rule.kind = rule_kind(r.at("kind").get<std::string>());
          if (r.contains("module")) {
            rule.module_name = r.at("module").get<std::string>();
            rule.module = reg.get(rule.module_name);
          }
          if (r.contains("degrees")) {
            auto d = r.at("degrees").get<std::vector<std::size_t>>();
            if (d.size() != 2 || d[0] < 1 || d[0] > d[1]) throw ConfigError("triple file: degrees must be [lo, hi] with 1 <= lo <= hi");
            rule.lo = d[0];
            rule.hi = d[1];
          }
          rule.n = r.value("n", std::size_t{0});
          using K = MembershipRule::Kind;
          if ((rule.kind == K::ext_vanishes_against || rule.kind == K::ext_vanishes_from) && !rule.module)
            throw ConfigError("triple file: rule '" + r.at("kind").get<std::string>() + "' needs a module");
          dst->push_back(std::move(rule));
        }
      }
    }
    return CotorsionTriple::declared(base, meta, std::move(classes));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("triple file: ") + e.what());
  } catch (const UnknownModuleName& e) {
    throw ConfigError(std::string("triple file: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

/// Everything a check needs. Caches are filled on first use and shared
/// between worker threads.
class Context {
 public:
  Context(SuiteConfig cfg, AlgebraPtr alg, Registry reg, TriplePtr triple)
      : cfg_(std::move(cfg)), alg_(std::move(alg)), reg_(std::move(reg)), triple_(std::move(triple)) {}

  const SuiteConfig& config() const { return cfg_; }
  const AlgebraPtr& algebra() const { return alg_; }
  const Registry& registry() const { return reg_; }
  const CotorsionTriple& triple() const { return *triple_; }
  const TriplePtr& triple_ptr() const { return triple_; }

  const NamedModule& entry(std::size_t i) const { return reg_.entries()[i]; }
  std::size_t size() const { return reg_.size(); }

  /// Registry indices of the members of a class.
  std::vector<std::size_t> members(ModuleClass c) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < reg_.size(); ++i)
      if (triple_->in(c, reg_.entries()[i].module)) out.push_back(i);
    return out;
  }

  std::vector<ModuleRep> member_modules(ModuleClass c) const {
    std::vector<ModuleRep> out;
    for (auto i : members(c)) out.push_back(entry(i).module);
    return out;
  }

  const HomSpace& hom(std::size_t i, std::size_t j) const {
    return lazy(homs_, {i, j}, [&] { return HomSpace(entry(i).module, entry(j).module); });
  }

  const ApproxSeq& right_x(std::size_t i) const {
    return lazy(rx_, {i, 0}, [&] { return triple_->right_X_approx(entry(i).module); });
  }

  const ApproxSeq& left_y(std::size_t i) const {
    return lazy(ly_, {i, 0}, [&] { return triple_->left_Y_approx(entry(i).module); });
  }

  const ShortExactSeq& injective_embedding(std::size_t i) const {
    return lazy(emb_, {i, 0}, [&] { return triple_->injective_embedding(entry(i).module); });
  }

  /// Ext table (no balance assertion) for a registry pair.
  const ExtTable& ext_table(std::size_t i, std::size_t j) const {
    return lazy(ext_, {i, j}, [&] {
      ExtTable t = ext_xy(*triple_, entry(i).module, entry(j).module, cfg_.imax, false);
      t.m_name = entry(i).name;
      t.n_name = entry(j).name;
      return t;
    });
  }

 private:
  using Key = std::pair<std::size_t, std::size_t>;

  template <class T, class F>
  const T& lazy(std::map<Key, std::shared_ptr<const T>>& slot, Key key, F&& make) const {
    {
      std::lock_guard lock(mutex_);
      auto it = slot.find(key);
      if (it != slot.end()) return *it->second;
    }
    auto value = std::make_shared<const T>(make());
    std::lock_guard lock(mutex_);
    auto [it, inserted] = slot.emplace(key, std::move(value));
    return *it->second;
  }

  SuiteConfig cfg_;
  AlgebraPtr alg_;
  Registry reg_;
  TriplePtr triple_;
  mutable std::mutex mutex_;
  mutable std::map<Key, std::shared_ptr<const HomSpace>> homs_;
  mutable std::map<Key, std::shared_ptr<const ApproxSeq>> rx_, ly_;
  mutable std::map<Key, std::shared_ptr<const ShortExactSeq>> emb_;
  mutable std::map<Key, std::shared_ptr<const ExtTable>> ext_;
};

inline AlgebraPtr load_algebra(const SuiteConfig& cfg) {
  const std::string& src = cfg.algebra_source;
  try {
    if (src.rfind("builtin:", 0) == 0) return builtin_algebra(src.substr(8), cfg.prime);
    return load_algebra_file(src);
  } catch (const AlgebraError& e) {
    throw ConfigError(std::string("algebra '") + src + "': " + e.what());
  } catch (const AlgebraLoadError& e) {
    throw ConfigError(std::string("algebra '") + src + "': " + e.what());
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("algebra '") + src + "': " + e.what());
  }
}

inline TriplePtr load_triple(const SuiteConfig& cfg, const AlgebraPtr& alg, const Registry& reg) {
  const std::string& src = cfg.triple_source;
  try {
    if (src == "trivial") return CotorsionTriple::trivial(alg);
    if (src == "gorenstein") return CotorsionTriple::gorenstein(alg, cfg.bound, cfg.margin);
    std::ifstream in(src);
    if (!in) throw ConfigError("triple '" + src + "': expected trivial, gorenstein or a readable JSON file");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("triple file '" + src + "' is not valid JSON: " + e.what());
    }
    return triple_from_json(j, alg, reg, cfg.bound, cfg.margin);
  } catch (const NotGorensteinWithinBound& e) {
    throw ConfigError(std::string("triple '") + src + "': " + e.what() +
                      "; raise --bound or use --triple trivial");
  }
}

inline std::shared_ptr<const Context> load_context(const SuiteConfig& cfg) {
  if (cfg.imax < 1) throw ConfigError("--imax must be at least 1");
  if (cfg.jobs < 1) throw ConfigError("--jobs must be at least 1");
  AlgebraPtr alg = load_algebra(cfg);
  Registry reg = build_registry(alg);
  TriplePtr t = load_triple(cfg, alg, reg);
  return std::make_shared<const Context>(cfg, alg, std::move(reg), std::move(t));
}

}  // namespace cotorsion::harness
