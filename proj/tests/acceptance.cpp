// Acceptance run: one PASS/FAIL line per criterion over A1, A2, A3 with both
// built-in triples. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>

#include "cotorsion/harness/report.hpp"

using namespace cotorsion;
using namespace cotorsion::harness;

namespace {

struct Combo {
  std::string alg, triple;
  std::shared_ptr<const Context> ctx;
  RunResult run;
  std::string report;
  double ms = 0;
};

std::string label(const Combo& c) { return c.alg + "/" + c.triple; }

std::string load_and_run(Combo& c) {
  SuiteConfig cfg;
  cfg.algebra_source = "builtin:" + c.alg;
  cfg.triple_source = c.triple;
  cfg.timestamps = false;
  const auto t0 = std::chrono::steady_clock::now();
  c.ctx = load_context(cfg);
  c.run = run_suite(*c.ctx);
  c.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return make_report(*c.ctx, c.run).dump();
}

const CheckRecord* record(const Combo& c, const std::string& id) {
  for (const auto& r : c.run.records)
    if (r.id == id) return &r;
  return nullptr;
}

constexpr double kBudgetMs = 60000;

class Criteria {
 public:
  explicit Criteria(std::vector<Combo>& combos) : combos_(combos) {}

  // Every listed check passes on every combination, and the checks together
  // stay under the time budget per algebra (both triples summed).
  bool checks_pass(std::initializer_list<const char*> ids, std::string& why) const {
    bool ok = true;
    std::map<std::string, double> per_alg;
    for (const auto& c : combos_)
      for (const char* id : ids) {
        const CheckRecord* r = record(c, id);
        if (!r || r->status != Status::pass) {
          ok = false;
          why += " " + label(c) + ":" + id + "=" + (r ? to_string(r->status) : "missing");
        }
        if (r) per_alg[c.alg] += r->elapsed_ms;
      }
    for (const auto& [alg, ms] : per_alg)
      if (ms >= kBudgetMs) ok = false, why += " " + alg + ": " + std::to_string(ms / 1000.0) + " s over budget";
    return ok;
  }

  const Combo& get(const std::string& alg, const std::string& triple) const {
    for (const auto& c : combos_)
      if (c.alg == alg && c.triple == triple) return c;
    throw std::logic_error("no combination " + alg + "/" + triple);
  }

 private:
  std::vector<Combo>& combos_;
};

std::vector<ModuleRep> z_members(const Combo& c) { return c.ctx->member_modules(ModuleClass::Z); }

}  // namespace

int main() {
  std::vector<Combo> combos;
  for (const char* a : {"A1", "A2", "A3"})
    for (const char* t : {"trivial", "gorenstein"}) combos.push_back({a, t, nullptr, {}, {}, 0});
  for (auto& c : combos) {
    c.report = load_and_run(c);
    std::printf("ran %-14s %8.1f s\n", label(c).c_str(), c.ms / 1000.0);
    std::fflush(stdout);
  }
  Criteria crit(combos);

  int failures = 0;
  auto report = [&](int n, const char* name, const std::function<bool(std::string&)>& body) {
    std::string why;
    bool ok = false;
    try {
      ok = body(why);
    } catch (const std::exception& e) {
      why += std::string(" exception: ") + e.what();
    }
    std::printf("%s  %2d  %s%s\n", ok ? "PASS" : "FAIL", n, name, ok ? "" : ("  [" + why + " ]").c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  };

  report(1, "pinching", [&](std::string& w) { return crit.checks_pass({"prop_2_2"}, w); });

  report(2, "thickness of Z under short exact sequences", [&](std::string& w) {
    bool ok = crit.checks_pass({"prop_2_1"}, w);
    for (const auto& c : combos)
      if (record(c, "prop_2_1")->samples < 200) ok = false, w += " " + label(c) + ": fewer than 200 sequences";
    return ok;
  });

  report(3, "lifting and extension characterizations", [&](std::string& w) {
    bool ok = crit.checks_pass({"prop_2_5", "prop_2_7"}, w);
    const auto& c = crit.get("A1", "trivial");
    const auto& t = c.ctx->triple();
    const auto& k = c.ctx->registry().get("k");
    auto ly = t.left_Y_approx(k);
    auto rx = t.right_X_approx(k);
    if (lift_through_left_approx(ly, ModuleMap::identity(ly.last()))) ok = false, w += " A1 witness: id_k lifted";
    if (extend_through_right_approx(rx, ModuleMap::identity(rx.first()))) ok = false, w += " A1 witness: id_k extended";
    return ok;
  });

  report(4, "balance of relative Ext", [&](std::string& w) { return crit.checks_pass({"def_4_3_balance"}, w); });

  report(5, "comparison with absolute Ext", [&](std::string& w) { return crit.checks_pass({"prop_4_4"}, w); });

  report(6, "relative dimensions", [&](std::string& w) {
    bool ok = crit.checks_pass({"thm_4_6", "thm_4_7"}, w);
    const auto& g = crit.get("A3", "gorenstein");
    const auto zs = z_members(g);
    for (const auto& m : g.ctx->registry().modules()) {
      auto pd = z_pd(g.ctx->triple(), m, 10, zs), id = z_id(g.ctx->triple(), m, 10, zs);
      if (!pd.by_resolution.at_most(1) || !id.by_resolution.at_most(1)) ok = false, w += " A3/gorenstein value above 1";
      if (!pd.agree() || !id.agree()) ok = false, w += " A3/gorenstein criteria disagree";
    }
    const auto& t = crit.get("A1", "trivial");
    auto k = z_pd(t.ctx->triple(), t.ctx->registry().get("k"), 10);
    if (k.by_resolution.str() != "ExceedsBound(10)") ok = false, w += " A1/trivial k: " + k.by_resolution.str();
    return ok;
  });

  report(7, "global balance", [&](std::string& w) {
    bool ok = crit.checks_pass({"cor_4_8", "cor_4_9"}, w);
    const std::tuple<const char*, const char*, std::size_t> expected[] = {
        {"A1", "gorenstein", 0}, {"A2", "trivial", 1}, {"A3", "gorenstein", 1}};
    for (auto [a, t, v] : expected) {
      const auto& c = crit.get(a, t);
      auto gd = global_dims(c.ctx->triple(), c.ctx->registry().modules(), 10);
      // Independent oracle: absolute pd / id over the Z-members.
      if (!(gd.z_pd_sup.value == v && gd.z_id_sup.value == v && gd.pd_sup_z.value == v && gd.id_sup_z.value == v)) {
        ok = false;
        w += " " + label(c) + ": " + gd.z_pd_sup.str() + "/" + gd.z_id_sup.str() + "/" + gd.pd_sup_z.str() + "/" +
             gd.id_sup_z.str();
      }
    }
    return ok;
  });

  report(8, "long exact sequences", [&](std::string& w) {
    bool ok = crit.checks_pass({"prop_4_5_les"}, w);
    for (const auto& c : combos)
      if (record(c, "prop_4_5_les")->samples < 20) ok = false, w += " " + label(c) + ": fewer than 20 sequences";
    return ok;
  });

  report(9, "degenerate dimension dichotomy", [&](std::string& w) { return crit.checks_pass({"prop_4_2"}, w); });

  report(10, "model structures", [&](std::string& w) {
    return crit.checks_pass({"thm_3_1_classification", "lemma_3_2_agreement"}, w);
  });

  report(11, "homotopy hom", [&](std::string& w) {
    bool ok = crit.checks_pass({"prop_3_3_formulas"}, w);
    const auto& c = crit.get("A1", "gorenstein");
    const auto& k = c.ctx->registry().get("k");
    auto h = ho_hom(c.ctx->triple(), k, k);
    if (h.via_injective != 1) ok = false, w += " ho_hom(k,k) = " + std::to_string(h.via_injective);
    return ok;
  });

  report(12, "stable equivalence", [&](std::string& w) {
    bool ok = crit.checks_pass({"prop_3_4_stability"}, w);
    const auto& c = crit.get("A1", "gorenstein");
    const auto& reg = c.ctx->registry();
    auto r = stable_equivalent(c.ctx->triple(), reg.get("k"), reg.get("A"), StableSide::x_side);
    if (r.verdict != IsoVerdict::no) ok = false, w += " (k, A1) not reported as no";
    return ok;
  });

  report(13, "determinism", [&](std::string& w) {
    bool ok = true;
    for (auto& c : combos) {
      Combo again{c.alg, c.triple, nullptr, {}, {}, 0};
      if (load_and_run(again) != c.report) ok = false, w += " " + label(c) + " differs";
    }
    return ok;
  });

  double worst = 0;
  for (const auto& c : combos)
    for (const auto& r : c.run.records) worst = std::max(worst, r.elapsed_ms);
  std::printf("slowest single check: %.1f s\n", worst / 1000.0);
  std::printf("%d of 13 criteria failed\n", failures);
  return failures ? 1 : 0;
}
