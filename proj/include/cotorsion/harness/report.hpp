#pragma once

// Suite runner, report assembly and single computations.

#include <atomic>
#include <ctime>
#include <thread>

#include "cotorsion/harness/checks.hpp"

namespace cotorsion::harness {

inline constexpr const char* kToolName = "ctl";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct RunResult {
  std::vector<CheckRecord> records;  // sorted by id
  std::vector<std::string> observations;
  double elapsed_ms = 0;

  std::size_t count(Status s) const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [&](const CheckRecord& r) { return r.status == s; }));
  }
};

/// Observations that are not pass/fail: currently whether the triple has the
/// same members as the trivial triple on the registry.
inline std::vector<std::string> observations(const Context& ctx) {
  std::vector<std::string> out;
  if (ctx.triple().name() == "trivial") return out;
  auto trivial = CotorsionTriple::trivial(ctx.algebra());
  for (std::size_t i = 0; i < ctx.size(); ++i)
    for (auto c : {ModuleClass::X, ModuleClass::Z, ModuleClass::Y})
      if (ctx.triple().in(c, ctx.entry(i).module) != trivial->in(c, ctx.entry(i).module)) return out;
  out.push_back("triple coincides with trivial triple on registry");
  return out;
}

inline RunResult run_suite(const Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto ids = resolve_suites(ctx.config().suites);
  RunResult out;
  out.records.resize(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < ids.size();) out.records[k] = run_check_timed(ctx, ids[k]);
  };
  const std::size_t jobs = std::min(ctx.config().jobs, ids.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::sort(out.records.begin(), out.records.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
  out.observations = observations(ctx);
  out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline json triple_json(const CotorsionTriple& t) {
  const auto& m = t.metadata();
  json j = {{"name", m.name},
            {"kind", t.kind() == TripleKind::trivial ? "trivial" : "gorenstein"},
            {"declared", t.is_declared()},
            {"hereditary", m.hereditary},
            {"complete", m.complete},
            {"membership_bound", m.membership_bound},
            {"safety_margin", m.safety_margin}};
  j["gorenstein_dim"] = m.gorenstein_dim ? json(*m.gorenstein_dim) : json(nullptr);
  return j;
}

inline json environment_json(const Context& ctx) {
  const auto& cfg = ctx.config();
  const Algebra& a = *ctx.algebra();
  json reg = json::array();
  for (const auto& e : ctx.registry().entries()) reg.push_back({{"name", e.name}, {"dim", e.module.dim()}});
  return {{"p", a.characteristic()},
          {"algebra", {{"source", cfg.algebra_source}, {"dim", a.dim()}, {"basis", a.basis_names()}}},
          {"triple", triple_json(ctx.triple())},
          {"seed", cfg.seed},
          {"bound", cfg.bound},
          {"imax", cfg.imax},
          {"samples", to_json(cfg.samples)},
          {"registry", reg}};
}

inline std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json record_json(const CheckRecord& r) {
  return {{"id", r.id}, {"anchor", r.anchor}, {"status", to_string(r.status)}, {"samples", r.samples},
          {"details", r.details}, {"witnesses", r.witnesses}};
}

inline json report_skeleton(const Context& ctx) {
  return {{"schema_version", kSchemaVersion},
          {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
          {"environment", environment_json(ctx)},
          {"summary", {{"pass", 0}, {"fail", 0}, {"unknown", 0}}},
          {"records", json::array()},
          {"computations", json::array()},
          {"observations", json::array()}};
}

inline json make_report(const Context& ctx, const RunResult& run) {
  json j = report_skeleton(ctx);
  j["summary"] = {{"pass", run.count(Status::pass)}, {"fail", run.count(Status::fail)}, {"unknown", run.count(Status::unknown)}};
  for (const auto& r : run.records) j["records"].push_back(record_json(r));
  j["observations"] = run.observations;
  if (ctx.config().timestamps) {
    json checks = json::object();
    for (const auto& r : run.records) checks[r.id] = std::llround(r.elapsed_ms);
    j["timing"] = {{"generated_at", utc_now()}, {"elapsed_ms", std::llround(run.elapsed_ms)}, {"checks", checks}};
  }
  return j;
}

/// 0 all pass, 1 any fail, 3 unknowns under strict mode.
inline int exit_code(const RunResult& run, bool strict_unknown) {
  if (run.count(Status::fail)) return 1;
  if (strict_unknown && run.count(Status::unknown)) return 3;
  return 0;
}

// ---------------------------------------------------------------------------
// Single computations: ext-table M N, z-pd M, z-id M, ho-hom M N,
// stable-eq M N.

inline std::size_t registry_index(const Context& ctx, const std::string& name) {
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (ctx.entry(i).name == name) return i;
  throw UnknownModuleName(name);
}

inline const std::vector<std::pair<std::string, std::size_t>>& compute_commands() {
  static const std::vector<std::pair<std::string, std::size_t>> c{
      {"ext-table", 2}, {"z-pd", 1}, {"z-id", 1}, {"ho-hom", 2}, {"stable-eq", 2}};
  return c;
}

inline json compute(const Context& ctx, const std::string& command, const std::vector<std::string>& args) {
  std::size_t arity = 0;
  bool known = false;
  for (const auto& [name, n] : compute_commands())
    if (name == command) known = true, arity = n;
  if (!known) throw ConfigError("unknown computation '" + command + "' (ext-table, z-pd, z-id, ho-hom, stable-eq)");
  if (args.size() != arity)
    throw ConfigError(command + " takes " + std::to_string(arity) + " module name(s), got " + std::to_string(args.size()));
  std::vector<std::size_t> idx;
  for (const auto& a : args) idx.push_back(registry_index(ctx, a));
  const auto& t = ctx.triple();
  const auto& cfg = ctx.config();
  json result;
  if (command == "ext-table") {
    result = ext_table_json(ctx.ext_table(idx[0], idx[1]));
    result["balanced"] = ctx.ext_table(idx[0], idx[1]).balanced();
  } else if (command == "z-pd" || command == "z-id") {
    const bool pd = command == "z-pd";
    const auto zs = ctx.member_modules(ModuleClass::Z);
    RelativeDim d = pd ? z_pd(t, ctx.entry(idx[0]).module, cfg.bound, zs) : z_id(t, ctx.entry(idx[0]).module, cfg.bound, zs);
    result = {{"value", d.by_resolution.str()}, {"by_resolution", dim_json(d.by_resolution)}, {"by_registry", dim_json(d.by_registry)}};
  } else if (command == "ho-hom") {
    HoHom h = ho_hom(t, ctx.entry(idx[0]).module, ctx.entry(idx[1]).module, false);
    result = {{"value", h.via_injective}, {"via_injective", h.via_injective}, {"via_projective", h.via_projective}, {"agree", h.agree()}};
  } else {
    StableOptions opt;
    opt.seed = derive_seed(cfg.seed, "stable-eq");
    const auto tests = ctx.registry().modules();
    json sides = json::object();
    for (auto side : {StableSide::x_side, StableSide::y_side}) {
      StableResult r = stable_equivalent(t, ctx.entry(idx[0]).module, ctx.entry(idx[1]).module, side, tests, opt);
      sides[side == StableSide::x_side ? "X" : "Y"] = {
          {"verdict", r.verdict == IsoVerdict::yes ? "yes" : r.verdict == IsoVerdict::no ? "no" : "unknown"},
          {"replayed", r.replayed},
          {"witness", r.witness},
          {"candidates_tried", r.candidates_tried}};
    }
    result = sides;
  }
  return {{"command", command}, {"args", args}, {"result", result}};
}

inline json make_compute_report(const Context& ctx, json computation, double elapsed_ms) {
  json j = report_skeleton(ctx);
  j["computations"].push_back(std::move(computation));
  if (ctx.config().timestamps)
    j["timing"] = {{"generated_at", utc_now()}, {"elapsed_ms", std::llround(elapsed_ms)}, {"checks", json::object()}};
  return j;
}

}  // namespace cotorsion::harness
