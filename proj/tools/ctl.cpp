// ctl: run verification suites, single computations, or list the registry.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cotorsion/harness/report.hpp"
#include "cotorsion/harness/schema.hpp"
#include "ctl/report_schema.hpp"

namespace {

using namespace cotorsion;
using namespace cotorsion::harness;

constexpr int kExitConfig = 2;

struct Emit {
  std::string out;  // empty: stdout
};

void add_common(CLI::App* cmd, SuiteConfig& cfg) {
  cmd->add_option("--algebra", cfg.algebra_source, "builtin:A1|A2|A3 or a JSON algebra file")->capture_default_str();
  cmd->add_option("--prime", cfg.prime, "characteristic for builtin algebras")->capture_default_str();
}

void add_triple(CLI::App* cmd, SuiteConfig& cfg) {
  cmd->add_option("--triple", cfg.triple_source, "trivial, gorenstein or a JSON triple file")->capture_default_str();
  cmd->add_option("--bound", cfg.bound, "dimension bound for searches")->capture_default_str();
  cmd->add_option("--imax", cfg.imax, "highest Ext degree")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
}

void add_output(CLI::App* cmd, SuiteConfig& cfg, Emit& emit) {
  cmd->add_option("--out", emit.out, "report path (default stdout)");
  cmd->add_flag("--no-timestamps", [&cfg](std::int64_t) { cfg.timestamps = false; }, "omit the timing block");
}

/// Validates against the shipped schema and writes the report.
int write_report(const json& report, const Emit& emit) {
  static const SchemaValidator validator(json::parse(ctl::kReportSchema));
  const auto errors = validator.validate(report);
  if (!errors.empty()) {
    std::cerr << "ctl: report does not match its schema:\n";
    for (const auto& e : errors) std::cerr << "  " << e << "\n";
    return 1;
  }
  const std::string text = report.dump(2) + "\n";
  if (emit.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(emit.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + emit.out);
  f << text;
  if (!f) throw ConfigError("error writing " + emit.out);
  return 0;
}

int cmd_run(SuiteConfig cfg, const Emit& emit) {
  auto ctx = load_context(cfg);
  RunResult run = run_suite(*ctx);
  for (const auto& r : run.records) std::cerr << to_string(r.status) << "  " << r.id << " (" << r.anchor << ")\n";
  std::cerr << run.count(Status::pass) << " pass, " << run.count(Status::fail) << " fail, "
            << run.count(Status::unknown) << " unknown\n";
  if (int rc = write_report(make_report(*ctx, run), emit)) return rc;
  return exit_code(run, cfg.strict_unknown);
}

int cmd_compute(const SuiteConfig& cfg, const std::string& command, const std::vector<std::string>& args,
                const Emit& emit) {
  auto ctx = load_context(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  json c = compute(*ctx, command, args);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return write_report(make_compute_report(*ctx, std::move(c), ms), emit);
}

int cmd_list(const SuiteConfig& cfg, bool with_triple) {
  AlgebraPtr alg = load_algebra(cfg);
  Registry reg = build_registry(alg);
  TriplePtr t = with_triple ? load_triple(cfg, alg, reg) : nullptr;
  for (const auto& e : reg.entries()) {
    std::cout << e.name << "\tdim " << e.module.dim();
    if (t) {
      std::cout << "\t";
      for (auto [c, label] : {std::pair{ModuleClass::X, "X"}, {ModuleClass::Z, "Z"}, {ModuleClass::Y, "Y"}})
        std::cout << (t->in(c, e.module) ? label : "-");
    }
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cotorsion triple verification harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SuiteConfig cfg;
  Emit emit;
  std::string suites = "all";

  auto* run = app.add_subcommand("run", "run verification suites and write a report");
  add_common(run, cfg);
  add_triple(run, cfg);
  add_output(run, cfg, emit);
  run->add_option("--suite", suites, "all or comma separated check ids")->capture_default_str();
  run->add_option("--jobs", cfg.jobs, "checks run in parallel")->capture_default_str();
  run->add_flag("--strict-unknown", cfg.strict_unknown, "exit 3 when any check is unknown");

  std::vector<std::string> words;
  auto* comp = app.add_subcommand("compute", "one computation on registry modules: ext-table M N, z-pd M, "
                                             "z-id M, ho-hom M N, stable-eq M N");
  add_common(comp, cfg);
  add_triple(comp, cfg);
  add_output(comp, cfg, emit);
  comp->add_option("command", words, "computation followed by module names")->required();

  bool membership = false;
  auto* list = app.add_subcommand("list-modules", "print the module registry");
  add_common(list, cfg);
  list->add_option("--triple", cfg.triple_source, "also print X/Z/Y membership for this triple")
      ->each([&](const std::string&) { membership = true; });
  list->add_option("--bound", cfg.bound, "dimension bound for searches")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      std::vector<std::string> ids;
      std::stringstream ss(suites);
      for (std::string s; std::getline(ss, s, ',');)
        if (!s.empty()) ids.push_back(s);
      cfg.suites = ids;
      resolve_suites(cfg.suites);
      return cmd_run(cfg, emit);
    }
    if (*comp) {
      std::vector<std::string> names(words.begin() + 1, words.end());
      return cmd_compute(cfg, words.front(), names, emit);
    }
    return cmd_list(cfg, membership);
  } catch (const ConfigError& e) {
    std::cerr << "ctl: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnknownModuleName& e) {
    std::cerr << "ctl: " << e.what() << " (see ctl list-modules)\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "ctl: " << e.what() << "\n";
    return 1;
  }
}
