#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "ctl/report_schema.hpp"
#include "cotorsion/harness/report.hpp"
#include "cotorsion/harness/schema.hpp"
#include "cotorsion/io.hpp"

using namespace cotorsion;
using namespace cotorsion::harness;

namespace {

SchemaValidator report_validator() { return SchemaValidator(json::parse(ctl::kReportSchema)); }

SuiteConfig config(const std::string& alg, const std::string& triple) {
  SuiteConfig c;
  c.algebra_source = "builtin:" + alg;
  c.triple_source = triple;
  c.timestamps = false;
  return c;
}

std::string temp_file(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / ("ctl_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(Schema, ValidatorBasics) {
  SchemaValidator v(json::parse(R"({
    "type": "object", "required": ["a"], "additionalProperties": false,
    "properties": {"a": {"type": "integer", "minimum": 1}, "b": {"enum": ["x", "y"]},
                   "c": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/s"}}},
    "definitions": {"s": {"type": ["string", "null"]}}
  })"));
  EXPECT_TRUE(v.validate(json{{"a", 2}, {"b", "x"}, {"c", {"q", nullptr}}}).empty());
  EXPECT_FALSE(v.validate(json{{"b", "x"}}).empty());
  EXPECT_FALSE(v.validate(json{{"a", 0}}).empty());
  EXPECT_FALSE(v.validate(json{{"a", 1}, {"b", "z"}}).empty());
  EXPECT_FALSE(v.validate(json{{"a", 1}, {"c", json::array()}}).empty());
  EXPECT_FALSE(v.validate(json{{"a", 1}, {"c", {3}}}).empty());
  auto errs = v.validate(json{{"a", 1}, {"extra", true}});
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_NE(errs[0].find("extra"), std::string::npos);
}

TEST(Schema, ReportsValidate) {
  auto v = report_validator();
  auto ctx = load_context(config("A1", "gorenstein"));
  auto run = run_suite(*ctx);
  json rep = make_report(*ctx, run);
  EXPECT_TRUE(v.validate(rep).empty());
  json broken = rep;
  broken["records"][0]["status"] = "maybe";
  EXPECT_FALSE(v.validate(broken).empty());
  broken = rep;
  broken.erase("summary");
  EXPECT_FALSE(v.validate(broken).empty());
  auto cfg = config("A1", "gorenstein");
  cfg.timestamps = true;
  auto ctx2 = load_context(cfg);
  EXPECT_TRUE(v.validate(make_report(*ctx2, run_suite(*ctx2))).empty());
}

TEST(Config, InvalidAlgebraFileNamesIndices) {
  // 1, a, b with a*a = b, a*b = a: not associative at (e_1, e_1, e_1).
  json j = {{"char", 2}, {"dim", 3}, {"basis", {"1", "a", "b"}}, {"unit", {1, 0, 0}}};
  std::vector<std::vector<std::vector<int>>> mul(3, std::vector<std::vector<int>>(3, std::vector<int>(3, 0)));
  for (int i = 0; i < 3; ++i) mul[0][i][i] = mul[i][0][i] = 1;
  mul[1][1][2] = 1;
  mul[1][2][1] = 1;
  j["mul"] = mul;
  auto cfg = config("A1", "trivial");
  cfg.algebra_source = temp_file("bad_alg.json", j.dump());
  try {
    load_context(cfg);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("e_1"), std::string::npos) << e.what();
  }
}

TEST(Config, Errors) {
  EXPECT_THROW(load_context(config("A9", "trivial")), ConfigError);
  auto cfg = config("A1", "trivial");
  cfg.prime = 4;
  EXPECT_THROW(load_context(cfg), ConfigError);
  EXPECT_THROW(load_context(config("A1", "/nonexistent/triple.json")), ConfigError);
  EXPECT_THROW(resolve_suites({"prop_9_9"}), ConfigError);
  EXPECT_EQ(resolve_suites({"prop_2_2", "cor_4_8", "prop_2_2"}), (std::vector<std::string>{"cor_4_8", "prop_2_2"}));
  EXPECT_EQ(resolve_suites({}).size(), check_catalog().size());
  cfg = config("A1", "trivial");
  cfg.imax = 0;
  EXPECT_THROW(load_context(cfg), ConfigError);
}

TEST(Config, AlgebraFileRoundTrip) {
  auto cfg = config("A1", "gorenstein");
  cfg.algebra_source = temp_file("a2.json", algebra_to_json(*builtin_algebra("A2")).dump());
  auto ctx = load_context(cfg);
  EXPECT_EQ(ctx->algebra()->dim(), 3u);
}

TEST(Config, DeclaredTriple) {
  // Gorenstein classes over A3 restated as rules.
  json decl = {{"name", "restated"},
               {"base", "gorenstein"},
               {"classes",
                {{"X", {{{"kind", "ext_vanishes_against"}, {"module", "A"}, {"degrees", {1, 4}}}}},
                 {"Z", {{{"kind", "proj_dim_at_most"}, {"n", 1}}}},
                 {"Y", {{{"kind", "ext_vanishes_from"}, {"module", "DA"}, {"degrees", {1, 4}}}}}}}};
  auto cfg = config("A3", temp_file("decl.json", decl.dump()));
  auto ctx = load_context(cfg);
  EXPECT_TRUE(ctx->triple().is_declared());
  auto g = CotorsionTriple::gorenstein(ctx->algebra());
  for (const auto& m : ctx->registry().modules())
    for (auto c : {ModuleClass::X, ModuleClass::Z, ModuleClass::Y}) EXPECT_EQ(ctx->triple().in(c, m), g->in(c, m));
  cfg.suites = {"prop_2_2"};
  auto run = run_suite(*load_context(cfg));
  EXPECT_EQ(run.count(Status::pass), 1u);
  EXPECT_EQ(make_report(*ctx, run)["environment"]["triple"]["declared"], true);

  json bad = {{"base", "gorenstein"}, {"classes", {{"W", json::array()}}}};
  EXPECT_THROW(load_context(config("A3", temp_file("bad_decl.json", bad.dump()))), ConfigError);
  json unknown_mod = {{"classes", {{"X", {{{"kind", "ext_vanishes_against"}, {"module", "Q"}}}}}}};
  EXPECT_THROW(load_context(config("A3", temp_file("bad_mod.json", unknown_mod.dump()))), ConfigError);
}

TEST(Report, DeterministicAndJobIndependent) {
  auto cfg = config("A2", "gorenstein");
  auto a = make_report(*load_context(cfg), run_suite(*load_context(cfg))).dump();
  auto b = make_report(*load_context(cfg), run_suite(*load_context(cfg))).dump();
  EXPECT_EQ(a, b);
  cfg.jobs = 3;
  auto c = make_report(*load_context(cfg), run_suite(*load_context(cfg))).dump();
  EXPECT_EQ(a, c);
  cfg.seed = 99;
  auto d = json::parse(make_report(*load_context(cfg), run_suite(*load_context(cfg))).dump());
  EXPECT_EQ(d["environment"]["seed"], 99);
}

TEST(Report, RecordsSortedWithAnchors) {
  auto ctx = load_context(config("A1", "trivial"));
  auto run = run_suite(*ctx);
  json rep = make_report(*ctx, run);
  ASSERT_EQ(rep["records"].size(), check_catalog().size());
  for (std::size_t i = 0; i + 1 < rep["records"].size(); ++i)
    EXPECT_LT(rep["records"][i]["id"].get<std::string>(), rep["records"][i + 1]["id"].get<std::string>());
  for (const auto& r : rep["records"]) EXPECT_FALSE(r["anchor"].get<std::string>().empty());
  EXPECT_EQ(rep["summary"]["pass"], check_catalog().size());
  EXPECT_FALSE(rep.contains("timing"));
}

TEST(Report, ExitCodes) {
  RunResult r;
  r.records.resize(2);
  EXPECT_EQ(exit_code(r, false), 0);
  r.records[1].status = Status::unknown;
  EXPECT_EQ(exit_code(r, false), 0);
  EXPECT_EQ(exit_code(r, true), 3);
  r.records[0].status = Status::fail;
  EXPECT_EQ(exit_code(r, true), 1);
  EXPECT_EQ(exit_code(r, false), 1);
}

TEST(Report, A2Observation) {
  auto ctx = load_context(config("A2", "gorenstein"));
  auto obs = observations(*ctx);
  ASSERT_EQ(obs.size(), 1u);
  EXPECT_NE(obs[0].find("trivial"), std::string::npos);
  EXPECT_TRUE(observations(*load_context(config("A3", "gorenstein"))).empty());
}

TEST(Compute, Examples) {
  auto ctx = load_context(config("A1", "gorenstein"));
  auto e = compute(*ctx, "ext-table", {"k", "k"});
  const auto& rows = e["result"]["rows"];
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0]["via_x"], 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i]["via_x"], 0);
    EXPECT_EQ(rows[i]["absolute"], 1);
  }
  EXPECT_EQ(compute(*ctx, "ho-hom", {"k", "k"})["result"]["value"], 1);
  EXPECT_EQ(compute(*ctx, "stable-eq", {"k", "A"})["result"]["X"]["verdict"], "no");
  EXPECT_EQ(compute(*ctx, "stable-eq", {"k", "k+A"})["result"]["X"]["verdict"], "yes");
  EXPECT_EQ(compute(*ctx, "z-pd", {"k"})["result"]["value"], "0");
  auto triv = load_context(config("A1", "trivial"));
  EXPECT_EQ(compute(*triv, "z-pd", {"k"})["result"]["value"], "ExceedsBound(10)");
  EXPECT_THROW(compute(*ctx, "ho-hom", {"k"}), ConfigError);
  EXPECT_THROW(compute(*ctx, "nope", {"k"}), ConfigError);
  EXPECT_THROW(compute(*ctx, "z-id", {"Q"}), UnknownModuleName);
  auto rep = make_compute_report(*ctx, compute(*ctx, "z-id", {"k"}), 0);
  EXPECT_TRUE(report_validator().validate(rep).empty());
}
