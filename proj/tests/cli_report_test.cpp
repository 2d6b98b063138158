// Verification suites and report plumbing: every named suite runs green,
// reports are deterministic given the seed, and the xi path payloads
// round trip between maps, multiplicity tables, and SVG.

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>

#include "gcat/suites.hpp"

namespace {

using gcat::Json;

gcat::SuiteConfig small_config() {
  gcat::SuiteConfig cfg;
  cfg.grid_log2 = 4;
  cfg.stages = 2;
  cfg.seed = 0;
  cfg.tol = 1e-9;
  return cfg;
}

// stdout and exit code of the command line tool, which the build drops
// next to the test binaries.
std::optional<std::pair<int, std::string>> run_cli(const std::string& args) {
  FILE* pipe = popen(("./gcat " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return std::nullopt;
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  if (status < 0) return std::nullopt;
  return std::make_pair(WEXITSTATUS(status), out);
}

}  // namespace

TEST(SuiteRegistry, EveryNamedSuitePassesAtSmallConfig) {
  gcat::SuiteConfig cfg = small_config();
  cfg.grid_log2 = 5;
  for (const std::string& name : gcat::suite_names()) {
    gcat::SuiteReport rep = gcat::run_suite(name, cfg);
    EXPECT_TRUE(rep.all_pass()) << name;
    EXPECT_EQ(rep.suite, name);
    EXPECT_FALSE(rep.checks.results.empty()) << name;

    Json doc = gcat::suite_report_to_json(rep);
    EXPECT_EQ(doc["suite"], name);
    EXPECT_EQ(doc["config"]["grid_log2"], 5);
    EXPECT_EQ(doc["config"]["seed"], 0);
    EXPECT_TRUE(doc["all_pass"].get<bool>());
    for (const Json& c : doc["checks"]) {
      EXPECT_TRUE(c.contains("name"));
      EXPECT_TRUE(c.contains("pass"));
      EXPECT_TRUE(c.contains("max_error"));
      EXPECT_TRUE(c.contains("tolerance"));
      EXPECT_TRUE(c.contains("witness"));
    }
  }
}

TEST(SuiteRegistry, UnknownSuiteThrows) {
  EXPECT_THROW(gcat::run_suite("frobnicate", small_config()), gcat::error);
}

TEST(SuiteRegistry, RerunsWithTheSameSeedAreByteIdentical) {
  for (const std::string& name : {std::string("core"), std::string("jiang-su"),
                                  std::string("gelfand")}) {
    const std::string a =
        gcat::suite_report_to_json(gcat::run_suite(name, small_config()))
            .dump(2);
    const std::string b =
        gcat::suite_report_to_json(gcat::run_suite(name, small_config()))
            .dump(2);
    EXPECT_EQ(a, b) << name;
  }
}

TEST(SuiteRegistry, SeedFlowsIntoTheRandomDraws) {
  gcat::SuiteConfig cfg = small_config();
  gcat::SuiteReport base = gcat::run_core_suite(cfg);
  cfg.seed = 1;
  gcat::SuiteReport moved = gcat::run_core_suite(cfg);
  EXPECT_TRUE(base.all_pass());
  EXPECT_TRUE(moved.all_pass());
  EXPECT_NE(base.extra["norms"].dump(), moved.extra["norms"].dump());
}

TEST(SuiteRegistry, CoreNormTableMatchesTheNormChecks) {
  gcat::SuiteReport rep = gcat::run_core_suite(small_config());
  const Json& norms = rep.extra["norms"];
  ASSERT_EQ(norms.size(), 36u);  // 3 groupoids x 12 samples
  for (const Json& row : norms) {
    const double one = row["i_norm"].get<double>();
    const double red = row["reduced_norm"].get<double>();
    const double op = row["op_norm"].get<double>();
    EXPECT_LE(red, one + 1e-12);
    EXPECT_NEAR(red, op, 1e-10);
  }
}

TEST(SuiteRegistry, StageSuiteReportsCarryTheChainPayload) {
  gcat::SuiteReport rep = gcat::run_suite("jiang-su", small_config());
  Json doc = gcat::suite_report_to_json(rep);
  ASSERT_TRUE(doc.contains("stages"));
  ASSERT_TRUE(doc.contains("xi"));
  ASSERT_TRUE(doc.contains("materialized_sizes"));
  EXPECT_EQ(doc["stages"][0]["k0"], 7);
  EXPECT_EQ(doc["stages"][0]["k1"], 5);
  EXPECT_EQ(doc["materialized_sizes"][0], 6);
  EXPECT_EQ(doc["materialized_sizes"][1], 210);
}

TEST(SuiteRegistry, BondingOptionsInheritTheConfig) {
  gcat::SuiteConfig cfg = small_config();
  cfg.grid_log2 = 7;
  cfg.tol = 1e-8;
  cfg.seed = 42;
  gcat::BondingOptions opt = gcat::bonding_options_from(cfg);
  EXPECT_EQ(opt.target_grid_log2, 7);
  EXPECT_EQ(opt.tol, 1e-8);
  EXPECT_EQ(opt.seed, 42u);
}

TEST(XiPayload, MultiplicityTableGroupsConsecutiveRuns) {
  gcat::PathFamily fam;
  fam.maps = {{0.5, 0.0}, {0.5, 0.0}, {0.5, 0.0},
              {0.0, 0.5}, {0.0, 0.5}, {0.5, 0.5}};
  Json groups = gcat::xi_multiplicities(fam);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[0]["slope"], 0.5);
  EXPECT_EQ(groups[0]["offset"], 0.0);
  EXPECT_EQ(groups[0]["count"], 3);
  EXPECT_EQ(groups[1]["slope"], 0.0);
  EXPECT_EQ(groups[1]["offset"], 0.5);
  EXPECT_EQ(groups[1]["count"], 2);
  EXPECT_EQ(groups[2]["count"], 1);

  std::vector<gcat::PathFamily> back =
      gcat::xi_families_from_json(Json::array({groups}));
  ASSERT_EQ(back.size(), 1u);
  ASSERT_EQ(back[0].maps.size(), fam.maps.size());
  for (size_t i = 0; i < fam.maps.size(); ++i) {
    EXPECT_EQ(back[0].maps[i].slope, fam.maps[i].slope);
    EXPECT_EQ(back[0].maps[i].offset, fam.maps[i].offset);
  }
}

TEST(XiPayload, SvgIsDeterministicAndDrawsEveryGroup) {
  gcat::StageChain chain = gcat::build_jiang_su_chain(
      2, 3, 2, gcat::bonding_options_from(small_config()));
  std::vector<gcat::PathFamily> families = gcat::chain_xi_families(chain);
  ASSERT_EQ(families.size(), 2u);  // one per bonding

  const std::string svg = gcat::xi_paths_svg(families);
  EXPECT_EQ(svg, gcat::xi_paths_svg(families));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("stage 0"), std::string::npos);

  size_t lines = 0;
  for (size_t at = svg.find("<line"); at != std::string::npos;
       at = svg.find("<line", at + 1))
    ++lines;
  size_t groups = 0;
  for (const gcat::PathFamily& fam : families)
    groups += gcat::xi_multiplicities(fam).size();
  EXPECT_EQ(lines, groups);
}

TEST(CliBinary, ReportsAreByteIdenticalAndExitCodesSignalFailures) {
  if (access("./gcat", X_OK) != 0)
    GTEST_SKIP() << "gcat binary not next to the test binary";

  auto first = run_cli("suite limits");
  auto second = run_cli("suite limits");
  ASSERT_TRUE(first.has_value());
  ASSERT_TRUE(second.has_value());
  EXPECT_EQ(first->first, 0);
  EXPECT_EQ(first->second, second->second);
  Json doc = Json::parse(first->second);
  EXPECT_EQ(doc["suite"], "limits");
  EXPECT_TRUE(doc["all_pass"].get<bool>());

  auto roundtrip = run_cli("gelfand roundtrip --size 5 --samples 20");
  ASSERT_TRUE(roundtrip.has_value());
  EXPECT_EQ(roundtrip->first, 0);
  EXPECT_TRUE(Json::parse(roundtrip->second)["all_pass"].get<bool>());

  auto unknown = run_cli("suite frobnicate");
  ASSERT_TRUE(unknown.has_value());
  EXPECT_EQ(unknown->first, 2);

  auto failing = run_cli("suite core --tol 0");
  ASSERT_TRUE(failing.has_value());
  EXPECT_EQ(failing->first, 1);
}
