// Command line front end for the groupoid convolution algebra toolkit.
//
//   gcat suite <name>         run a named verification suite
//   gcat build <target>       materialize a construction and verify it
//   gcat gelfand roundtrip    pullback round trips on finite spaces
//
// The report is JSON on stdout, or goes to --report with a one line
// summary on stdout.  Reruns with identical flags and seed produce
// byte-identical output.  Exit code 0 iff every check passes, 1 when a
// check fails, 2 on usage or structural errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "gcat/suites.hpp"

namespace {

using gcat::Json;

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gcat::error("cannot open '" + path + "' for writing");
  out << body;
  if (!out.good()) throw gcat::error("short write to '" + path + "'");
}

std::string norm_table_csv(const Json& rows) {
  std::string csv = "groupoid,seed,i_norm,reduced_norm,op_norm\n";
  for (const Json& r : rows) {
    csv += r.at("groupoid").get<std::string>();
    csv += ',' + r.at("seed").dump();
    csv += ',' + r.at("i_norm").dump();
    csv += ',' + r.at("reduced_norm").dump();
    csv += ',' + r.at("op_norm").dump();
    csv += '\n';
  }
  return csv;
}

std::string summary_line(const Json& doc) {
  int failed = 0, total = 0;
  for (const Json& c : doc.at("checks")) {
    ++total;
    if (!c.at("pass").get<bool>()) ++failed;
  }
  std::string label;
  for (const char* key : {"suite", "target", "command"})
    if (label.empty() && doc.contains(key))
      label = doc.at(key).get<std::string>();
  if (failed == 0)
    return label + ": pass (" + std::to_string(total) + " checks)";
  return label + ": FAIL (" + std::to_string(failed) + " of " +
         std::to_string(total) + " checks)";
}

struct OutputPaths {
  std::string report;
  std::string svg;
  std::string csv;
};

void add_output_flags(CLI::App* cmd, OutputPaths& o, bool plots) {
  cmd->add_option("--report", o.report,
                  "write the JSON report here instead of stdout")
      ->envname("GCAT_REPORT");
  if (!plots) return;
  cmd->add_option("--svg", o.svg,
                  "write the xi path graph here (staged builds only)")
      ->envname("GCAT_SVG");
  cmd->add_option("--csv", o.csv, "write the norm table here (core suite)")
      ->envname("GCAT_CSV");
}

void add_config_flags(CLI::App* cmd, gcat::SuiteConfig& c) {
  cmd->add_option("--grid-log2", c.grid_log2, "dyadic sample grid exponent")
      ->envname("GCAT_GRID_LOG2");
  cmd->add_option("--stages", c.stages, "chain length for staged builds")
      ->envname("GCAT_STAGES");
  cmd->add_option("--seed", c.seed, "seed for all randomized checks")
      ->envname("GCAT_SEED");
  cmd->add_option("--tol", c.tol, "floating point tolerance")
      ->envname("GCAT_TOL");
}

int emit(const Json& doc, const OutputPaths& out) {
  if (!out.svg.empty()) {
    if (!doc.contains("xi"))
      throw gcat::error("--svg: this command produces no xi path data");
    write_file(out.svg, gcat::xi_paths_svg(
                            gcat::xi_families_from_json(doc.at("xi"))));
  }
  if (!out.csv.empty()) {
    if (!doc.contains("norms"))
      throw gcat::error("--csv: this command produces no norm table");
    write_file(out.csv, norm_table_csv(doc.at("norms")));
  }
  if (!out.report.empty()) {
    write_file(out.report, doc.dump(2) + "\n");
    std::cout << summary_line(doc) << "\n";
  } else {
    std::cout << doc.dump(2) << "\n";
  }
  return doc.at("all_pass").get<bool>() ? 0 : 1;
}

Json config_json(const gcat::SuiteConfig& cfg) {
  Json c;
  c["grid_log2"] = cfg.grid_log2;
  c["stages"] = cfg.stages;
  c["seed"] = cfg.seed;
  c["tol"] = cfg.tol;
  return c;
}

Json build_doc(const std::string& target, const gcat::SuiteConfig& cfg,
               const gcat::CheckList& checks) {
  Json doc;
  doc["command"] = "build";
  doc["target"] = target;
  doc["config"] = config_json(cfg);
  doc["all_pass"] = checks.all_pass();
  doc["checks"] = gcat::check_list_to_json(checks);
  return doc;
}

Json stage_arrows(const gcat::InductiveSystemTruncation& sys) {
  Json arrows = Json::array();
  for (const auto& st : sys.stages) arrows.push_back(st->size());
  return arrows;
}

Json build_matrix(int n, const gcat::SuiteConfig& cfg) {
  gcat::ModeledGroupoid m = gcat::make_matrix_groupoid(n);
  Json doc = build_doc("matrix", cfg, gcat::validate_groupoid(m.groupoid));
  doc["n"] = n;
  doc["block_sizes"] = m.model.block_sizes;
  doc["groupoid"] = gcat::groupoid_to_json(m.groupoid);
  return doc;
}

Json build_finite_dim(const std::vector<int>& sizes,
                      const gcat::SuiteConfig& cfg) {
  gcat::ModeledGroupoid m = gcat::make_finite_dim_groupoid(sizes);
  Json doc = build_doc("finite-dim", cfg, gcat::validate_groupoid(m.groupoid));
  doc["sizes"] = sizes;
  doc["block_sizes"] = m.model.block_sizes;
  doc["groupoid"] = gcat::groupoid_to_json(m.groupoid);
  return doc;
}

Json build_uhf(const std::vector<int>& factors, const gcat::SuiteConfig& cfg) {
  gcat::InductiveSystemTruncation sys =
      gcat::make_uhf_system(gcat::make_supernatural(factors));
  Json doc = build_doc("uhf", cfg, gcat::check_system(sys));
  doc["factors"] = factors;
  Json dims = Json::array();
  long long d = 1;
  for (int f : factors) dims.push_back(d *= f);
  doc["stage_dimensions"] = dims;
  doc["stage_arrows"] = stage_arrows(sys);
  return doc;
}

// Fibonacci chain: blocks (1), (1,1), (2,1), (3,2), ... with the usual
// multiplicity pattern, `stages` stages deep.
Json build_af(const gcat::SuiteConfig& cfg) {
  if (cfg.stages < 2)
    throw gcat::structural_error("build af: need --stages >= 2");
  std::vector<std::vector<int>> sizes = {{1}, {1, 1}};
  while (static_cast<int>(sizes.size()) < cfg.stages) {
    const std::vector<int>& prev = sizes.back();
    sizes.push_back({prev[0] + prev[1], prev[0]});
  }
  std::vector<std::vector<std::vector<int>>> mult;
  mult.push_back({{1}, {1}});
  for (int l = 1; l + 1 < cfg.stages; ++l) mult.push_back({{1, 1}, {1, 0}});
  gcat::InductiveSystemTruncation sys = gcat::make_af_system(sizes, mult);
  Json doc = build_doc("af", cfg, gcat::check_system(sys));
  doc["stage_blocks"] = sizes;
  doc["stage_arrows"] = stage_arrows(sys);
  return doc;
}

Json build_tensor_power(int base, int depth, const gcat::SuiteConfig& cfg) {
  gcat::ModeledGroupoid m = gcat::make_matrix_groupoid(base);
  gcat::InductiveSystemTruncation sys =
      gcat::make_tensor_power_truncation(m.groupoid, depth);
  Json doc = build_doc("tensor-power", cfg, gcat::check_system(sys));
  doc["base"] = base;
  doc["depth"] = depth;
  doc["stage_arrows"] = stage_arrows(sys);
  return doc;
}

Json build_interval(const std::string& target,
                    gcat::ConstrainedIntervalAlgebra algebra,
                    const gcat::SuiteConfig& cfg) {
  gcat::CheckList checks = gcat::validate_interval_algebra(algebra);
  gcat::IntervalElement f = gcat::random_member(algebra, cfg.seed);
  checks.append(gcat::check_element(f), "member:");
  Json doc = build_doc(target, cfg, checks);
  doc["name"] = algebra.name;
  doc["algebra"] = gcat::interval_algebra_to_json(algebra);
  return doc;
}

Json build_chain(const std::string& target, const gcat::StageChain& chain,
                 const gcat::SuiteConfig& cfg) {
  Json doc = build_doc(target, cfg, chain.report);
  const Json payload = gcat::stage_chain_to_json(chain);
  for (const auto& item : payload.items()) doc[item.key()] = item.value();
  return doc;
}

Json run_gelfand_roundtrip(int size, int samples, std::uint64_t seed) {
  if (size < 1) throw gcat::structural_error("gelfand roundtrip: size >= 1");
  gcat::CheckList checks;

  // lambda -> (lambda, 0): functions on one point pulled back to two.
  gcat::CommHom corner{{2, "X"}, {1, "Y"}, gcat::Mat::Zero(2, 1)};
  corner.h(0, 0) = 1.0;
  gcat::PartialMap back = gcat::hom_to_partial_map(corner);
  checks.add_flag("corner-embedding-recovers-partial-map",
                  back.image == std::vector<int>({0, -1}),
                  "expected image (0, undefined)");

  const gcat::FiniteSpace X{size, "X"};
  const gcat::FiniteSpace Y{size, "Y"};
  double hom_error = 0.0;
  int mismatches = 0;
  for (int k = 0; k < samples; ++k) {
    gcat::PartialMap m = gcat::random_partial_map(X, Y, seed + k);
    gcat::CommHom h = gcat::partial_map_to_hom(m);
    for (const gcat::CheckResult& r : gcat::check_comm_hom(h).results)
      hom_error = std::max(hom_error, r.max_error);
    if (gcat::hom_to_partial_map(h).image != m.image) ++mismatches;
  }
  checks.add("pullbacks-are-homomorphisms", hom_error, 0.0);
  checks.add("round-trips-recover-the-map", mismatches, 0.0);

  Json doc;
  doc["command"] = "gelfand-roundtrip";
  doc["size"] = size;
  doc["samples"] = samples;
  doc["seed"] = seed;
  doc["all_pass"] = checks.all_pass();
  doc["checks"] = gcat::check_list_to_json(checks);
  return doc;
}

std::pair<int, int> expect_pair(const std::vector<long long>& v,
                                const char* flag) {
  if (v.size() != 2)
    throw gcat::error(std::string(flag) + " takes exactly two values");
  return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"groupoid convolution algebra toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gcat 1.0.0");

  // suite <name>
  CLI::App* suite_cmd =
      app.add_subcommand("suite", "run a named verification suite");
  std::string suite_name;
  std::string names;
  for (const std::string& n : gcat::suite_names())
    names += (names.empty() ? "" : ", ") + n;
  suite_cmd->add_option("name", suite_name, "one of: " + names)->required();
  gcat::SuiteConfig suite_cfg;
  OutputPaths suite_out;
  add_config_flags(suite_cmd, suite_cfg);
  add_output_flags(suite_cmd, suite_out, true);

  // build <target>
  CLI::App* build_cmd =
      app.add_subcommand("build", "materialize a construction and verify it");
  std::string target;
  build_cmd
      ->add_option("target", target,
                   "one of: matrix, finite-dim, uhf, af, tensor-power, "
                   "dimension-drop, zn, building-block, jiang-su, "
                   "razak-jacelon")
      ->required();
  gcat::SuiteConfig build_cfg;
  OutputPaths build_out;
  add_config_flags(build_cmd, build_cfg);
  add_output_flags(build_cmd, build_out, true);
  int opt_n = 2;
  std::vector<int> opt_sizes = {2, 3};
  std::vector<int> opt_factors = {2, 3, 2};
  int opt_base = 2;
  int opt_depth = 3;
  std::vector<long long> opt_mn = {2, 3};
  std::vector<long long> opt_start = {1, 2};
  std::vector<long long> opt_pq = {2, 3};
  build_cmd->add_option("--n", opt_n, "points (matrix, zn)")
      ->envname("GCAT_N");
  build_cmd->add_option("--sizes", opt_sizes, "block sizes (finite-dim)")
      ->delimiter(',')
      ->envname("GCAT_SIZES");
  build_cmd->add_option("--factors", opt_factors, "stage factors (uhf)")
      ->delimiter(',')
      ->envname("GCAT_FACTORS");
  build_cmd->add_option("--base", opt_base, "base points (tensor-power)")
      ->envname("GCAT_BASE");
  build_cmd->add_option("--depth", opt_depth, "stage count (tensor-power)")
      ->envname("GCAT_DEPTH");
  build_cmd->add_option("--mn", opt_mn, "m,n (dimension-drop)")
      ->delimiter(',')
      ->envname("GCAT_MN");
  build_cmd->add_option("--start", opt_start, "n,n' (building-block, razak-jacelon)")
      ->delimiter(',')
      ->envname("GCAT_START");
  build_cmd->add_option("--pq", opt_pq, "p,q (jiang-su)")
      ->delimiter(',')
      ->envname("GCAT_PQ");

  // gelfand roundtrip
  CLI::App* gelfand_cmd =
      app.add_subcommand("gelfand", "finite space pullback front end");
  gelfand_cmd->require_subcommand(1);
  CLI::App* roundtrip_cmd = gelfand_cmd->add_subcommand(
      "roundtrip", "partial map -> pullback -> partial map round trips");
  int opt_size = 6;
  int opt_samples = 100;
  std::uint64_t opt_seed = 0;
  OutputPaths gelfand_out;
  roundtrip_cmd->add_option("--size", opt_size, "points per space")
      ->envname("GCAT_SIZE");
  roundtrip_cmd->add_option("--samples", opt_samples, "random maps to test")
      ->envname("GCAT_SAMPLES");
  roundtrip_cmd->add_option("--seed", opt_seed, "seed for the random maps")
      ->envname("GCAT_SEED");
  add_output_flags(roundtrip_cmd, gelfand_out, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (suite_cmd->parsed()) {
      gcat::SuiteReport rep = gcat::run_suite(suite_name, suite_cfg);
      return emit(gcat::suite_report_to_json(rep), suite_out);
    }
    if (build_cmd->parsed()) {
      const gcat::SuiteConfig& cfg = build_cfg;
      if (target == "matrix") return emit(build_matrix(opt_n, cfg), build_out);
      if (target == "finite-dim")
        return emit(build_finite_dim(opt_sizes, cfg), build_out);
      if (target == "uhf") return emit(build_uhf(opt_factors, cfg), build_out);
      if (target == "af") return emit(build_af(cfg), build_out);
      if (target == "tensor-power")
        return emit(build_tensor_power(opt_base, opt_depth, cfg), build_out);
      if (target == "dimension-drop") {
        auto [m, n] = expect_pair(opt_mn, "--mn");
        return emit(
            build_interval(target,
                           gcat::make_dimension_drop(m, n, cfg.grid_log2), cfg),
            build_out);
      }
      if (target == "zn")
        return emit(build_interval(
                        target, gcat::make_zn(opt_n, cfg.grid_log2), cfg),
                    build_out);
      if (target == "building-block") {
        auto [n, n_prime] = expect_pair(opt_start, "--start");
        return emit(
            build_interval(
                target, gcat::make_building_block(n, n_prime, cfg.grid_log2),
                cfg),
            build_out);
      }
      if (target == "jiang-su") {
        auto [p, q] = expect_pair(opt_pq, "--pq");
        gcat::StageChain chain = gcat::build_jiang_su_chain(
            p, q, cfg.stages, gcat::bonding_options_from(cfg));
        return emit(build_chain(target, chain, cfg), build_out);
      }
      if (target == "razak-jacelon") {
        auto [n, n_prime] = expect_pair(opt_start, "--start");
        gcat::StageChain chain = gcat::build_razak_chain(
            n, n_prime, cfg.stages, gcat::bonding_options_from(cfg));
        return emit(build_chain(target, chain, cfg), build_out);
      }
      throw gcat::error("unknown build target '" + target + "'");
    }
    if (roundtrip_cmd->parsed())
      return emit(run_gelfand_roundtrip(opt_size, opt_samples, opt_seed),
                  gelfand_out);
  } catch (const gcat::error& e) {
    std::cerr << "gcat: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
