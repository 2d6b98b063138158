#ifndef GCAT_SUITES_HPP
#define GCAT_SUITES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gcat/check.hpp"
#include "gcat/constructions.hpp"
#include "gcat/convolution.hpp"
#include "gcat/dense.hpp"
#include "gcat/gelfand.hpp"
#include "gcat/groupoid.hpp"
#include "gcat/interval.hpp"
#include "gcat/json_io.hpp"
#include "gcat/limits.hpp"
#include "gcat/matrix_model.hpp"
#include "gcat/morphism.hpp"
#include "gcat/quotient.hpp"
#include "gcat/stages.hpp"

namespace gcat {

// Named verification suites behind the command line front end.  Every
// suite is deterministic given the seed; tolerances live here and nowhere
// else in the orchestration.
struct SuiteConfig {
  int grid_log2 = 6;
  int stages = 2;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

struct SuiteReport {
  std::string suite;
  SuiteConfig config;
  CheckList checks;
  Json extra = Json::object();  // per-suite payload merged into the report

  bool all_pass() const { return checks.all_pass(); }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "core",          "morphisms", "uhf",    "jiang-su",
      "razak-jacelon", "gelfand",   "limits"};
  return names;
}

// Consecutive runs of equal maps in a path family, with their counts.
inline Json xi_multiplicities(const PathFamily& fam) {
  Json out = Json::array();
  for (const AffineMap& m : fam.maps) {
    if (!out.empty() && out.back()["slope"].get<double>() == m.slope &&
        out.back()["offset"].get<double>() == m.offset) {
      out.back()["count"] = out.back()["count"].get<int>() + 1;
      continue;
    }
    Json entry;
    entry["slope"] = m.slope;
    entry["offset"] = m.offset;
    entry["count"] = 1;
    out.push_back(entry);
  }
  return out;
}

// Inverse of xi_multiplicities, one family per report entry.
inline std::vector<PathFamily> xi_families_from_json(const Json& xi) {
  std::vector<PathFamily> families;
  for (const Json& stage : xi) {
    PathFamily fam;
    for (const Json& group : stage) {
      const AffineMap m{group.at("slope").get<double>(),
                        group.at("offset").get<double>()};
      const int count = group.at("count").get<int>();
      for (int i = 0; i < count; ++i) fam.maps.push_back(m);
    }
    families.push_back(std::move(fam));
  }
  return families;
}

namespace detail {

inline cplx model_trace(const FiniteGroupoid& g, const MatrixModel& m,
                        const ConvolutionElement& f) {
  cplx tr = 0.0;
  int dim = 0;
  for (const Mat& b : to_matrices(g, m, f)) {
    tr += b.trace();
    dim += static_cast<int>(b.rows());
  }
  return tr / static_cast<double>(dim);
}

inline std::string fmt1(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

inline FiniteGroupoid z2_group() {
  FiniteGroupoid g;
  g.name = "z2";
  g.arrow_ids = {"e", "g"};
  g.source = {0, 0};
  g.range = {0, 0};
  g.inverse = {0, 1};
  g.unit = {1, 0};
  g.weight = {1.0, 1.0};
  g.comp = {{0, 1}, {1, 0}};
  g.finalize();
  return g;
}

// Stage truncation whose objects are odd-length bit strings; the bonding
// into the previous stage drops the last two bits and is defined exactly
// where the last bit is 0.
inline InductiveSystemTruncation bit_truncation(int depth) {
  InductiveSystemTruncation sys;
  for (int n = 0; n < depth; ++n) {
    const int count = 1 << (2 * n + 1);
    ModeledGroupoid m = make_finite_dim_groupoid(std::vector<int>(count, 1));
    sys.stages.push_back(
        std::make_shared<FiniteGroupoid>(std::move(m.groupoid)));
    sys.models.push_back(std::move(m.model));
  }
  for (int n = 0; n + 1 < depth; ++n) {
    const FiniteGroupoid& fine = *sys.stages[n + 1];
    std::vector<int> map(fine.size(), -1);
    for (int b = 0; b < fine.size(); ++b)
      if ((b & 1) == 0) map[b] = b >> 2;
    sys.bondings.push_back(
        make_partial_morphism(fine, *sys.stages[n], std::move(map)));
  }
  return sys;
}

// Partition of the disjoint union of two equal groupoids that merges each
// arrow of the first copy with its twin in the second.
inline std::vector<int> twin_partition(const FiniteGroupoid& u) {
  std::vector<std::pair<int, int>> merges;
  const int half = u.size() / 2;
  for (int x = 0; x < half; ++x) merges.push_back({x, half + x});
  return partition_from_merges(u, merges);
}

}  // namespace detail

// One panel per path family: each distinct affine map drawn once over
// [0, 1] with its multiplicity as a label.
inline std::string xi_paths_svg(const std::vector<PathFamily>& families) {
  static const char* palette[] = {"#1b6ca8", "#c0392b", "#1e8449",
                                  "#8e44ad", "#b7950b", "#34495e"};
  const int panel_w = 300, panel_h = 220, gap = 24, margin = 34;
  const int count = std::max<int>(1, static_cast<int>(families.size()));
  const int width = count * panel_w + (count + 1) * gap;
  const int height = panel_h + 2 * gap;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (size_t i = 0; i < families.size(); ++i) {
    const double x0 = gap + static_cast<double>(i) * (panel_w + gap);
    const double y0 = gap;
    auto px = [&](double t) { return x0 + margin + t * (panel_w - 2 * margin); };
    auto py = [&](double v) {
      return y0 + panel_h - margin - v * (panel_h - 2 * margin);
    };
    svg += "<rect x=\"" + detail::fmt1(x0) + "\" y=\"" + detail::fmt1(y0) +
           "\" width=\"" + std::to_string(panel_w) + "\" height=\"" +
           std::to_string(panel_h) +
           "\" fill=\"none\" stroke=\"#888888\"/>\n";
    Json groups = xi_multiplicities(families[i]);
    for (size_t j = 0; j < groups.size(); ++j) {
      const double slope = groups[j]["slope"].get<double>();
      const double offset = groups[j]["offset"].get<double>();
      const int mult = groups[j]["count"].get<int>();
      const char* color = palette[j % 6];
      svg += "<line x1=\"" + detail::fmt1(px(0.0)) + "\" y1=\"" +
             detail::fmt1(py(offset)) + "\" x2=\"" + detail::fmt1(px(1.0)) +
             "\" y2=\"" + detail::fmt1(py(offset + slope)) + "\" stroke=\"" +
             color + "\" stroke-width=\"1.5\"/>\n";
      svg += "<text x=\"" + detail::fmt1(px(1.0) + 4.0) + "\" y=\"" +
             detail::fmt1(py(offset + slope) + 4.0) +
             "\" font-size=\"11\" fill=\"" + color + "\">x" +
             std::to_string(mult) + "</text>\n";
    }
    svg += "<text x=\"" + detail::fmt1(x0 + panel_w / 2.0 - 28.0) +
           "\" y=\"" + detail::fmt1(y0 + panel_h + 16.0) +
           "\" font-size=\"12\" fill=\"#333333\">stage " + std::to_string(i) +
           ": " + std::to_string(families[i].maps.size()) + " maps</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

// Convolution against the matrix model: matrix unit relations, Kronecker
// products, adjoints, norms, and the twisted variants on small groupoids.
inline SuiteReport run_core_suite(const SuiteConfig& cfg) {
  SuiteReport rep{"core", cfg, {}, Json::object()};
  CheckList& out = rep.checks;
  std::uint64_t seed = cfg.seed;

  std::vector<ModeledGroupoid> models;
  models.push_back(make_matrix_groupoid(2));
  models.push_back(make_matrix_groupoid(3));
  ModeledGroupoid product;
  product.groupoid =
      product_groupoid(models[0].groupoid, models[1].groupoid);
  product.model = product_model(models[0].model, models[1].model);

  for (const ModeledGroupoid& m : {models[0], models[1]}) {
    const FiniteGroupoid& g = m.groupoid;
    const int n = static_cast<int>(std::lround(std::sqrt(double(g.size()))));
    double defect = 0.0;
    for (int x = 0; x < g.size(); ++x) {
      for (int y = 0; y < g.size(); ++y) {
        ConvolutionElement c = convolve(basis_element(g, x), basis_element(g, y));
        const int i = x / n, j = x % n, k = y / n, l = y % n;
        Vec expected = Vec::Zero(g.size());
        if (j == k) expected(i * n + l) = 1.0;
        defect = std::max(defect, (c.coeff - expected).cwiseAbs().maxCoeff());
      }
    }
    out.add(g.name + "-matrix-unit-relations", defect, 0.0);
  }

  Json norms = Json::array();
  for (const ModeledGroupoid* m : {&models[0], &models[1], &product}) {
    const FiniteGroupoid& g = m->groupoid;
    double conv_defect = 0.0, adj_defect = 0.0, star_defect = 0.0;
    double sandwich = 0.0, rep_defect = 0.0, cstar = 0.0, unit_defect = 0.0;
    for (int s = 0; s < 12; ++s) {
      const std::uint64_t f_seed = seed;
      ConvolutionElement f = random_element(g, seed++);
      ConvolutionElement h = random_element(g, seed++);
      Mat fm = block_diag(to_matrices(g, m->model, f));
      Mat hm = block_diag(to_matrices(g, m->model, h));
      Mat cm = block_diag(to_matrices(g, m->model, convolve(f, h)));
      conv_defect = std::max(conv_defect, max_abs(cm - fm * hm));
      Mat am = block_diag(to_matrices(g, m->model, adjoint(f)));
      adj_defect = std::max(adj_defect, max_abs(am - fm.adjoint()));
      ConvolutionElement lhs = adjoint(convolve(f, h));
      ConvolutionElement rhs = convolve(adjoint(h), adjoint(f));
      star_defect = std::max(
          star_defect, (lhs.coeff - rhs.coeff).cwiseAbs().maxCoeff());

      const double red = reduced_norm(f);
      const double one = i_norm(f);
      sandwich = std::max(sandwich, red - one);
      rep_defect = std::max(rep_defect, std::abs(red - op_norm(fm)));
      Json row;
      row["groupoid"] = g.name;
      row["seed"] = f_seed;
      row["i_norm"] = one;
      row["reduced_norm"] = red;
      row["op_norm"] = op_norm(fm);
      norms.push_back(row);
      cstar = std::max(cstar,
                       std::abs(reduced_norm(convolve(adjoint(f), f)) -
                                red * red));
      ConvolutionElement e = unit_element(g);
      unit_defect = std::max(
          unit_defect,
          (convolve(e, f).coeff - f.coeff).cwiseAbs().maxCoeff());
      unit_defect = std::max(
          unit_defect,
          (convolve(f, e).coeff - f.coeff).cwiseAbs().maxCoeff());
    }
    out.add(g.name + "-convolution-matches-matrix", conv_defect, 1e-12);
    out.add(g.name + "-adjoint-matches-matrix", adj_defect, 1e-12);
    out.add(g.name + "-adjoint-antihomomorphism", star_defect, 1e-12);
    out.add(g.name + "-norm-sandwich", std::max(0.0, sandwich), 1e-12);
    out.add(g.name + "-reduced-equals-op-norm", rep_defect, 1e-10);
    out.add(g.name + "-c-star-identity", cstar, cfg.tol);
    out.add(g.name + "-unit-neutral", unit_defect, 0.0);
  }

  // Integer coefficients make the Kronecker comparison exact.
  {
    const FiniteGroupoid& g = product.groupoid;
    double kron_defect = 0.0;
    for (int s = 0; s < 8; ++s) {
      ConvolutionElement a = random_int_element(models[0].groupoid, seed++);
      ConvolutionElement b = random_int_element(models[1].groupoid, seed++);
      ConvolutionElement ab = make_element(g);
      for (int x = 0; x < models[0].groupoid.size(); ++x)
        for (int y = 0; y < models[1].groupoid.size(); ++y)
          ab.coeff(x * models[1].groupoid.size() + y) =
              a.coeff(x) * b.coeff(y);
      Mat lhsm = block_diag(to_matrices(g, product.model, ab));
      Mat expected =
          kron(block_diag(to_matrices(models[0].groupoid, models[0].model, a)),
               block_diag(to_matrices(models[1].groupoid, models[1].model, b)));
      kron_defect = std::max(kron_defect, max_abs(lhsm - expected));
    }
    out.add("product-kronecker", kron_defect, 0.0);
  }

  // Twisted layer: the trivial cocycle is the plain convolution bit for
  // bit, and the sign cocycle on Z/2 squares the generator to minus the
  // unit.
  {
    const FiniteGroupoid& g = models[1].groupoid;
    Cocycle triv = trivial_cocycle(g);
    double twist_defect = 0.0;
    for (int s = 0; s < 8; ++s) {
      ConvolutionElement f = random_element(g, seed++);
      ConvolutionElement h = random_element(g, seed++);
      twist_defect = std::max(twist_defect,
                              (convolve_twisted(f, h, triv).coeff -
                               convolve(f, h).coeff).cwiseAbs().maxCoeff());
      twist_defect = std::max(twist_defect,
                              (adjoint_twisted(f, triv).coeff -
                               adjoint(f).coeff).cwiseAbs().maxCoeff());
    }
    out.add("twisted-trivial-cocycle-matches", twist_defect, 0.0);

    FiniteGroupoid z2 = detail::z2_group();
    Cocycle sign = trivial_cocycle(z2);
    sign.val[Cocycle::key(1, 1, z2.size())] = -1.0;
    out.append(check_cocycle(sign), "sign-cocycle:");
    ConvolutionElement chi_g = basis_element(z2, 1);
    ConvolutionElement sq = convolve_twisted(chi_g, chi_g, sign);
    Vec expected = Vec::Zero(2);
    expected(0) = -1.0;
    out.add("sign-cocycle-generator-squares-to-minus-unit",
            (sq.coeff - expected).cwiseAbs().maxCoeff(), 0.0);
  }

  rep.extra["groupoids"] =
      Json::array({models[0].groupoid.name, models[1].groupoid.name,
                   product.groupoid.name});
  rep.extra["samples_per_groupoid"] = 12;
  rep.extra["norms"] = norms;
  return rep;
}

// Induced maps of partial morphisms: restrictions, quotients, composite
// functor laws, and the unit-tensor embedding out of a product factor.
inline SuiteReport run_morphisms_suite(const SuiteConfig& cfg) {
  SuiteReport rep{"morphisms", cfg, {}, Json::object()};
  CheckList& out = rep.checks;
  std::uint64_t seed = cfg.seed;

  FiniteGroupoid g6 = make_matrix_groupoid(6).groupoid;

  // Corner restriction of pair6 to its upper 3 x 3 block.
  std::vector<int> corner;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) corner.push_back((i - 1) * 6 + (j - 1));
  RestrictResult sub = restrict_to(g6, corner);
  PartialMorphism incl = restriction_morphism(g6, sub.groupoid, sub.to_parent);
  out.append(check_partial_morphism(incl), "restriction:");
  double hom_defect = 0.0;
  for (int s = 0; s < 10; ++s) {
    ConvolutionElement f = random_int_element(sub.groupoid, seed++);
    ConvolutionElement h = random_int_element(sub.groupoid, seed++);
    ConvolutionElement lhs = induced_map(incl, convolve(f, h));
    ConvolutionElement rhs = convolve(induced_map(incl, f),
                                      induced_map(incl, h));
    hom_defect = std::max(hom_defect,
                          (lhs.coeff - rhs.coeff).cwiseAbs().maxCoeff());
    ConvolutionElement la = induced_map(incl, adjoint(f));
    ConvolutionElement ra = adjoint(induced_map(incl, f));
    hom_defect = std::max(hom_defect,
                          (la.coeff - ra.coeff).cwiseAbs().maxCoeff());
  }
  out.add("restriction-star-homomorphism", hom_defect, 0.0);

  // Diagonal gluing quotient of two copies of pair2.
  FiniteGroupoid g2 = make_matrix_groupoid(2).groupoid;
  FiniteGroupoid u = disjoint_union(g2, g2);
  QuotientResult q = quotient_by_criterion(u, detail::twin_partition(u));
  out.append(q.report, "quotient:");
  double diag_defect = 0.0;
  MatrixModel union_m = union_model(make_matrix_groupoid(2).model,
                                    make_matrix_groupoid(2).model);
  for (int s = 0; s < 10; ++s) {
    ConvolutionElement f = random_int_element(*q.groupoid, seed++);
    auto mats = to_matrices(u, union_m, induced_map(q.map, f));
    diag_defect = std::max(diag_defect, max_abs(mats[0] - mats[1]));
  }
  out.add("quotient-diagonal-image", diag_defect, 0.0);

  // Functor law over the chain union -> quotient -> diagonal subalgebra
  // of the quotient.
  RestrictResult diag = restrict_to(*q.groupoid, q.groupoid->objects);
  PartialMorphism diag_incl =
      restriction_morphism(*q.groupoid, diag.groupoid, diag.to_parent);
  out.append(verify_functor_laws({q.map, diag_incl}, 6, cfg.seed),
             "functor-law:");

  // The unit-tensor embedding a -> 1 (x) a out of pair3 into pair2 x pair3.
  FiniteGroupoid g3 = make_matrix_groupoid(3).groupoid;
  FiniteGroupoid prod = product_groupoid(g2, g3);
  std::vector<int> embed(prod.size(), -1);
  for (int x = 0; x < g2.size(); ++x)
    if (g2.unit[x])
      for (int y = 0; y < g3.size(); ++y) embed[x * g3.size() + y] = y;
  PartialMorphism unit_embed = make_partial_morphism(prod, g3, embed);
  out.append(check_partial_morphism(unit_embed), "unit-embedding:");
  MatrixModel prod_model = product_model(make_matrix_groupoid(2).model,
                                         make_matrix_groupoid(3).model);
  MatrixModel m3 = make_matrix_groupoid(3).model;
  double embed_defect = 0.0;
  for (int y = 0; y < g3.size(); ++y) {
    ConvolutionElement lifted = induced_map(unit_embed, basis_element(g3, y));
    Mat lifted_m = block_diag(to_matrices(prod, prod_model, lifted));
    Mat base = block_diag(to_matrices(g3, m3, basis_element(g3, y)));
    embed_defect = std::max(
        embed_defect, max_abs(lifted_m - kron(Mat::Identity(2, 2), base)));
  }
  out.add("unit-embedding-is-one-tensor", embed_defect, 0.0);

  rep.extra["restriction"] = "pair6 corner to pair3";
  rep.extra["quotient"] = "twin collapse of pair2 (+) pair2";
  return rep;
}

// The [2, 3, 2] tower of matrix algebras: stage validity, unital and
// trace-preserving embeddings, and coherence of the composite.
inline SuiteReport run_uhf_suite(const SuiteConfig& cfg) {
  SuiteReport rep{"uhf", cfg, {}, Json::object()};
  CheckList& out = rep.checks;

  InductiveSystemTruncation sys = make_uhf_system(make_supernatural({2, 3, 2}));
  out.append(check_system(sys), "system:");

  double unital = 0.0, trace = 0.0;
  for (int l = 0; l + 1 < sys.depth(); ++l) {
    ConvolutionElement e = unit_element(*sys.stages[l]);
    ConvolutionElement lifted = induced_map(sys.bondings[l], e);
    unital = std::max(unital,
                      (lifted.coeff - unit_element(*sys.stages[l + 1]).coeff)
                          .cwiseAbs()
                          .maxCoeff());
    ConvolutionElement f = random_int_element(*sys.stages[l], cfg.seed + l);
    cplx before = detail::model_trace(*sys.stages[l], sys.models[l], f);
    cplx after = detail::model_trace(*sys.stages[l + 1], sys.models[l + 1],
                                     induced_map(sys.bondings[l], f));
    trace = std::max(trace, std::abs(before - after));
  }
  out.add("embeddings-unital", unital, 0.0);
  out.add("embeddings-trace-preserving", trace, 0.0);

  // Composite of the two bondings against the stepwise push forward.
  PartialMorphism composite = compose_partial(sys.bondings[0], sys.bondings[1]);
  out.append(check_partial_morphism(composite), "composite:");
  double coherent = 0.0;
  for (int s = 0; s < 6; ++s) {
    ConvolutionElement f = random_int_element(*sys.stages[0], cfg.seed + 10 + s);
    ConvolutionElement stepwise = push_forward(sys, 0, 2, f);
    ConvolutionElement direct = induced_map(composite, f);
    coherent = std::max(coherent,
                        (stepwise.coeff - direct.coeff).cwiseAbs().maxCoeff());
  }
  out.add("coherence-across-three-stages", coherent, 0.0);

  rep.extra["factors"] = Json::array({2, 3, 2});
  Json sizes = Json::array();
  for (const auto& st : sys.stages) sizes.push_back(st->size());
  rep.extra["stage_sizes"] = sizes;
  return rep;
}

inline BondingOptions bonding_options_from(const SuiteConfig& cfg) {
  BondingOptions opt;
  opt.target_grid_log2 = cfg.grid_log2;
  opt.tol = cfg.tol;
  opt.seed = cfg.seed;
  return opt;
}

// Per-stage parameters, xi multiplicities per materialized bonding, and
// the materialized algebra sizes of a stage chain.
inline Json stage_chain_to_json(const StageChain& chain) {
  Json out = Json::object();
  Json stages = Json::array();
  if (chain.kind == StageKind::jiang_su) {
    for (const JiangSuStageParams& P : chain.js_params) {
      Json entry;
      entry["p"] = P.p;
      entry["q"] = P.q;
      entry["k0"] = P.k0;
      entry["k1"] = P.k1;
      entry["p_next"] = P.p_next;
      entry["q_next"] = P.q_next;
      entry["k"] = P.k;
      entry["r0"] = P.r0;
      entry["r1"] = P.r1;
      stages.push_back(entry);
    }
  } else {
    for (const RazakStageParams& P : chain.rj_params) {
      Json entry;
      entry["n"] = P.n;
      entry["n_prime"] = P.n_prime;
      entry["a"] = P.a;
      entry["b"] = P.b;
      entry["n_next"] = P.n_next;
      entry["n_prime_next"] = P.n_prime_next;
      stages.push_back(entry);
    }
  }
  out["stages"] = stages;
  Json xi = Json::array();
  for (const IntervalBonding& b : chain.bondings)
    xi.push_back(xi_multiplicities(b.xi));
  out["xi"] = xi;
  Json sizes = Json::array();
  for (const auto& st : chain.stages) sizes.push_back(st->n);
  out["materialized_sizes"] = sizes;
  return out;
}

inline std::vector<PathFamily> chain_xi_families(const StageChain& chain) {
  std::vector<PathFamily> fams;
  for (const IntervalBonding& b : chain.bondings) fams.push_back(b.xi);
  return fams;
}

inline SuiteReport run_jiang_su_suite(const SuiteConfig& cfg) {
  SuiteReport rep{"jiang-su", cfg, {}, Json::object()};
  StageChain chain = build_jiang_su_chain(2, 3, cfg.stages,
                                          bonding_options_from(cfg));
  rep.checks.append(chain.report, "");

  const JiangSuStageParams& p0 = chain.js_params[0];
  rep.checks.add_flag("stage0-frozen-parameters",
                      p0.k0 == 7 && p0.k1 == 5 && p0.p_next == 14 &&
                          p0.q_next == 15 && p0.k == 35 && p0.r0 == 5 &&
                          p0.r1 == 7,
                      "first stage from (2, 3) is off the frozen ladder");

  const int composable = std::min<int>(2, int(chain.bondings.size()));
  if (composable >= 1) {
    PathFamily composite = chain_composite_paths(chain, 0, composable);
    rep.checks.add("composite-xi-spread", max_spread(composite),
                   std::pow(2.0, -composable) + 1e-12);
  }

  rep.extra = stage_chain_to_json(chain);
  return rep;
}

inline SuiteReport run_razak_jacelon_suite(const SuiteConfig& cfg) {
  SuiteReport rep{"razak-jacelon", cfg, {}, Json::object()};
  StageChain chain = build_razak_chain(1, 2, cfg.stages,
                                       bonding_options_from(cfg));
  rep.checks.append(chain.report, "");

  const RazakStageParams& p0 = chain.rj_params[0];
  rep.checks.add_flag("stage0-frozen-parameters",
                      p0.a == 1 && p0.b == 3 && p0.n_next == 3 &&
                          p0.n_prime_next == 12,
                      "first stage from (1, 2) is off the frozen ladder");
  rep.checks.add_flag(
      "a-next-equals-b",
      chain.rj_params.size() < 2 || chain.rj_params[1].a == p0.b,
      "derived parameter relation a_next = b fails");

  rep.extra = stage_chain_to_json(chain);
  return rep;
}

// Partial maps of finite spaces against pullback homs: the literal one
// point example, the exhaustive bijection on small spaces, and seeded
// round trips at the reference size.
inline SuiteReport run_gelfand_suite(const SuiteConfig& cfg) {
  SuiteReport rep{"gelfand", cfg, {}, Json::object()};
  CheckList& out = rep.checks;

  // lambda -> (lambda, 0): the map defined at one of two points.
  {
    PartialMap m = make_partial_map({2, "X"}, {1, "Y"}, {0, -1});
    CommHom f = partial_map_to_hom(m);
    bool literal = f.h(0, 0) == cplx(1.0) && f.h(1, 0) == cplx(0.0);
    PartialMap back = hom_to_partial_map(f);
    out.add_flag("one-point-pullback-literal",
                 literal && back.image == m.image,
                 "pullback of the one point target is off");
  }

  int round_trip_failures = 0;
  int check_failures = 0;
  unsigned long long total_maps = 0;
  bool counts_ok = true;
  for (int s = 0; s <= 6; ++s) {
    for (int t = 0; t <= 6; ++t) {
      std::vector<PartialMap> maps =
          enumerate_partial_maps({s, "X"}, {t, "Y"});
      unsigned long long expected = 1;
      for (int i = 0; i < s; ++i) expected *= static_cast<unsigned>(t) + 1;
      counts_ok = counts_ok && maps.size() == expected;
      total_maps += maps.size();
      for (size_t i = 0; i < maps.size(); ++i) {
        CommHom f = partial_map_to_hom(maps[i]);
        if (hom_to_partial_map(f).image != maps[i].image)
          ++round_trip_failures;
        if (i % 101 == 0 && !check_comm_hom(f).all_pass()) ++check_failures;
      }
    }
  }
  out.add_flag("exhaustive-count-matches", counts_ok,
               "(|Y|+1)^|X| enumeration count is off");
  out.add("exhaustive-round-trip-failures",
          static_cast<double>(round_trip_failures), 0.0);
  out.add("exhaustive-hom-check-failures",
          static_cast<double>(check_failures), 0.0);

  // Seeded round trips and composition against the matrix product at the
  // reference size.
  int sampled_failures = 0;
  double compose_defect = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    PartialMap inner = random_partial_map({6, "X"}, {4, "Y"}, cfg.seed + 2 * s);
    PartialMap outer =
        random_partial_map({4, "Y"}, {5, "Z"}, cfg.seed + 2 * s + 1);
    if (hom_to_partial_map(partial_map_to_hom(inner)).image != inner.image)
      ++sampled_failures;
    Mat product = partial_map_to_hom(inner).h * partial_map_to_hom(outer).h;
    compose_defect = std::max(
        compose_defect,
        max_abs(partial_map_to_hom(compose_partial_maps(outer, inner)).h -
                product));
  }
  out.add("sampled-round-trip-failures",
          static_cast<double>(sampled_failures), 0.0);
  out.add("compose-matches-matrix-product", compose_defect, 0.0);

  rep.extra["max_points"] = 6;
  rep.extra["total_maps_enumerated"] = total_maps;
  return rep;
}

// Finite depth truncations: the bit system's threads and filtration, Haar
// weight gluing with its rejection path, and push-forward coherence.
inline SuiteReport run_limits_suite(const SuiteConfig& cfg) {
  SuiteReport rep{"limits", cfg, {}, Json::object()};
  CheckList& out = rep.checks;

  const int depth = 3;
  InductiveSystemTruncation sys = detail::bit_truncation(depth);
  out.append(check_system(sys), "system:");

  ThreadTruncation t = enumerate_threads(sys, depth);
  out.add_flag("thread-count",
               t.threads->size() == 8 && t.filtration[0].size() == 8 &&
                   t.filtration[1].size() == 16 && t.filtration[2].size() == 32,
               "depth 3 thread filtration is not 8 in 16 in 32");
  bool nested = true;
  for (int j = 0; j + 1 < depth && nested; ++j)
    nested = std::includes(t.filtration[j + 1].begin(),
                           t.filtration[j + 1].end(),
                           t.filtration[j].begin(), t.filtration[j].end());
  out.add_flag("filtration-nested", nested,
               "filtration is not monotone under inclusion");
  bool bits_ok = true;
  for (int x : t.filtration[0])
    bits_ok = bits_ok && (x & 1) == 0 && ((x >> 2) & 1) == 0;
  out.add_flag("threads-are-doubly-even-bits", bits_ok,
               "a thread fails a bit truncation");

  // Glue the top stage weights over the nested filtration sets and compare
  // with the originals; then perturb one overlap weight.
  const FiniteGroupoid& top = *sys.stages[depth - 1];
  std::vector<WeightPatch> patches;
  for (int j = 0; j < depth; ++j) {
    WeightPatch p;
    p.arrows = t.filtration[j];
    for (int x : p.arrows) p.weight.push_back(top.weight[x]);
    patches.push_back(std::move(p));
  }
  GlueResult glued = glue_haar_weights(top, patches);
  double glue_defect = 0.0;
  for (size_t i = 0; i < glued.arrows.size(); ++i)
    glue_defect = std::max(
        glue_defect, std::abs(glued.weight[i] - top.weight[glued.arrows[i]]));
  out.add("glue-round-trip", glue_defect, 0.0);

  bool rejected = false;
  std::vector<WeightPatch> perturbed = patches;
  perturbed[0].weight[0] += 1e-3;
  try {
    glue_haar_weights(top, perturbed);
  } catch (const criterion_error&) {
    rejected = true;
  }
  out.add_flag("perturbed-overlap-rejected", rejected,
               "gluing accepted disagreeing weights");

  // Coherence of stepwise against composite push forwards.
  PartialMorphism composite = compose_partial(sys.bondings[0], sys.bondings[1]);
  double coherent = 0.0;
  for (int s = 0; s < 6; ++s) {
    ConvolutionElement f = random_int_element(*sys.stages[0], cfg.seed + s);
    coherent = std::max(coherent,
                        (push_forward(sys, 0, 2, f).coeff -
                         induced_map(composite, f).coeff)
                            .cwiseAbs()
                            .maxCoeff());
  }
  out.add("push-forward-coherence", coherent, 0.0);

  rep.extra["depth"] = depth;
  Json sizes = Json::array();
  for (const auto& st : sys.stages) sizes.push_back(st->size());
  rep.extra["stage_sizes"] = sizes;
  rep.extra["thread_counts"] =
      Json::array({2, 4, 8});  // depths 1, 2, 3 of the bit system
  rep.extra["coherence_max_error"] = coherent;
  return rep;
}

inline SuiteReport run_suite(const std::string& name,
                             const SuiteConfig& cfg = {}) {
  if (name == "core") return run_core_suite(cfg);
  if (name == "morphisms") return run_morphisms_suite(cfg);
  if (name == "uhf") return run_uhf_suite(cfg);
  if (name == "jiang-su") return run_jiang_su_suite(cfg);
  if (name == "razak-jacelon") return run_razak_jacelon_suite(cfg);
  if (name == "gelfand") return run_gelfand_suite(cfg);
  if (name == "limits") return run_limits_suite(cfg);
  throw error("run_suite: unknown suite '" + name + "'");
}

inline Json suite_report_to_json(const SuiteReport& r) {
  Json doc;
  doc["suite"] = r.suite;
  Json cfg;
  cfg["grid_log2"] = r.config.grid_log2;
  cfg["stages"] = r.config.stages;
  cfg["seed"] = r.config.seed;
  cfg["tol"] = r.config.tol;
  doc["config"] = cfg;
  doc["all_pass"] = r.all_pass();
  doc["checks"] = check_list_to_json(r.checks);
  for (const auto& item : r.extra.items()) doc[item.key()] = item.value();
  return doc;
}

}  // namespace gcat

#endif  // GCAT_SUITES_HPP
