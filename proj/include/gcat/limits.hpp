#ifndef GCAT_LIMITS_HPP
#define GCAT_LIMITS_HPP

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "gcat/groupoid.hpp"
#include "gcat/matrix_model.hpp"
#include "gcat/morphism.hpp"

namespace gcat {

// A finite truncation of an inductive system of groupoids.  Stage j+1 maps
// onto stage j through bondings[j], so the induced algebra maps run up the
// chain: induced_map(bondings[j]) embeds the stage-j algebra into the
// stage-(j+1) algebra.  `models` is either empty or holds matrix-unit
// coordinates for every stage.
struct InductiveSystemTruncation {
  std::vector<std::shared_ptr<const FiniteGroupoid>> stages;
  std::vector<PartialMorphism> bondings;
  std::vector<MatrixModel> models;

  int depth() const { return static_cast<int>(stages.size()); }
};

// Validates every stage and every bonding of the truncation.
inline CheckList check_system(const InductiveSystemTruncation& sys,
                              double weight_tol = 0.0) {
  CheckList out;
  out.add_flag("bonding-count",
               sys.bondings.size() + 1 == sys.stages.size() ||
                   (sys.stages.empty() && sys.bondings.empty()),
               "stage/bonding count mismatch");
  for (size_t j = 0; j < sys.stages.size(); ++j)
    out.append(validate_groupoid(*sys.stages[j], weight_tol),
               "stage" + std::to_string(j) + ":");
  for (size_t j = 0; j < sys.bondings.size(); ++j) {
    out.add_flag("bonding" + std::to_string(j) + ":endpoints",
                 sys.bondings[j].domain == sys.stages[j + 1].get() &&
                     sys.bondings[j].codomain == sys.stages[j].get(),
                 "bonding does not connect consecutive stages");
    out.append(check_partial_morphism(sys.bondings[j], weight_tol),
               "bonding" + std::to_string(j) + ":");
  }
  return out;
}

// Pushes an element of stage i forward to stage j >= i through the induced
// maps of the bondings.
inline ConvolutionElement push_forward(const InductiveSystemTruncation& sys,
                                       int i, int j,
                                       const ConvolutionElement& f) {
  if (i < 0 || j < i || j >= sys.depth())
    throw error("push_forward: stage indices out of range");
  if (f.parent != sys.stages[i].get())
    throw error("push_forward: element does not live on stage i");
  ConvolutionElement out = f;
  for (int l = i; l < j; ++l) out = induced_map(sys.bondings[l], out);
  return out;
}

// The threads of a depth-d truncation: arrows of the top stage that
// project all the way down to stage 0.  The thread groupoid is that arrow
// set as a standalone groupoid (top-stage weights); `choices` lists, for
// every thread, the projected arrow at each stage.  `filtration[j]` is the
// set of top-stage arrows projectable down to stage j, so filtration[0]
// (the threads) grows monotonically to filtration[d-1] (everything).
struct ThreadTruncation {
  int depth = 0;
  std::shared_ptr<const FiniteGroupoid> threads;
  std::vector<int> to_top;                  // thread arrow -> top-stage arrow
  std::vector<std::vector<int>> choices;    // [thread][stage]
  std::vector<PartialMorphism> projections;  // [j]: top stage -> stage j
  std::vector<std::vector<int>> filtration;
  PartialMorphism top_inclusion;  // top stage -> thread groupoid
};

inline ThreadTruncation enumerate_threads(const InductiveSystemTruncation& sys,
                                          int depth) {
  if (depth < 1 || depth > sys.depth())
    throw error("enumerate_threads: depth out of range");
  const FiniteGroupoid& top = *sys.stages[depth - 1];

  ThreadTruncation out;
  out.depth = depth;
  out.projections.resize(depth);
  out.projections[depth - 1] = identity_morphism(top);
  for (int j = depth - 2; j >= 0; --j)
    out.projections[j] =
        compose_partial(sys.bondings[j], out.projections[j + 1]);

  out.filtration.resize(depth);
  for (int j = 0; j < depth; ++j)
    out.filtration[j] = out.projections[j].dom_arrows;

  RestrictResult r = restrict_to(top, out.filtration[0]);
  auto z = std::make_shared<FiniteGroupoid>(std::move(r.groupoid));
  out.threads = z;
  out.to_top = r.to_parent;
  out.top_inclusion = restriction_morphism(top, *z, out.to_top);

  out.choices.resize(out.to_top.size(), std::vector<int>(depth, -1));
  for (size_t t = 0; t < out.to_top.size(); ++t)
    for (int j = 0; j < depth; ++j)
      out.choices[t][j] = out.projections[j].map[out.to_top[t]];
  return out;
}

// One layer of a nested weight assignment: Haar weights proposed on a
// subset of arrows.
struct WeightPatch {
  std::vector<int> arrows;
  std::vector<double> weight;
};

struct GlueResult {
  std::vector<int> arrows;     // the largest patch, sorted
  std::vector<double> weight;  // glued weights, aligned with `arrows`
};

// Merges a nested chain of weight patches into one table.  The patches
// must form a chain under inclusion (smallest first); a weight that
// disagrees between two patches on a shared arrow throws criterion_error
// naming the arrow.
inline GlueResult glue_haar_weights(const FiniteGroupoid& g,
                                    const std::vector<WeightPatch>& patches,
                                    double tol = 0.0) {
  if (patches.empty()) throw error("glue_haar_weights: no patches");
  std::vector<std::pair<std::vector<int>, std::vector<double>>> sorted;
  for (const WeightPatch& p : patches) {
    if (p.arrows.size() != p.weight.size())
      throw error("glue_haar_weights: patch tables have different sizes");
    std::vector<size_t> order(p.arrows.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return p.arrows[a] < p.arrows[b]; });
    std::vector<int> arrows;
    std::vector<double> weight;
    for (size_t i : order) {
      if (p.arrows[i] < 0 || p.arrows[i] >= g.size())
        throw error("glue_haar_weights: arrow index out of range");
      if (!arrows.empty() && arrows.back() == p.arrows[i])
        throw error("glue_haar_weights: duplicate arrow in one patch");
      arrows.push_back(p.arrows[i]);
      weight.push_back(p.weight[i]);
    }
    sorted.push_back({std::move(arrows), std::move(weight)});
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.first.size() < b.first.size();
  });

  // Check nesting and agreement pairwise against the accumulating merge.
  std::vector<double> merged(g.size());
  std::vector<char> have(g.size(), 0);
  for (const auto& [arrows, weight] : sorted) {
    std::set<int> cur(arrows.begin(), arrows.end());
    for (int x = 0; x < g.size(); ++x)
      if (have[x] && !cur.count(x))
        throw structural_error(
            "glue_haar_weights: patches are not nested, arrow " +
            detail::arrow_ref(g, x) + " disappears");
    for (size_t i = 0; i < arrows.size(); ++i) {
      const int x = arrows[i];
      if (have[x] && std::abs(merged[x] - weight[i]) > tol)
        throw criterion_error(
            "glue_haar_weights: weight mismatch on arrow " +
            detail::arrow_ref(g, x));
      merged[x] = weight[i];
      have[x] = 1;
    }
  }

  GlueResult out;
  out.arrows = sorted.back().first;
  for (int x : out.arrows) out.weight.push_back(merged[x]);
  return out;
}

}  // namespace gcat

#endif  // GCAT_LIMITS_HPP
