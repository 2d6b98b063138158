#ifndef GCAT_CONSTRUCTIONS_HPP
#define GCAT_CONSTRUCTIONS_HPP

#include <numeric>
#include <string>
#include <vector>

#include "gcat/groupoid.hpp"
#include "gcat/limits.hpp"
#include "gcat/matrix_model.hpp"
#include "gcat/morphism.hpp"

namespace gcat {

// A groupoid together with its matrix-unit coordinates.
struct ModeledGroupoid {
  FiniteGroupoid groupoid;
  MatrixModel model;
};

// Pair groupoid on n points with counting weights.  Arrow "(i,j)" (1-based)
// runs from object j to object i; composition matches matrix-unit
// multiplication e_ij e_jk = e_ik.  Principal and etale.
inline ModeledGroupoid make_matrix_groupoid(int n,
                                            const std::string& name = "") {
  if (n <= 0) throw error("make_matrix_groupoid: size must be positive");
  FiniteGroupoid g;
  g.name = name.empty() ? ("pair" + std::to_string(n)) : name;
  const int total = n * n;
  auto idx = [n](int i, int j) { return (i - 1) * n + (j - 1); };
  g.arrow_ids.resize(total);
  g.source.resize(total);
  g.range.resize(total);
  g.inverse.resize(total);
  g.unit.resize(total);
  g.weight.assign(total, 1.0);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const int a = idx(i, j);
      g.arrow_ids[a] =
          "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      g.source[a] = idx(j, j);
      g.range[a] = idx(i, i);
      g.inverse[a] = idx(j, i);
      g.unit[a] = (i == j);
    }
  g.comp.assign(total, std::vector<int>(total, -1));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) g.comp[idx(i, j)][idx(j, k)] = idx(i, k);
  g.finalize();

  MatrixModel m;
  m.block_sizes = {n};
  m.block.assign(total, 0);
  m.row.resize(total);
  m.col.resize(total);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      m.row[idx(i, j)] = i - 1;
      m.col[idx(i, j)] = j - 1;
    }
  return {std::move(g), std::move(m)};
}

// Disjoint union of pair groupoids, one per entry of `sizes`; the
// convolution algebra is the matching direct sum of matrix algebras.
// Arrow ids are "b<k>:(i,j)".
inline ModeledGroupoid make_finite_dim_groupoid(const std::vector<int>& sizes) {
  if (sizes.empty())
    throw error("make_finite_dim_groupoid: need at least one block");
  std::string name = "sum[";
  for (size_t k = 0; k < sizes.size(); ++k) {
    if (k) name += ",";
    name += std::to_string(sizes[k]);
  }
  name += "]";

  FiniteGroupoid g;
  g.name = name;
  MatrixModel m;
  int total = 0;
  for (int s : sizes) {
    if (s <= 0)
      throw error("make_finite_dim_groupoid: sizes must be positive");
    total += s * s;
  }
  g.arrow_ids.resize(total);
  g.source.resize(total);
  g.range.resize(total);
  g.inverse.resize(total);
  g.unit.resize(total);
  g.weight.assign(total, 1.0);
  g.comp.assign(total, std::vector<int>(total, -1));
  m.block_sizes = sizes;
  m.block.resize(total);
  m.row.resize(total);
  m.col.resize(total);

  int off = 0;
  for (size_t b = 0; b < sizes.size(); ++b) {
    const int n = sizes[b];
    auto idx = [off, n](int i, int j) { return off + (i - 1) * n + (j - 1); };
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        const int a = idx(i, j);
        g.arrow_ids[a] = "b" + std::to_string(b) + ":(" + std::to_string(i) +
                         "," + std::to_string(j) + ")";
        g.source[a] = idx(j, j);
        g.range[a] = idx(i, i);
        g.inverse[a] = idx(j, i);
        g.unit[a] = (i == j);
        m.block[a] = static_cast<int>(b);
        m.row[a] = i - 1;
        m.col[a] = j - 1;
      }
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
          g.comp[idx(i, j)][idx(j, k)] = idx(i, k);
    off += n * n;
  }
  g.finalize();
  return {std::move(g), std::move(m)};
}

// A finite truncation of a supernatural number: an ordered list of factors,
// each at least 2.  The stage dimensions are the partial products.
struct SupernaturalTruncation {
  std::vector<int> factors;

  std::vector<long long> stage_dims() const {
    std::vector<long long> out;
    long long p = 1;
    for (int f : factors) {
      p *= f;
      out.push_back(p);
    }
    return out;
  }
};

inline SupernaturalTruncation make_supernatural(std::vector<int> factors) {
  if (factors.empty())
    throw error("make_supernatural: need at least one factor");
  for (int f : factors)
    if (f < 2) throw error("make_supernatural: factors must be at least 2");
  return {std::move(factors)};
}

// The groupoid picture of a UHF truncation M_{n_1} -> M_{n_1 n_2} -> ...:
// stage l is the product of the first l+1 pair groupoids, and the bonding
// from stage l+1 onto stage l drops the last coordinate on the arrows
// whose last coordinate is a unit.  The induced algebra maps are the
// unital embeddings T -> T (x) 1.
inline InductiveSystemTruncation make_uhf_system(
    const SupernaturalTruncation& s) {
  InductiveSystemTruncation sys;
  ModeledGroupoid cur = make_matrix_groupoid(s.factors[0]);
  sys.stages.push_back(
      std::make_shared<FiniteGroupoid>(std::move(cur.groupoid)));
  sys.models.push_back(cur.model);
  for (size_t l = 1; l < s.factors.size(); ++l) {
    ModeledGroupoid fac = make_matrix_groupoid(s.factors[l]);
    FiniteGroupoid next = product_groupoid(*sys.stages.back(), fac.groupoid);
    MatrixModel next_model = product_model(sys.models.back(), fac.model);
    auto next_ptr = std::make_shared<FiniteGroupoid>(std::move(next));

    const FiniteGroupoid& prev = *sys.stages.back();
    const int nf = fac.groupoid.size();
    std::vector<int> map(next_ptr->size(), -1);
    for (int x = 0; x < prev.size(); ++x)
      for (int y = 0; y < nf; ++y)
        if (fac.groupoid.unit[y]) map[x * nf + y] = x;
    sys.bondings.push_back(
        make_partial_morphism(*next_ptr, prev, std::move(map)));
    sys.stages.push_back(next_ptr);
    sys.models.push_back(std::move(next_model));
  }
  return sys;
}

namespace detail {

// Layout of one target block of a multiplicity embedding: block j of the
// target is tiled with multiplicity[j][i] consecutive copies of each source
// block i, in order of i.
struct AfSegment {
  int src_block;
  int copy;
  int offset;  // start row/col inside the target block
  int size;
};

inline std::vector<std::vector<AfSegment>> af_layout(
    const std::vector<int>& source_sizes, const std::vector<int>& target_sizes,
    const std::vector<std::vector<int>>& multiplicity) {
  if (multiplicity.size() != target_sizes.size())
    throw error("multiplicity row count must match target block count");
  std::vector<std::vector<AfSegment>> out(target_sizes.size());
  for (size_t j = 0; j < target_sizes.size(); ++j) {
    if (multiplicity[j].size() != source_sizes.size())
      throw error("multiplicity column count must match source block count");
    int off = 0;
    for (size_t i = 0; i < source_sizes.size(); ++i) {
      if (multiplicity[j][i] < 0)
        throw error("multiplicity entries must be nonnegative");
      for (int c = 0; c < multiplicity[j][i]; ++c) {
        out[j].push_back({static_cast<int>(i), c, off, source_sizes[i]});
        off += source_sizes[i];
      }
    }
    if (off != target_sizes[j])
      throw error(
          "multiplicity embedding does not fill target block " +
          std::to_string(j) + ": " + std::to_string(off) + " of " +
          std::to_string(target_sizes[j]) + " rows");
  }
  return out;
}

// Morphism target -> source for a multiplicity embedding: a target arrow
// (j, a, b) belongs to the domain exactly when a and b fall inside the
// same copy segment, and maps to the corresponding source arrow.
inline std::vector<int> af_bonding_map(
    const FiniteGroupoid& target, const MatrixModel& target_model,
    const FiniteGroupoid& source, const MatrixModel& source_model,
    const std::vector<std::vector<AfSegment>>& layout) {
  // Index source arrows by (block, row, col).
  std::vector<std::vector<int>> src_of(source_model.block_sizes.size());
  for (size_t b = 0; b < source_model.block_sizes.size(); ++b)
    src_of[b].assign(static_cast<size_t>(source_model.block_sizes[b]) *
                         source_model.block_sizes[b],
                     -1);
  for (int x = 0; x < source.size(); ++x)
    src_of[source_model.block[x]]
          [source_model.row[x] * source_model.block_sizes[source_model.block[x]] +
           source_model.col[x]] = x;

  std::vector<int> map(target.size(), -1);
  for (int x = 0; x < target.size(); ++x) {
    const int j = target_model.block[x];
    const int a = target_model.row[x];
    const int b = target_model.col[x];
    for (const AfSegment& seg : layout[j]) {
      if (a >= seg.offset && a < seg.offset + seg.size && b >= seg.offset &&
          b < seg.offset + seg.size) {
        const int n = source_model.block_sizes[seg.src_block];
        map[x] = src_of[seg.src_block][(a - seg.offset) * n + (b - seg.offset)];
        break;
      }
    }
  }
  return map;
}

}  // namespace detail

// One step of a multiplicity embedding between finite dimensional
// algebras: source blocks M_{s_i} embed into target blocks M_{t_j} with
// multiplicity[j][i] copies, which requires sum_i multiplicity[j][i] s_i =
// t_j.  The groupoid bonding runs from the target groupoid onto the source
// groupoid; its induced map is the block-diagonal multiplicity embedding.
struct AfBonding {
  std::shared_ptr<const FiniteGroupoid> source;
  std::shared_ptr<const FiniteGroupoid> target;
  MatrixModel source_model;
  MatrixModel target_model;
  std::vector<std::vector<int>> multiplicity;
  PartialMorphism morphism;  // *target -> *source
};

inline AfBonding make_af_bonding(
    const std::vector<int>& source_sizes, const std::vector<int>& target_sizes,
    const std::vector<std::vector<int>>& multiplicity) {
  auto layout = detail::af_layout(source_sizes, target_sizes, multiplicity);
  ModeledGroupoid src = make_finite_dim_groupoid(source_sizes);
  ModeledGroupoid tgt = make_finite_dim_groupoid(target_sizes);
  AfBonding out;
  out.source = std::make_shared<FiniteGroupoid>(std::move(src.groupoid));
  out.target = std::make_shared<FiniteGroupoid>(std::move(tgt.groupoid));
  out.source_model = std::move(src.model);
  out.target_model = std::move(tgt.model);
  out.multiplicity = multiplicity;
  out.morphism = make_partial_morphism(
      *out.target, *out.source,
      detail::af_bonding_map(*out.target, out.target_model, *out.source,
                             out.source_model, layout));
  return out;
}

// A chain of multiplicity embeddings: stage_sizes[l] lists the block sizes
// at stage l, multiplicities[l] embeds stage l into stage l+1.
inline InductiveSystemTruncation make_af_system(
    const std::vector<std::vector<int>>& stage_sizes,
    const std::vector<std::vector<std::vector<int>>>& multiplicities) {
  if (stage_sizes.empty()) throw error("make_af_system: no stages");
  if (multiplicities.size() + 1 != stage_sizes.size())
    throw error("make_af_system: need one multiplicity per bonding");
  InductiveSystemTruncation sys;
  for (const auto& sizes : stage_sizes) {
    ModeledGroupoid m = make_finite_dim_groupoid(sizes);
    sys.stages.push_back(
        std::make_shared<FiniteGroupoid>(std::move(m.groupoid)));
    sys.models.push_back(std::move(m.model));
  }
  for (size_t l = 0; l + 1 < stage_sizes.size(); ++l) {
    auto layout = detail::af_layout(stage_sizes[l], stage_sizes[l + 1],
                                    multiplicities[l]);
    sys.bondings.push_back(make_partial_morphism(
        *sys.stages[l + 1], *sys.stages[l],
        detail::af_bonding_map(*sys.stages[l + 1], sys.models[l + 1],
                               *sys.stages[l], sys.models[l], layout)));
  }
  return sys;
}

// Tensor powers of a base groupoid: stage l is base^(l+1), and the bonding
// drops the last coordinate where it is a unit.
inline InductiveSystemTruncation make_tensor_power_truncation(
    const FiniteGroupoid& base, int depth) {
  if (depth < 1)
    throw error("make_tensor_power_truncation: depth must be positive");
  InductiveSystemTruncation sys;
  sys.stages.push_back(std::make_shared<FiniteGroupoid>(base));
  for (int l = 1; l < depth; ++l) {
    const FiniteGroupoid& prev = *sys.stages.back();
    auto next =
        std::make_shared<FiniteGroupoid>(product_groupoid(prev, base));
    std::vector<int> map(next->size(), -1);
    for (int x = 0; x < prev.size(); ++x)
      for (int y = 0; y < base.size(); ++y)
        if (base.unit[y]) map[x * base.size() + y] = x;
    sys.bondings.push_back(
        make_partial_morphism(*next, prev, std::move(map)));
    sys.stages.push_back(next);
  }
  return sys;
}

}  // namespace gcat

#endif  // GCAT_CONSTRUCTIONS_HPP
