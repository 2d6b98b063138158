#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "gcat/constructions.hpp"
#include "gcat/groupoid.hpp"
#include "oracle_helpers.hpp"

using namespace gcat;

namespace {

// Weighted variant of the pair groupoid on 3 points: the weight of (i,j)
// depends only on the source object j, which is exactly the left-invariance
// constraint, so this is a valid non-counting Haar system.
FiniteGroupoid weighted_pair3() {
  FiniteGroupoid g = make_matrix_groupoid(3).groupoid;
  const double c[3] = {1.0, 2.0, 3.0};
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      const std::string id =
          "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      g.weight[g.index_of(id)] = c[j - 1];
    }
  return g;
}

}  // namespace

TEST(GroupoidCore, MatrixGroupoidShape) {
  auto [g, model] = make_matrix_groupoid(3);
  EXPECT_EQ(g.size(), 9);
  EXPECT_EQ(g.objects.size(), 3u);
  EXPECT_TRUE(validate_groupoid(g).all_pass());
  EXPECT_TRUE(is_etale(g));
  EXPECT_TRUE(is_principal(g));

  // (1,2)(2,3) = (1,3) and (1,2)(3,1) undefined.
  const int a12 = g.index_of("(1,2)");
  const int a23 = g.index_of("(2,3)");
  const int a31 = g.index_of("(3,1)");
  EXPECT_EQ(g.compose(a12, a23), g.index_of("(1,3)"));
  EXPECT_EQ(g.compose(a12, a31), -1);
  EXPECT_EQ(g.inverse[a12], g.index_of("(2,1)"));
  EXPECT_EQ(g.source[a12], g.index_of("(2,2)"));
  EXPECT_EQ(g.range[a12], g.index_of("(1,1)"));
}

TEST(GroupoidCore, FiniteDimGroupoidShape) {
  auto [g, model] = make_finite_dim_groupoid({2, 3});
  EXPECT_EQ(g.size(), 13);
  EXPECT_EQ(g.objects.size(), 5u);
  EXPECT_TRUE(validate_groupoid(g).all_pass());
  EXPECT_TRUE(is_etale(g));
  EXPECT_TRUE(is_principal(g));

  // Cross-block pairs never compose.
  const int a = g.index_of("b0:(1,2)");
  const int b = g.index_of("b1:(2,1)");
  EXPECT_EQ(g.compose(a, b), -1);
  EXPECT_EQ(g.compose(b, a), -1);
}

TEST(GroupoidCore, ProductGroupoid) {
  FiniteGroupoid g2 = make_matrix_groupoid(2).groupoid;
  FiniteGroupoid g3 = make_matrix_groupoid(3).groupoid;
  FiniteGroupoid p = product_groupoid(g2, g3);
  EXPECT_EQ(p.size(), 36);
  EXPECT_EQ(p.objects.size(), 6u);
  EXPECT_TRUE(validate_groupoid(p).all_pass());
  EXPECT_TRUE(is_etale(p));
  EXPECT_TRUE(is_principal(p));

  // Componentwise composition.
  const int x = p.index_of("((1,2),(2,3))");
  const int y = p.index_of("((2,1),(3,1))");
  EXPECT_EQ(p.compose(x, y), p.index_of("((1,1),(2,1))"));
}

TEST(GroupoidCore, ProductWeightsMultiply) {
  FiniteGroupoid a = weighted_pair3();
  FiniteGroupoid b = weighted_pair3();
  FiniteGroupoid p = product_groupoid(a, b);
  EXPECT_TRUE(validate_groupoid(p).all_pass());
  const int x = p.index_of("((1,2),(1,3))");
  EXPECT_DOUBLE_EQ(p.weight[x], 2.0 * 3.0);
}

TEST(GroupoidCore, DisjointUnion) {
  FiniteGroupoid g2 = make_matrix_groupoid(2).groupoid;
  FiniteGroupoid u = disjoint_union(g2, g2);
  EXPECT_EQ(u.size(), 8);
  EXPECT_EQ(u.objects.size(), 4u);
  EXPECT_TRUE(validate_groupoid(u).all_pass());
  const int a = u.index_of("0:(1,2)");
  const int b = u.index_of("1:(2,1)");
  EXPECT_EQ(u.compose(a, b), -1);
  EXPECT_EQ(u.compose(a, u.index_of("0:(2,1)")), u.index_of("0:(1,1)"));
}

TEST(GroupoidCore, GroupAsGroupoid) {
  FiniteGroupoid z2 = gcat_test::make_z2_group();
  EXPECT_TRUE(validate_groupoid(z2).all_pass());
  EXPECT_TRUE(is_etale(z2));
  EXPECT_FALSE(is_principal(z2));
}

TEST(GroupoidCore, WeightedHaarSystemIsLeftInvariant) {
  FiniteGroupoid g = weighted_pair3();
  CheckList r = validate_groupoid(g);
  EXPECT_TRUE(r.all_pass());
  EXPECT_FALSE(is_etale(g));
}

TEST(GroupoidCore, BrokenWeightCaughtWithWitness) {
  FiniteGroupoid g = make_matrix_groupoid(3).groupoid;
  g.weight[g.index_of("(1,2)")] = 2.0;  // breaks w((1,2)) == w((2,2)) etc.
  CheckList r = validate_groupoid(g);
  EXPECT_FALSE(r.all_pass());
  const CheckResult* f = r.first_failure();
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->name, "haar-left-invariant");
  EXPECT_NE(f->witness.find("(1,2)"), std::string::npos);
  EXPECT_DOUBLE_EQ(f->max_error, 1.0);
}

TEST(GroupoidCore, NonPositiveWeightCaught) {
  FiniteGroupoid g = make_matrix_groupoid(2).groupoid;
  g.weight[0] = 0.0;
  CheckList r = validate_groupoid(g);
  EXPECT_FALSE(r.all_pass());
  const CheckResult* f = r.first_failure();
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->name, "haar-positive");
}

TEST(GroupoidCore, TamperedCompositionCaught) {
  FiniteGroupoid g = make_matrix_groupoid(3).groupoid;
  // Point (1,2)(2,3) at (1,2) instead of (1,3): breaks associativity or
  // source/range coherence.
  g.comp[g.index_of("(1,2)")][g.index_of("(2,3)")] = g.index_of("(1,2)");
  CheckList r = validate_groupoid(g);
  EXPECT_FALSE(r.all_pass());
}

TEST(GroupoidCore, RemovedCompositeCaught) {
  FiniteGroupoid g = make_matrix_groupoid(2).groupoid;
  g.comp[g.index_of("(1,2)")][g.index_of("(2,1)")] = -1;
  CheckList r = validate_groupoid(g);
  EXPECT_FALSE(r.all_pass());
  const CheckResult* f = r.first_failure();
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->name, "composition-domain");
}

TEST(GroupoidCore, DuplicateIdRejected) {
  FiniteGroupoid g = make_matrix_groupoid(2).groupoid;
  g.arrow_ids[1] = g.arrow_ids[0];
  EXPECT_THROW(g.finalize(), structural_error);
}

TEST(GroupoidCore, IdLookupRoundTrip) {
  FiniteGroupoid g = make_finite_dim_groupoid({2, 3}).groupoid;
  for (int x = 0; x < g.size(); ++x)
    EXPECT_EQ(g.index_of(g.arrow_ids[x]), x);
  EXPECT_THROW(g.index_of("nonsense"), error);
}

TEST(GroupoidCore, SubgroupoidClosure) {
  FiniteGroupoid g = make_matrix_groupoid(3).groupoid;
  std::vector<int> cl = subgroupoid_closure(g, {g.index_of("(1,2)")});
  // Closure of a single arrow 2 -> 1 is the pair groupoid on {1, 2}.
  ASSERT_EQ(cl.size(), 4u);
  EXPECT_TRUE(is_subgroupoid(g, cl));
  std::set<std::string> ids;
  for (int x : cl) ids.insert(g.arrow_ids[x]);
  EXPECT_TRUE(ids.count("(1,1)"));
  EXPECT_TRUE(ids.count("(1,2)"));
  EXPECT_TRUE(ids.count("(2,1)"));
  EXPECT_TRUE(ids.count("(2,2)"));
}

TEST(GroupoidCore, RestrictToSubgroupoid) {
  FiniteGroupoid g = make_matrix_groupoid(4).groupoid;
  std::vector<int> cl = subgroupoid_closure(g, {g.index_of("(1,2)")});
  RestrictResult r = restrict_to(g, cl);
  EXPECT_EQ(r.groupoid.size(), 4);
  EXPECT_TRUE(validate_groupoid(r.groupoid).all_pass());
  for (size_t k = 0; k < r.to_parent.size(); ++k)
    EXPECT_EQ(r.groupoid.arrow_ids[k], g.arrow_ids[r.to_parent[k]]);

  // A non-closed set is rejected.
  EXPECT_THROW(restrict_to(g, {g.index_of("(1,2)")}), structural_error);
}

TEST(GroupoidCore, FibersPartitionArrows) {
  FiniteGroupoid g = make_finite_dim_groupoid({2, 3}).groupoid;
  size_t total_r = 0, total_s = 0;
  for (int u : g.objects) {
    total_r += g.range_fiber(u).size();
    total_s += g.source_fiber(u).size();
    for (int x : g.range_fiber(u)) EXPECT_EQ(g.range[x], u);
    for (int x : g.source_fiber(u)) EXPECT_EQ(g.source[x], u);
  }
  EXPECT_EQ(total_r, static_cast<size_t>(g.size()));
  EXPECT_EQ(total_s, static_cast<size_t>(g.size()));
}
