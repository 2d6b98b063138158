#include <gtest/gtest.h>

#include <string>
#include <utility>
#include <vector>

#include "gcat/constructions.hpp"
#include "gcat/convolution.hpp"
#include "gcat/matrix_model.hpp"
#include "gcat/quotient.hpp"
#include "oracle_helpers.hpp"

using namespace gcat;

namespace {

// Two copies of pair2 with the matching arrows merged pairwise.
std::vector<int> pairwise_partition(const FiniteGroupoid& u) {
  std::vector<std::pair<int, int>> merges;
  for (int x = 0; x < u.size() / 2; ++x) merges.push_back({x, u.size() / 2 + x});
  return partition_from_merges(u, merges);
}

std::vector<int> identity_partition(const FiniteGroupoid& g) {
  std::vector<int> p(g.size());
  for (int x = 0; x < g.size(); ++x) p[x] = x;
  return p;
}

}  // namespace

TEST(Quotient, IdentityPartitionReproducesInput) {
  FiniteGroupoid g = make_finite_dim_groupoid({2, 3}).groupoid;
  QuotientResult q = quotient_by_criterion(g, identity_partition(g));
  EXPECT_TRUE(q.report.all_pass());
  EXPECT_EQ(q.groupoid->size(), g.size());
  for (int x = 0; x < g.size(); ++x) {
    EXPECT_EQ(q.groupoid->weight[x], g.weight[x]);
    EXPECT_EQ(q.map.map[x], x);
  }
}

TEST(Quotient, IdentityPartitionMirrorsLeftInvariance) {
  // The quotient criterion on the identity partition succeeds exactly when
  // the input Haar system is left invariant; the violation surfaces in the
  // returned report, not as an exception.
  FiniteGroupoid g = make_matrix_groupoid(3).groupoid;
  g.weight[g.index_of("(1,2)")] = 2.0;
  ASSERT_FALSE(validate_groupoid(g).all_pass());

  QuotientResult q = quotient_by_criterion(g, identity_partition(g));
  EXPECT_FALSE(q.report.all_pass());
  bool saw_invariance_failure = false;
  for (const auto& r : q.report.results)
    if (r.name == "haar-left-invariant" && !r.pass) saw_invariance_failure = true;
  EXPECT_TRUE(saw_invariance_failure);
}

TEST(Quotient, PairwiseMergeOfTwoCopiesGivesOneCopy) {
  FiniteGroupoid g2 = make_matrix_groupoid(2).groupoid;
  FiniteGroupoid u = disjoint_union(g2, g2);
  QuotientResult q = quotient_by_criterion(u, pairwise_partition(u));
  EXPECT_TRUE(q.report.all_pass());
  EXPECT_EQ(q.groupoid->size(), 4);
  EXPECT_EQ(q.groupoid->objects.size(), 2u);
  EXPECT_TRUE(is_principal(*q.groupoid));
  EXPECT_TRUE(is_etale(*q.groupoid));

  // Pulling back along the quotient map embeds M_2 diagonally into
  // M_2 (+) M_2.
  MatrixModel m2 = make_matrix_groupoid(2).model;
  MatrixModel union_m = union_model(m2, m2);
  ConvolutionElement f = random_int_element(*q.groupoid, 3);
  ConvolutionElement lifted = induced_map(q.map, f);
  auto mats = to_matrices(u, union_m, lifted);
  EXPECT_EQ(max_abs(mats[0] - mats[1]), 0.0);
  EXPECT_GT(max_abs(mats[0]), 0.0);

  // Pullback respects products across the quotient.
  ConvolutionElement h = random_int_element(*q.groupoid, 4);
  ConvolutionElement lhs = induced_map(q.map, convolve(f, h));
  ConvolutionElement rhs = convolve(induced_map(q.map, f), induced_map(q.map, h));
  EXPECT_EQ((lhs.coeff - rhs.coeff).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Quotient, UnitsOnlyMergeIsStructurallyImpossible) {
  FiniteGroupoid g2 = make_matrix_groupoid(2).groupoid;
  FiniteGroupoid u = disjoint_union(g2, g2);
  std::vector<std::pair<int, int>> merges = {
      {u.index_of("0:(1,1)"), u.index_of("1:(1,1)")},
      {u.index_of("0:(2,2)"), u.index_of("1:(2,2)")}};
  std::vector<int> part = partition_from_merges(u, merges);
  try {
    quotient_by_criterion(u, part);
    FAIL() << "expected structural_error";
  } catch (const structural_error& e) {
    EXPECT_NE(std::string(e.what()).find("no composable representatives"),
              std::string::npos);
  }
}

TEST(Quotient, MergingTwoPointsGivesScalars) {
  // C (+) C -> C by merging the two standalone units.
  FiniteGroupoid g = make_finite_dim_groupoid({1, 1}).groupoid;
  std::vector<int> part = partition_from_merges(g, {{0, 1}});
  QuotientResult q = quotient_by_criterion(g, part);
  EXPECT_TRUE(q.report.all_pass());
  EXPECT_EQ(q.groupoid->size(), 1);
  EXPECT_DOUBLE_EQ(q.groupoid->weight[0], 1.0);

  ConvolutionElement f = make_element(*q.groupoid);
  f.coeff(0) = cplx(2.0, -1.0);
  ConvolutionElement lifted = induced_map(q.map, f);
  EXPECT_EQ(lifted.coeff(0), cplx(2.0, -1.0));
  EXPECT_EQ(lifted.coeff(1), cplx(2.0, -1.0));
}

TEST(Quotient, PerturbedCopyWeightsFailCriterion) {
  FiniteGroupoid g2 = make_matrix_groupoid(2).groupoid;
  FiniteGroupoid u = disjoint_union(g2, g2);
  // Scaling all weights of the second copy keeps the input left invariant
  // but breaks the pushforward agreement between merged units.
  for (int x = 0; x < u.size(); ++x)
    if (u.arrow_ids[x][0] == '1') u.weight[x] = 2.0;
  ASSERT_TRUE(validate_groupoid(u).all_pass());

  try {
    quotient_by_criterion(u, pairwise_partition(u));
    FAIL() << "expected criterion_error";
  } catch (const criterion_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("mass"), std::string::npos);
  }
}

TEST(Quotient, TotalCollapseOfPairGroupoid) {
  // The pair groupoid on 3 points collapses onto a point; the counting
  // measure on each 3-element fiber pushes to mass 3.
  FiniteGroupoid g = make_matrix_groupoid(3).groupoid;
  std::vector<int> part(g.size(), 0);
  QuotientResult q = quotient_by_criterion(g, part);
  EXPECT_TRUE(q.report.all_pass());
  EXPECT_EQ(q.groupoid->size(), 1);
  EXPECT_DOUBLE_EQ(q.groupoid->weight[0], 3.0);
}

TEST(Quotient, MergingUnitsWithoutArrowsFails) {
  FiniteGroupoid g = make_matrix_groupoid(3).groupoid;
  std::vector<int> part = partition_from_merges(
      g, {{g.index_of("(1,1)"), g.index_of("(2,2)")}});
  EXPECT_THROW(quotient_by_criterion(g, part), structural_error);
}

TEST(Quotient, InverseInconsistentPartitionFails) {
  FiniteGroupoid g = make_matrix_groupoid(3).groupoid;
  // (1,2) with (1,3): inverses (2,1) and (3,1) stay separate.
  std::vector<int> part = partition_from_merges(
      g, {{g.index_of("(1,2)"), g.index_of("(1,3)")}});
  EXPECT_THROW(quotient_by_criterion(g, part), structural_error);
}

TEST(Quotient, PartitionSizeMismatchThrows) {
  FiniteGroupoid g = make_matrix_groupoid(2).groupoid;
  EXPECT_THROW(quotient_by_criterion(g, {0, 0}), error);
}
