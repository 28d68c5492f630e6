#include <gtest/gtest.h>

#include "flr/error.hpp"
#include "flr/oracle.hpp"
#include "test_support.hpp"

namespace {

using flr::PenaltyGraph;
using flr::Problem;
using flr::testing::max_abs_diff;

Problem flsa(const Eigen::VectorXd& y, const PenaltyGraph& g, double l1, double l2) {
  return Problem::signal_approximator(y, g, l1, l2);
}

TEST(Certify, FusedPairIsOptimal) {
  const Problem pr = flsa(Eigen::Vector2d(1, 3), PenaltyGraph::chain(2), 0, 1);
  const auto report = flr::certify_optimality(pr, Eigen::Vector2d(2, 2), 1e-9);
  EXPECT_TRUE(report.certified);
  EXPECT_FALSE(report.inconclusive);
  EXPECT_LE(report.worst_violation, 1e-9);
  ASSERT_EQ(report.fusion_subgradients.size(), 1);
  EXPECT_NEAR(report.fusion_subgradients[0], -1.0, 1e-9);
  EXPECT_EQ(report.gradient, Eigen::Vector2d(1, -1));
}

TEST(Certify, DataPointIsNotOptimal) {
  const Problem pr = flsa(Eigen::Vector2d(1, 3), PenaltyGraph::chain(2), 0, 1);
  const auto report = flr::certify_optimality(pr, Eigen::Vector2d(1, 3), 1e-3);
  EXPECT_FALSE(report.certified);
  EXPECT_GE(report.worst_violation, 1.0 - 1e-12);
}

TEST(Certify, LeastSquaresSolution) {
  std::mt19937_64 rng(1);
  const Problem pr = flr::testing::random_problem(rng, 30, PenaltyGraph::chain(6), 0, 0);
  const Eigen::VectorXd ls = pr.design().colPivHouseholderQr().solve(pr.y());
  const auto report = flr::certify_optimality(pr, ls, 1e-10);
  EXPECT_TRUE(report.certified) << report.worst_violation;
}

TEST(Certify, ResidualIsConsistent) {
  std::mt19937_64 rng(2);
  const Problem pr = flr::testing::random_problem(rng, 20, PenaltyGraph::lattice(3), 0.4, 0.6);
  Eigen::VectorXd beta = flr::testing::random_vector(rng, 9);
  beta[4] = beta[3];
  beta[0] = 0.0;
  const auto report = flr::certify_optimality(pr, beta, 1e-6);
  const Eigen::VectorXd rebuilt =
      report.gradient + 0.4 * report.coefficient_subgradients +
      0.6 * flr::DifferenceMatrix(pr.graph()).apply_transpose(report.fusion_subgradients);
  EXPECT_LT(max_abs_diff(rebuilt, report.residual), 1e-12);
  EXPECT_NEAR(report.residual.cwiseAbs().maxCoeff(), report.worst_violation, 1e-9);
  EXPECT_LE(report.coefficient_subgradients.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_LE(report.fusion_subgradients.cwiseAbs().maxCoeff(), 1.0);
  // Fixed signs away from zero.
  EXPECT_EQ(report.coefficient_subgradients[1], beta[1] > 0 ? 1.0 : -1.0);
}

TEST(Certify, FullyFusedLatticeAtMean) {
  std::mt19937_64 rng(3);
  const Eigen::VectorXd y = flr::testing::random_vector(rng, 16);
  const Problem pr = flsa(y, PenaltyGraph::lattice(4), 0, 100);
  const Eigen::VectorXd mean = Eigen::VectorXd::Constant(16, y.mean());
  EXPECT_TRUE(flr::certify_optimality(pr, mean, 1e-9).certified);
  EXPECT_FALSE(flr::certify_optimality(pr, mean.array() + 0.1, 1e-3).certified);
}

TEST(Certify, FusedGroupNeedsEnoughPenalty) {
  // Fusing (0, 4) needs lambda2 >= 2 on a chain of two.
  const Problem weak = flsa(Eigen::Vector2d(0, 4), PenaltyGraph::chain(2), 0, 1.5);
  const auto report = flr::certify_optimality(weak, Eigen::Vector2d(2, 2), 1e-6);
  EXPECT_FALSE(report.certified);
  EXPECT_NEAR(report.worst_violation, 0.5, 1e-6);
}

TEST(Certify, FlagsInconclusive) {
  const Problem weak = flsa(Eigen::Vector2d(0, 4), PenaltyGraph::chain(2), 0, 1.5);
  const auto report = flr::certify_optimality(weak, Eigen::Vector2d(2, 2), 0.52);
  EXPECT_TRUE(report.certified);
  EXPECT_TRUE(report.inconclusive);
}

TEST(BruteForce, OneDimensionalLasso) {
  for (double l1 : {0.0, 0.5, 2.0, 6.0}) {
    const Eigen::VectorXd b = flr::brute_force_flsa(Eigen::VectorXd::Constant(1, 5.0), l1, 3.0,
                                                    PenaltyGraph::chain(1));
    EXPECT_NEAR(b[0], flr::soft_threshold(5.0, l1), 1e-6);
  }
}

TEST(BruteForce, InteriorPair) {
  const Eigen::VectorXd b = flr::brute_force_flsa(Eigen::Vector2d(1, 3), 0, 0.5, PenaltyGraph::chain(2));
  EXPECT_LT(max_abs_diff(b, Eigen::Vector2d(1.5, 2.5)), 1e-4);
  const Problem pr = flsa(Eigen::Vector2d(1, 3), PenaltyGraph::chain(2), 0, 0.5);
  EXPECT_TRUE(flr::certify_optimality(pr, b, 1e-3).certified);
}

TEST(BruteForce, ZeroData) {
  const Eigen::VectorXd b = flr::brute_force_flsa(Eigen::Vector3d::Zero(), 0.2, 0.2, PenaltyGraph::chain(3));
  EXPECT_LT(b.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(BruteForce, RejectsLargeInstances) {
  EXPECT_THROW(flr::brute_force_flsa(Eigen::Vector4d::Zero(), 0, 0, PenaltyGraph::chain(4)),
               flr::InvalidDimension);
}

TEST(BruteForce, SelfConsistent) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 1 + trial % 3;
    Eigen::VectorXd y(p);
    for (int j = 0; j < p; ++j) y[j] = u(rng);
    const PenaltyGraph g = p == 3 && trial % 2 ? PenaltyGraph::custom(3, {{0, 1}, {1, 2}, {0, 2}})
                                               : PenaltyGraph::chain(p);
    const double l1 = trial % 2 ? 0.3 : 0.0;
    const double l2 = trial % 4 < 2 ? 0.1 : 1.0;
    const Eigen::VectorXd b = flr::brute_force_flsa(y, l1, l2, g);
    EXPECT_TRUE(flr::certify_optimality(flsa(y, g, l1, l2), b, 1e-3).certified) << "trial " << trial;
  }
}

}  // namespace
