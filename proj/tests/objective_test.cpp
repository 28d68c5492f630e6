#include <gtest/gtest.h>

#include "flr/error.hpp"
#include "flr/objective.hpp"
#include "test_support.hpp"

namespace {

using flr::PenaltyGraph;
using flr::Problem;
using flr::testing::random_vector;

Problem flsa_pair(double lambda1, double lambda2) {
  return Problem::signal_approximator(Eigen::Vector2d(1, 3), PenaltyGraph::chain(2), lambda1, lambda2);
}

// Second evaluation of the objective with explicit loops, sharing nothing
// with the library beyond the problem data.
double objective_by_loops(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const PenaltyGraph& g,
                          double l1, double l2, const Eigen::VectorXd& beta) {
  double loss = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    double fitted = 0.0;
    for (int j = 0; j < x.cols(); ++j) fitted += x(i, j) * beta[j];
    loss += (y[i] - fitted) * (y[i] - fitted);
  }
  double sparsity = 0.0;
  for (int j = 0; j < beta.size(); ++j) sparsity += std::abs(beta[j]);
  double fusion = 0.0;
  for (const auto& e : g.edges()) fusion += std::abs(beta[e.j] - beta[e.k]);
  return 0.5 * loss + l1 * sparsity + l2 * fusion;
}

TEST(Objective, ZeroCoefficientsGiveHalfSquaredResponse) {
  std::mt19937_64 rng(1);
  const Problem pr = flr::testing::random_problem(rng, 8, PenaltyGraph::chain(5), 0.7, 1.3);
  EXPECT_DOUBLE_EQ(flr::objective(pr, Eigen::VectorXd::Zero(5)), 0.5 * pr.y().squaredNorm());
}

TEST(Objective, FlsaPairByHand) {
  EXPECT_DOUBLE_EQ(flr::objective(flsa_pair(0.0, 1.0), Eigen::Vector2d(1, 3)), 2.0);
}

TEST(Objective, MatchesIndependentLoops) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = flr::testing::random_graph(rng, 4, 4);
    const Eigen::MatrixXd x = flr::testing::random_matrix(rng, 5, 4);
    const Eigen::VectorXd y = random_vector(rng, 5);
    const Problem pr(y, x, g, 0.4, 0.9);
    const Eigen::VectorXd beta = random_vector(rng, 4);
    const double expected = objective_by_loops(x, y, g, 0.4, 0.9, beta);
    EXPECT_NEAR(flr::objective(pr, beta), expected, 1e-12 * std::abs(expected));
  }
}

TEST(Objective, RejectsWrongLength) {
  EXPECT_THROW(flr::objective(flsa_pair(0, 1), Eigen::Vector3d(1, 2, 3)), flr::InvalidDimension);
}

TEST(ProblemTest, Validation) {
  const Eigen::VectorXd y = Eigen::VectorXd::Ones(3);
  EXPECT_THROW(Problem(y, Eigen::MatrixXd::Ones(2, 2), PenaltyGraph::chain(2), 0, 0),
               flr::InvalidDimension);
  EXPECT_THROW(Problem(y, Eigen::MatrixXd::Ones(3, 2), PenaltyGraph::chain(3), 0, 0),
               flr::InvalidDimension);
  EXPECT_THROW(Problem(y, Eigen::MatrixXd::Ones(3, 3), PenaltyGraph::chain(3), -1, 0),
               flr::ValidationError);
  EXPECT_THROW(Problem(y, Eigen::MatrixXd::Ones(3, 3), PenaltyGraph::chain(3), 0,
                       std::numeric_limits<double>::infinity()),
               flr::ValidationError);
  EXPECT_THROW(Problem::signal_approximator(y, PenaltyGraph::chain(4), 0, 0), flr::InvalidDimension);
}

TEST(ProblemTest, IdentityDesignIsSymbolic) {
  const Problem pr = flsa_pair(0.1, 0.2);
  EXPECT_TRUE(pr.identity_design());
  EXPECT_THROW(pr.design(), std::logic_error);
  EXPECT_EQ(pr.apply_design(Eigen::Vector2d(4, 5)), Eigen::Vector2d(4, 5));
  EXPECT_EQ(pr.xty(), Eigen::Vector2d(1, 3));
  EXPECT_EQ(pr.gram(), Eigen::Matrix2d::Identity());
}

TEST(ProblemTest, GramIsSharedAcrossLambdas) {
  std::mt19937_64 rng(3);
  const Problem a = flr::testing::random_problem(rng, 10, PenaltyGraph::chain(4), 0, 0);
  const Problem b = a.with_lambdas(1.0, 2.0);
  EXPECT_FALSE(b.gram_cached());
  const Eigen::MatrixXd expected = a.design().transpose() * a.design();
  EXPECT_LT((b.gram() - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(a.gram_cached());
  EXPECT_EQ(b.lambda2(), 2.0);
  EXPECT_EQ(a.lambda2(), 0.0);
}

TEST(SolverConfigTest, Defaults) {
  const flr::SolverConfig c;
  EXPECT_EQ(c.epsilon, 1e-8);
  EXPECT_EQ(c.delta, 1e-5);
  EXPECT_EQ(c.max_outer_iters, 10000);
  EXPECT_EQ(c.pcg_iteration_cap(37), 370);
  EXPECT_EQ(c.pcg_tol(), c.delta);
  EXPECT_NO_THROW(c.validate());
}

TEST(SolverConfigTest, RejectsBadValues) {
  flr::SolverConfig c;
  c.epsilon = 0;
  EXPECT_THROW(c.validate(), flr::ValidationError);
  c = {};
  c.delta = -1;
  EXPECT_THROW(c.validate(), flr::ValidationError);
  c = {};
  c.max_outer_iters = 0;
  EXPECT_THROW(c.validate(), flr::ValidationError);
  c = {};
  c.max_pcg_iters = 0;
  EXPECT_THROW(c.validate(), flr::ValidationError);
}

TEST(PerturbedObjective, ZeroCoefficients) {
  const Problem pr = flsa_pair(0.5, 1.0);
  EXPECT_DOUBLE_EQ(flr::perturbed_objective(pr, Eigen::Vector2d::Zero(), 1e-3), 5.0);
}

TEST(PerturbedObjective, RejectsNonPositiveEpsilon) {
  EXPECT_THROW(flr::perturbed_objective(flsa_pair(1, 1), Eigen::Vector2d::Zero(), 0.0),
               flr::ValidationError);
}

TEST(PerturbedObjective, BelowObjectiveAndGapShrinksWithEpsilon) {
  std::mt19937_64 rng(4);
  const Problem pr = flr::testing::random_problem(rng, 12, PenaltyGraph::lattice(3), 0.8, 0.6);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd beta = random_vector(rng, 9);
    const double f = flr::objective(pr, beta);
    double previous_gap = std::numeric_limits<double>::infinity();
    for (double eps : {1e-2, 1e-4, 1e-6}) {
      const double gap = f - flr::perturbed_objective(pr, beta, eps);
      EXPECT_GE(gap, 0.0);
      EXPECT_LT(gap, previous_gap);
      previous_gap = gap;
    }
  }
}

TEST(PerturbedObjective, Convex) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Problem pr = flr::testing::random_problem(rng, 10, PenaltyGraph::chain(6), 0.5, 0.5);
  for (double eps : {1e-1, 1e-8}) {
    for (int trial = 0; trial < 500; ++trial) {
      const Eigen::VectorXd b1 = random_vector(rng, 6);
      const Eigen::VectorXd b2 = random_vector(rng, 6);
      const double t = unit(rng);
      const double lhs = flr::perturbed_objective(pr, t * b1 + (1 - t) * b2, eps);
      const double rhs =
          t * flr::perturbed_objective(pr, b1, eps) + (1 - t) * flr::perturbed_objective(pr, b2, eps);
      EXPECT_LE(lhs, rhs + 1e-10);
    }
  }
}

TEST(PerturbedAbs, SmallAndLargeArguments) {
  EXPECT_EQ(flr::perturbed_abs(0.0, 1e-8), 0.0);
  EXPECT_NEAR(flr::perturbed_abs(-2.0, 1.0), 2.0 - std::log(3.0), 1e-15);
}

TEST(Majorizer, TouchesAtAnchor) {
  std::mt19937_64 rng(6);
  const Problem pr = flr::testing::random_problem(rng, 15, PenaltyGraph::chain(8), 0.3, 0.7);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd anchor = random_vector(rng, 8);
    const double f = flr::perturbed_objective(pr, anchor, 1e-8);
    EXPECT_NEAR(flr::majorizer(pr, anchor, anchor, 1e-8), f, 1e-12 * std::abs(f));
  }
}

TEST(Majorizer, LiesAbovePerturbedObjective) {
  std::mt19937_64 rng(7);
  const Problem pr = flr::testing::random_problem(rng, 15, PenaltyGraph::lattice(3), 0.3, 0.7);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXd anchor = random_vector(rng, 9);
    const Eigen::VectorXd beta = random_vector(rng, 9);
    const double f = flr::perturbed_objective(pr, beta, 1e-8);
    EXPECT_GE(flr::majorizer(pr, beta, anchor, 1e-8), f - 1e-12 * (1 + std::abs(f)));
  }
}

TEST(Majorizer, QuadraticAlongLines) {
  std::mt19937_64 rng(8);
  const Problem pr = flr::testing::random_problem(rng, 15, PenaltyGraph::chain(7), 0.4, 0.9);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd anchor = random_vector(rng, 7);
    const Eigen::VectorXd origin = random_vector(rng, 7);
    const Eigen::VectorXd dir = random_vector(rng, 7);
    auto g = [&](double t) { return flr::majorizer(pr, origin + t * dir, anchor, 1e-8); };
    const double h = 0.5;
    double second = 0.0;
    for (int s = 0; s < 4; ++s) {
      const double t = -1.0 + s;
      const double d2 = g(t + h) - 2 * g(t) + g(t - h);
      if (s == 0) {
        second = d2;
      } else {
        EXPECT_NEAR(d2, second, 1e-9 * std::abs(second));
      }
    }
  }
}

TEST(SoftThreshold, Examples) {
  EXPECT_EQ(flr::soft_threshold(2.0, 0.5), 1.5);
  EXPECT_EQ(flr::soft_threshold(-0.3, 0.5), 0.0);
  EXPECT_EQ(flr::soft_threshold(0.0, 7.0), 0.0);
  EXPECT_EQ(flr::soft_threshold(-4.0, 1.0), -3.0);
  EXPECT_EQ(flr::soft_threshold(Eigen::Vector3d(2, -0.3, -4), 0.5), Eigen::Vector3d(1.5, 0, -3.5));
}

TEST(RelativeError, Examples) {
  EXPECT_DOUBLE_EQ(flr::relative_error(99, 100), 0.01);
  EXPECT_EQ(flr::relative_error(100, 100), 0.0);
  EXPECT_EQ(flr::relative_error(5, 0), 5.0);
  EXPECT_EQ(flr::relative_error(-5, 0), 5.0);
}

}  // namespace
