#pragma once

#include <Eigen/Dense>
#include <optional>

#include "flr/fit_result.hpp"
#include "flr/objective.hpp"
#include "flr/pcg.hpp"

namespace flr {

// ---------------------------------------------------------------------------
// Split Bregman
// ---------------------------------------------------------------------------

// Primal/dual variables of the split problem
//   min 1/2||y - X beta||^2 + lambda1 ||a||_1 + lambda2 ||b||_1
//   s.t. a = beta, b = D beta
// with one constant mu for both augmentation terms and both dual step sizes.
struct SBState {
  Eigen::VectorXd beta;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  double mu = 0.0;
};

struct SBOptions {
  std::optional<double> mu;  // defaults to ||y||_2 / n
};

struct SBFit {
  FitResult fit;
  SBState state;
};

double sb_default_mu(const Problem& problem);

SBFit sb_solve(const Problem& problem, const SolverConfig& config, const SBOptions& options = {});
FitResult sb_fit(const Problem& problem, const SolverConfig& config, const SBOptions& options = {});

// ---------------------------------------------------------------------------
// Smoothed proximal gradient
// ---------------------------------------------------------------------------

struct SPGConfig {
  double accuracy = 1e-2;  // target smoothing accuracy
  double power_tolerance = 1e-8;
  int power_max_iters = 1000;

  // Smoothing parameter accuracy / m (m = number of edges, at least 1).
  double smoothing(int num_edges) const;
};

// Maximizer of alpha^T D beta - mu/2 ||alpha||^2 over the unit box, i.e. the
// componentwise clip of D beta / mu to [-1, 1].
Eigen::VectorXd smoothing_dual(const Eigen::VectorXd& d_beta, double mu);

// Nesterov-smoothed fusion norm; lies in [||D beta||_1 - mu m / 2, ||D beta||_1].
double smoothed_fusion_norm(const PenaltyGraph& graph, const Eigen::VectorXd& beta, double mu);

struct PowerIterationResult {
  double eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest eigenvalue of a symmetric PSD operator of order p.
PowerIterationResult power_iteration(const LinearOperator& apply, int p, double tol, int max_iters);

// Lipschitz constant ||X||_2^2 + (lambda2 / mu) ||D||_2^2 of the smooth part.
// Throws ConvergenceError if the power iteration for ||X||_2 stalls; for D a
// stalled power iteration falls back to the bound max over edges of
// deg(j) + deg(k).
double spg_lipschitz(const Problem& problem, const SPGConfig& spg);

// FISTA on 1/2||y - X beta||^2 + lambda2 * smoothed fusion norm, with the
// lambda1 term handled by soft-thresholding. Starts from zero.
FitResult spg_fit(const Problem& problem, const SolverConfig& config, const SPGConfig& spg = {});

}  // namespace flr
