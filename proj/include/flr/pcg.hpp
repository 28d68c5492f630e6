#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "flr/band.hpp"
#include "flr/fit_result.hpp"
#include "flr/objective.hpp"

namespace flr {

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Iterate of the preconditioned conjugate gradient recursion.
struct PCGState {
  Eigen::VectorXd x;          // current solution estimate
  Eigen::VectorXd r;          // residual c - Q x
  Eigen::VectorXd z;          // preconditioned residual M^{-1} r
  Eigen::VectorXd direction;  // search direction for the next step
  int iterations = 0;
  double relative_residual = 0.0;  // ||r|| / ||c||
  bool converged = false;
};

struct PCGOptions {
  std::optional<Eigen::VectorXd> x0;  // warm start, zero when absent
  // Called after every iteration (and once for the initial state).
  std::function<void(const PCGState&)> observer;
};

// Solves Q x = c for symmetric positive definite Q, preconditioned by the band
// factorization `precond`. Stops when ||c - Q x|| <= tol * ||c||; on hitting
// max_iters the returned state has converged == false. Throws OperatorNotPD
// when a search direction has p^T Q p <= 0.
PCGState pcg_solve(const LinearOperator& apply_q, const BandCholesky& precond,
                   const Eigen::VectorXd& c, double tol, int max_iters,
                   const PCGOptions& options = {});

// MM iterations whose linear systems are solved by PCG, preconditioned by the
// banded penalty matrix lambda1 A + lambda2 B and warm-started at the current
// estimate. With lambda1 == 0 that matrix is singular, so diag(X^T X) takes
// the place of lambda1 A. Requires a banded graph (chain or lattice).
FitResult mm_fit_pcg(const Problem& problem, const SolverConfig& config);

}  // namespace flr
