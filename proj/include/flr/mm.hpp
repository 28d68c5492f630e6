#pragma once

#include <Eigen/Dense>

#include "flr/band.hpp"
#include "flr/fit_result.hpp"
#include "flr/objective.hpp"

namespace flr {

// Reweighting matrices of one MM iteration at the current estimate:
//   A = diag(a),  a_j = 1 / (|beta_j| + eps)
//   B = weighted graph Laplacian, b_jk = -1 / (|beta_j - beta_k| + eps) on edges.
struct WeightMatrices {
  Eigen::VectorXd a_diag;
  SymmetricBandMatrix b;

  // lambda1 A + lambda2 B, banded with the graph bandwidth.
  SymmetricBandMatrix penalty_matrix(double lambda1, double lambda2) const;
};

// Per-column least-squares slopes X_j^T y / X_j^T X_j. Throws DegenerateColumn
// for a zero column.
Eigen::VectorXd init_beta(const Problem& problem);

// O(m + p) assembly.
WeightMatrices build_weights(const Eigen::VectorXd& beta, const PenaltyGraph& graph, double epsilon);

// Minimizer of the majorizer at `beta`: solves
//   (X^T X + lambda1 A + lambda2 B) beta' = X^T y
// with a dense Cholesky factorization. With an identity design on a banded
// graph the matrix has the graph's band structure and is factorized in band
// storage instead. Throws SingularSystem if the matrix is not positive
// definite (possible only when lambda1 == 0).
Eigen::VectorXd mm_step_dense(const Problem& problem, const Eigen::VectorXd& beta, double epsilon);

// MM iterations with dense solves, stopping when the relative change of the
// objective drops to config.delta.
FitResult mm_fit_dense(const Problem& problem, const SolverConfig& config);

}  // namespace flr
