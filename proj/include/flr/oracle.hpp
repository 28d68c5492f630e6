#pragma once

#include <Eigen/Dense>

#include "flr/objective.hpp"
#include "flr/penalty_graph.hpp"

namespace flr {

struct CertifyOptions {
  // Arguments |beta_j| or |beta_j - beta_k| at or below this are treated as
  // zero, so their subgradient is free in [-1, 1].
  double fusion_threshold = 1e-5;
};

struct OptimalityReport {
  bool certified = false;
  // Set when worst_violation lies within 10% of the tolerance.
  bool inconclusive = false;
  // Smallest achievable max_j |stationarity residual_j| over admissible
  // subgradients.
  double worst_violation = 0.0;
  double tolerance = 0.0;
  Eigen::VectorXd gradient;            // X^T (X beta - y)
  Eigen::VectorXd coefficient_subgradients;  // s_j, length p
  Eigen::VectorXd fusion_subgradients;       // t_e, one per edge in graph order
  Eigen::VectorXd residual;            // g + lambda1 s + lambda2 D^T t
};

// Checks whether 0 lies in the subdifferential of the objective at beta, up to
// tol in the infinity norm. The free subgradients are chosen by a max-flow
// feasibility problem on the penalty graph.
OptimalityReport certify_optimality(const Problem& problem, const Eigen::VectorXd& beta, double tol,
                                    const CertifyOptions& options = {});

// Exhaustive minimizer of the objective with identity design for p <= 3:
// grid over [min(y, 0) - 1, max(y, 0) + 1]^p at step 1e-2, then two refinement
// passes at 1e-4 and 1e-6 around the incumbent.
Eigen::VectorXd brute_force_flsa(const Eigen::VectorXd& y, double lambda1, double lambda2,
                                 const PenaltyGraph& graph);

}  // namespace flr
