#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <memory>
#include <mutex>
#include <optional>

#include "flr/penalty_graph.hpp"

namespace flr {

// A fused lasso regression instance:
//   f(beta) = 1/2 ||y - X beta||^2 + lambda1 sum_j |beta_j|
//             + lambda2 sum_{(j,k) in E} |beta_j - beta_k|.
// The design and response are shared between copies, so re-targeting a
// problem at another (lambda1, lambda2) pair is cheap and reuses the cached
// Gram matrix.
class Problem {
 public:
  Problem(Eigen::VectorXd y, Eigen::MatrixXd x, PenaltyGraph graph, double lambda1, double lambda2);

  // Identity design (signal approximator). X is never materialized.
  static Problem signal_approximator(Eigen::VectorXd y, PenaltyGraph graph, double lambda1,
                                     double lambda2);

  Problem with_lambdas(double lambda1, double lambda2) const;

  int n() const noexcept { return static_cast<int>(data_->y.size()); }
  int p() const noexcept { return data_->graph.p(); }
  bool identity_design() const noexcept { return data_->identity; }
  const Eigen::VectorXd& y() const noexcept { return data_->y; }
  // Throws std::logic_error for identity designs.
  const Eigen::MatrixXd& design() const;
  const PenaltyGraph& graph() const noexcept { return data_->graph; }
  double lambda1() const noexcept { return lambda1_; }
  double lambda2() const noexcept { return lambda2_; }

  Eigen::VectorXd apply_design(const Eigen::VectorXd& beta) const;
  Eigen::VectorXd apply_design_transpose(const Eigen::VectorXd& r) const;
  const Eigen::VectorXd& xty() const noexcept { return data_->xty; }
  // Squared column norms X_j^T X_j.
  const Eigen::VectorXd& column_sq_norms() const noexcept { return data_->col_sq_norms; }
  // X^T X, computed on first use and shared by all copies of this problem.
  const Eigen::MatrixXd& gram() const;
  bool gram_cached() const noexcept;

 private:
  struct Data {
    Eigen::VectorXd y;
    Eigen::MatrixXd x;
    bool identity = false;
    PenaltyGraph graph;
    Eigen::VectorXd xty;
    Eigen::VectorXd col_sq_norms;
    mutable std::once_flag gram_once;
    mutable Eigen::MatrixXd gram;
    mutable std::atomic<bool> gram_ready{false};
  };

  Problem(std::shared_ptr<Data> data, double lambda1, double lambda2);

  std::shared_ptr<Data> data_;
  double lambda1_;
  double lambda2_;
};

// How the PCG variant applies X^T X: through the cached Gram matrix or as two
// matrix-vector products with X.
enum class GramPolicy { automatic, cached, matrix_free };

struct SolverConfig {
  double epsilon = 1e-8;
  double delta = 1e-5;
  int max_outer_iters = 10000;
  std::optional<int> max_pcg_iters;        // defaults to 10 * p
  std::optional<double> pcg_tolerance;     // defaults to delta
  GramPolicy gram_policy = GramPolicy::automatic;

  void validate() const;
  int pcg_iteration_cap(int p) const;
  double pcg_tol() const { return pcg_tolerance.value_or(delta); }
};

double objective(const Problem& problem, const Eigen::VectorXd& beta);

// |t| - eps * log(1 + |t| / eps): the smoothed absolute value.
double perturbed_abs(double t, double epsilon);

double perturbed_objective(const Problem& problem, const Eigen::VectorXd& beta, double epsilon);

// Quadratic surrogate touching the perturbed objective at `anchor`.
double majorizer(const Problem& problem, const Eigen::VectorXd& beta, const Eigen::VectorXd& anchor,
                 double epsilon);

double soft_threshold(double x, double lambda);
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double lambda);

// |f_new - f_old| / |f_old|, or |f_new| when f_old == 0.
double relative_error(double f_new, double f_old);

}  // namespace flr
