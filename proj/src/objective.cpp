#include "flr/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "flr/error.hpp"

namespace flr {

namespace {

void check_lambdas(double lambda1, double lambda2) {
  if (!std::isfinite(lambda1) || lambda1 < 0.0 || !std::isfinite(lambda2) || lambda2 < 0.0) {
    throw ValidationError("lambda1 and lambda2 must be finite and nonnegative, got (" +
                          std::to_string(lambda1) + ", " + std::to_string(lambda2) + ")");
  }
}

void check_length(const Eigen::VectorXd& beta, int p, const char* what) {
  if (beta.size() != p) {
    throw InvalidDimension(std::string(what) + " has length " + std::to_string(beta.size()) +
                           ", expected " + std::to_string(p));
  }
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("perturbation epsilon must be positive, got " + std::to_string(epsilon));
  }
}

}  // namespace

Problem::Problem(std::shared_ptr<Data> data, double lambda1, double lambda2)
    : data_(std::move(data)), lambda1_(lambda1), lambda2_(lambda2) {
  check_lambdas(lambda1_, lambda2_);
}

Problem::Problem(Eigen::VectorXd y, Eigen::MatrixXd x, PenaltyGraph graph, double lambda1,
                 double lambda2)
    : lambda1_(lambda1), lambda2_(lambda2) {
  check_lambdas(lambda1_, lambda2_);
  if (x.rows() != y.size()) {
    throw InvalidDimension("design has " + std::to_string(x.rows()) + " rows but y has length " +
                           std::to_string(y.size()));
  }
  if (x.cols() != graph.p()) {
    throw InvalidDimension("design has " + std::to_string(x.cols()) + " columns but graph has p = " +
                           std::to_string(graph.p()));
  }
  auto data = std::make_shared<Data>();
  data->xty = x.transpose() * y;
  data->col_sq_norms = x.colwise().squaredNorm().transpose();
  data->y = std::move(y);
  data->x = std::move(x);
  data->graph = std::move(graph);
  data_ = std::move(data);
}

Problem Problem::signal_approximator(Eigen::VectorXd y, PenaltyGraph graph, double lambda1,
                                     double lambda2) {
  if (y.size() != graph.p()) {
    throw InvalidDimension("identity design needs y of length p = " + std::to_string(graph.p()) +
                           ", got " + std::to_string(y.size()));
  }
  auto data = std::make_shared<Data>();
  data->identity = true;
  data->xty = y;
  data->col_sq_norms = Eigen::VectorXd::Ones(y.size());
  data->y = std::move(y);
  data->graph = std::move(graph);
  return Problem(std::move(data), lambda1, lambda2);
}

Problem Problem::with_lambdas(double lambda1, double lambda2) const {
  return Problem(data_, lambda1, lambda2);
}

const Eigen::MatrixXd& Problem::design() const {
  if (data_->identity) throw std::logic_error("identity design has no materialized matrix");
  return data_->x;
}

Eigen::VectorXd Problem::apply_design(const Eigen::VectorXd& beta) const {
  check_length(beta, p(), "beta");
  if (data_->identity) return beta;
  return data_->x * beta;
}

Eigen::VectorXd Problem::apply_design_transpose(const Eigen::VectorXd& r) const {
  check_length(r, n(), "residual");
  if (data_->identity) return r;
  return data_->x.transpose() * r;
}

const Eigen::MatrixXd& Problem::gram() const {
  std::call_once(data_->gram_once, [d = data_.get()] {
    if (d->identity) {
      d->gram = Eigen::MatrixXd::Identity(d->graph.p(), d->graph.p());
    } else {
      const Eigen::Index p = d->x.cols();
      d->gram.setZero(p, p);
      d->gram.selfadjointView<Eigen::Lower>().rankUpdate(d->x.transpose());
      d->gram.triangularView<Eigen::StrictlyUpper>() = d->gram.transpose();
    }
    d->gram_ready = true;
  });
  return data_->gram;
}

bool Problem::gram_cached() const noexcept { return data_->gram_ready; }

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
  if (!(delta > 0.0)) throw ValidationError("delta must be > 0");
  if (max_outer_iters < 1) throw ValidationError("max_outer_iters must be >= 1");
  if (max_pcg_iters && *max_pcg_iters < 1) throw ValidationError("max_pcg_iters must be >= 1");
  if (pcg_tolerance && !(*pcg_tolerance > 0.0)) throw ValidationError("pcg_tolerance must be > 0");
}

int SolverConfig::pcg_iteration_cap(int p) const { return max_pcg_iters.value_or(10 * p); }

double objective(const Problem& problem, const Eigen::VectorXd& beta) {
  check_length(beta, problem.p(), "beta");
  const double loss = 0.5 * (problem.y() - problem.apply_design(beta)).squaredNorm();
  return loss + problem.lambda1() * beta.lpNorm<1>() +
         problem.lambda2() * problem.graph().fusion_norm(beta);
}

double perturbed_abs(double t, double epsilon) {
  const double a = std::abs(t);
  return a - epsilon * std::log1p(a / epsilon);
}

double perturbed_objective(const Problem& problem, const Eigen::VectorXd& beta, double epsilon) {
  check_length(beta, problem.p(), "beta");
  check_epsilon(epsilon);
  const double loss = 0.5 * (problem.y() - problem.apply_design(beta)).squaredNorm();
  double sparsity = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) sparsity += perturbed_abs(beta[j], epsilon);
  double fusion = 0.0;
  for (const Edge& e : problem.graph().edges()) fusion += perturbed_abs(beta[e.j] - beta[e.k], epsilon);
  return loss + problem.lambda1() * sparsity + problem.lambda2() * fusion;
}

double majorizer(const Problem& problem, const Eigen::VectorXd& beta, const Eigen::VectorXd& anchor,
                 double epsilon) {
  check_length(beta, problem.p(), "beta");
  check_length(anchor, problem.p(), "anchor");
  check_epsilon(epsilon);
  // Each smoothed |t| is concave in t^2, so its tangent in t^2 at the anchor
  // value t0 lies above it.
  auto surrogate = [epsilon](double t, double t0) {
    const double a0 = std::abs(t0);
    return perturbed_abs(t0, epsilon) + (t * t - t0 * t0) / (2.0 * (a0 + epsilon));
  };
  const double loss = 0.5 * (problem.y() - problem.apply_design(beta)).squaredNorm();
  double sparsity = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) sparsity += surrogate(beta[j], anchor[j]);
  double fusion = 0.0;
  for (const Edge& e : problem.graph().edges()) {
    fusion += surrogate(beta[e.j] - beta[e.k], anchor[e.j] - anchor[e.k]);
  }
  return loss + problem.lambda1() * sparsity + problem.lambda2() * fusion;
}

double soft_threshold(double x, double lambda) {
  if (x > lambda) return x - lambda;
  if (x < -lambda) return x + lambda;
  return 0.0;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double lambda) {
  return x.unaryExpr([lambda](double v) { return soft_threshold(v, lambda); });
}

double relative_error(double f_new, double f_old) {
  if (f_old == 0.0) return std::abs(f_new);
  return std::abs(f_new - f_old) / std::abs(f_old);
}

}  // namespace flr
