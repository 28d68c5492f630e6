#include "flr/mm.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "flr/error.hpp"

namespace flr {

SymmetricBandMatrix WeightMatrices::penalty_matrix(double lambda1, double lambda2) const {
  SymmetricBandMatrix m = b;
  m *= lambda2;
  m.add_to_diagonal(lambda1 * a_diag);
  return m;
}

Eigen::VectorXd init_beta(const Problem& problem) {
  const Eigen::VectorXd& norms = problem.column_sq_norms();
  for (Eigen::Index j = 0; j < norms.size(); ++j) {
    if (!(norms[j] > 0.0)) {
      throw DegenerateColumn(static_cast<int>(j),
                             "design column " + std::to_string(j) + " has zero norm");
    }
  }
  return problem.xty().cwiseQuotient(norms);
}

WeightMatrices build_weights(const Eigen::VectorXd& beta, const PenaltyGraph& graph, double epsilon) {
  if (beta.size() != graph.p()) throw InvalidDimension("beta length does not match graph");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
  WeightMatrices w;
  w.a_diag = beta.unaryExpr([epsilon](double v) { return 1.0 / (std::abs(v) + epsilon); });
  w.b = SymmetricBandMatrix(graph.p(), graph.bandwidth());
  for (const Edge& e : graph.edges()) {
    const double weight = 1.0 / (std::abs(beta[e.j] - beta[e.k]) + epsilon);
    w.b.lower(e.j, e.j) += weight;
    w.b.lower(e.k, e.k) += weight;
    w.b.lower(e.k, e.j) = -weight;
  }
  return w;
}

Eigen::VectorXd mm_step_dense(const Problem& problem, const Eigen::VectorXd& beta, double epsilon) {
  if (beta.size() != problem.p()) throw InvalidDimension("beta length does not match problem");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
  const double l1 = problem.lambda1();
  const double l2 = problem.lambda2();

  if (problem.identity_design() && problem.graph().is_banded()) {
    SymmetricBandMatrix m = build_weights(beta, problem.graph(), epsilon).penalty_matrix(l1, l2);
    m.add_to_diagonal(Eigen::VectorXd::Ones(beta.size()));
    try {
      return BandCholesky(m).solve(problem.xty());
    } catch (const FactorizationError& e) {
      throw SingularSystem(std::string("MM system I + lambda1 A + lambda2 B is not positive definite (") +
                           e.what() + "); use lambda1 > 0");
    }
  }

  Eigen::MatrixXd m = problem.gram();
  for (Eigen::Index j = 0; j < beta.size(); ++j) m(j, j) += l1 / (std::abs(beta[j]) + epsilon);
  for (const Edge& e : problem.graph().edges()) {
    const double weight = l2 / (std::abs(beta[e.j] - beta[e.k]) + epsilon);
    m(e.j, e.j) += weight;
    m(e.k, e.k) += weight;
    m(e.j, e.k) -= weight;
    m(e.k, e.j) -= weight;
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw SingularSystem(
        "MM system X^T X + lambda1 A + lambda2 B is not positive definite; use lambda1 > 0");
  }
  Eigen::VectorXd next = llt.solve(problem.xty());
  if (!next.allFinite()) {
    throw SingularSystem("MM system solve produced non-finite values; use lambda1 > 0");
  }
  return next;
}

FitResult mm_fit_dense(const Problem& problem, const SolverConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  FitResult result;
  result.beta = init_beta(problem);
  result.objective_trace.push_back(objective(problem, result.beta));

  for (int r = 0; r < config.max_outer_iters; ++r) {
    result.beta = mm_step_dense(problem, result.beta, config.epsilon);
    const double f_new = objective(problem, result.beta);
    const double f_old = result.objective_trace.back();
    result.objective_trace.push_back(f_new);
    result.iterations = r + 1;
    if (relative_error(f_new, f_old) <= config.delta) {
      result.termination = Termination::converged;
      break;
    }
  }

  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace flr
