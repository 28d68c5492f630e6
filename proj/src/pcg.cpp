#include "flr/pcg.hpp"

#include <chrono>
#include <string>

#include "flr/error.hpp"
#include "flr/mm.hpp"

namespace flr {

PCGState pcg_solve(const LinearOperator& apply_q, const BandCholesky& precond,
                   const Eigen::VectorXd& c, double tol, int max_iters, const PCGOptions& options) {
  const Eigen::Index p = c.size();
  if (precond.order() != p) throw InvalidDimension("preconditioner order does not match rhs");
  if (options.x0 && options.x0->size() != p) throw InvalidDimension("warm start has wrong length");

  PCGState s;
  const double c_norm = c.norm();
  if (c_norm == 0.0) {
    s.x = Eigen::VectorXd::Zero(p);
    s.r = s.z = s.direction = Eigen::VectorXd::Zero(p);
    s.converged = true;
    if (options.observer) options.observer(s);
    return s;
  }

  s.x = options.x0 ? *options.x0 : Eigen::VectorXd::Zero(p);
  s.r = options.x0 ? Eigen::VectorXd(c - apply_q(s.x)) : c;
  s.z = precond.solve(s.r);
  s.direction = s.z;
  s.relative_residual = s.r.norm() / c_norm;
  s.converged = s.relative_residual <= tol;
  if (options.observer) options.observer(s);

  double rz = s.r.dot(s.z);
  while (!s.converged && s.iterations < max_iters) {
    const Eigen::VectorXd qp = apply_q(s.direction);
    const double curvature = s.direction.dot(qp);
    if (!(curvature > 0.0)) {
      throw OperatorNotPD("PCG breakdown: p^T Q p = " + std::to_string(curvature) + " at iteration " +
                          std::to_string(s.iterations + 1));
    }
    const double nu = rz / curvature;
    s.x += nu * s.direction;
    s.r -= nu * qp;
    s.z = precond.solve(s.r);
    const double rz_next = s.r.dot(s.z);
    const double gamma = rz_next / rz;
    rz = rz_next;
    s.direction = s.z + gamma * s.direction;
    ++s.iterations;
    s.relative_residual = s.r.norm() / c_norm;
    s.converged = s.relative_residual <= tol;
    if (options.observer) options.observer(s);
  }
  return s;
}

namespace {

bool use_cached_gram(const Problem& problem, GramPolicy policy) {
  switch (policy) {
    case GramPolicy::cached:
      return true;
    case GramPolicy::matrix_free:
      return false;
    case GramPolicy::automatic:
      return problem.n() >= problem.p();
  }
  return false;
}

}  // namespace

FitResult mm_fit_pcg(const Problem& problem, const SolverConfig& config) {
  config.validate();
  const PenaltyGraph& graph = problem.graph();
  if (!graph.is_banded()) {
    throw UnsupportedGraph("mm-pcg needs a banded penalty graph (chain or lattice); bandwidth " +
                           std::to_string(graph.bandwidth()) + " is too large for p = " +
                           std::to_string(graph.p()));
  }
  const auto start = std::chrono::steady_clock::now();
  const double l1 = problem.lambda1();
  const double l2 = problem.lambda2();
  const bool identity = problem.identity_design();
  const bool cached = !identity && use_cached_gram(problem, config.gram_policy);
  const int cap = config.pcg_iteration_cap(problem.p());
  const double tol = config.pcg_tol();

  FitResult result;
  result.beta = init_beta(problem);
  result.objective_trace.push_back(objective(problem, result.beta));

  for (int r = 0; r < config.max_outer_iters; ++r) {
    const WeightMatrices weights = build_weights(result.beta, graph, config.epsilon);
    SymmetricBandMatrix precond_matrix = weights.b;
    precond_matrix *= l2;
    if (l1 > 0.0) {
      precond_matrix.add_to_diagonal(l1 * weights.a_diag);
    } else {
      precond_matrix.add_to_diagonal(problem.column_sq_norms());
    }
    std::optional<BandCholesky> precond;
    try {
      precond.emplace(precond_matrix);
    } catch (const FactorizationError& e) {
      throw SingularSystem(std::string("PCG preconditioner is not positive definite (") + e.what() +
                           "); use lambda1 > 0");
    }

    // Q v = X^T X v + (lambda1 A + lambda2 B) v
    SymmetricBandMatrix penalty = weights.b;
    penalty *= l2;
    penalty.add_to_diagonal(l1 * weights.a_diag);
    const LinearOperator apply_q = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
      Eigen::VectorXd out = penalty.multiply(v);
      if (identity) {
        out += v;
      } else if (cached) {
        out.noalias() += problem.gram() * v;
      } else {
        out += problem.apply_design_transpose(problem.apply_design(v));
      }
      return out;
    };

    PCGOptions options;
    options.x0 = result.beta;
    const PCGState state = pcg_solve(apply_q, *precond, problem.xty(), tol, cap, options);
    if (!state.converged) {
      throw ConvergenceError("inner PCG solve did not converge at outer iteration " +
                             std::to_string(r + 1) + ": relative residual " +
                             std::to_string(state.relative_residual) + " after " +
                             std::to_string(state.iterations) + " iterations (tolerance " +
                             std::to_string(tol) + ")");
    }
    result.inner_solves.push_back({state.iterations, state.relative_residual});
    result.inner_iteration_total += state.iterations;

    result.beta = state.x;
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
