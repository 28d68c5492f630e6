#include "flr/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <variant>

#include "flr/band.hpp"
#include "flr/error.hpp"

namespace flr {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// (X^T X + mu I + mu D^T D), factorized once per fit. Identity designs keep the
// band structure of the graph Laplacian.
class SBSystem {
 public:
  SBSystem(const Problem& problem, double mu) {
    const PenaltyGraph& graph = problem.graph();
    if (problem.identity_design()) {
      SymmetricBandMatrix k(graph.p(), graph.bandwidth());
      for (int j = 0; j < graph.p(); ++j) k.lower(j, j) = 1.0 + mu;
      for (const Edge& e : graph.edges()) {
        k.lower(e.j, e.j) += mu;
        k.lower(e.k, e.k) += mu;
        k.lower(e.k, e.j) -= mu;
      }
      solver_.emplace<BandCholesky>(k);
    } else {
      Eigen::MatrixXd k = problem.gram();
      k.diagonal().array() += mu;
      for (const Edge& e : graph.edges()) {
        k(e.j, e.j) += mu;
        k(e.k, e.k) += mu;
        k(e.j, e.k) -= mu;
        k(e.k, e.j) -= mu;
      }
      auto& llt = solver_.emplace<Eigen::LLT<Eigen::MatrixXd>>(k);
      if (llt.info() != Eigen::Success) {
        throw SingularSystem("split Bregman system is not positive definite");
      }
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    if (const auto* band = std::get_if<BandCholesky>(&solver_)) return band->solve(rhs);
    return std::get<Eigen::LLT<Eigen::MatrixXd>>(solver_).solve(rhs);
  }

 private:
  std::variant<std::monostate, BandCholesky, Eigen::LLT<Eigen::MatrixXd>> solver_;
};

}  // namespace

double sb_default_mu(const Problem& problem) {
  const double mu = problem.y().norm() / problem.n();
  return mu > 0.0 ? mu : 1.0;
}

SBFit sb_solve(const Problem& problem, const SolverConfig& config, const SBOptions& options) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const double mu = options.mu.value_or(sb_default_mu(problem));
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ValidationError("split Bregman mu must be positive, got " + std::to_string(mu));
  }
  const int p = problem.p();
  const DifferenceMatrix d(problem.graph());
  const SBSystem system(problem, mu);
  const double l1 = problem.lambda1();
  const double l2 = problem.lambda2();

  SBFit out;
  SBState& s = out.state;
  s.mu = mu;
  s.beta = Eigen::VectorXd::Zero(p);
  s.a = Eigen::VectorXd::Zero(p);
  s.u = Eigen::VectorXd::Zero(p);
  s.b = Eigen::VectorXd::Zero(d.rows());
  s.v = Eigen::VectorXd::Zero(d.rows());

  FitResult& fit = out.fit;
  fit.objective_trace.push_back(objective(problem, s.beta));
  for (int r = 0; r < config.max_outer_iters; ++r) {
    const Eigen::VectorXd rhs =
        problem.xty() + (mu * s.a - s.u) + d.apply_transpose(mu * s.b - s.v);
    s.beta = system.solve(rhs);
    const Eigen::VectorXd d_beta = d.apply(s.beta);
    s.a = soft_threshold(s.beta + s.u / mu, l1 / mu);
    s.b = soft_threshold(d_beta + s.v / mu, l2 / mu);
    s.u += mu * (s.beta - s.a);
    s.v += mu * (d_beta - s.b);

    const double f_new = objective(problem, s.beta);
    const double f_old = fit.objective_trace.back();
    fit.objective_trace.push_back(f_new);
    fit.iterations = r + 1;
    if (relative_error(f_new, f_old) <= config.delta) {
      fit.termination = Termination::converged;
      break;
    }
  }
  fit.beta = s.beta;
  fit.wall_time_seconds = elapsed_since(start);
  return out;
}

FitResult sb_fit(const Problem& problem, const SolverConfig& config, const SBOptions& options) {
  return sb_solve(problem, config, options).fit;
}

double SPGConfig::smoothing(int num_edges) const { return accuracy / std::max(num_edges, 1); }

Eigen::VectorXd smoothing_dual(const Eigen::VectorXd& d_beta, double mu) {
  return (d_beta / mu).cwiseMax(-1.0).cwiseMin(1.0);
}

double smoothed_fusion_norm(const PenaltyGraph& graph, const Eigen::VectorXd& beta, double mu) {
  const Eigen::VectorXd d_beta = DifferenceMatrix(graph).apply(beta);
  const Eigen::VectorXd alpha = smoothing_dual(d_beta, mu);
  return alpha.dot(d_beta) - 0.5 * mu * alpha.squaredNorm();
}

PowerIterationResult power_iteration(const LinearOperator& apply, int p, double tol, int max_iters) {
  PowerIterationResult out;
  if (p == 0) {
    out.converged = true;
    return out;
  }
  // Deterministic start with no special alignment to constant or alternating
  // vectors, which are eigenvectors of graph Laplacians.
  Eigen::VectorXd v(p);
  for (int i = 0; i < p; ++i) v[i] = std::cos(0.7 * i + 0.3) + 0.5 * std::sin(1.3 * i);
  v.normalize();
  double previous = 0.0;
  for (int k = 1; k <= max_iters; ++k) {
    const Eigen::VectorXd w = apply(v);
    const double estimate = v.dot(w);
    out.eigenvalue = estimate;
    out.iterations = k;
    const double norm = w.norm();
    if (norm == 0.0) {
      out.eigenvalue = 0.0;
      out.converged = true;
      return out;
    }
    if (k > 1 && std::abs(estimate - previous) <= tol * std::abs(estimate)) {
      out.converged = true;
      return out;
    }
    previous = estimate;
    v = w / norm;
  }
  return out;
}

double spg_lipschitz(const Problem& problem, const SPGConfig& spg) {
  const int p = problem.p();
  double x_sq = 1.0;
  if (!problem.identity_design()) {
    const LinearOperator gram = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
      return problem.apply_design_transpose(problem.apply_design(v));
    };
    const PowerIterationResult r = power_iteration(gram, p, spg.power_tolerance, spg.power_max_iters);
    if (!r.converged) {
      throw ConvergenceError("power iteration for ||X||_2 did not converge in " +
                             std::to_string(spg.power_max_iters) + " iterations");
    }
    x_sq = r.eigenvalue;
  }
  const PenaltyGraph& graph = problem.graph();
  if (graph.num_edges() == 0 || problem.lambda2() == 0.0) return x_sq;

  const DifferenceMatrix d(graph);
  const LinearOperator laplacian = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return d.apply_transpose(d.apply(v));
  };
  const PowerIterationResult r =
      power_iteration(laplacian, p, spg.power_tolerance, spg.power_max_iters);
  double d_sq = r.eigenvalue;
  if (!r.converged) {
    const std::vector<int> deg = graph.degrees();
    d_sq = 0.0;
    for (const Edge& e : graph.edges()) {
      d_sq = std::max(d_sq, static_cast<double>(deg[static_cast<size_t>(e.j)] +
                                                deg[static_cast<size_t>(e.k)]));
    }
  }
  return x_sq + problem.lambda2() / spg.smoothing(graph.num_edges()) * d_sq;
}

FitResult spg_fit(const Problem& problem, const SolverConfig& config, const SPGConfig& spg) {
  config.validate();
  if (!(spg.accuracy > 0.0)) throw ValidationError("SPG accuracy must be > 0");
  const auto start = std::chrono::steady_clock::now();
  const int p = problem.p();
  const DifferenceMatrix d(problem.graph());
  const double mu = spg.smoothing(d.rows());
  const double lipschitz = spg_lipschitz(problem, spg);
  const double l1 = problem.lambda1();
  const double l2 = problem.lambda2();
  const bool cached = !problem.identity_design() && problem.n() >= p;

  auto smooth_gradient = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
    Eigen::VectorXd g;
    if (problem.identity_design()) {
      g = w - problem.y();
    } else if (cached) {
      g = problem.gram() * w - problem.xty();
    } else {
      g = problem.apply_design_transpose(problem.apply_design(w) - problem.y());
    }
    if (l2 > 0.0 && d.rows() > 0) g += l2 * d.apply_transpose(smoothing_dual(d.apply(w), mu));
    return g;
  };

  FitResult fit;
  fit.beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd search = fit.beta;
  double theta = 1.0;
  fit.objective_trace.push_back(objective(problem, fit.beta));
  for (int r = 0; r < config.max_outer_iters; ++r) {
    Eigen::VectorXd next = soft_threshold(search - smooth_gradient(search) / lipschitz, l1 / lipschitz);
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    search = next + ((theta - 1.0) / theta_next) * (next - fit.beta);
    fit.beta = std::move(next);
    theta = theta_next;

    const double f_new = objective(problem, fit.beta);
    const double f_old = fit.objective_trace.back();
    fit.objective_trace.push_back(f_new);
    fit.iterations = r + 1;
    if (relative_error(f_new, f_old) <= config.delta) {
      fit.termination = Termination::converged;
      break;
    }
  }
  fit.wall_time_seconds = elapsed_since(start);
  return fit;
}

}  // namespace flr
