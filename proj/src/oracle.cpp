#include "flr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "flr/error.hpp"

namespace flr {

namespace {

// Dinic max-flow on real capacities. Undirected arcs are a forward/backward
// pair that both start at the full capacity.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : adjacency_(static_cast<size_t>(nodes)) {}

  int add_arc(int from, int to, double cap, double reverse_cap = 0.0) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, cap});
    arcs_.push_back({from, reverse_cap});
    adjacency_[static_cast<size_t>(from)].push_back(id);
    adjacency_[static_cast<size_t>(to)].push_back(id + 1);
    capacity_.push_back(cap);
    capacity_.push_back(reverse_cap);
    return id;
  }

  void reset() {
    for (size_t i = 0; i < arcs_.size(); ++i) arcs_[i].residual = capacity_[i];
  }

  void set_capacity(int arc, double cap, double reverse_cap) {
    capacity_[static_cast<size_t>(arc)] = cap;
    capacity_[static_cast<size_t>(arc) + 1] = reverse_cap;
  }

  // Flow pushed along `arc` in its forward direction (negative when the net
  // flow runs backwards).
  double flow(int arc) const {
    return capacity_[static_cast<size_t>(arc)] - arcs_[static_cast<size_t>(arc)].residual;
  }

  double max_flow(int source, int sink, double zero) {
    zero_ = zero;
    double total = 0.0;
    while (build_levels(source, sink)) {
      next_.assign(adjacency_.size(), 0);
      for (;;) {
        const double pushed = augment(source, sink, std::numeric_limits<double>::infinity());
        if (pushed <= zero_) break;
        total += pushed;
      }
    }
    return total;
  }

 private:
  struct Arc {
    int to;
    double residual;
  };

  bool build_levels(int source, int sink) {
    level_.assign(adjacency_.size(), -1);
    level_[static_cast<size_t>(source)] = 0;
    std::queue<int> queue;
    queue.push(source);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (int id : adjacency_[static_cast<size_t>(u)]) {
        const Arc& a = arcs_[static_cast<size_t>(id)];
        if (a.residual > zero_ && level_[static_cast<size_t>(a.to)] < 0) {
          level_[static_cast<size_t>(a.to)] = level_[static_cast<size_t>(u)] + 1;
          queue.push(a.to);
        }
      }
    }
    return level_[static_cast<size_t>(sink)] >= 0;
  }

  double augment(int u, int sink, double limit) {
    if (u == sink) return limit;
    auto& edges = adjacency_[static_cast<size_t>(u)];
    for (size_t& i = next_[static_cast<size_t>(u)]; i < edges.size(); ++i) {
      const int id = edges[i];
      Arc& a = arcs_[static_cast<size_t>(id)];
      if (a.residual <= zero_ || level_[static_cast<size_t>(a.to)] != level_[static_cast<size_t>(u)] + 1) {
        continue;
      }
      const double pushed = augment(a.to, sink, std::min(limit, a.residual));
      if (pushed > zero_) {
        a.residual -= pushed;
        arcs_[static_cast<size_t>(id ^ 1)].residual += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  std::vector<Arc> arcs_;
  std::vector<double> capacity_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> level_;
  std::vector<size_t> next_;
  double zero_ = 0.0;
};

double sign_of(double v) { return v > 0.0 ? 1.0 : -1.0; }

}  // namespace

OptimalityReport certify_optimality(const Problem& problem, const Eigen::VectorXd& beta, double tol,
                                    const CertifyOptions& options) {
  const int p = problem.p();
  if (beta.size() != p) throw InvalidDimension("beta length does not match problem");
  const PenaltyGraph& graph = problem.graph();
  const auto& edges = graph.edges();
  const int m = graph.num_edges();
  const double l1 = problem.lambda1();
  const double l2 = problem.lambda2();
  const double tau = options.fusion_threshold;

  OptimalityReport report;
  report.tolerance = tol;
  report.gradient = problem.apply_design_transpose(problem.apply_design(beta) - problem.y());
  report.coefficient_subgradients = Eigen::VectorXd::Zero(p);
  report.fusion_subgradients = Eigen::VectorXd::Zero(m);

  // Fixed subgradients go into the supply c_j that free ones must cancel.
  std::vector<bool> coef_free(static_cast<size_t>(p));
  std::vector<bool> edge_free(static_cast<size_t>(m));
  Eigen::VectorXd supply = -report.gradient;
  for (int j = 0; j < p; ++j) {
    coef_free[static_cast<size_t>(j)] = std::abs(beta[j]) <= tau;
    if (!coef_free[static_cast<size_t>(j)]) {
      report.coefficient_subgradients[j] = sign_of(beta[j]);
      supply[j] -= l1 * sign_of(beta[j]);
    }
  }
  for (int e = 0; e < m; ++e) {
    const Edge& edge = edges[static_cast<size_t>(e)];
    const double diff = beta[edge.j] - beta[edge.k];
    edge_free[static_cast<size_t>(e)] = std::abs(diff) <= tau;
    if (!edge_free[static_cast<size_t>(e)]) {
      report.fusion_subgradients[e] = sign_of(diff);
      supply[edge.j] -= l2 * sign_of(diff);
      supply[edge.k] += l2 * sign_of(diff);
    }
  }

  // Nodes 0..p-1 are coordinates, p is a ground node absorbing the lambda1
  // terms and the slack, p+1 / p+2 are source and sink.
  const int ground = p;
  const int source = p + 1;
  const int sink = p + 2;
  FlowNetwork net(p + 3);
  double total_supply = 0.0;
  const double ground_supply = -supply.sum();
  for (int j = 0; j <= p; ++j) {
    const double s = j < p ? supply[j] : ground_supply;
    if (s > 0.0) {
      net.add_arc(source, j, s);
      total_supply += s;
    } else if (s < 0.0) {
      net.add_arc(j, sink, -s);
    }
  }
  std::vector<int> edge_arc(static_cast<size_t>(m), -1);
  if (l2 > 0.0) {
    for (int e = 0; e < m; ++e) {
      if (!edge_free[static_cast<size_t>(e)]) continue;
      const Edge& edge = edges[static_cast<size_t>(e)];
      edge_arc[static_cast<size_t>(e)] = net.add_arc(edge.j, edge.k, l2, l2);
    }
  }
  std::vector<int> ground_arc(static_cast<size_t>(p));
  std::vector<double> ground_base(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) {
    ground_base[static_cast<size_t>(j)] = coef_free[static_cast<size_t>(j)] ? l1 : 0.0;
    ground_arc[static_cast<size_t>(j)] = net.add_arc(j, ground, 0.0, 0.0);
  }

  const double scale = std::max({total_supply, l1, l2, 1e-300});
  const double zero = 1e-14 * scale;
  auto feasible = [&](double slack) {
    for (int j = 0; j < p; ++j) {
      const double cap = ground_base[static_cast<size_t>(j)] + slack;
      net.set_capacity(ground_arc[static_cast<size_t>(j)], cap, cap);
    }
    net.reset();
    return net.max_flow(source, sink, zero) >= total_supply - 1e-12 * scale;
  };

  // The slack max_j |c_j| always suffices: every node drains to ground.
  double hi = supply.cwiseAbs().maxCoeff();
  if (p == 0) hi = 0.0;
  double lo = 0.0;
  if (feasible(0.0)) {
    hi = 0.0;
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (feasible(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  }
  feasible(hi);

  for (int e = 0; e < m; ++e) {
    const int arc = edge_arc[static_cast<size_t>(e)];
    if (arc >= 0) report.fusion_subgradients[e] = std::clamp(net.flow(arc) / l2, -1.0, 1.0);
  }
  for (int j = 0; j < p; ++j) {
    if (coef_free[static_cast<size_t>(j)] && l1 > 0.0) {
      report.coefficient_subgradients[j] =
          std::clamp(net.flow(ground_arc[static_cast<size_t>(j)]) / l1, -1.0, 1.0);
    }
  }
  report.residual = report.gradient + l1 * report.coefficient_subgradients +
                    l2 * DifferenceMatrix(graph).apply_transpose(report.fusion_subgradients);
  report.worst_violation = p > 0 ? report.residual.cwiseAbs().maxCoeff() : 0.0;
  report.certified = report.worst_violation <= tol;
  report.inconclusive = std::abs(report.worst_violation - tol) <= 0.1 * tol;
  return report;
}

namespace {

// Objective with identity design; small p, so no Problem round trip.
class TinyObjective {
 public:
  TinyObjective(const Eigen::VectorXd& y, double l1, double l2, const PenaltyGraph& graph)
      : y_(y), l1_(l1), l2_(l2), edges_(graph.edges()) {}

  double operator()(const double* b) const {
    double f = 0.0;
    for (Eigen::Index j = 0; j < y_.size(); ++j) {
      const double r = y_[j] - b[j];
      f += 0.5 * r * r + l1_ * std::abs(b[j]);
    }
    for (const Edge& e : edges_) f += l2_ * std::abs(b[e.j] - b[e.k]);
    return f;
  }

 private:
  Eigen::VectorXd y_;
  double l1_;
  double l2_;
  std::vector<Edge> edges_;
};

struct Incumbent {
  double point[3] = {0.0, 0.0, 0.0};
  double value = std::numeric_limits<double>::infinity();
};

// Minimizes over the grid center[j] + i * step, |i| <= half[j]. The first
// p-1 coordinates are enumerated; the objective is convex in the last one, so
// its differences along the grid are nondecreasing and a binary search finds
// the best grid point exactly.
Incumbent grid_search(const TinyObjective& f, int p, const double* center, const int* half,
                      double step) {
  Incumbent best;
  double b[3] = {0.0, 0.0, 0.0};
  const int last = p - 1;
  auto at = [&](int i) {
    b[last] = center[last] + i * step;
    return f(b);
  };
  auto visit = [&] {
    int lo = -half[last];
    int hi = half[last];
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (at(mid + 1) - at(mid) >= 0.0) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const double value = at(lo);
    if (value < best.value) {
      best.value = value;
      std::copy(b, b + 3, best.point);
    }
  };
  if (p == 1) {
    visit();
  } else if (p == 2) {
    for (int i = -half[0]; i <= half[0]; ++i) {
      b[0] = center[0] + i * step;
      visit();
    }
  } else {
    for (int i = -half[0]; i <= half[0]; ++i) {
      b[0] = center[0] + i * step;
      for (int k = -half[1]; k <= half[1]; ++k) {
        b[1] = center[1] + k * step;
        visit();
      }
    }
  }
  return best;
}

}  // namespace

Eigen::VectorXd brute_force_flsa(const Eigen::VectorXd& y, double lambda1, double lambda2,
                                 const PenaltyGraph& graph) {
  const int p = static_cast<int>(y.size());
  if (p < 1 || p > 3) throw InvalidDimension("brute_force_flsa needs 1 <= p <= 3");
  if (graph.p() != p) throw InvalidDimension("graph size does not match y");
  const TinyObjective f(y, lambda1, lambda2, graph);

  // The minimizer lies between 0 and the data range, so the box must reach 0
  // even when all of y is far from it.
  const double lo = std::min(y.minCoeff(), 0.0) - 1.0;
  const double hi = std::max(y.maxCoeff(), 0.0) + 1.0;
  double center[3];
  int half[3];
  const double coarse = 1e-2;
  const int coarse_half = static_cast<int>(std::ceil(0.5 * (hi - lo) / coarse));
  for (int j = 0; j < p; ++j) {
    center[j] = 0.5 * (lo + hi);
    half[j] = coarse_half;
  }
  Incumbent best = grid_search(f, p, center, half, coarse);

  double previous = coarse;
  for (double step : {1e-4, 1e-6}) {
    // Window of +-3 previous steps; re-centre while the incumbent sits on
    // the window boundary.
    const int window = static_cast<int>(std::lround(3.0 * previous / step));
    for (int round = 0; round < 100; ++round) {
      for (int j = 0; j < p; ++j) {
        center[j] = best.point[j];
        half[j] = window;
      }
      const Incumbent local = grid_search(f, p, center, half, step);
      if (local.value < best.value) best = local;
      bool on_edge = false;
      for (int j = 0; j < p; ++j) {
        on_edge |= std::abs(best.point[j] - center[j]) >= (window - 0.5) * step;
      }
      if (!on_edge) break;
    }
    previous = step;
  }
  return Eigen::Map<const Eigen::VectorXd>(best.point, p);
}

}  // namespace flr
