#include "flr/penalty_graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "flr/error.hpp"

namespace flr {

PenaltyGraph::PenaltyGraph(int p, std::vector<Edge> edges) : p_(p), edges_(std::move(edges)) {
  for (const Edge& e : edges_) bandwidth_ = std::max(bandwidth_, e.k - e.j);
}

PenaltyGraph PenaltyGraph::chain(int p) {
  if (p <= 0) throw InvalidDimension("chain graph needs p >= 1, got " + std::to_string(p));
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(p - 1));
  for (int j = 0; j + 1 < p; ++j) edges.push_back({j, j + 1});
  return PenaltyGraph(p, std::move(edges));
}

PenaltyGraph PenaltyGraph::lattice(int q) {
  if (q <= 0) throw InvalidDimension("lattice graph needs q >= 1, got " + std::to_string(q));
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(2 * q * (q - 1)));
  for (int r = 0; r < q; ++r) {
    for (int c = 0; c < q; ++c) {
      const int idx = r * q + c;
      if (c + 1 < q) edges.push_back({idx, idx + 1});
      if (r + 1 < q) edges.push_back({idx, idx + q});
    }
  }
  std::sort(edges.begin(), edges.end());
  return PenaltyGraph(q * q, std::move(edges));
}

PenaltyGraph PenaltyGraph::custom(int p, const std::vector<std::pair<int, int>>& pairs) {
  if (p <= 0) throw InvalidDimension("graph needs p >= 1, got " + std::to_string(p));
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const std::string name = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    if (a < 0 || a >= p || b < 0 || b >= p) {
      throw ValidationError("edge " + name + " has an index outside [0, " + std::to_string(p) + ")");
    }
    if (a == b) throw ValidationError("edge " + name + " is a self-loop");
    edges.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return PenaltyGraph(p, std::move(edges));
}

std::vector<int> PenaltyGraph::degrees() const {
  std::vector<int> deg(static_cast<size_t>(p_), 0);
  for (const Edge& e : edges_) {
    ++deg[static_cast<size_t>(e.j)];
    ++deg[static_cast<size_t>(e.k)];
  }
  return deg;
}

bool PenaltyGraph::is_banded() const noexcept {
  const int limit = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p_)))));
  return bandwidth_ <= limit;
}

double PenaltyGraph::fusion_norm(const Eigen::VectorXd& beta) const {
  double total = 0.0;
  for (const Edge& e : edges_) total += std::abs(beta[e.j] - beta[e.k]);
  return total;
}

DifferenceMatrix::DifferenceMatrix(const PenaltyGraph& graph) : p_(graph.p()) {
  rows_.reserve(graph.edges().size());
  int r = 0;
  for (const Edge& e : graph.edges()) rows_.push_back({r++, e.j, e.k});
}

Eigen::VectorXd DifferenceMatrix::apply(const Eigen::VectorXd& beta) const {
  Eigen::VectorXd out(rows());
  for (const Row& row : rows_) out[row.edge_index] = beta[row.j] - beta[row.k];
  return out;
}

Eigen::VectorXd DifferenceMatrix::apply_transpose(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p_);
  for (const Row& row : rows_) {
    out[row.j] += v[row.edge_index];
    out[row.k] -= v[row.edge_index];
  }
  return out;
}

double DifferenceMatrix::l1_of_product(const Eigen::VectorXd& beta) const {
  double total = 0.0;
  for (const Row& row : rows_) total += std::abs(beta[row.j] - beta[row.k]);
  return total;
}

Eigen::MatrixXd DifferenceMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows(), p_);
  for (const Row& row : rows_) {
    d(row.edge_index, row.j) = 1.0;
    d(row.edge_index, row.k) = -1.0;
  }
  return d;
}

DifferenceMatrix difference_matrix(const PenaltyGraph& graph) { return DifferenceMatrix(graph); }

PenaltyGraph read_graph(std::istream& in) {
  std::string line;
  auto next_line = [&](const char* what) {
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return;
    }
    throw IoError(std::string("graph file truncated while reading ") + what);
  };
  next_line("header");
  long long p = 0, m = 0;
  {
    std::istringstream header(line);
    if (!(header >> p >> m) || p <= 0 || m < 0) {
      throw IoError("graph header must be \"p m\" with p >= 1, got \"" + line + "\"");
    }
  }
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(m));
  for (long long i = 0; i < m; ++i) {
    next_line("edges");
    std::istringstream row(line);
    long long j = 0, k = 0;
    if (!(row >> j >> k)) throw IoError("malformed edge line \"" + line + "\"");
    pairs.emplace_back(static_cast<int>(j), static_cast<int>(k));
  }
  return PenaltyGraph::custom(static_cast<int>(p), pairs);
}

void write_graph(std::ostream& out, const PenaltyGraph& graph) {
  out << graph.p() << ' ' << graph.num_edges() << '\n';
  for (const Edge& e : graph.edges()) out << e.j << ' ' << e.k << '\n';
}

}  // namespace flr
