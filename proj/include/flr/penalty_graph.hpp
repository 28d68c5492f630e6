#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <utility>
#include <vector>

namespace flr {

// An undirected coefficient pair. Stored edges always satisfy j < k.
struct Edge {
  int j = 0;
  int k = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// The fusion penalty structure: coefficient count plus a sorted, deduplicated
// edge list. Immutable once built.
class PenaltyGraph {
 public:
  PenaltyGraph() = default;

  static PenaltyGraph chain(int p);
  // q x q lattice, row-major vectorization: pixel (r, c) has index r*q + c.
  static PenaltyGraph lattice(int q);
  // Normalizes every pair to j < k, sorts and deduplicates. Self-loops and
  // out-of-range indices raise ValidationError naming the pair.
  static PenaltyGraph custom(int p, const std::vector<std::pair<int, int>>& pairs);

  int p() const noexcept { return p_; }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  int bandwidth() const noexcept { return bandwidth_; }
  std::vector<int> degrees() const;

  // Chain- and lattice-like graphs whose bandwidth is at most ceil(sqrt(p)).
  // The PCG solver only accepts these.
  bool is_banded() const noexcept;

  // Sum over edges of |beta_j - beta_k|.
  double fusion_norm(const Eigen::VectorXd& beta) const;

  friend bool operator==(const PenaltyGraph&, const PenaltyGraph&) = default;

 private:
  PenaltyGraph(int p, std::vector<Edge> edges);

  int p_ = 0;
  std::vector<Edge> edges_;
  int bandwidth_ = 0;
};

// Sparse incidence matrix D with one row per edge: +1 at j, -1 at k.
class DifferenceMatrix {
 public:
  struct Row {
    int edge_index;
    int j;
    int k;
  };

  explicit DifferenceMatrix(const PenaltyGraph& graph);

  int rows() const noexcept { return static_cast<int>(rows_.size()); }
  int cols() const noexcept { return p_; }
  const std::vector<Row>& row_records() const noexcept { return rows_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& beta) const;             // D beta
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& v) const;      // D^T v
  double l1_of_product(const Eigen::VectorXd& beta) const;              // ||D beta||_1
  Eigen::MatrixXd to_dense() const;

 private:
  int p_;
  std::vector<Row> rows_;
};

DifferenceMatrix difference_matrix(const PenaltyGraph& graph);

// Text format: "p m" on the first line, then m lines "j k" (0-based).
PenaltyGraph read_graph(std::istream& in);
void write_graph(std::ostream& out, const PenaltyGraph& graph);

}  // namespace flr
