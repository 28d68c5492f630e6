#pragma once

#include <Eigen/Dense>
#include <vector>

namespace flr {

// Symmetric matrix of order p with `bandwidth` sub-diagonals. Only the lower
// band is stored, column by column: entry (j + d, j) for 0 <= d <= w lives at
// band_[j * (w + 1) + d]. Entries beyond the last row are padding.
class SymmetricBandMatrix {
 public:
  SymmetricBandMatrix() = default;
  SymmetricBandMatrix(int order, int bandwidth);

  int order() const noexcept { return order_; }
  int bandwidth() const noexcept { return bandwidth_; }

  // (i, j) in either triangle; zero outside the band.
  double operator()(int i, int j) const;
  // Lower-band reference; requires 0 <= row - col <= bandwidth.
  double& lower(int row, int col);
  double lower(int row, int col) const;

  void add_to_diagonal(const Eigen::VectorXd& d);
  SymmetricBandMatrix& operator*=(double s);
  SymmetricBandMatrix& operator+=(const SymmetricBandMatrix& other);

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd to_dense() const;
  static SymmetricBandMatrix from_dense(const Eigen::MatrixXd& m, int bandwidth);

 private:
  int order_ = 0;
  int bandwidth_ = 0;
  std::vector<double> band_;
};

// Lower Cholesky factor L (M = L L^T) of a symmetric band matrix, stored with
// the same layout. Construction fails with FactorizationError on a
// non-positive or non-finite pivot, so a BandCholesky always holds a usable
// factor. Cost O(p w^2).
class BandCholesky {
 public:
  explicit BandCholesky(const SymmetricBandMatrix& m);

  int order() const noexcept { return factor_.order(); }
  int bandwidth() const noexcept { return factor_.bandwidth(); }
  const SymmetricBandMatrix& factor() const noexcept { return factor_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  void solve_in_place(Eigen::VectorXd& x) const;
  // L as a dense lower-triangular matrix.
  Eigen::MatrixXd lower_dense() const;

 private:
  SymmetricBandMatrix factor_;
};

inline BandCholesky banded_cholesky(const SymmetricBandMatrix& m) { return BandCholesky(m); }

}  // namespace flr
