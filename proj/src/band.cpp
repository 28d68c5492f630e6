#include "flr/band.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "flr/error.hpp"

namespace flr {

SymmetricBandMatrix::SymmetricBandMatrix(int order, int bandwidth)
    : order_(order), bandwidth_(bandwidth) {
  if (order < 0 || bandwidth < 0) throw InvalidDimension("band matrix needs order, bandwidth >= 0");
  bandwidth_ = order > 0 ? std::min(bandwidth, order - 1) : 0;
  band_.assign(static_cast<size_t>(order_) * static_cast<size_t>(bandwidth_ + 1), 0.0);
}

double SymmetricBandMatrix::operator()(int i, int j) const {
  if (i < j) std::swap(i, j);
  if (i - j > bandwidth_) return 0.0;
  return lower(i, j);
}

double& SymmetricBandMatrix::lower(int row, int col) {
  assert(row >= col && row - col <= bandwidth_);
  return band_[static_cast<size_t>(col) * static_cast<size_t>(bandwidth_ + 1) +
               static_cast<size_t>(row - col)];
}

double SymmetricBandMatrix::lower(int row, int col) const {
  assert(row >= col && row - col <= bandwidth_);
  return band_[static_cast<size_t>(col) * static_cast<size_t>(bandwidth_ + 1) +
               static_cast<size_t>(row - col)];
}

void SymmetricBandMatrix::add_to_diagonal(const Eigen::VectorXd& d) {
  if (d.size() != order_) throw InvalidDimension("diagonal length does not match band matrix order");
  for (int j = 0; j < order_; ++j) lower(j, j) += d[j];
}

SymmetricBandMatrix& SymmetricBandMatrix::operator*=(double s) {
  for (double& v : band_) v *= s;
  return *this;
}

SymmetricBandMatrix& SymmetricBandMatrix::operator+=(const SymmetricBandMatrix& other) {
  if (other.order_ != order_ || other.bandwidth_ > bandwidth_) {
    throw InvalidDimension("band matrix sum needs equal order and a bandwidth that fits");
  }
  for (int j = 0; j < order_; ++j) {
    const int last = std::min(order_ - 1, j + other.bandwidth_);
    for (int i = j; i <= last; ++i) lower(i, j) += other.lower(i, j);
  }
  return *this;
}

Eigen::VectorXd SymmetricBandMatrix::multiply(const Eigen::VectorXd& x) const {
  if (x.size() != order_) throw InvalidDimension("vector length does not match band matrix order");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(order_);
  for (int j = 0; j < order_; ++j) {
    y[j] += lower(j, j) * x[j];
    const int last = std::min(order_ - 1, j + bandwidth_);
    for (int i = j + 1; i <= last; ++i) {
      const double v = lower(i, j);
      y[i] += v * x[j];
      y[j] += v * x[i];
    }
  }
  return y;
}

Eigen::MatrixXd SymmetricBandMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(order_, order_);
  for (int j = 0; j < order_; ++j) {
    const int last = std::min(order_ - 1, j + bandwidth_);
    for (int i = j; i <= last; ++i) m(i, j) = m(j, i) = lower(i, j);
  }
  return m;
}

SymmetricBandMatrix SymmetricBandMatrix::from_dense(const Eigen::MatrixXd& m, int bandwidth) {
  if (m.rows() != m.cols()) throw InvalidDimension("band matrix must be square");
  SymmetricBandMatrix out(static_cast<int>(m.rows()), bandwidth);
  for (int j = 0; j < out.order_; ++j) {
    const int last = std::min(out.order_ - 1, j + out.bandwidth_);
    for (int i = j; i <= last; ++i) out.lower(i, j) = m(i, j);
  }
  return out;
}

BandCholesky::BandCholesky(const SymmetricBandMatrix& m) : factor_(m) {
  const int p = factor_.order();
  const int w = factor_.bandwidth();
  SymmetricBandMatrix& l = factor_;
  // Right-looking column Cholesky restricted to the band.
  for (int j = 0; j < p; ++j) {
    const double pivot = l.lower(j, j);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw FactorizationError(j, "band Cholesky: non-positive pivot " + std::to_string(pivot) +
                                      " at index " + std::to_string(j));
    }
    const double d = std::sqrt(pivot);
    l.lower(j, j) = d;
    const int last = std::min(p - 1, j + w);
    for (int i = j + 1; i <= last; ++i) l.lower(i, j) /= d;
    for (int k = j + 1; k <= last; ++k) {
      const double lkj = l.lower(k, j);
      if (lkj == 0.0) continue;
      for (int i = k; i <= last; ++i) l.lower(i, k) -= l.lower(i, j) * lkj;
    }
  }
}

void BandCholesky::solve_in_place(Eigen::VectorXd& x) const {
  const int p = factor_.order();
  const int w = factor_.bandwidth();
  if (x.size() != p) throw InvalidDimension("rhs length does not match factor order");
  // L z = b
  for (int j = 0; j < p; ++j) {
    x[j] /= factor_.lower(j, j);
    const double xj = x[j];
    const int last = std::min(p - 1, j + w);
    for (int i = j + 1; i <= last; ++i) x[i] -= factor_.lower(i, j) * xj;
  }
  // L^T x = z
  for (int j = p - 1; j >= 0; --j) {
    double s = x[j];
    const int last = std::min(p - 1, j + w);
    for (int i = j + 1; i <= last; ++i) s -= factor_.lower(i, j) * x[i];
    x[j] = s / factor_.lower(j, j);
  }
}

Eigen::VectorXd BandCholesky::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = rhs;
  solve_in_place(x);
  return x;
}

Eigen::MatrixXd BandCholesky::lower_dense() const {
  const int p = factor_.order();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    const int last = std::min(p - 1, j + factor_.bandwidth());
    for (int i = j; i <= last; ++i) l(i, j) = factor_.lower(i, j);
  }
  return l;
}

}  // namespace flr
