#include "lattix/block_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace lattix {

FinitePropOperator::FinitePropOperator(std::shared_ptr<const Lattice> lat, int rank)
    : lat_(std::move(lat)), rank_(rank) {
  if (!lat_) throw std::invalid_argument("operator needs a lattice");
  if (rank < 1) throw std::invalid_argument("fiber rank must be >= 1");
}

FinitePropOperator FinitePropOperator::identity(std::shared_ptr<const Lattice> lat, int rank) {
  FinitePropOperator op(lat, rank);
  const int n = op.lattice().n_sites();
  for (int s = 0; s < n; ++s) op.set_block(s, s, Eigen::MatrixXcd::Identity(rank, rank));
  return op;
}

Eigen::MatrixXcd FinitePropOperator::block(int row_site, int col_site) const {
  auto it = blocks_.find({row_site, col_site});
  if (it == blocks_.end()) return Eigen::MatrixXcd::Zero(rank_, rank_);
  return it->second;
}

bool FinitePropOperator::has_block(int row_site, int col_site) const {
  return blocks_.count({row_site, col_site}) > 0;
}

void FinitePropOperator::set_block(int row_site, int col_site, Eigen::MatrixXcd b) {
  if (row_site < 0 || row_site >= lat_->n_sites() || col_site < 0 ||
      col_site >= lat_->n_sites()) {
    throw std::out_of_range("block site out of range");
  }
  if (b.rows() != rank_ || b.cols() != rank_) {
    throw std::invalid_argument("block shape does not match fiber rank");
  }
  blocks_[{row_site, col_site}] = std::move(b);
}

void FinitePropOperator::add_to_block(int row_site, int col_site, const Eigen::MatrixXcd& b) {
  auto it = blocks_.find({row_site, col_site});
  if (it == blocks_.end()) {
    set_block(row_site, col_site, b);
  } else {
    it->second += b;
  }
}

void FinitePropOperator::check_compatible(const FinitePropOperator& rhs) const {
  if (lat_.get() != rhs.lat_.get() || rank_ != rhs.rank_) {
    if (!lat_ || !rhs.lat_ || rank_ != rhs.rank_ ||
        lat_->kind() != rhs.lat_->kind() || lat_->extent() != rhs.lat_->extent()) {
      throw std::invalid_argument("operators live on different spaces");
    }
  }
}

FinitePropOperator& FinitePropOperator::operator+=(const FinitePropOperator& rhs) {
  check_compatible(rhs);
  for (const auto& [key, b] : rhs.blocks_) add_to_block(key.first, key.second, b);
  return *this;
}

FinitePropOperator& FinitePropOperator::operator-=(const FinitePropOperator& rhs) {
  check_compatible(rhs);
  for (const auto& [key, b] : rhs.blocks_) add_to_block(key.first, key.second, -b);
  return *this;
}

FinitePropOperator& FinitePropOperator::operator*=(cd scalar) {
  for (auto& [key, b] : blocks_) b *= scalar;
  return *this;
}

FinitePropOperator FinitePropOperator::operator*(const FinitePropOperator& rhs) const {
  check_compatible(rhs);
  // Column index of rhs blocks grouped by row site for the middle contraction.
  std::map<int, std::vector<std::pair<int, const Eigen::MatrixXcd*>>> rhs_by_row;
  for (const auto& [key, b] : rhs.blocks_) {
    rhs_by_row[key.first].push_back({key.second, &b});
  }
  FinitePropOperator out(lat_, rank_);
  for (const auto& [key, a] : blocks_) {
    auto it = rhs_by_row.find(key.second);
    if (it == rhs_by_row.end()) continue;
    for (const auto& [col, b] : it->second) {
      out.add_to_block(key.first, col, a * (*b));
    }
  }
  return out;
}

FinitePropOperator FinitePropOperator::adjoint() const {
  FinitePropOperator out(lat_, rank_);
  for (const auto& [key, b] : blocks_) {
    out.set_block(key.second, key.first, b.adjoint());
  }
  return out;
}

Eigen::VectorXcd FinitePropOperator::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != n_rows()) throw std::invalid_argument("vector size mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n_rows());
  for (const auto& [key, b] : blocks_) {
    out.segment(key.first * rank_, rank_) += b * v.segment(key.second * rank_, rank_);
  }
  return out;
}

int FinitePropOperator::propagation() const {
  int r = 0;
  for (const auto& [key, b] : blocks_) {
    if (b.cwiseAbs().maxCoeff() == 0.0) continue;
    r = std::max(r, lat_->dist(key.first, key.second));
  }
  return r;
}

double FinitePropOperator::coefficient_bound() const {
  double c = 0.0;
  for (const auto& [key, b] : blocks_) c = std::max(c, ::lattix::operator_norm(b));
  return c;
}

bool FinitePropOperator::is_hermitian(double tol) const {
  for (const auto& [key, b] : blocks_) {
    const Eigen::MatrixXcd diff = b - block(key.second, key.first).adjoint();
    if (diff.cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

cd FinitePropOperator::trace() const {
  cd t = 0.0;
  for (const auto& [key, b] : blocks_) {
    if (key.first == key.second) t += b.trace();
  }
  return t;
}

Eigen::MatrixXcd FinitePropOperator::to_dense() const {
  if (n_rows() > kDenseCap) {
    throw std::runtime_error("dense conversion beyond " + std::to_string(kDenseCap) +
                             " rows; use the sparse path");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_rows(), n_rows());
  for (const auto& [key, b] : blocks_) {
    m.block(key.first * rank_, key.second * rank_, rank_, rank_) = b;
  }
  return m;
}

Eigen::SparseMatrix<cd> FinitePropOperator::to_sparse() const {
  std::vector<Eigen::Triplet<cd>> trips;
  trips.reserve(blocks_.size() * rank_ * rank_);
  for (const auto& [key, b] : blocks_) {
    for (int i = 0; i < rank_; ++i) {
      for (int j = 0; j < rank_; ++j) {
        if (b(i, j) != 0.0) {
          trips.emplace_back(key.first * rank_ + i, key.second * rank_ + j, b(i, j));
        }
      }
    }
  }
  Eigen::SparseMatrix<cd> m(n_rows(), n_rows());
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

double FinitePropOperator::operator_norm() const { return lattix::operator_norm(to_dense()); }

double FinitePropOperator::schatten_norm(double p) const {
  return lattix::schatten_norm(to_dense(), p);
}

void FinitePropOperator::prune_exact_zeros(double tol) {
  for (auto it = blocks_.begin(); it != blocks_.end();) {
    if (it->second.cwiseAbs().maxCoeff() <= tol) {
      it = blocks_.erase(it);
    } else {
      ++it;
    }
  }
}

FinitePropOperator multiplication_operator(std::shared_ptr<const Lattice> lat,
                                           const Eigen::VectorXcd& f, int rank) {
  if (f.size() != lat->n_sites()) throw std::invalid_argument("site function size mismatch");
  FinitePropOperator op(lat, rank);
  for (int s = 0; s < lat->n_sites(); ++s) {
    op.set_block(s, s, f(s) * Eigen::MatrixXcd::Identity(rank, rank));
  }
  return op;
}

FinitePropOperator commutator(const FinitePropOperator& a, const FinitePropOperator& b) {
  return a * b - b * a;
}

FinitePropOperator shift_operator(std::shared_ptr<const Lattice> lat, int axis) {
  FinitePropOperator op(lat, 1);
  Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(1, 1);
  for (int s = 0; s < lat->n_sites(); ++s) {
    int t = lat->hop(s, axis, +1);
    if (t >= 0) op.set_block(t, s, one);
  }
  return op;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  if (m.rows() > FinitePropOperator::kDenseCap || m.cols() > FinitePropOperator::kDenseCap) {
    throw std::runtime_error("SVD beyond the dense cap");
  }
  if (m.rows() == 0 || m.cols() == 0) return Eigen::VectorXd();
  if (std::max(m.rows(), m.cols()) > 32) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues();
}

double operator_norm(const Eigen::MatrixXcd& m) {
  const auto sv = singular_values(m);
  return sv.size() == 0 ? 0.0 : sv(0);
}

double schatten_norm(const Eigen::MatrixXcd& m, double p) {
  if (p < 1.0) throw std::invalid_argument("Schatten exponent must be >= 1");
  const auto sv = singular_values(m);
  double acc = 0.0;
  for (int i = 0; i < sv.size(); ++i) acc += std::pow(sv(i), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace lattix
