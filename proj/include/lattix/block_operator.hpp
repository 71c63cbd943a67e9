#pragma once

#include <complex>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lattix/lattice.hpp"

namespace lattix {

using cd = std::complex<double>;

// Operators on ell^2(sites) x C^rank with finitely many nonzero site blocks.
// Propagation (max hop distance over stored blocks) and the coefficient bound
// (max block spectral norm) are tracked; norms beyond the dense cap error out
// instead of approximating.
class FinitePropOperator {
 public:
  static constexpr int kDenseCap = 4096;  // max total rows for dense conversions

  FinitePropOperator(std::shared_ptr<const Lattice> lat, int rank);

  static FinitePropOperator identity(std::shared_ptr<const Lattice> lat, int rank);

  const Lattice& lattice() const { return *lat_; }
  std::shared_ptr<const Lattice> lattice_ptr() const { return lat_; }
  int rank() const { return rank_; }
  int n_rows() const { return lat_->n_sites() * rank_; }

  const std::map<std::pair<int, int>, Eigen::MatrixXcd>& blocks() const { return blocks_; }
  Eigen::MatrixXcd block(int row_site, int col_site) const;
  bool has_block(int row_site, int col_site) const;
  void set_block(int row_site, int col_site, Eigen::MatrixXcd b);
  void add_to_block(int row_site, int col_site, const Eigen::MatrixXcd& b);

  FinitePropOperator& operator+=(const FinitePropOperator& rhs);
  FinitePropOperator& operator-=(const FinitePropOperator& rhs);
  FinitePropOperator& operator*=(cd scalar);
  friend FinitePropOperator operator+(FinitePropOperator a, const FinitePropOperator& b) { return a += b; }
  friend FinitePropOperator operator-(FinitePropOperator a, const FinitePropOperator& b) { return a -= b; }
  friend FinitePropOperator operator*(cd s, FinitePropOperator a) { return a *= s; }
  FinitePropOperator operator*(const FinitePropOperator& rhs) const;  // composition
  FinitePropOperator adjoint() const;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

  int propagation() const;
  double coefficient_bound() const;
  bool is_hermitian(double tol = 1e-10) const;
  cd trace() const;

  Eigen::MatrixXcd to_dense() const;                  // errors beyond kDenseCap
  Eigen::SparseMatrix<cd> to_sparse() const;          // no cap
  double operator_norm() const;                       // dense SVD, capped
  double schatten_norm(double p) const;               // p in [1, inf), capped

  // Drops blocks with no entry above tol (default: exactly zero blocks only).
  void prune_exact_zeros(double tol = 0.0);

 private:
  void check_compatible(const FinitePropOperator& rhs) const;
  std::shared_ptr<const Lattice> lat_;
  int rank_;
  std::map<std::pair<int, int>, Eigen::MatrixXcd> blocks_;
};

// diag(f) tensor I_rank for a complex site function.
FinitePropOperator multiplication_operator(std::shared_ptr<const Lattice> lat,
                                           const Eigen::VectorXcd& f, int rank = 1);

FinitePropOperator commutator(const FinitePropOperator& a, const FinitePropOperator& b);

// Unit hop along +axis (rank 1): (S u)(x) = u(x - e_axis) i.e. block (x+e, x) = 1.
FinitePropOperator shift_operator(std::shared_ptr<const Lattice> lat, int axis = 0);

// Singular values of a dense matrix (descending), used by Schatten norms and
// kernel-dimension oracles.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m);
double operator_norm(const Eigen::MatrixXcd& m);
double schatten_norm(const Eigen::MatrixXcd& m, double p);

}  // namespace lattix
