#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lattix/block_operator.hpp"
#include "lattix/lattice.hpp"

namespace lattix {

// Scalar spectral filter.  Index filters must be even with f(0) = 1 so that
// the filtered supertrace is insensitive to the nonzero spectrum pairing.
struct FilterFunction {
  std::string name;
  std::function<double(double)> eval;

  static FilterFunction gaussian(double t);
  static FilterFunction smoothed_sign(double sigma);

  // Samples f on [-span, span]; checks evenness, and f(0) = 1 when
  // require_unit is set.
  void validate(double span, bool require_unit, double tol = 1e-10) const;
};

// Truncated Chebyshev expansion of f on [-enclosure, enclosure].  The tail
// bound `residual` is the l1 mass of the dropped coefficients, a sup-norm
// error bound since |T_k| <= 1.
struct ChebyshevSeries {
  double enclosure = 1.0;
  std::vector<double> coeffs;
  double residual = 0.0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double eval_scalar(double x) const;
};

ChebyshevSeries chebyshev_fit(const std::function<double(double)>& f, double enclosure,
                              double residual_target = 1e-10, int degree_cap = 2000);

// Upper bound for the spectral radius of a Hermitian operator given as a
// matrix-vector action: 1.01 times a seeded power-iteration estimate.
double spectral_enclosure(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                          int dim, int iters = 50, std::uint64_t seed = 12345);
double spectral_enclosure(const Eigen::SparseMatrix<cd>& h, int iters = 50,
                          std::uint64_t seed = 12345);

// Selected columns of f(H) for sparse Hermitian H, via the three-term
// recurrence run on slabs of identity columns.
Eigen::MatrixXcd chebyshev_columns(const Eigen::SparseMatrix<cd>& h, const ChebyshevSeries& series,
                                   const std::vector<int>& cols, int slab = 128);

// Dense f(H) for a full series.
Eigen::MatrixXcd chebyshev_dense(const Eigen::MatrixXcd& h, const ChebyshevSeries& series);

// f(D) with site-block access.
struct KernelMatrix {
  std::shared_ptr<const Lattice> lat;
  int rank = 1;
  Eigen::MatrixXcd dense;
  std::string method;
  int degree = 0;
  double residual = 0.0;

  Eigen::MatrixXcd block(int x, int y) const;
};

// method is "eigen" (exact, dense self-adjoint eigensolver) or "chebyshev".
// The input must be Hermitian to 1e-10.
KernelMatrix apply_filter(const FinitePropOperator& d_op, const FilterFunction& f,
                          const std::string& method, int degree_cap = 2000);

// tail(R) = max over sites x of the l2 mass of row x beyond graph distance R.
struct QuasiLocalityProfile {
  std::vector<int> radii;
  std::vector<double> tails;
};

QuasiLocalityProfile quasilocality_profile(const KernelMatrix& k, const std::vector<int>& radii);

}  // namespace lattix
