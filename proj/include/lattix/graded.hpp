#pragma once

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "lattix/filter.hpp"
#include "lattix/lattice.hpp"

namespace lattix {

struct KernelDims {
  int dim_ker = 0;
  int dim_coker = 0;
  int index = 0;
};

// Graded pair (H_plus, H_minus) with off-diagonal part a : H_plus -> H_minus,
// i.e. D = [[0, a*], [a, 0]].  Both half spaces carry embeddings into the
// site space of `lat` (rank `site_rank` per site) so that supertraces can be
// attributed per site; for plain site models both embeddings are identities.
class GradedOperator {
 public:
  GradedOperator(std::shared_ptr<const Lattice> lat, int site_rank, Eigen::MatrixXcd a,
                 Eigen::MatrixXcd embed_plus, Eigen::MatrixXcd embed_minus,
                 std::string descriptor);

  const Lattice& lattice() const { return *lat_; }
  std::shared_ptr<const Lattice> lattice_ptr() const { return lat_; }
  int site_rank() const { return site_rank_; }
  int dim_plus() const { return static_cast<int>(a_.cols()); }
  int dim_minus() const { return static_cast<int>(a_.rows()); }
  const Eigen::MatrixXcd& a_matrix() const { return a_; }
  const std::string& descriptor() const { return descriptor_; }

  Eigen::VectorXd singular_values() const;
  // Kernel and cokernel dimensions of `a` counted by singular values below tol.
  KernelDims index_by_svd(double tol = 1e-10) const;

  // Str f(D) = tr g(a* a) - tr g(a a*) with g(s) = f(sqrt(s)); equals the
  // index whenever f is even with f(0) = 1, since the nonzero spectra of the
  // two products coincide.
  double supertrace_filtered(const FilterFunction& f) const;
  // Per-site attribution of the same quantity through the embeddings; sums to
  // supertrace_filtered.
  Eigen::VectorXd supertrace_density(const FilterFunction& f) const;

 private:
  std::shared_ptr<const Lattice> lat_;
  int site_rank_ = 1;
  Eigen::MatrixXcd a_;
  Eigen::MatrixXcd embed_plus_;
  Eigen::MatrixXcd embed_minus_;
  std::string descriptor_;
};

}  // namespace lattix
