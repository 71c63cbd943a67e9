#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "lattix/block_operator.hpp"
#include "lattix/lattice.hpp"

namespace lattix {

// Compactly supported real test functions: Lipschitz constant <= L in the hop
// metric, support diameter <= R, sup norm <= 1.  Deterministic tent functions
// at every anchor site come first, then optional seeded random cones.
struct LipschitzTestFamily {
  std::shared_ptr<const Lattice> lat;
  double lip = 1.0;
  double diam = 1.0;
  double sup = 1.0;
  std::vector<Eigen::VectorXd> functions;

  void validate(double tol = 1e-12) const;
};

LipschitzTestFamily lipschitz_test_family(std::shared_ptr<const Lattice> lat, double lip,
                                          double diam, int n_random = 0,
                                          std::uint64_t seed = 0);

// sup over the family of || [T, multiplication(f)] ||_p  (dense Schatten norm).
double summability_profile(const Eigen::MatrixXcd& t_op, const LipschitzTestFamily& family,
                           double p, int rank = 1);
double summability_profile(const FinitePropOperator& t_op, const LipschitzTestFamily& family,
                           double p);

}  // namespace lattix
