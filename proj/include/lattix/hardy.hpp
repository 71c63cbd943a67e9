#pragma once

#include <Eigen/Dense>

#include "lattix/block_operator.hpp"

namespace lattix {

// Degree of a nonvanishing loop given by equispaced circle samples.
int winding_number(const Eigen::VectorXcd& u_samples, double tol = 1e-9);

struct ToeplitzIndexResult {
  int dim_ker = 0;
  int dim_coker = 0;
  int index = 0;
  int bandwidth = 0;
};

// Index of the Toeplitz operator with unimodular symbol u, computed
// independently of any cocycle: a rectangular finite section
// C[i,j] = hat(u)(i-j) with domain
// {0..N/2} and codomain {0..N/2+K} (K the measured Fourier bandwidth) is cut,
// its numerical null spaces are split into decaying vectors (true kernel and
// cokernel) and vectors pinned to the truncation edge (sectioning artifacts),
// and only the former are counted.  Needs 4K <= N.
ToeplitzIndexResult toeplitz_index(const Eigen::VectorXcd& u_samples);

// Samples of theta -> exp(i k theta) on an n-point circle.
Eigen::VectorXcd circle_exponential(int n, int k);

}  // namespace lattix
