#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lattix/block_operator.hpp"
#include "lattix/filter.hpp"
#include "lattix/folner.hpp"
#include "lattix/graded.hpp"

namespace lattix {

struct LimitPolicy {
  int window = 3;          // trailing sets used for the limit value
  double tolerance = 1e-6;  // max spread across the window to call it converged
};

struct TraceEstimate {
  std::vector<double> per_set;
  double value = 0.0;   // mean over the trailing window
  double spread = 0.0;  // max - min over the trailing window
  bool converged = false;
  double last_deficiency = 0.0;
  int deficiency_radius = 0;
};

// Extrapolates per-set averages along a Folner sequence.
TraceEstimate limit_functional(const std::vector<double>& per_set,
                               const std::vector<double>& deficiencies, const LimitPolicy& policy,
                               int deficiency_radius);

// Per-set normalized diagonal averages (1/#S) sum_{x in S} tr block(x, x).
std::vector<double> averaged_diagonal(const KernelMatrix& k, const FolnerSequence& seq);
std::vector<double> averaged_diagonal(const FinitePropOperator& t, const FolnerSequence& seq);

TraceEstimate roe_trace(const KernelMatrix& k, const FolnerSequence& seq,
                        const LimitPolicy& policy, int deficiency_radius = 2);
TraceEstimate roe_trace(const FinitePropOperator& t, const FolnerSequence& seq,
                        const LimitPolicy& policy, int deficiency_radius = 2);

// Per-set averages of the graded filtered diagonal tr(eps k_f(x, x)).  On a
// boundary-free lattice the reported value is the exact supertrace per site;
// otherwise it is the trailing-window estimate over the set sequence.
TraceEstimate analytic_index_density(const GradedOperator& d, const FilterFunction& f,
                                     const FolnerSequence& seq, const LimitPolicy& policy,
                                     int deficiency_radius = 2);

// Diagonal entries (c, c) of f(H) for sparse Hermitian H, one slab of columns
// at a time so no dense kernel is ever held.
std::vector<double> filtered_diagonal(const Eigen::SparseMatrix<cd>& h,
                                      const ChebyshevSeries& series, const std::vector<int>& cols,
                                      int slab = 128);

// Per-site index density 1/2 tr_rank <x| sgn(H) |x> of a gapped Hamiltonian,
// with sgn smoothed by erf(./sigma), sigma = gap/3, so the expansion degree
// stays bounded.  `sites` selects the sites to evaluate.
std::vector<double> sign_density(const FinitePropOperator& h, const std::vector<int>& sites,
                                 double gap, int degree_cap = 2000);

// Smallest |eigenvalue| of a dense-representable Hermitian operator.
double spectral_gap(const FinitePropOperator& h);

struct CommutatorTraceCheck {
  double lhs = 0.0;    // |averaged diagonal of [A,B] over the set|
  double bound = 0.0;  // 2 ||A|| ||B|| deficiency(set, prop(A)+prop(B))
  double deficiency = 0.0;
  int radius = 0;
  bool ok = false;
};

// Trace-vanishing certificate for commutators: the full trace of [A,B] is
// zero, so the set average is controlled by the boundary the propagation can
// reach.
CommutatorTraceCheck commutator_trace_check(const FinitePropOperator& a,
                                            const FinitePropOperator& b,
                                            const std::vector<int>& set);

}  // namespace lattix
