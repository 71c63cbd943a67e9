#include "lattix/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lattix {

TraceEstimate limit_functional(const std::vector<double>& per_set,
                               const std::vector<double>& deficiencies, const LimitPolicy& policy,
                               int deficiency_radius) {
  if (per_set.empty()) throw std::invalid_argument("limit functional needs at least one set");
  if (deficiencies.size() != per_set.size()) {
    throw std::invalid_argument("one deficiency per set is required");
  }
  if (policy.window < 1) throw std::invalid_argument("window must be positive");
  TraceEstimate out;
  out.per_set = per_set;
  out.deficiency_radius = deficiency_radius;
  out.last_deficiency = deficiencies.back();
  const size_t window = std::min(per_set.size(), static_cast<size_t>(policy.window));
  double lo = per_set.back(), hi = per_set.back(), acc = 0.0;
  for (size_t i = per_set.size() - window; i < per_set.size(); ++i) {
    lo = std::min(lo, per_set[i]);
    hi = std::max(hi, per_set[i]);
    acc += per_set[i];
  }
  out.value = acc / static_cast<double>(window);
  out.spread = hi - lo;
  out.converged = out.spread <= policy.tolerance;
  return out;
}

std::vector<double> averaged_diagonal(const KernelMatrix& k, const FolnerSequence& seq) {
  std::vector<double> out;
  out.reserve(seq.size());
  for (int i = 0; i < seq.size(); ++i) {
    const auto& set = seq.set(i);
    double acc = 0.0;
    for (int site : set) acc += k.block(site, site).trace().real();
    out.push_back(acc / static_cast<double>(set.size()));
  }
  return out;
}

std::vector<double> averaged_diagonal(const FinitePropOperator& t, const FolnerSequence& seq) {
  std::vector<double> out;
  out.reserve(seq.size());
  for (int i = 0; i < seq.size(); ++i) {
    const auto& set = seq.set(i);
    double acc = 0.0;
    for (int site : set) {
      if (t.has_block(site, site)) acc += t.block(site, site).trace().real();
    }
    out.push_back(acc / static_cast<double>(set.size()));
  }
  return out;
}

namespace {
std::vector<double> set_deficiencies(const Lattice& lat, const FolnerSequence& seq, int radius) {
  std::vector<double> out;
  out.reserve(seq.size());
  for (int i = 0; i < seq.size(); ++i) {
    out.push_back(folner_deficiency(lat, seq.set(i), radius));
  }
  return out;
}
}  // namespace

TraceEstimate roe_trace(const KernelMatrix& k, const FolnerSequence& seq,
                        const LimitPolicy& policy, int deficiency_radius) {
  return limit_functional(averaged_diagonal(k, seq),
                          set_deficiencies(*k.lat, seq, deficiency_radius), policy,
                          deficiency_radius);
}

TraceEstimate roe_trace(const FinitePropOperator& t, const FolnerSequence& seq,
                        const LimitPolicy& policy, int deficiency_radius) {
  return limit_functional(averaged_diagonal(t, seq),
                          set_deficiencies(t.lattice(), seq, deficiency_radius), policy,
                          deficiency_radius);
}

TraceEstimate analytic_index_density(const GradedOperator& d, const FilterFunction& f,
                                     const FolnerSequence& seq, const LimitPolicy& policy,
                                     int deficiency_radius) {
  const Eigen::VectorXd smax = d.singular_values();
  const double span = std::max(1.0, smax.size() > 0 ? smax.maxCoeff() : 1.0);
  f.validate(span, true);
  const Eigen::VectorXd density = d.supertrace_density(f);
  std::vector<double> per_set;
  per_set.reserve(seq.size());
  for (int i = 0; i < seq.size(); ++i) {
    const auto& set = seq.set(i);
    double acc = 0.0;
    for (int site : set) acc += density(site);
    per_set.push_back(acc / static_cast<double>(set.size()));
  }
  TraceEstimate out = limit_functional(
      per_set, set_deficiencies(d.lattice(), seq, deficiency_radius), policy, deficiency_radius);
  if (!d.lattice().has_boundary()) {
    // No boundary means no deficiency: the whole space is itself a Folner set
    // and the mean value of the density is the exact normalized supertrace.
    out.value = density.sum() / static_cast<double>(d.lattice().n_sites());
    out.spread = 0.0;
    out.converged = true;
    out.last_deficiency = 0.0;
  }
  return out;
}

std::vector<double> filtered_diagonal(const Eigen::SparseMatrix<cd>& h,
                                      const ChebyshevSeries& series, const std::vector<int>& cols,
                                      int slab) {
  const int dim = static_cast<int>(h.rows());
  const int ncols = static_cast<int>(cols.size());
  if (slab < 1) throw std::invalid_argument("slab width must be positive");
  std::vector<double> out(static_cast<size_t>(ncols), 0.0);
  const double inv_a = 1.0 / series.enclosure;
  const int deg = series.degree();

  for (int start = 0; start < ncols; start += slab) {
    const int width = std::min(slab, ncols - start);
    Eigen::MatrixXcd t_prev = Eigen::MatrixXcd::Zero(dim, width);
    for (int j = 0; j < width; ++j) {
      const int c = cols[static_cast<size_t>(start + j)];
      if (c < 0 || c >= dim) throw std::invalid_argument("column index out of range");
      t_prev(c, j) = 1.0;
    }
    Eigen::MatrixXcd acc = series.coeffs[0] * t_prev;
    if (deg >= 1) {
      Eigen::MatrixXcd t_cur = inv_a * (h * t_prev);
      acc += series.coeffs[1] * t_cur;
      for (int k = 2; k <= deg; ++k) {
        Eigen::MatrixXcd t_next = 2.0 * inv_a * (h * t_cur) - t_prev;
        acc += series.coeffs[static_cast<size_t>(k)] * t_next;
        t_prev.swap(t_cur);
        t_cur.swap(t_next);
      }
    }
    for (int j = 0; j < width; ++j) {
      out[static_cast<size_t>(start + j)] = acc(cols[static_cast<size_t>(start + j)], j).real();
    }
  }
  return out;
}

std::vector<double> sign_density(const FinitePropOperator& h, const std::vector<int>& sites,
                                 double gap, int degree_cap) {
  if (gap <= 0) throw std::invalid_argument("sign density needs a positive gap");
  if (!h.is_hermitian(1e-10)) throw std::invalid_argument("sign density needs a Hermitian operator");
  const Eigen::SparseMatrix<cd> sparse = h.to_sparse();
  const double enclosure = spectral_enclosure(sparse);
  const double sigma = gap / 3.0;
  const ChebyshevSeries series = chebyshev_fit(
      [sigma](double x) { return std::erf(x / sigma); }, enclosure, 1e-10, degree_cap);

  const int rank = h.rank();
  std::vector<int> cols;
  cols.reserve(sites.size() * static_cast<size_t>(rank));
  for (int s : sites) {
    for (int r = 0; r < rank; ++r) cols.push_back(s * rank + r);
  }
  const std::vector<double> diag = filtered_diagonal(sparse, series, cols);
  std::vector<double> out(sites.size(), 0.0);
  for (size_t i = 0; i < sites.size(); ++i) {
    double acc = 0.0;
    for (int r = 0; r < rank; ++r) acc += diag[i * static_cast<size_t>(rank) + r];
    out[i] = 0.5 * acc;
  }
  return out;
}

double spectral_gap(const FinitePropOperator& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_dense());
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  double gap = std::abs(es.eigenvalues()(0));
  for (int i = 1; i < es.eigenvalues().size(); ++i) {
    gap = std::min(gap, std::abs(es.eigenvalues()(i)));
  }
  return gap;
}

CommutatorTraceCheck commutator_trace_check(const FinitePropOperator& a,
                                            const FinitePropOperator& b,
                                            const std::vector<int>& set) {
  if (set.empty()) throw std::invalid_argument("certificate needs a nonempty set");
  const FinitePropOperator comm = commutator(a, b);
  double acc = 0.0;
  for (int site : set) acc += comm.block(site, site).trace().real();

  CommutatorTraceCheck out;
  out.radius = a.propagation() + b.propagation();
  out.deficiency = folner_deficiency(a.lattice(), set, out.radius);
  out.lhs = std::abs(acc) / static_cast<double>(set.size());
  out.bound = 2.0 * operator_norm(a.to_dense()) * operator_norm(b.to_dense()) * out.deficiency;
  out.ok = out.lhs <= out.bound + 1e-12;
  return out;
}

}  // namespace lattix
