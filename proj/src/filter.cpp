#include "lattix/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lattix {

FilterFunction FilterFunction::gaussian(double t) {
  if (t <= 0) throw std::invalid_argument("gaussian filter needs t > 0");
  std::ostringstream name;
  name << "gaussian(t=" << t << ")";
  return FilterFunction{name.str(), [t](double x) { return std::exp(-t * x * x); }};
}

FilterFunction FilterFunction::smoothed_sign(double sigma) {
  if (sigma <= 0) throw std::invalid_argument("smoothed sign needs sigma > 0");
  std::ostringstream name;
  name << "erf-sign(sigma=" << sigma << ")";
  return FilterFunction{name.str(), [sigma](double x) { return std::erf(x / sigma); }};
}

void FilterFunction::validate(double span, bool require_unit, double tol) const {
  if (!eval) throw std::invalid_argument("filter has no evaluator");
  if (require_unit && std::abs(eval(0.0) - 1.0) > tol) {
    throw std::invalid_argument("index filter must satisfy f(0) = 1");
  }
  const int samples = 101;
  for (int j = 0; j <= samples; ++j) {
    const double x = span * static_cast<double>(j) / samples;
    if (std::abs(eval(x) - eval(-x)) > tol) {
      throw std::invalid_argument("index filter must be even");
    }
  }
}

double ChebyshevSeries::eval_scalar(double x) const {
  const double u = x / enclosure;
  double tk_prev = 1.0, tk = u, acc = coeffs.empty() ? 0.0 : coeffs[0];
  if (coeffs.size() > 1) acc += coeffs[1] * u;
  for (size_t k = 2; k < coeffs.size(); ++k) {
    const double tk_next = 2.0 * u * tk - tk_prev;
    acc += coeffs[k] * tk_next;
    tk_prev = tk;
    tk = tk_next;
  }
  return acc;
}

ChebyshevSeries chebyshev_fit(const std::function<double(double)>& f, double enclosure,
                              double residual_target, int degree_cap) {
  if (enclosure <= 0) throw std::invalid_argument("enclosure must be positive");
  if (degree_cap < 8) throw std::invalid_argument("degree cap too small");

  std::vector<double> coeffs;
  for (int deg = 64;; deg = std::min(2 * deg, degree_cap)) {
    const int m = 4 * (deg + 1);
    std::vector<double> samples(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
      const double theta = std::numbers::pi * (j + 0.5) / m;
      samples[static_cast<size_t>(j)] = f(enclosure * std::cos(theta));
      // Overflowed samples would poison the tail test through NaN, which
      // std::max silently ignores, so reject them before they spread.
      if (!std::isfinite(samples[static_cast<size_t>(j)])) {
        throw std::invalid_argument("filter must stay finite on the enclosure interval");
      }
    }
    coeffs.assign(static_cast<size_t>(deg) + 1, 0.0);
    for (int k = 0; k <= deg; ++k) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) {
        const double theta = std::numbers::pi * (j + 0.5) / m;
        acc += samples[static_cast<size_t>(j)] * std::cos(k * theta);
      }
      coeffs[static_cast<size_t>(k)] = (k == 0 ? 1.0 : 2.0) * acc / m;
    }
    double tail_max = 0.0;
    for (int k = deg - deg / 8; k <= deg; ++k) {
      tail_max = std::max(tail_max, std::abs(coeffs[static_cast<size_t>(k)]));
    }
    if (tail_max <= residual_target / (deg + 1)) break;
    if (deg == degree_cap) {
      throw std::runtime_error("chebyshev fit hit the degree cap before the tail converged");
    }
  }

  // Truncate at the shortest prefix whose dropped l1 mass meets the target.
  std::vector<double> suffix(coeffs.size() + 1, 0.0);
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) {
    suffix[static_cast<size_t>(k)] =
        suffix[static_cast<size_t>(k) + 1] + std::abs(coeffs[static_cast<size_t>(k)]);
  }
  size_t keep = coeffs.size();
  for (size_t d = 1; d <= coeffs.size(); ++d) {
    if (suffix[d] <= residual_target) {
      keep = d;
      break;
    }
  }
  ChebyshevSeries series;
  series.enclosure = enclosure;
  series.coeffs.assign(coeffs.begin(), coeffs.begin() + static_cast<long>(keep));
  series.residual = suffix[keep];
  return series;
}

double spectral_enclosure(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                          int dim, int iters, std::uint64_t seed) {
  if (dim <= 0) throw std::invalid_argument("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cd(gauss(rng), gauss(rng));
  v.normalize();
  double best = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd w = apply(v);
    const double norm = w.norm();
    best = std::max(best, norm);
    if (norm < 1e-300) break;
    v = w / norm;
  }
  return best > 0 ? 1.01 * best : 1.0;
}

double spectral_enclosure(const Eigen::SparseMatrix<cd>& h, int iters, std::uint64_t seed) {
  return spectral_enclosure(
      [&h](const Eigen::VectorXcd& v) { return Eigen::VectorXcd(h * v); },
      static_cast<int>(h.rows()), iters, seed);
}

Eigen::MatrixXcd chebyshev_columns(const Eigen::SparseMatrix<cd>& h, const ChebyshevSeries& series,
                                   const std::vector<int>& cols, int slab) {
  const int dim = static_cast<int>(h.rows());
  const int ncols = static_cast<int>(cols.size());
  if (slab < 1) throw std::invalid_argument("slab width must be positive");
  Eigen::MatrixXcd out(dim, ncols);
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
    out.middleCols(start, width) = acc;
  }
  return out;
}

Eigen::MatrixXcd chebyshev_dense(const Eigen::MatrixXcd& h, const ChebyshevSeries& series) {
  const int dim = static_cast<int>(h.rows());
  const double inv_a = 1.0 / series.enclosure;
  const int deg = series.degree();
  Eigen::MatrixXcd t_prev = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd acc = series.coeffs[0] * t_prev;
  if (deg >= 1) {
    Eigen::MatrixXcd t_cur = inv_a * h;
    acc += series.coeffs[1] * t_cur;
    for (int k = 2; k <= deg; ++k) {
      Eigen::MatrixXcd t_next = 2.0 * inv_a * (h * t_cur) - t_prev;
      acc += series.coeffs[static_cast<size_t>(k)] * t_next;
      t_prev.swap(t_cur);
      t_cur.swap(t_next);
    }
  }
  return acc;
}

Eigen::MatrixXcd KernelMatrix::block(int x, int y) const {
  return dense.block(x * rank, y * rank, rank, rank);
}

KernelMatrix apply_filter(const FinitePropOperator& d_op, const FilterFunction& f,
                          const std::string& method, int degree_cap) {
  if (!d_op.is_hermitian(1e-10)) {
    throw std::invalid_argument("spectral filters need a Hermitian operator");
  }
  KernelMatrix out;
  out.lat = d_op.lattice_ptr();
  out.rank = d_op.rank();
  out.method = method;

  if (method == "eigen") {
    const Eigen::MatrixXcd dense = d_op.to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    Eigen::VectorXd filtered = es.eigenvalues();
    for (int i = 0; i < filtered.size(); ++i) filtered(i) = f.eval(filtered(i));
    out.dense = es.eigenvectors() * filtered.asDiagonal() * es.eigenvectors().adjoint();
    return out;
  }
  if (method == "chebyshev") {
    const Eigen::SparseMatrix<cd> sparse = d_op.to_sparse();
    const double enclosure = spectral_enclosure(sparse);
    const ChebyshevSeries series = chebyshev_fit(f.eval, enclosure, 1e-10, degree_cap);
    std::vector<int> cols(static_cast<size_t>(sparse.rows()));
    for (size_t i = 0; i < cols.size(); ++i) cols[i] = static_cast<int>(i);
    out.dense = chebyshev_columns(sparse, series, cols);
    out.degree = series.degree();
    out.residual = series.residual;
    return out;
  }
  throw std::invalid_argument("unknown filter method: " + method);
}

QuasiLocalityProfile quasilocality_profile(const KernelMatrix& k, const std::vector<int>& radii) {
  const int n = k.lat->n_sites();
  QuasiLocalityProfile profile;
  profile.radii = radii;
  profile.tails.assign(radii.size(), 0.0);
  for (int x = 0; x < n; ++x) {
    for (size_t ir = 0; ir < radii.size(); ++ir) {
      double mass = 0.0;
      for (int y = 0; y < n; ++y) {
        if (k.lat->dist(x, y) <= radii[ir]) continue;
        mass += k.block(x, y).squaredNorm();
      }
      profile.tails[ir] = std::max(profile.tails[ir], std::sqrt(mass));
    }
  }
  return profile;
}

}  // namespace lattix
