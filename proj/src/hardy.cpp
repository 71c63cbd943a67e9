#include "lattix/hardy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lattix/cocycles.hpp"

namespace lattix {

int winding_number(const Eigen::VectorXcd& u_samples, double tol) {
  const int n = static_cast<int>(u_samples.size());
  if (n < 3) throw std::invalid_argument("winding needs at least three samples");
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const cd cur = u_samples(j);
    const cd next = u_samples((j + 1) % n);
    if (std::abs(cur) < tol || std::abs(next) < tol) {
      throw std::invalid_argument("winding needs a nonvanishing loop");
    }
    total += std::arg(next / cur);
  }
  const double turns = total / (2.0 * std::numbers::pi);
  if (std::abs(turns - std::round(turns)) > 1e-6) {
    throw std::runtime_error("winding did not close to an integer; refine the sampling");
  }
  return static_cast<int>(std::llround(turns));
}

namespace {
// Count basis columns pinned to the given coordinate window: singular values
// of the windowed block of an orthonormal basis are near 1 for pinned
// directions and near 0 for decaying ones.
int pinned_directions(const Eigen::MatrixXcd& basis, int window_start, int window_len) {
  if (basis.cols() == 0) return 0;
  const Eigen::MatrixXcd edge = basis.middleRows(window_start, window_len);
  const Eigen::VectorXd sv = singular_values(edge);
  int pinned = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > 0.5) ++pinned;
  }
  return pinned;
}
}  // namespace

ToeplitzIndexResult toeplitz_index(const Eigen::VectorXcd& u_samples) {
  const int n = static_cast<int>(u_samples.size());
  for (int j = 0; j < n; ++j) {
    if (std::abs(std::abs(u_samples(j)) - 1.0) > 1e-9) {
      throw std::invalid_argument("toeplitz index needs a unimodular symbol");
    }
  }
  const Eigen::VectorXcd hat = fourier_coefficients(u_samples);
  const int half = n / 2;
  int bandwidth = 0;
  for (int d = -half; d <= half; ++d) {
    if (std::abs(hat(d + half)) > 1e-12) bandwidth = std::max(bandwidth, std::abs(d));
  }
  if (4 * bandwidth > n) {
    throw std::invalid_argument("symbol bandwidth too large for the sample count");
  }

  const int dom = half + 1;
  const int cod = half + bandwidth + 1;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(cod, dom);
  for (int i = 0; i < cod; ++i) {
    for (int j = 0; j < dom; ++j) {
      const int d = i - j;
      if (std::abs(d) <= half) c(i, j) = hat(d + half);
    }
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  std::vector<int> null_cols;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) < 1e-10) null_cols.push_back(i);
  }

  Eigen::MatrixXcd ker_basis(dom, static_cast<long>(null_cols.size()));
  for (size_t i = 0; i < null_cols.size(); ++i) {
    ker_basis.col(static_cast<long>(i)) = svd.matrixV().col(null_cols[i]);
  }
  const int n_extra = cod - static_cast<int>(sv.size());
  Eigen::MatrixXcd coker_basis(cod, static_cast<long>(null_cols.size()) + n_extra);
  for (size_t i = 0; i < null_cols.size(); ++i) {
    coker_basis.col(static_cast<long>(i)) = svd.matrixU().col(null_cols[i]);
  }
  for (int i = 0; i < n_extra; ++i) {
    coker_basis.col(static_cast<long>(null_cols.size()) + i) =
        svd.matrixU().col(static_cast<int>(sv.size()) + i);
  }

  // Sectioning artifacts occupy the rows that reach past the domain cut:
  // dom - bandwidth .. cod - 1, a window of width 2 * bandwidth.
  const int edge = std::min(std::max(2 * bandwidth, 4), dom / 2);
  ToeplitzIndexResult out;
  out.bandwidth = bandwidth;
  out.dim_ker = static_cast<int>(ker_basis.cols()) -
                pinned_directions(ker_basis, dom - edge, edge);
  out.dim_coker = static_cast<int>(coker_basis.cols()) -
                  pinned_directions(coker_basis, cod - edge, edge);
  out.index = out.dim_ker - out.dim_coker;
  return out;
}

Eigen::VectorXcd circle_exponential(int n, int k) {
  Eigen::VectorXcd out(n);
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n;
    out(j) = std::exp(cd(0.0, k * theta));
  }
  return out;
}

}  // namespace lattix
