#include "lattix/symbols.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lattix {

namespace {
constexpr cd kI{0.0, 1.0};

double op_norm(const Eigen::MatrixXcd& m) {
  return m.jacobiSvd().singularValues()(0);
}
}  // namespace

SymbolField multiplier_symbol(std::shared_ptr<const Lattice> lat, SymbolRegime regime,
                              double order, int rank,
                              std::function<Eigen::MatrixXcd(double)> sigma) {
  SymbolField p;
  p.lat = std::move(lat);
  p.regime = regime;
  p.order = order;
  p.rank = rank;
  p.fiber = [sigma = std::move(sigma)](int, double xi) { return sigma(xi); };
  return p;
}

SymbolSample sample_symbol(const SymbolField& p, const std::vector<int>& sites, double xi_max,
                           int n_points) {
  if (p.regime != SymbolRegime::Asymptotic) {
    throw std::invalid_argument("estimate sampling consumes asymptotic symbols");
  }
  if (sites.empty()) throw std::invalid_argument("sample needs at least one site");
  if (n_points < 5 || n_points % 2 == 0) {
    throw std::invalid_argument("frequency grid needs an odd point count of at least 5");
  }
  if (xi_max <= 0) throw std::invalid_argument("frequency cutoff must be positive");
  SymbolSample s;
  s.sites = sites;
  s.order = p.order;
  s.xi.resize(n_points);
  const double h = 2.0 * xi_max / (n_points - 1);
  for (int j = 0; j < n_points; ++j) s.xi(j) = -xi_max + h * j;
  s.value.reserve(sites.size());
  for (int site : sites) {
    std::vector<Eigen::MatrixXcd> row;
    row.reserve(static_cast<size_t>(n_points));
    for (int j = 0; j < n_points; ++j) {
      row.push_back(p.fiber(site, s.xi(j)));
      if (row.back().rows() != p.rank || row.back().cols() != p.rank) {
        throw std::invalid_argument("symbol fiber rank mismatch");
      }
    }
    s.value.push_back(std::move(row));
  }
  return s;
}

Eigen::MatrixXd symbol_estimate(const SymbolSample& s, int max_alpha, int max_beta) {
  const int nx = static_cast<int>(s.sites.size());
  const int nf = static_cast<int>(s.xi.size());
  if (max_alpha < 0 || max_beta < 0 || max_alpha > 3 || max_beta > 3) {
    throw std::invalid_argument("difference orders are limited to 0..3");
  }
  if (2 * max_beta >= nf || 2 * max_alpha >= nx + 1) {
    throw std::invalid_argument("grid too small for the requested orders");
  }
  const double h = s.xi(1) - s.xi(0);
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(max_alpha + 1, max_beta + 1);

  std::vector<std::vector<Eigen::MatrixXcd>> dx = s.value;
  for (int a = 0; a <= max_alpha; ++a) {
    const int x_lo = a, x_hi = nx - 1 - a;
    std::vector<std::vector<Eigen::MatrixXcd>> dxf = dx;
    for (int b = 0; b <= max_beta; ++b) {
      const int f_lo = b, f_hi = nf - 1 - b;
      double sup = 0.0;
      for (int x = x_lo; x <= x_hi; ++x) {
        for (int j = f_lo; j <= f_hi; ++j) {
          const double weight = std::pow(1.0 + std::abs(s.xi(j)), b - s.order);
          sup = std::max(sup, op_norm(dxf[static_cast<size_t>(x)][static_cast<size_t>(j)]) * weight);
        }
      }
      table(a, b) = sup;
      if (b == max_beta) break;
      auto next = dxf;
      for (int x = x_lo; x <= x_hi; ++x) {
        for (int j = f_lo + 1; j <= f_hi - 1; ++j) {
          next[static_cast<size_t>(x)][static_cast<size_t>(j)] =
              (dxf[static_cast<size_t>(x)][static_cast<size_t>(j) + 1] -
               dxf[static_cast<size_t>(x)][static_cast<size_t>(j) - 1]) /
              (2.0 * h);
        }
      }
      dxf = std::move(next);
    }
    if (a == max_alpha) break;
    auto next = dx;
    for (int x = x_lo + 1; x <= x_hi - 1; ++x) {
      for (int j = 0; j < nf; ++j) {
        next[static_cast<size_t>(x)][static_cast<size_t>(j)] =
            (dx[static_cast<size_t>(x) + 1][static_cast<size_t>(j)] -
             dx[static_cast<size_t>(x) - 1][static_cast<size_t>(j)]) /
            2.0;
      }
    }
    dx = std::move(next);
  }
  return table;
}

EllipticityCheck ellipticity_check(const SymbolSample& s, double radius) {
  const double xi_max = s.xi.cwiseAbs().maxCoeff();
  if (radius < 0 || 2.0 * radius >= xi_max) {
    throw std::invalid_argument("ellipticity radius must stay below half the grid cutoff");
  }
  EllipticityCheck out;
  out.elliptic = true;
  bool any = false;
  for (size_t x = 0; x < s.sites.size(); ++x) {
    for (int j = 0; j < s.xi.size(); ++j) {
      if (std::abs(s.xi(j)) <= radius) continue;
      any = true;
      const Eigen::VectorXd sv = s.value[x][static_cast<size_t>(j)].jacobiSvd().singularValues();
      const double smin = sv(sv.size() - 1);
      if (smin <= 1e-10) {
        out.elliptic = false;
        out.witness_site = s.sites[x];
        out.witness_xi = s.xi(j);
        return out;
      }
      const double weight = std::pow(1.0 + std::abs(s.xi(j)), s.order);
      out.constant = std::max(out.constant, weight / smin);
    }
  }
  if (!any) throw std::invalid_argument("no grid points beyond the ellipticity radius");
  return out;
}

SymbolSplitting symbol_splitting(const SymbolField& p, const std::vector<int>& sites,
                                 double tol) {
  if (sites.empty()) throw std::invalid_argument("splitting needs at least one site");
  SymbolSplitting out;
  out.xi.resize(2);
  out.xi << -1.0, 1.0;
  out.rank_pos.assign(2, 0);
  out.rank_neg.assign(2, 0);
  out.proj_pos.assign(2, {});
  out.proj_neg.assign(2, {});
  for (int pt = 0; pt < 2; ++pt) {
    for (size_t x = 0; x < sites.size(); ++x) {
      const Eigen::MatrixXcd fiber = p.fiber(sites[x], out.xi(pt));
      if ((fiber - fiber.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
        throw std::invalid_argument("spectral splitting needs Hermitian fibers");
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fiber);
      if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
      const int rank = static_cast<int>(fiber.rows());
      int n_pos = 0;
      Eigen::MatrixXcd pos = Eigen::MatrixXcd::Zero(rank, rank);
      Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(rank, rank);
      for (int b = 0; b < rank; ++b) {
        const double lambda = es.eigenvalues()(b);
        if (std::abs(lambda) < tol) {
          std::ostringstream msg;
          msg << "symbol eigenvalue within tolerance of zero at site " << sites[x] << ", xi "
              << out.xi(pt);
          throw std::runtime_error(msg.str());
        }
        const Eigen::MatrixXcd rank_one =
            es.eigenvectors().col(b) * es.eigenvectors().col(b).adjoint();
        if (lambda > 0) {
          ++n_pos;
          pos += rank_one;
        } else {
          neg += rank_one;
        }
      }
      if (x == 0) {
        out.rank_pos[static_cast<size_t>(pt)] = n_pos;
        out.rank_neg[static_cast<size_t>(pt)] = rank - n_pos;
      } else if (n_pos != out.rank_pos[static_cast<size_t>(pt)]) {
        std::ostringstream msg;
        msg << "splitting rank jumps between sites at xi " << out.xi(pt);
        throw std::runtime_error(msg.str());
      }
      out.proj_pos[static_cast<size_t>(pt)].push_back(std::move(pos));
      out.proj_neg[static_cast<size_t>(pt)].push_back(std::move(neg));
    }
  }
  return out;
}

namespace {
// Circulant coefficients of the symbol row at global site x on an m-point
// circle: c_d(x) = (1/m) sum_k p(x, k) e^{ikd}; the patch kernel at local
// (u, v) is c_{(u-v) mod m}(site at u).
std::vector<Eigen::MatrixXcd> row_coefficients(const SymbolField& p, int site, int m) {
  std::vector<Eigen::MatrixXcd> fibers;
  fibers.reserve(static_cast<size_t>(m));
  for (int f = 0; f < m; ++f) {
    const double k = 2.0 * std::numbers::pi * f / m;
    Eigen::MatrixXcd fiber = p.fiber(site, k);
    if (fiber.rows() != p.rank || fiber.cols() != p.rank) {
      throw std::invalid_argument("symbol fiber rank mismatch");
    }
    fibers.push_back(std::move(fiber));
  }
  std::vector<Eigen::MatrixXcd> coeffs(static_cast<size_t>(m));
  for (int d = 0; d < m; ++d) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(p.rank, p.rank);
    for (int f = 0; f < m; ++f) {
      const double k = 2.0 * std::numbers::pi * f / m;
      acc += fibers[static_cast<size_t>(f)] * std::exp(kI * (k * d));
    }
    coeffs[static_cast<size_t>(d)] = acc / static_cast<double>(m);
  }
  return coeffs;
}

// The support of a nonnegative circle function as a contiguous arc
// [start, start + len); whole circle reported as len = n.
std::pair<int, int> support_arc(const Lattice& circle, const std::vector<double>& w) {
  const int n = circle.n_sites();
  int count = 0;
  for (int s = 0; s < n; ++s) {
    if (w[static_cast<size_t>(s)] > 0.0) ++count;
  }
  if (count == 0) throw std::invalid_argument("empty patch weight");
  if (count == n) return {0, n};
  int outside = 0;
  while (w[static_cast<size_t>(outside)] > 0.0) ++outside;
  int start = outside;
  while (w[static_cast<size_t>(start)] <= 0.0) start = (start + 1) % n;
  for (int k = 0; k < count; ++k) {
    if (w[static_cast<size_t>((start + k) % n)] <= 0.0) {
      throw std::invalid_argument("patch weight support must be a contiguous arc");
    }
  }
  return {start, count};
}
}  // namespace

FinitePropOperator global_multiplier(std::shared_ptr<const Lattice> circle,
                                     const std::function<Eigen::MatrixXcd(double)>& sigma,
                                     int rank) {
  if (circle->kind() != LatticeKind::Circle) {
    throw std::invalid_argument("multipliers live on a circle");
  }
  SymbolField p = multiplier_symbol(circle, SymbolRegime::Toroidal, 0.0, rank, sigma);
  const int n = circle->n_sites();
  const std::vector<Eigen::MatrixXcd> coeffs = row_coefficients(p, 0, n);
  FinitePropOperator op(circle, rank);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const Eigen::MatrixXcd& block = coeffs[static_cast<size_t>(((x - y) % n + n) % n)];
      if (block.cwiseAbs().maxCoeff() > 1e-13) op.set_block(x, y, block);
    }
  }
  return op;
}

FinitePropOperator assemble_updo(const SymbolField& p, const ColoredCover& cover,
                                 const PartitionOfUnity& pou, int bandwidth) {
  if (p.regime != SymbolRegime::Toroidal) {
    throw std::invalid_argument("assembly consumes toroidal symbols");
  }
  if (p.lat != cover.lat || p.lat != pou.lat) {
    throw std::invalid_argument("symbol, cover and partition must share one lattice");
  }
  if (p.lat->kind() != LatticeKind::Circle) {
    throw std::invalid_argument("patch assembly lives on a circle");
  }
  if (bandwidth < 0) throw std::invalid_argument("bandwidth must be nonnegative");
  if (pou.n_members() != static_cast<int>(cover.members.size())) {
    throw std::invalid_argument("partition and cover member counts differ");
  }
  const Lattice& circle = *p.lat;
  const int n = circle.n_sites();

  FinitePropOperator op(p.lat, p.rank);
  for (int i = 0; i < pou.n_members(); ++i) {
    const std::vector<double>& phi = pou.weight[static_cast<size_t>(i)];
    const auto [supp_start, supp_len] = support_arc(circle, phi);
    // Window: support grown by 2B; cut: support grown by B.  A bandwidth-B
    // multiplier then acts on the cut identically on the whole window, and
    // the window's periodic wrap never reaches the support.
    const bool whole = supp_len + 4 * bandwidth >= n;
    const int win_start = whole ? 0 : ((supp_start - 2 * bandwidth) % n + n) % n;
    const int win_len = whole ? n : supp_len + 4 * bandwidth;
    const int cut_lo = whole ? 0 : bandwidth;  // window-local cut arc
    const int cut_hi = whole ? n - 1 : 3 * bandwidth + supp_len - 1;

    for (int u = 0; u < win_len; ++u) {
      const int gx = (win_start + u) % n;
      const double weight = phi[static_cast<size_t>(gx)];
      if (weight == 0.0) continue;
      const std::vector<Eigen::MatrixXcd> coeffs = row_coefficients(p, gx, win_len);
      for (int v = cut_lo; v <= cut_hi; ++v) {
        const int gy = (win_start + v) % n;
        const Eigen::MatrixXcd& block =
            coeffs[static_cast<size_t>(((u - v) % win_len + win_len) % win_len)];
        if (block.cwiseAbs().maxCoeff() > 0.0) op.add_to_block(gx, gy, weight * block);
      }
    }
  }
  op.prune_exact_zeros(1e-14);
  return op;
}

}  // namespace lattix
