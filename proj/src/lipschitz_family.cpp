#include "lattix/lipschitz_family.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace lattix {

void LipschitzTestFamily::validate(double tol) const {
  const int n = lat->n_sites();
  for (const auto& f : functions) {
    if (f.size() != n) throw std::invalid_argument("family function has wrong size");
    if (f.cwiseAbs().maxCoeff() > sup + tol) {
      throw std::invalid_argument("family function exceeds the sup bound");
    }
    std::vector<int> support;
    for (int s = 0; s < n; ++s) {
      if (f(s) != 0.0) support.push_back(s);
      for (int nb : lat->neighbors(s)) {
        if (std::abs(f(s) - f(nb)) > lip + tol) {
          throw std::invalid_argument("family function violates the Lipschitz bound");
        }
      }
    }
    for (size_t i = 0; i < support.size(); ++i) {
      for (size_t j = i + 1; j < support.size(); ++j) {
        if (lat->dist(support[i], support[j]) > diam + tol) {
          throw std::invalid_argument("family function support is too wide");
        }
      }
    }
  }
}

LipschitzTestFamily lipschitz_test_family(std::shared_ptr<const Lattice> lat, double lip,
                                          double diam, int n_random, std::uint64_t seed) {
  if (lip <= 0 || diam <= 0) throw std::invalid_argument("family parameters must be positive");
  LipschitzTestFamily fam;
  fam.lat = lat;
  fam.lip = lip;
  fam.diam = diam;
  fam.sup = 1.0;
  const int n = lat->n_sites();
  const double rho = diam / 2.0;

  auto cone = [&](int anchor, double height, double slope, double radius) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    for (int s = 0; s < n; ++s) {
      const double d = static_cast<double>(lat->dist(s, anchor));
      if (d > radius) continue;
      f(s) = std::min(height, slope * (radius - d));
    }
    return f;
  };

  for (int a = 0; a < n; ++a) {
    fam.functions.push_back(cone(a, 1.0, std::min(lip, 1.0 / std::max(rho, 1.0)), rho));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < n_random; ++k) {
    const int anchor = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const double height = 0.1 + 0.9 * unit(rng);
    const double radius = std::max(1.0, rho * unit(rng));
    const double slope = std::min(lip, height / std::max(1.0, radius * 0.5));
    fam.functions.push_back(cone(anchor, height, slope, std::min(radius, rho)));
  }
  fam.validate();
  return fam;
}

double summability_profile(const Eigen::MatrixXcd& t_op, const LipschitzTestFamily& family,
                           double p, int rank) {
  const int n = family.lat->n_sites();
  if (t_op.rows() != n * rank || t_op.cols() != n * rank) {
    throw std::invalid_argument("operator size does not match the family lattice");
  }
  double best = 0.0;
  Eigen::VectorXcd diag(n * rank);
  for (const auto& f : family.functions) {
    for (int s = 0; s < n; ++s) {
      for (int r = 0; r < rank; ++r) diag(s * rank + r) = f(s);
    }
    const Eigen::MatrixXcd comm =
        t_op * diag.asDiagonal() - (diag.asDiagonal() * t_op).eval();
    best = std::max(best, schatten_norm(comm, p));
  }
  return best;
}

double summability_profile(const FinitePropOperator& t_op, const LipschitzTestFamily& family,
                           double p) {
  return summability_profile(t_op.to_dense(), family, p, t_op.rank());
}

}  // namespace lattix
