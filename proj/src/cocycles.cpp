#include "lattix/cocycles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lattix {

namespace {
constexpr cd kI{0.0, 1.0};

cd two_pi_i_pow(int m) {
  cd acc = 1.0;
  for (int k = 0; k < m; ++k) acc *= 2.0 * std::numbers::pi * kI;
  return acc;
}

double double_factorial(int n) {
  double acc = 1.0;
  for (int k = n; k >= 2; k -= 2) acc *= k;
  return acc;
}

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (size_t i = 0; i < perm.size(); ++i) {
    for (size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}
}  // namespace

Eigen::VectorXcd fourier_coefficients(const Eigen::VectorXcd& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("need an even number of circle samples");
  Eigen::VectorXcd hat(n + 1);
  for (int d = -n / 2; d <= n / 2; ++d) {
    cd acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / n;
      acc += samples(j) * std::exp(-kI * (static_cast<double>(d) * theta));
    }
    hat(d + n / 2) = acc / static_cast<double>(n);
  }
  return hat;
}

Eigen::MatrixXcd FredholmModule::represent(const Eigen::VectorXcd& samples) const {
  if (rep == RepKind::Multiplication) {
    if (samples.size() != dim()) {
      throw std::invalid_argument("multiplication samples must match the module dimension");
    }
    return Eigen::MatrixXcd(samples.asDiagonal());
  }
  if (samples.size() != n_symbol_samples) {
    throw std::invalid_argument("Toeplitz samples must match the symbol circle");
  }
  const Eigen::VectorXcd hat = fourier_coefficients(samples);
  const int half = n_symbol_samples / 2;
  const int l = dim();
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(l, l);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) {
      const int d = i - j;
      if (std::abs(d) <= half) t(i, j) = hat(d + half);
    }
  }
  return t;
}

void FredholmModule::validate(double tol) const {
  const int n = dim();
  if ((f_op - f_op.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("module symmetry must be self-adjoint");
  }
  if ((f_op * f_op - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("module symmetry must be involutive");
  }
  if (is_even()) {
    if (grading.size() != n) throw std::invalid_argument("grading has the wrong size");
    for (int i = 0; i < n; ++i) {
      if (std::abs(std::abs(grading(i)) - 1.0) > tol) {
        throw std::invalid_argument("grading entries must be +1 or -1");
      }
    }
    const Eigen::MatrixXcd anti =
        grading.asDiagonal() * f_op + f_op * grading.asDiagonal();
    if (anti.cwiseAbs().maxCoeff() > tol) {
      throw std::invalid_argument("grading must anticommute with the symmetry");
    }
  }
}

FredholmModule halfline_hardy_module(std::shared_ptr<const Lattice> halfline,
                                     int n_symbol_samples, int max_winding) {
  if (halfline->kind() != LatticeKind::HalfLine) {
    throw std::invalid_argument("position-sign module needs a half-line window");
  }
  const int l = halfline->n_sites();
  if (l % 2 != 0) throw std::invalid_argument("window length must be even");
  if (n_symbol_samples < 4 || n_symbol_samples % 2 != 0) {
    throw std::invalid_argument("symbol circle needs an even sample count of at least 4");
  }
  if (max_winding < 1 || n_symbol_samples < 4 * max_winding) {
    throw std::invalid_argument("symbol circle cannot resolve the requested winding");
  }
  FredholmModule m;
  m.lat = halfline;
  m.f_op = Eigen::MatrixXcd::Zero(l, l);
  for (int x = 0; x < l; ++x) m.f_op(x, x) = x < l / 2 ? 1.0 : -1.0;
  m.rep = RepKind::ToeplitzBanded;
  m.n_symbol_samples = n_symbol_samples;
  m.validate();
  return m;
}

FredholmModule circle_hardy_module(std::shared_ptr<const Lattice> circle) {
  if (circle->kind() != LatticeKind::Circle) {
    throw std::invalid_argument("Hardy module needs a circle");
  }
  const int n = circle->n_sites();
  if (n % 2 != 0) throw std::invalid_argument("circle size must be even");
  FredholmModule m;
  m.lat = circle;
  m.f_op = Eigen::MatrixXcd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      cd acc = 0.0;
      for (int mode = 0; mode < n; ++mode) {
        const double sign = mode <= n / 2 ? 1.0 : -1.0;
        const double k = 2.0 * std::numbers::pi * mode / n;
        acc += sign * std::exp(kI * (k * static_cast<double>(x - y)));
      }
      m.f_op(x, y) = acc / static_cast<double>(n);
    }
  }
  m.rep = RepKind::Multiplication;
  m.validate();
  return m;
}

namespace {
Eigen::MatrixXcd character_product(const Eigen::MatrixXcd& f,
                                   const std::vector<Eigen::MatrixXcd>& args) {
  Eigen::MatrixXcd acc = f;
  for (const auto& a : args) acc = acc * (f * a - a * f);
  return acc;
}
}  // namespace

CyclicCochain even_character(const FredholmModule& m, int half_degree) {
  if (!m.is_even()) throw std::invalid_argument("even character needs a graded module");
  if (half_degree < 0) throw std::invalid_argument("character degree must be nonnegative");
  const cd scale = 0.5 * two_pi_i_pow(half_degree) * std::tgamma(half_degree + 1.0);
  const Eigen::MatrixXcd f = m.f_op;
  const Eigen::VectorXd eps = m.grading;
  CyclicCochain phi;
  phi.degree = 2 * half_degree;
  phi.eval = [scale, f, eps, degree = phi.degree](const std::vector<Eigen::MatrixXcd>& args) {
    if (static_cast<int>(args.size()) != degree + 1) {
      throw std::invalid_argument("even character takes degree+1 arguments");
    }
    return scale * (eps.asDiagonal() * character_product(f, args)).trace();
  };
  return phi;
}

CyclicCochain odd_character(const FredholmModule& m, int half_degree) {
  if (m.is_even()) throw std::invalid_argument("odd character needs an ungraded module");
  if (half_degree < 1) throw std::invalid_argument("odd character needs half degree >= 1");
  const cd scale = 0.5 * two_pi_i_pow(half_degree) * double_factorial(2 * half_degree - 1);
  const Eigen::MatrixXcd f = m.f_op;
  CyclicCochain phi;
  phi.degree = 2 * half_degree - 1;
  phi.eval = [scale, f, degree = phi.degree](const std::vector<Eigen::MatrixXcd>& args) {
    if (static_cast<int>(args.size()) != degree + 1) {
      throw std::invalid_argument("odd character takes degree+1 arguments");
    }
    return scale * character_product(f, args).trace();
  };
  return phi;
}

CyclicCochain hochschild_b(const CyclicCochain& phi) {
  CyclicCochain out;
  out.degree = phi.degree + 1;
  out.eval = [phi](const std::vector<Eigen::MatrixXcd>& args) {
    const int p = static_cast<int>(args.size()) - 2;
    cd acc = 0.0;
    for (int j = 0; j <= p; ++j) {
      std::vector<Eigen::MatrixXcd> merged;
      merged.reserve(args.size() - 1);
      for (int i = 0; i < j; ++i) merged.push_back(args[static_cast<size_t>(i)]);
      merged.push_back(args[static_cast<size_t>(j)] * args[static_cast<size_t>(j) + 1]);
      for (size_t i = static_cast<size_t>(j) + 2; i < args.size(); ++i) merged.push_back(args[i]);
      acc += (j % 2 == 0 ? 1.0 : -1.0) * phi.eval(merged);
    }
    std::vector<Eigen::MatrixXcd> wrap;
    wrap.reserve(args.size() - 1);
    wrap.push_back(args.back() * args.front());
    for (size_t i = 1; i + 1 < args.size(); ++i) wrap.push_back(args[i]);
    acc += ((p + 1) % 2 == 0 ? 1.0 : -1.0) * phi.eval(wrap);
    return acc;
  };
  return out;
}

CyclicCochain alpha_current(const CyclicCochain& phi) {
  if (phi.degree > 4) throw std::invalid_argument("antisymmetrisation supported up to degree 4");
  CyclicCochain out;
  out.degree = phi.degree;
  out.eval = [phi](const std::vector<Eigen::MatrixXcd>& args) {
    const int p = static_cast<int>(args.size()) - 1;
    std::vector<int> perm(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) perm[static_cast<size_t>(i)] = i + 1;
    cd acc = 0.0;
    double count = 0.0;
    do {
      std::vector<Eigen::MatrixXcd> permuted;
      permuted.reserve(args.size());
      permuted.push_back(args[0]);
      for (int idx : perm) permuted.push_back(args[static_cast<size_t>(idx)]);
      acc += static_cast<double>(permutation_sign(perm)) * phi.eval(permuted);
      count += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc / count;
  };
  return out;
}

cd cyclic_defect(const CyclicCochain& phi, const std::vector<Eigen::MatrixXcd>& args) {
  const int p = static_cast<int>(args.size()) - 1;
  std::vector<Eigen::MatrixXcd> rotated;
  rotated.reserve(args.size());
  rotated.push_back(args.back());
  for (size_t i = 0; i + 1 < args.size(); ++i) rotated.push_back(args[i]);
  const double sign = p % 2 == 0 ? 1.0 : -1.0;
  return phi.eval(args) - sign * phi.eval(rotated);
}

cd even_pairing(const FredholmModule& m, const Eigen::VectorXcd& projection_samples,
                int half_degree) {
  const CyclicCochain phi = even_character(m, half_degree);
  const Eigen::MatrixXcd p = m.represent(projection_samples);
  return phi.eval(std::vector<Eigen::MatrixXcd>(static_cast<size_t>(phi.degree) + 1, p));
}

cd odd_pairing(const FredholmModule& m, const Eigen::VectorXcd& u_samples, int half_degree) {
  for (int i = 0; i < u_samples.size(); ++i) {
    if (std::abs(u_samples(i)) < 1e-9) {
      throw std::invalid_argument("odd pairing needs an invertible symbol");
    }
  }
  Eigen::VectorXcd inv(u_samples.size());
  for (int i = 0; i < u_samples.size(); ++i) inv(i) = 1.0 / u_samples(i);
  const CyclicCochain phi = odd_character(m, half_degree);
  const Eigen::MatrixXcd ru = m.represent(u_samples);
  const Eigen::MatrixXcd rinv = m.represent(inv);
  std::vector<Eigen::MatrixXcd> args;
  for (int i = 0; i <= phi.degree; ++i) args.push_back(i % 2 == 0 ? rinv : ru);
  return phi.eval(args);
}

}  // namespace lattix
