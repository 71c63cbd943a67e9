#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "lattix/cocycles.hpp"
#include "lattix/hardy.hpp"
#include "lattix/lattice.hpp"
#include "test_support.hpp"

using namespace lattix;

namespace {

constexpr double kPi = std::numbers::pi;

// Even module of dimension 2n: F swaps the two graded halves through a random
// unitary, so F = F*, F^2 = 1 and the grading anticommutes.
FredholmModule seeded_even_module(int half_dim, std::mt19937_64& gen) {
  const int dim = 2 * half_dim;
  FredholmModule m;
  m.lat = make_lattice(LatticeKind::HalfLine, 1, {dim, 1});
  const Eigen::MatrixXcd u = lattix_test::random_unitary(half_dim, gen);
  m.f_op = Eigen::MatrixXcd::Zero(dim, dim);
  m.f_op.topRightCorner(half_dim, half_dim) = u.adjoint();
  m.f_op.bottomLeftCorner(half_dim, half_dim) = u;
  m.grading = Eigen::VectorXd::Ones(dim);
  m.grading.tail(half_dim) *= -1.0;
  m.rep = RepKind::Multiplication;
  return m;
}

FredholmModule seeded_odd_module(int dim, std::mt19937_64& gen) {
  FredholmModule m;
  m.lat = make_lattice(LatticeKind::HalfLine, 1, {dim, 1});
  const Eigen::MatrixXcd u = lattix_test::random_unitary(dim, gen);
  Eigen::VectorXd signs(dim);
  for (int i = 0; i < dim; ++i) signs(i) = (i % 2 == 0) ? 1.0 : -1.0;
  m.f_op = u * signs.asDiagonal() * u.adjoint();
  m.rep = RepKind::Multiplication;
  return m;
}

std::vector<Eigen::MatrixXcd> random_args(const FredholmModule& m, int count,
                                          std::mt19937_64& gen) {
  std::vector<Eigen::MatrixXcd> args;
  for (int i = 0; i < count; ++i) {
    args.push_back(m.represent(lattix_test::random_matrix(m.dim(), 1, gen)));
  }
  return args;
}

}  // namespace

TEST_SUITE("cocycles") {
  TEST_CASE("module validation enforces the axioms") {
    std::mt19937_64 gen(5);
    auto even = seeded_even_module(3, gen);
    CHECK_NOTHROW(even.validate());
    auto broken = even;
    broken.f_op(0, 0) = 2.0;
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
    auto skew = even;
    skew.grading(0) = 0.5;
    CHECK_THROWS_AS(skew.validate(), std::invalid_argument);
  }

  TEST_CASE("characters are cyclic and closed on seeded modules") {
    std::mt19937_64 gen(101);
    for (int trial = 0; trial < 50; ++trial) {
      auto even = seeded_even_module(3, gen);
      even.validate();
      for (int half = 0; half <= 2; ++half) {
        const auto ch = even_character(even, half);
        const auto args = random_args(even, ch.degree + 1, gen);
        CHECK(std::abs(cyclic_defect(ch, args)) <= 1e-10);
        const auto bch = hochschild_b(ch);
        const auto bargs = random_args(even, bch.degree + 1, gen);
        CHECK(std::abs(bch.eval(bargs)) <= 1e-10);
      }
      auto odd = seeded_odd_module(6, gen);
      odd.validate();
      for (int half = 1; half <= 2; ++half) {
        const auto ch = odd_character(odd, half);
        const auto args = random_args(odd, ch.degree + 1, gen);
        CHECK(std::abs(cyclic_defect(ch, args)) <= 1e-10);
        const auto bch = hochschild_b(ch);
        const auto bargs = random_args(odd, bch.degree + 1, gen);
        CHECK(std::abs(bch.eval(bargs)) <= 1e-10);
      }
    }
  }

  TEST_CASE("the coboundary operator squares to zero") {
    std::mt19937_64 gen(7);
    auto m = seeded_even_module(3, gen);
    const Eigen::MatrixXcd mat = lattix_test::random_matrix(6, 6, gen);
    CyclicCochain phi;
    phi.degree = 1;
    phi.eval = [mat](const std::vector<Eigen::MatrixXcd>& a) {
      return (mat * a[0] * a[1]).trace();
    };
    const auto bbphi = hochschild_b(hochschild_b(phi));
    const auto args = random_args(m, bbphi.degree + 1, gen);
    CHECK(std::abs(bbphi.eval(args)) <= 1e-12);
  }

  TEST_CASE("the current map annihilates coboundaries") {
    std::mt19937_64 gen(23);
    auto m = seeded_even_module(3, gen);
    for (int degree = 1; degree <= 3; ++degree) {
      const Eigen::MatrixXcd mat = lattix_test::random_matrix(6, 6, gen);
      CyclicCochain psi;
      psi.degree = degree;
      psi.eval = [mat](const std::vector<Eigen::MatrixXcd>& a) {
        Eigen::MatrixXcd prod = mat;
        for (const auto& x : a) prod = prod * x;
        return prod.trace();
      };
      const auto killed = alpha_current(hochschild_b(psi));
      for (int rep = 0; rep < 5; ++rep) {
        const auto args = random_args(m, killed.degree + 1, gen);
        CHECK(std::abs(killed.eval(args)) <= 1e-10);
      }
    }
  }

  TEST_CASE("degree zero pairing has the hand computed value") {
    FredholmModule m;
    m.lat = make_lattice(LatticeKind::HalfLine, 1, {2, 1});
    m.f_op = Eigen::MatrixXcd::Zero(2, 2);
    m.f_op(0, 1) = 1.0;
    m.f_op(1, 0) = 1.0;
    m.grading = Eigen::VectorXd(2);
    m.grading << 1.0, -1.0;
    m.rep = RepKind::Multiplication;
    m.validate();
    Eigen::VectorXcd p(2);
    p << 1.0, 0.0;
    CHECK(std::abs(even_pairing(m, p, 0) - cd(1.0, 0.0)) <= 1e-12);
  }

  TEST_CASE("halfline hardy pairings are linear in the winding") {
    auto halfline = make_lattice(LatticeKind::HalfLine, 1, {64, 1});
    const auto module = halfline_hardy_module(halfline, 32, 4);
    module.validate();
    const cd per_unit = odd_pairing(module, circle_exponential(32, 1), 1);
    for (int k : {-3, -2, 2, 3}) {
      const cd raw = odd_pairing(module, circle_exponential(32, k), 1);
      CHECK(std::abs(raw - static_cast<double>(k) * per_unit) <= 1e-9);
    }
    CHECK(std::abs(per_unit - cd(0.0, -4.0 * kPi)) <= 1e-9);
  }

  TEST_CASE("consecutive half degrees pair in a fixed ratio") {
    auto halfline = make_lattice(LatticeKind::HalfLine, 1, {64, 1});
    const auto module = halfline_hardy_module(halfline, 32, 4);
    for (int k : {1, 2, -2}) {
      const auto u = circle_exponential(32, k);
      const cd ratio = odd_pairing(module, u, 2) / odd_pairing(module, u, 1);
      CHECK(std::abs(ratio - cd(0.0, -24.0 * kPi)) <= 1e-6);
    }
  }

  TEST_CASE("circle hardy module has a vanishing odd character") {
    auto circle = make_lattice(LatticeKind::Circle, 1, {32, 1});
    const auto module = circle_hardy_module(circle);
    module.validate();
    for (int k : {-2, 1, 3}) {
      CHECK(std::abs(odd_pairing(module, circle_exponential(32, k), 1)) <= 1e-10);
    }
  }

  TEST_CASE("sample counts must resolve the requested winding") {
    auto halfline = make_lattice(LatticeKind::HalfLine, 1, {32, 1});
    CHECK_THROWS_AS(halfline_hardy_module(halfline, 8, 4), std::invalid_argument);
    auto odd_window = make_lattice(LatticeKind::HalfLine, 1, {31, 1});
    CHECK_THROWS_AS(halfline_hardy_module(odd_window, 32, 1), std::invalid_argument);
  }

  TEST_CASE("fourier coefficients invert equispaced sampling") {
    const int n = 16;
    Eigen::VectorXcd samples = Eigen::VectorXcd::Zero(n);
    for (int j = 0; j < n; ++j) {
      const double theta = 2.0 * kPi * j / n;
      samples(j) = cd(2.0, 0.0) + std::polar(1.0, 3.0 * theta) + std::polar(0.5, -2.0 * theta);
    }
    const auto hat = fourier_coefficients(samples);
    CHECK(std::abs(hat(n / 2) - cd(2.0, 0.0)) <= 1e-12);
    CHECK(std::abs(hat(n / 2 + 3) - cd(1.0, 0.0)) <= 1e-12);
    CHECK(std::abs(hat(n / 2 - 2) - cd(0.5, 0.0)) <= 1e-12);
    Eigen::VectorXcd odd_count(5);
    CHECK_THROWS_AS(fourier_coefficients(odd_count), std::invalid_argument);
  }
}
