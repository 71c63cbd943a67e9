#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "lattix/block_operator.hpp"
#include "lattix/cover.hpp"
#include "lattix/lattice.hpp"
#include "lattix/symbols.hpp"

using namespace lattix;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd scalar_fiber(double v) {
  Eigen::MatrixXcd m(1, 1);
  m(0, 0) = v;
  return m;
}

SymbolField laplace_symbol(std::shared_ptr<const Lattice> lat) {
  return multiplier_symbol(lat, SymbolRegime::Asymptotic, 2.0, 1,
                           [](double xi) { return scalar_fiber(1.0 + xi * xi); });
}

std::vector<int> all_sites(const Lattice& lat) {
  std::vector<int> sites(static_cast<std::size_t>(lat.n_sites()));
  for (int i = 0; i < lat.n_sites(); ++i) sites[static_cast<std::size_t>(i)] = i;
  return sites;
}

FinitePropOperator assembled_multiplier(std::shared_ptr<const Lattice> circle,
                                        const SymbolField& p, int spacing, int bandwidth) {
  const int taper = 4;
  const auto cover = build_colored_cover(circle, spacing, spacing / 2.0 + taper);
  const auto pou = partition_of_unity(cover, taper);
  return assemble_updo(p, cover, pou, bandwidth);
}

}  // namespace

TEST_SUITE("symbols") {
  TEST_CASE("seminorms of the laplace symbol match the derivative table") {
    auto line = make_lattice(LatticeKind::HalfLine, 1, {9, 1});
    const auto p = laplace_symbol(line);
    const auto sample = sample_symbol(p, all_sites(*line), 64.0, 513);
    const auto table = symbol_estimate(sample, 1, 2);
    // sup (1+xi^2)/(1+|xi|)^2 = 1 at xi = 0 and sup 2|xi|/(1+|xi|)^1 -> 2.
    CHECK(table(0, 0) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(table(0, 1) == doctest::Approx(2.0).epsilon(0.02));
    // x-independent symbols have exactly vanishing x-derivative rows.
    CHECK(table(1, 0) == 0.0);
    CHECK(table(1, 1) == 0.0);
  }

  TEST_CASE("seminorms are stable under doubling the frequency window") {
    auto line = make_lattice(LatticeKind::HalfLine, 1, {9, 1});
    const auto p = laplace_symbol(line);
    const auto narrow = symbol_estimate(sample_symbol(p, all_sites(*line), 64.0, 513), 0, 2);
    const auto wide = symbol_estimate(sample_symbol(p, all_sites(*line), 128.0, 1025), 0, 2);
    for (int b = 0; b <= 2; ++b) {
      CHECK(std::abs(wide(0, b) - narrow(0, b)) <= 0.05 * std::max(1.0, narrow(0, b)));
    }
  }

  TEST_CASE("ellipticity check accepts powers and reports degenerate fibers") {
    auto line = make_lattice(LatticeKind::HalfLine, 1, {5, 1});
    const auto sites = all_sites(*line);

    auto first_order = multiplier_symbol(line, SymbolRegime::Asymptotic, 1.0, 1,
                                         [](double xi) { return scalar_fiber(xi); });
    // xi vanishes at the origin, inside the excluded ball, so the check passes
    // with constant sup (1+|xi|)/|xi| <= 2 beyond radius 1.
    const auto ramp = ellipticity_check(sample_symbol(first_order, sites, 32.0, 1025), 1.0);
    CHECK(ramp.elliptic);
    CHECK(ramp.constant <= 2.0 + 1e-6);

    const auto square = ellipticity_check(sample_symbol(laplace_symbol(line), sites, 32.0, 1025), 1.0);
    CHECK(square.elliptic);

    // Period chosen so the zeros land exactly on grid points; the grid spacing
    // 1/16 divides 4.
    auto sine = multiplier_symbol(line, SymbolRegime::Asymptotic, 0.0, 1,
                                  [](double xi) { return scalar_fiber(std::sin(kPi * xi / 4.0)); });
    const auto waves = ellipticity_check(sample_symbol(sine, sites, 32.0, 1025), 1.0);
    CHECK_FALSE(waves.elliptic);
    const double nearest = std::abs(waves.witness_xi) / 4.0;
    CHECK(std::abs(nearest - std::round(nearest)) <= 1e-12);
    CHECK(std::abs(waves.witness_xi) > 1.0);
  }

  TEST_CASE("ellipticity radius must leave sampled headroom") {
    auto line = make_lattice(LatticeKind::HalfLine, 1, {3, 1});
    const auto sample = sample_symbol(laplace_symbol(line), all_sites(*line), 8.0, 65);
    CHECK_THROWS_AS(ellipticity_check(sample, 5.0), std::invalid_argument);
  }

  TEST_CASE("spectral splitting tracks signed eigenbundles") {
    auto line = make_lattice(LatticeKind::HalfLine, 1, {4, 1});
    const auto sites = all_sites(*line);
    SymbolField dirac;
    dirac.lat = line;
    dirac.regime = SymbolRegime::Asymptotic;
    dirac.order = 1.0;
    dirac.rank = 2;
    dirac.fiber = [](int, double xi) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
      m(0, 0) = xi;
      m(1, 1) = -xi;
      m(0, 1) = cd(0.0, -0.5);
      m(1, 0) = cd(0.0, 0.5);
      return m;
    };
    const auto split = symbol_splitting(dirac, sites);
    REQUIRE(split.xi.size() == 2);
    for (std::size_t sp = 0; sp < 2; ++sp) {
      CHECK(split.rank_pos[sp] == 1);
      CHECK(split.rank_neg[sp] == 1);
      for (std::size_t s = 0; s < sites.size(); ++s) {
        const auto& pp = split.proj_pos[sp][s];
        const auto& pn = split.proj_neg[sp][s];
        CHECK(operator_norm(pp * pp - pp) <= 1e-12);
        CHECK(operator_norm(pp + pn - Eigen::MatrixXcd::Identity(2, 2)) <= 1e-12);
      }
    }

    auto degenerate = multiplier_symbol(line, SymbolRegime::Asymptotic, 1.0, 1,
                                        [](double xi) { return scalar_fiber(xi - 1.0); });
    CHECK_THROWS_AS(symbol_splitting(degenerate, sites), std::runtime_error);
  }

  TEST_CASE("assembled multiplier matches the global operator for every patch count") {
    auto circle = make_lattice(LatticeKind::Circle, 1, {64, 1});
    auto sigma = [](double xi) { return scalar_fiber(1.0 + std::cos(xi) + 0.5 * std::sin(2.0 * xi)); };
    const auto p = multiplier_symbol(circle, SymbolRegime::Toroidal, 0.0, 1, sigma);
    const Eigen::MatrixXcd global = global_multiplier(circle, sigma, 1).to_dense();
    for (int spacing : {64, 32, 16}) {
      const auto glued = assembled_multiplier(circle, p, spacing, 2);
      const Eigen::MatrixXcd diff = glued.to_dense() - global;
      CAPTURE(spacing);
      CHECK(operator_norm(diff) <= 1e-8);
      CHECK(operator_norm(Eigen::MatrixXcd(glued.to_dense().adjoint()) - glued.to_dense()) <= 1e-10);
    }
  }

  TEST_CASE("assembly reproduces identity shift and position symbols exactly") {
    auto circle = make_lattice(LatticeKind::Circle, 1, {32, 1});

    const auto one = multiplier_symbol(circle, SymbolRegime::Toroidal, 0.0, 1,
                                       [](double) { return scalar_fiber(1.0); });
    const auto glued_one = assembled_multiplier(circle, one, 16, 0);
    CHECK(operator_norm(glued_one.to_dense() - Eigen::MatrixXcd::Identity(32, 32)) <= 1e-10);

    // exp(-i xi) quantizes to the forward shift u(x) -> u(x - 1).
    const auto hop = multiplier_symbol(circle, SymbolRegime::Toroidal, 0.0, 1, [](double xi) {
      Eigen::MatrixXcd m(1, 1);
      m(0, 0) = std::polar(1.0, -xi);
      return m;
    });
    const auto glued_hop = assembled_multiplier(circle, hop, 16, 1);
    const Eigen::MatrixXcd shift = shift_operator(circle, 0).to_dense();
    CHECK(operator_norm(glued_hop.to_dense() - shift) <= 1e-10);

    SymbolField position;
    position.lat = circle;
    position.regime = SymbolRegime::Toroidal;
    position.order = 0.0;
    position.rank = 1;
    position.fiber = [](int site, double) { return scalar_fiber(std::cos(2.0 * kPi * site / 32.0)); };
    const auto glued_pos = assembled_multiplier(circle, position, 16, 0);
    Eigen::VectorXcd f(32);
    for (int s = 0; s < 32; ++s) f(s) = std::cos(2.0 * kPi * s / 32.0);
    const Eigen::MatrixXcd diag = multiplication_operator(circle, f).to_dense();
    CHECK(operator_norm(glued_pos.to_dense() - diag) <= 1e-10);
  }

  TEST_CASE("sampling rejects the wrong regime and even grids") {
    auto line = make_lattice(LatticeKind::HalfLine, 1, {5, 1});
    const auto sites = all_sites(*line);
    const auto toroidal = multiplier_symbol(line, SymbolRegime::Toroidal, 0.0, 1,
                                            [](double) { return scalar_fiber(1.0); });
    CHECK_THROWS_AS(sample_symbol(toroidal, sites, 8.0, 65), std::invalid_argument);
    CHECK_THROWS_AS(sample_symbol(laplace_symbol(line), sites, 8.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(sample_symbol(laplace_symbol(line), sites, 8.0, 3), std::invalid_argument);
  }
}
