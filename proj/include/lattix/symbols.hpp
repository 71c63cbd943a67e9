#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "lattix/block_operator.hpp"
#include "lattix/cover.hpp"
#include "lattix/lattice.hpp"

namespace lattix {

// Toroidal symbols take xi on the Brillouin circle and feed quantization;
// asymptotic ones take xi on a truncated real line and feed the estimate and
// ellipticity checkers.  Each operation states which regime it consumes.
enum class SymbolRegime { Toroidal, Asymptotic };

// Matrix symbol p(x, xi) as a callable fiber with its declared class data.
struct SymbolField {
  std::shared_ptr<const Lattice> lat;
  SymbolRegime regime = SymbolRegime::Asymptotic;
  double order = 0.0;  // weight exponent k of the symbol class
  int rank = 1;
  std::function<Eigen::MatrixXcd(int site, double xi)> fiber;
};

// x-independent field from a plain multiplier sigma(xi).
SymbolField multiplier_symbol(std::shared_ptr<const Lattice> lat, SymbolRegime regime,
                              double order, int rank,
                              std::function<Eigen::MatrixXcd(double)> sigma);

// Fibers evaluated on sites x uniform frequency grid [-xi_max, xi_max].
struct SymbolSample {
  std::vector<int> sites;
  Eigen::VectorXd xi;
  std::vector<std::vector<Eigen::MatrixXcd>> value;  // [site][frequency]
  double order = 0.0;

  int rank() const {
    return value.empty() || value.front().empty()
               ? 0
               : static_cast<int>(value.front().front().rows());
  }
};

SymbolSample sample_symbol(const SymbolField& p, const std::vector<int>& sites, double xi_max,
                           int n_points);

// Seminorm table C(a, b) = sup |D_x^a D_xi^b p| (1+|xi|)^(b-k) over the grid
// interior, for a <= max_alpha and b <= max_beta (each at most 3).  Centered
// one-cell differences; every application shrinks the sup domain by one cell
// on each side.  x-differences step through consecutive sample sites.
Eigen::MatrixXd symbol_estimate(const SymbolSample& s, int max_alpha, int max_beta);

struct EllipticityCheck {
  bool elliptic = false;
  double constant = 0.0;  // sup ||p^{-1}|| (1+|xi|)^k over |xi| > radius
  int witness_site = -1;  // degenerate grid point when not elliptic
  double witness_xi = 0.0;
};

// Invertibility of every fiber beyond the radius (smallest singular value
// above 1e-10), with the inverse-order constant; never throws on failure,
// returns the witness instead.  Needs radius < xi_max / 2.
EllipticityCheck ellipticity_check(const SymbolSample& s, double radius);

// Fiberwise spectral splitting on the 1d sphere xi in {-1, +1}.
struct SymbolSplitting {
  Eigen::VectorXd xi;                    // sphere points
  std::vector<int> rank_pos, rank_neg;   // per sphere point; constant in x (enforced)
  std::vector<std::vector<Eigen::MatrixXcd>> proj_pos, proj_neg;  // [sphere point][site]
};

// Errors on any fiber eigenvalue within tol of zero (ellipticity fails at the
// sphere) and on rank jumps along a connected component.
SymbolSplitting symbol_splitting(const SymbolField& p, const std::vector<int>& sites,
                                 double tol = 1e-8);

// The exact global Fourier multiplier of sigma on the circle, for comparison.
FinitePropOperator global_multiplier(std::shared_ptr<const Lattice> circle,
                                     const std::function<Eigen::MatrixXcd(double)>& sigma,
                                     int rank);

// Patchwise quantization glued over a colored cover: P = sum_i rho(phi_i)
// Op_i(p) chi_i, where Op_i is the windowed-DFT quantization on the patch
// supp(phi_i) grown by 2*bandwidth, and chi_i cuts at supp(phi_i) grown by
// bandwidth.  For multipliers of Fourier bandwidth <= `bandwidth` the margins
// make every patch reproduce the global operator on supp(phi_i), so the glued
// sum is exact; wider symbols degrade gracefully and the error is measured
// against global_multiplier.  Propagation stays below the patch diameter.
FinitePropOperator assemble_updo(const SymbolField& p, const ColoredCover& cover,
                                 const PartitionOfUnity& pou, int bandwidth);

}  // namespace lattix
