#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "lattix/lattice.hpp"

namespace lattix {

// U(1) connection on directed unit hops.  hop_phase(s, axis) is the parallel
// transport picked up moving from site s to s + e_axis; the reverse hop uses
// the conjugate.  Off-window hops on bounded lattices carry phase 1 and are
// never consumed.
class GaugeBundle {
 public:
  GaugeBundle(std::shared_ptr<const Lattice> lat, double flux_per_plaquette);

  static GaugeBundle trivial(std::shared_ptr<const Lattice> lat);
  // Landau gauge: U_y(x, y) = exp(i phi x); U_x is 1 except, on the torus,
  // the wrap column U_x(N-1, y) = exp(-i phi N y) so every plaquette
  // (including the wrap ones) encloses exactly phi.
  static GaugeBundle uniform_flux(std::shared_ptr<const Lattice> lat, double flux);

  const Lattice& lattice() const { return *lat_; }
  std::shared_ptr<const Lattice> lattice_ptr() const { return lat_; }
  double flux() const { return flux_; }

  std::complex<double> hop_phase(int site, int axis) const;
  // Product of hop phases along the counterclockwise plaquette with lower-left
  // corner at `site`; its argument is the enclosed flux.
  std::complex<double> plaquette_holonomy(int site) const;

  // Line-bundle tensor product: hop phases multiply, fluxes add.
  GaugeBundle tensor(const GaugeBundle& other) const;

  // Torus bundles need total flux in 2*pi*Z; returns the integer flux count.
  int total_flux_quanta() const;
  bool is_quantized(double tol = 1e-9) const;

 private:
  std::shared_ptr<const Lattice> lat_;
  double flux_ = 0.0;
  // phase_[axis][site]
  std::vector<std::vector<std::complex<double>>> phase_;
};

}  // namespace lattix
