#include "lattix/gauge_bundle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lattix {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

GaugeBundle::GaugeBundle(std::shared_ptr<const Lattice> lat, double flux_per_plaquette)
    : lat_(std::move(lat)), flux_(flux_per_plaquette) {
  if (lat_->dim() != 2 && flux_ != 0.0) {
    throw std::invalid_argument("flux bundles need a two dimensional lattice");
  }
  const int n = lat_->n_sites();
  phase_.assign(static_cast<size_t>(lat_->dim()), std::vector<std::complex<double>>(n, 1.0));
  if (flux_ == 0.0) return;

  const int nx = lat_->extent()[0];
  for (int s = 0; s < n; ++s) {
    const auto c = lat_->coords(s);
    phase_[1][s] = std::exp(kI * (flux_ * static_cast<double>(c[0])));
    if (lat_->kind() == LatticeKind::Torus && c[0] == nx - 1) {
      phase_[0][s] = std::exp(-kI * (flux_ * static_cast<double>(nx) * static_cast<double>(c[1])));
    }
  }
  if (lat_->kind() == LatticeKind::Torus && !is_quantized()) {
    throw std::invalid_argument("torus flux must be an integer multiple of 2*pi/N^2");
  }
}

GaugeBundle GaugeBundle::trivial(std::shared_ptr<const Lattice> lat) {
  return GaugeBundle(std::move(lat), 0.0);
}

GaugeBundle GaugeBundle::uniform_flux(std::shared_ptr<const Lattice> lat, double flux) {
  return GaugeBundle(std::move(lat), flux);
}

std::complex<double> GaugeBundle::hop_phase(int site, int axis) const {
  if (axis < 0 || axis >= lat_->dim()) throw std::invalid_argument("axis out of range");
  if (site < 0 || site >= lat_->n_sites()) throw std::invalid_argument("site out of range");
  return phase_[static_cast<size_t>(axis)][static_cast<size_t>(site)];
}

std::complex<double> GaugeBundle::plaquette_holonomy(int site) const {
  if (lat_->dim() != 2) throw std::invalid_argument("plaquettes need a two dimensional lattice");
  const int right = lat_->hop(site, 0, 1);
  const int up = lat_->hop(site, 1, 1);
  if (right < 0 || up < 0) throw std::invalid_argument("plaquette leaves the lattice window");
  const int diag = lat_->hop(right, 1, 1);
  if (diag < 0) throw std::invalid_argument("plaquette leaves the lattice window");
  return hop_phase(site, 0) * hop_phase(right, 1) * std::conj(hop_phase(up, 0)) *
         std::conj(hop_phase(site, 1));
}

GaugeBundle GaugeBundle::tensor(const GaugeBundle& other) const {
  if (lat_ != other.lat_) throw std::invalid_argument("tensor factors live on one lattice");
  GaugeBundle out(lat_, 0.0);
  out.flux_ = flux_ + other.flux_;
  for (size_t a = 0; a < phase_.size(); ++a) {
    for (size_t s = 0; s < phase_[a].size(); ++s) {
      out.phase_[a][s] = phase_[a][s] * other.phase_[a][s];
    }
  }
  return out;
}

int GaugeBundle::total_flux_quanta() const {
  const int n = lat_->n_sites();
  const double quanta = flux_ * static_cast<double>(n) / (2.0 * std::numbers::pi);
  return static_cast<int>(std::llround(quanta));
}

bool GaugeBundle::is_quantized(double tol) const {
  const int n = lat_->n_sites();
  const double quanta = flux_ * static_cast<double>(n) / (2.0 * std::numbers::pi);
  return std::abs(quanta - std::round(quanta)) <= tol;
}

}  // namespace lattix
