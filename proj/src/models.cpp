#include "lattix/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lattix {

namespace {
constexpr cd kI{0.0, 1.0};

Eigen::Matrix2cd sigma(int axis) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (axis) {
    case 0:
      m << 0, 1, 1, 0;
      break;
    case 1:
      m << 0, -kI, kI, 0;
      break;
    case 2:
      m << 1, 0, 0, -1;
      break;
    default:
      throw std::invalid_argument("sigma axis out of range");
  }
  return m;
}
}  // namespace

std::string to_string(Stencil s) {
  return s == Stencil::OneSided ? "one-sided" : "wilson";
}

Stencil stencil_from_string(const std::string& s) {
  if (s == "one-sided") return Stencil::OneSided;
  if (s == "wilson") return Stencil::Wilson;
  throw std::invalid_argument("unknown stencil: " + s);
}

FinitePropOperator one_sided_dirac(std::shared_ptr<const Lattice> lat,
                                   const GaugeBundle& bundle) {
  if (lat->dim() != 2) throw std::invalid_argument("the Dirac stencil needs two dimensions");
  FinitePropOperator a(lat, 1);
  Eigen::MatrixXcd one(1, 1), weight(1, 1);
  one(0, 0) = -(1.0 + kI);
  const int n = lat->n_sites();
  for (int s = 0; s < n; ++s) {
    a.set_block(s, s, one);
    for (int axis = 0; axis < 2; ++axis) {
      const int t = lat->hop(s, axis, 1);
      if (t < 0) continue;
      weight(0, 0) = (axis == 0 ? cd(1.0) : kI) * bundle.hop_phase(s, axis);
      a.add_to_block(s, t, weight);
    }
  }
  return a;
}

GradedEnvelope graded_envelope(const FinitePropOperator& a) {
  const int r = a.rank();
  FinitePropOperator d(a.lattice_ptr(), 2 * r);
  for (const auto& [key, block] : a.blocks()) {
    Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(2 * r, 2 * r);
    lower.bottomLeftCorner(r, r) = block;
    d.add_to_block(key.first, key.second, lower);
    Eigen::MatrixXcd upper = Eigen::MatrixXcd::Zero(2 * r, 2 * r);
    upper.topRightCorner(r, r) = block.adjoint();
    d.add_to_block(key.second, key.first, upper);
  }
  GradedEnvelope out{std::move(d), Eigen::VectorXd(a.lattice().n_sites() * 2 * r)};
  for (int row = 0; row < out.grading.size(); ++row) {
    out.grading(row) = (row % (2 * r)) < r ? 1.0 : -1.0;
  }
  return out;
}

FinitePropOperator twist_by_bundle(const FinitePropOperator& op, const GaugeBundle& bundle) {
  if (op.lattice_ptr() != bundle.lattice_ptr()) {
    throw std::invalid_argument("twist needs the operator and bundle on one lattice");
  }
  if (op.propagation() > 1) {
    throw std::invalid_argument("twisting is defined for unit propagation only");
  }
  const Lattice& lat = op.lattice();
  FinitePropOperator out(op.lattice_ptr(), op.rank());
  for (const auto& [key, block] : op.blocks()) {
    const auto [to, from] = key;
    cd transport = 1.0;
    if (to != from) {
      bool found = false;
      for (int axis = 0; axis < lat.dim() && !found; ++axis) {
        if (lat.hop(from, axis, 1) == to) {
          transport = std::conj(bundle.hop_phase(from, axis));
          found = true;
        } else if (lat.hop(to, axis, 1) == from) {
          transport = bundle.hop_phase(to, axis);
          found = true;
        }
      }
      if (!found) throw std::invalid_argument("non unit hop block in twist");
    }
    out.set_block(to, from, transport * block);
  }
  return out;
}

FinitePropOperator wilson_hamiltonian(std::shared_ptr<const Lattice> lat,
                                      const GaugeBundle& bundle, const WilsonParams& params) {
  if (lat->dim() != 2) throw std::invalid_argument("the Wilson model needs two dimensions");
  FinitePropOperator h(lat, 2);
  const Eigen::Matrix2cd onsite = (params.mass + 2.0 * params.wilson_r) * sigma(2);
  const Eigen::Matrix2cd hop_x = 0.5 * (-kI * sigma(0) - params.wilson_r * sigma(2));
  const Eigen::Matrix2cd hop_y = 0.5 * (-kI * sigma(1) - params.wilson_r * sigma(2));
  const int n = lat->n_sites();
  for (int s = 0; s < n; ++s) {
    h.add_to_block(s, s, onsite);
    for (int axis = 0; axis < 2; ++axis) {
      const int t = lat->hop(s, axis, 1);
      if (t < 0) continue;
      const Eigen::Matrix2cd fwd = (axis == 0 ? hop_x : hop_y) * bundle.hop_phase(s, axis);
      h.add_to_block(s, t, fwd);
      h.add_to_block(t, s, fwd.adjoint());
    }
  }
  return h;
}

GradedOperator magnetic_dirac(std::shared_ptr<const Lattice> lat, const GaugeBundle& bundle,
                              Stencil stencil, const WilsonParams& params) {
  const int n = lat->n_sites();
  const std::string descriptor = model_descriptor(*lat, bundle, stencil, params);

  if (stencil == Stencil::OneSided) {
    const Eigen::MatrixXcd a = one_sided_dirac(lat, bundle).to_dense();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    return GradedOperator(lat, 1, a, id, id, descriptor);
  }

  const Eigen::MatrixXcd h = wilson_hamiltonian(lat, bundle, params).to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  int n_pos = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i)) < 1e-8) {
      throw std::runtime_error("Wilson spectrum touches zero; adjust mass or flux");
    }
    if (es.eigenvalues()(i) > 0) ++n_pos;
  }
  Eigen::MatrixXcd q_pos(2 * n, n_pos);
  int col = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 0) q_pos.col(col++) = es.eigenvectors().col(i);
  }
  Eigen::MatrixXcd spin_up = Eigen::MatrixXcd::Zero(2 * n, n);
  for (int s = 0; s < n; ++s) spin_up(2 * s, s) = 1.0;
  // Compress the spin-up projection to the positive-energy band. Each flux
  // quantum pumps one state across the gap, so the kernel grows with the flux
  // while the cokernel stays empty: index = flux quanta.
  const Eigen::MatrixXcd a = spin_up.adjoint() * q_pos;
  return GradedOperator(lat, 2, a, q_pos, spin_up, descriptor);
}

std::string model_descriptor(const Lattice& lat, const GaugeBundle& bundle, Stencil stencil,
                             const WilsonParams& params) {
  std::ostringstream out;
  out << to_string(stencil) << "|" << lat.describe() << "|flux=" << bundle.flux();
  if (stencil == Stencil::Wilson) {
    out << "|m=" << params.mass << "|r=" << params.wilson_r;
  }
  return out.str();
}

}  // namespace lattix
