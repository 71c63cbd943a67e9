#pragma once

#include <memory>
#include <string>

#include "lattix/block_operator.hpp"
#include "lattix/gauge_bundle.hpp"
#include "lattix/graded.hpp"
#include "lattix/lattice.hpp"

namespace lattix {

enum class Stencil { OneSided, Wilson };

std::string to_string(Stencil s);
Stencil stencil_from_string(const std::string& s);

struct WilsonParams {
  double mass = -1.0;
  double wilson_r = 1.0;
};

// Forward-difference Dirac part a = d_x^U + i d_y^U on scalar site functions;
// off-window hops act as Dirichlet truncation.
FinitePropOperator one_sided_dirac(std::shared_ptr<const Lattice> lat, const GaugeBundle& bundle);

// Supersymmetric envelope d = [[0, a*], [a, 0]] on the doubled site rank,
// with the block grading eps = diag(+1, -1); eps d + d eps = 0 holds by
// construction and d is self-adjoint.
struct GradedEnvelope {
  FinitePropOperator d;
  Eigen::VectorXd grading;  // one sign per row of d
};

GradedEnvelope graded_envelope(const FinitePropOperator& a);

// Multiplies every unit-hop block by the bundle's transport, with the same
// orientation the covariant stencils use: the block with row x and column
// x + e_axis picks up U_axis(x), its transpose the conjugate.  Diagonal blocks
// are untouched.  Twisting is only defined for propagation <= 1.
FinitePropOperator twist_by_bundle(const FinitePropOperator& op, const GaugeBundle& bundle);

// Two-band Wilson Hamiltonian: on-site (m + 2r) sigma_z plus covariant hops
// with matrix (-i sigma_mu - r sigma_z)/2 per forward direction and their
// adjoints.  Zero-flux symbol: sigma_x sin kx + sigma_y sin ky
// + sigma_z (m + 2r - r cos kx - r cos ky).
FinitePropOperator wilson_hamiltonian(std::shared_ptr<const Lattice> lat,
                                      const GaugeBundle& bundle, const WilsonParams& params);

// Graded model for index experiments.
//  - OneSided: H_plus = H_minus = site space, a = one_sided_dirac.  The
//    stencil symbol has a second zero at (pi/2, -pi/2) with opposite winding,
//    so its flux index vanishes; kept as the documented counterexample.
//  - Wilson: H_plus = the positive spectral subspace of the Wilson
//    Hamiltonian, H_minus = first spinor component of the site space, a the
//    compression of the embedding.  Its index counts the flux quanta.
GradedOperator magnetic_dirac(std::shared_ptr<const Lattice> lat, const GaugeBundle& bundle,
                              Stencil stencil, const WilsonParams& params = {});

std::string model_descriptor(const Lattice& lat, const GaugeBundle& bundle, Stencil stencil,
                             const WilsonParams& params);

}  // namespace lattix
