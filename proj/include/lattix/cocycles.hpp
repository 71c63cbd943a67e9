#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "lattix/block_operator.hpp"
#include "lattix/lattice.hpp"

namespace lattix {

enum class RepKind { Multiplication, ToeplitzBanded };

// Finitely summable Fredholm module: Hilbert space indexed by the lattice
// sites, symmetry F with F = F* and F^2 = 1, and a representation of the
// function algebra.  Even modules carry a grading that anticommutes with F.
struct FredholmModule {
  std::shared_ptr<const Lattice> lat;
  Eigen::MatrixXcd f_op;
  Eigen::VectorXd grading;  // empty for odd modules
  RepKind rep = RepKind::Multiplication;
  int n_symbol_samples = 0;  // ToeplitzBanded: circle sample count

  bool is_even() const { return grading.size() > 0; }
  int dim() const { return static_cast<int>(f_op.rows()); }

  // Multiplication: samples live on the module lattice, represented
  // diagonally.  ToeplitzBanded: samples live on the symbol circle,
  // represented by the Toeplitz compression T[i,j] = hat(u)(i - j).
  Eigen::MatrixXcd represent(const Eigen::VectorXcd& samples) const;
  void validate(double tol = 1e-9) const;
};

// Position-sign module on {0..L-1}: F = 2*[x < L/2] - 1, Toeplitz
// representation of circle functions given by n_symbol_samples samples.
// Refuses sample counts below 4*max_winding, where windings start aliasing.
FredholmModule halfline_hardy_module(std::shared_ptr<const Lattice> halfline,
                                     int n_symbol_samples, int max_winding = 1);

// Hardy-space module on the N-point circle: F = 2P - 1 with P the projection
// onto Fourier modes 0..N/2, multiplication representation.  On any finite
// circle its odd character vanishes identically: the band of kept modes has
// two edges whose winding contributions cancel.
FredholmModule circle_hardy_module(std::shared_ptr<const Lattice> circle);

// Multilinear functional on represented algebra elements.
struct CyclicCochain {
  int degree = 0;  // takes degree+1 arguments
  std::function<cd(const std::vector<Eigen::MatrixXcd>&)> eval;
};

// Character cochains.  Even, degree 2m:
//   ch(f0..f2m) = (1/2) (2 pi i)^m m! tr(eps F [F,f0]...[F,f2m]).
// Odd, degree 2m-1:
//   ch(f0..f2m-1) = (1/2) (2 pi i)^m (2m-1)!! tr(F [F,f0]...[F,f2m-1]).
CyclicCochain even_character(const FredholmModule& m, int half_degree);
CyclicCochain odd_character(const FredholmModule& m, int half_degree);

// Hochschild coboundary (b phi), degree + 1.
CyclicCochain hochschild_b(const CyclicCochain& phi);

// Antisymmetrisation over the last `degree` slots, normalised by 1/degree!.
// Supported for degree <= 4.
CyclicCochain alpha_current(const CyclicCochain& phi);

// phi(a0..ap) - (-1)^p phi(ap, a0..a(p-1)); zero for cyclic cochains.
cd cyclic_defect(const CyclicCochain& phi, const std::vector<Eigen::MatrixXcd>& args);

// Index pairings through the character.
cd even_pairing(const FredholmModule& m, const Eigen::VectorXcd& projection_samples,
                int half_degree);
// Alternating arguments rho(1/u), rho(u), ... (2*half_degree of them).
cd odd_pairing(const FredholmModule& m, const Eigen::VectorXcd& u_samples, int half_degree);

// Fourier coefficients hat(u)(d) for d in [-n/2, n/2], from equispaced circle
// samples; index d + n/2.
Eigen::VectorXcd fourier_coefficients(const Eigen::VectorXcd& samples);

}  // namespace lattix
