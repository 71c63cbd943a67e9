#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "lattix/folner.hpp"
#include "lattix/gauge_bundle.hpp"
#include "lattix/lattice.hpp"

namespace lattix {

// Cochains on the lattice complex.  Degree 0 lives on sites; degree 1 on
// directed unit hops, indexed site*dim + axis (off-window hops unused);
// degree 2 on plaquettes, indexed by the lower-left site.
struct DiscreteForm {
  std::shared_ptr<const Lattice> lat;
  int degree = 0;
  Eigen::VectorXd values;
};

DiscreteForm zero_form(std::shared_ptr<const Lattice> lat, int degree);
// Sites whose counterclockwise plaquette stays inside the window.
std::vector<int> plaquette_sites(const Lattice& lat);

DiscreteForm exterior_derivative(const DiscreteForm& w);

// Mean of a site function over the four plaquette corners.
double corner_average(const DiscreteForm& site_form, int plaquette_site);

// Even mixed form with degree 0 and degree 2 components.
struct MixedForm {
  DiscreteForm zero;
  DiscreteForm two;
};

MixedForm wedge(const MixedForm& a, const MixedForm& b);

// Tapered cutoffs subordinate to a Folner sequence:
// phi_i(x) = clamp(1 - d(x, M_i)/(taper+1), 0, 1).
struct CutoffFamily {
  std::shared_ptr<const Lattice> lat;
  int taper = 1;
  std::vector<std::vector<int>> sets;
  std::vector<Eigen::VectorXd> phi;
};

CutoffFamily cutoff_family(const FolnerSequence& seq, int taper);

// Curvature 2-form F(p) = arg(plaquette holonomy); refuses holonomies at the
// branch cut.
DiscreteForm plaquette_curvature(const GaugeBundle& bundle);

// Line-bundle character (1, F / 2 pi).
MixedForm chern_character(const GaugeBundle& bundle);
// Index form of the gapped model over this bundle; top_constant is the
// model's recorded proportionality between index density and c_1.
MixedForm index_form(const GaugeBundle& bundle, double top_constant);

// Degree-1 winding density arg(u(x+1)/u(x)) / 2 pi of a nonvanishing circle
// symbol; its hop sum is the winding number.
DiscreteForm winding_form(std::shared_ptr<const Lattice> circle, const Eigen::VectorXcd& u);

// Exact whole-space average of the top part of ch(twist) wedge ind on the
// torus: rank * F_twist / 2 pi plus the model's own density.
double topological_index_density(const GaugeBundle& twist, const MixedForm& ind_model);

// Pairing of a 0- or 2-form against a site weight; 2-forms meet the
// corner-averaged weight, and a cutoff's collar is part of the pairing on
// purpose.
double pair_form_current(const DiscreteForm& form, const Eigen::VectorXd& site_weight);

// Same pairing for weights supported strictly inside the window, with the
// Hoelder bound |result| <= sup|form| * l1(weight) enforced as a hard
// certificate.
double pair_compact(const DiscreteForm& form, const Eigen::VectorXd& site_weight);

// Per-set pairing values (1/#M_i) <two_form, phi_i>.
std::vector<double> topological_per_set(const DiscreteForm& two_form, const CutoffFamily& cut);

struct StokesCheck {
  double lhs = 0.0;
  double bound = 0.0;
  double deficiency = 0.0;
  int radius = 0;
  bool ok = false;
};

// Exact forms pair to boundary terms only: for gamma = d beta,
// |(1/#M_i) <gamma, phi_i>| <= (2 dim / taper) ||beta||_inf
//                              * deficiency(M_i, radius).
StokesCheck stokes_certificate(const DiscreteForm& beta, const CutoffFamily& cut, int set_index,
                               int radius = -1);

}  // namespace lattix
