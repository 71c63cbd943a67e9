#include "lattix/forms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lattix {

namespace {
void require_degree(const DiscreteForm& w, int degree) {
  if (w.degree != degree) throw std::invalid_argument("form has the wrong degree");
}

double corner_average_raw(const Lattice& lat, const Eigen::VectorXd& site_values, int p) {
  const int r = lat.hop(p, 0, 1);
  const int u = lat.hop(p, 1, 1);
  if (r < 0 || u < 0) throw std::invalid_argument("no plaquette at this site");
  const int ru = lat.hop(r, 1, 1);
  if (ru < 0) throw std::invalid_argument("no plaquette at this site");
  return 0.25 * (site_values(p) + site_values(r) + site_values(u) + site_values(ru));
}
}  // namespace

DiscreteForm zero_form(std::shared_ptr<const Lattice> lat, int degree) {
  if (degree < 0 || degree > 2) throw std::invalid_argument("forms have degree 0, 1 or 2");
  DiscreteForm w;
  w.lat = lat;
  w.degree = degree;
  const int n = lat->n_sites();
  w.values = Eigen::VectorXd::Zero(degree == 1 ? n * lat->dim() : n);
  return w;
}

std::vector<int> plaquette_sites(const Lattice& lat) {
  if (lat.dim() != 2) throw std::invalid_argument("plaquettes need two dimensions");
  std::vector<int> out;
  for (int s = 0; s < lat.n_sites(); ++s) {
    const int r = lat.hop(s, 0, 1);
    const int u = lat.hop(s, 1, 1);
    if (r < 0 || u < 0) continue;
    if (lat.hop(r, 1, 1) < 0) continue;
    out.push_back(s);
  }
  return out;
}

DiscreteForm exterior_derivative(const DiscreteForm& w) {
  const Lattice& lat = *w.lat;
  if (w.degree == 0) {
    DiscreteForm d = zero_form(w.lat, 1);
    for (int s = 0; s < lat.n_sites(); ++s) {
      for (int axis = 0; axis < lat.dim(); ++axis) {
        const int t = lat.hop(s, axis, 1);
        if (t < 0) continue;
        d.values(s * lat.dim() + axis) = w.values(t) - w.values(s);
      }
    }
    return d;
  }
  if (w.degree == 1) {
    DiscreteForm d = zero_form(w.lat, 2);
    for (int s : plaquette_sites(lat)) {
      const int r = lat.hop(s, 0, 1);
      const int u = lat.hop(s, 1, 1);
      d.values(s) = w.values(s * lat.dim() + 0) + w.values(r * lat.dim() + 1) -
                    w.values(u * lat.dim() + 0) - w.values(s * lat.dim() + 1);
    }
    return d;
  }
  throw std::invalid_argument("no exterior derivative above the top degree");
}

double corner_average(const DiscreteForm& site_form, int plaquette_site) {
  require_degree(site_form, 0);
  return corner_average_raw(*site_form.lat, site_form.values, plaquette_site);
}

MixedForm wedge(const MixedForm& a, const MixedForm& b) {
  require_degree(a.zero, 0);
  require_degree(b.zero, 0);
  require_degree(a.two, 2);
  require_degree(b.two, 2);
  const Lattice& lat = *a.zero.lat;
  MixedForm out;
  out.zero = zero_form(a.zero.lat, 0);
  out.two = zero_form(a.zero.lat, 2);
  out.zero.values = a.zero.values.cwiseProduct(b.zero.values);
  for (int p : plaquette_sites(lat)) {
    out.two.values(p) = corner_average_raw(lat, a.zero.values, p) * b.two.values(p) +
                        a.two.values(p) * corner_average_raw(lat, b.zero.values, p);
  }
  return out;
}

CutoffFamily cutoff_family(const FolnerSequence& seq, int taper) {
  if (taper < 1) throw std::invalid_argument("taper must be positive");
  CutoffFamily out;
  out.lat = seq.lattice_ptr();
  out.taper = taper;
  const int n = out.lat->n_sites();
  for (int i = 0; i < seq.size(); ++i) {
    const auto& set = seq.set(i);
    const std::vector<int> dist = distances_to_set(*out.lat, set);
    Eigen::VectorXd phi(n);
    for (int s = 0; s < n; ++s) {
      phi(s) = std::clamp(1.0 - static_cast<double>(dist[s]) / (taper + 1), 0.0, 1.0);
    }
    out.sets.push_back(set);
    out.phi.push_back(std::move(phi));
  }
  return out;
}

DiscreteForm plaquette_curvature(const GaugeBundle& bundle) {
  DiscreteForm f = zero_form(bundle.lattice_ptr(), 2);
  for (int p : plaquette_sites(bundle.lattice())) {
    const std::complex<double> hol = bundle.plaquette_holonomy(p);
    if (std::abs(hol + 1.0) < 1e-8) {
      throw std::runtime_error("plaquette holonomy at the branch cut; use a smaller flux");
    }
    f.values(p) = std::arg(hol);
  }
  return f;
}

MixedForm chern_character(const GaugeBundle& bundle) {
  MixedForm ch;
  ch.zero = zero_form(bundle.lattice_ptr(), 0);
  ch.zero.values.setOnes();
  ch.two = plaquette_curvature(bundle);
  ch.two.values /= 2.0 * std::numbers::pi;
  return ch;
}

MixedForm index_form(const GaugeBundle& bundle, double top_constant) {
  MixedForm form = chern_character(bundle);
  form.two.values *= top_constant;
  return form;
}

DiscreteForm winding_form(std::shared_ptr<const Lattice> circle, const Eigen::VectorXcd& u) {
  if (circle->kind() != LatticeKind::Circle) {
    throw std::invalid_argument("winding forms live on circles");
  }
  const int n = circle->n_sites();
  if (u.size() != n) throw std::invalid_argument("one symbol sample per circle site");
  DiscreteForm w = zero_form(circle, 1);
  for (int s = 0; s < n; ++s) {
    const int t = circle->hop(s, 0, 1);
    const std::complex<double> step = u(t) / u(s);
    if (!(std::abs(step) > 0.0) || !std::isfinite(std::abs(step))) {
      throw std::invalid_argument("winding form needs a nonvanishing symbol");
    }
    w.values(s) = std::arg(step) / (2.0 * std::numbers::pi);
  }
  return w;
}

double topological_index_density(const GaugeBundle& twist, const MixedForm& ind_model) {
  const Lattice& lat = twist.lattice();
  if (lat.kind() != LatticeKind::Torus) {
    throw std::invalid_argument("exact single-average density needs a torus");
  }
  const MixedForm top = wedge(chern_character(twist), ind_model);
  return top.two.values.sum() / static_cast<double>(lat.n_sites());
}

double pair_form_current(const DiscreteForm& form, const Eigen::VectorXd& site_weight) {
  const Lattice& lat = *form.lat;
  if (site_weight.size() != lat.n_sites()) {
    throw std::invalid_argument("site weight has the wrong size");
  }
  if (form.degree == 0) return site_weight.dot(form.values);
  require_degree(form, 2);
  double acc = 0.0;
  for (int p : plaquette_sites(lat)) {
    acc += corner_average_raw(lat, site_weight, p) * form.values(p);
  }
  return acc;
}

double pair_compact(const DiscreteForm& form, const Eigen::VectorXd& site_weight) {
  const Lattice& lat = *form.lat;
  if (site_weight.size() != lat.n_sites()) {
    throw std::invalid_argument("site weight has the wrong size");
  }
  for (int s = 0; s < lat.n_sites(); ++s) {
    if (site_weight(s) != 0.0 && !lat.interior(s)) {
      throw std::invalid_argument("compact pairing needs support strictly inside the window");
    }
  }
  const double result = pair_form_current(form, site_weight);
  // Each site meets at most four plaquettes with corner weight 1/4, so the
  // corner-averaged pairing obeys the same Hoelder bound as the site pairing.
  const double form_sup = form.values.cwiseAbs().maxCoeff();
  const double bound = form_sup * site_weight.cwiseAbs().sum();
  if (std::abs(result) > bound + 1e-9) {
    throw std::logic_error("pairing exceeded its Hoelder certificate");
  }
  return result;
}

std::vector<double> topological_per_set(const DiscreteForm& two_form, const CutoffFamily& cut) {
  std::vector<double> out;
  out.reserve(cut.sets.size());
  for (size_t i = 0; i < cut.sets.size(); ++i) {
    out.push_back(pair_form_current(two_form, cut.phi[i]) /
                  static_cast<double>(cut.sets[i].size()));
  }
  return out;
}

StokesCheck stokes_certificate(const DiscreteForm& beta, const CutoffFamily& cut, int set_index,
                               int radius) {
  require_degree(beta, 1);
  if (set_index < 0 || set_index >= static_cast<int>(cut.sets.size())) {
    throw std::invalid_argument("set index out of range");
  }
  const DiscreteForm gamma = exterior_derivative(beta);
  const auto& set = cut.sets[static_cast<size_t>(set_index)];

  StokesCheck out;
  out.radius = radius > 0 ? radius : cut.taper + 1;
  out.deficiency = folner_deficiency(*cut.lat, set, out.radius);
  out.lhs = std::abs(pair_form_current(gamma, cut.phi[static_cast<size_t>(set_index)])) /
            static_cast<double>(set.size());
  const double beta_sup = beta.values.cwiseAbs().maxCoeff();
  out.bound = (2.0 * cut.lat->dim() / cut.taper) * beta_sup * out.deficiency;
  out.ok = out.lhs <= out.bound + 1e-12;
  return out;
}

}  // namespace lattix
