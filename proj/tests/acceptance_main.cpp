// Acceptance battery for the released workbench.  Each criterion prints one
// pass/fail line with the measured margin; the process exit code is the number
// of failed criteria, so the battery doubles as a CI gate.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lattix/block_operator.hpp"
#include "lattix/cocycles.hpp"
#include "lattix/cover.hpp"
#include "lattix/filter.hpp"
#include "lattix/folner.hpp"
#include "lattix/forms.hpp"
#include "lattix/gauge_bundle.hpp"
#include "lattix/graded.hpp"
#include "lattix/hardy.hpp"
#include "lattix/lattice.hpp"
#include "lattix/lipschitz_family.hpp"
#include "lattix/models.hpp"
#include "lattix/symbols.hpp"
#include "lattix/trace.hpp"
#include "test_support.hpp"

using namespace lattix;

namespace {

constexpr double kPi = std::numbers::pi;

struct Calibration {
  cd odd_pairing_per_winding;
  double top_constant = 0.0;
  double trace_norm_baseline = 0.0;
  double summability_baseline = 0.0;
};

Calibration load_calibration() {
  std::ifstream in(CALIBRATION_FILE);
  if (!in) throw std::runtime_error("cannot open calibration file " CALIBRATION_FILE);
  nlohmann::json j;
  in >> j;
  Calibration c;
  c.odd_pairing_per_winding =
      cd(j.at("odd_pairing_per_winding").at("real").get<double>(),
         j.at("odd_pairing_per_winding").at("imag").get<double>());
  c.top_constant = j.at("index_form_top_constant").get<double>();
  c.trace_norm_baseline = j.at("baselines").at("hardy_commutator_trace_norm").get<double>();
  c.summability_baseline = j.at("baselines").at("hardy_summability_p1").get<double>();
  return c;
}

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

CriterionResult pass(std::string detail) { return {true, std::move(detail)}; }
CriterionResult fail(std::string detail) { return {false, std::move(detail)}; }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

GaugeBundle torus_flux(std::shared_ptr<const Lattice> torus, int quanta) {
  return GaugeBundle::uniform_flux(torus, 2.0 * kPi * quanta / torus->n_sites());
}

// ---------------------------------------------------------------- criterion 1
CriterionResult mckean_singer_torus() {
  double worst = 0.0;
  for (int n : {8, 12, 16}) {
    auto torus = make_lattice(LatticeKind::Torus, 2, {n, n});
    for (int quanta : {0, 1, 2, 3}) {
      const auto model = magnetic_dirac(torus, torus_flux(torus, quanta), Stencil::Wilson);
      const auto dims = model.index_by_svd(1e-10);
      if (dims.index != quanta) {
        return fail("svd index " + std::to_string(dims.index) + " != flux " +
                    std::to_string(quanta) + " at N=" + std::to_string(n));
      }
      for (double t : {0.5, 1.0, 2.0}) {
        const double str = model.supertrace_filtered(FilterFunction::gaussian(t));
        worst = std::max(worst, std::abs(str - dims.index));
      }
    }
  }
  if (worst > 1e-8) return fail("max |Str - index| = " + fmt(worst));
  return pass("36 models, max |Str - index| = " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 2
CriterionResult index_density_torus(const Calibration& cal) {
  const LimitPolicy policy;
  double worst_analytic = 0.0;
  double worst_match = 0.0;
  int n_models = 0;
  for (int n : {8, 12, 16}) {
    auto torus = make_lattice(LatticeKind::Torus, 2, {n, n});
    const MixedForm base = index_form(GaugeBundle::trivial(torus), cal.top_constant);
    const int max_quanta = (n * n) / 8;
    for (int quanta = 0; quanta <= max_quanta; ++quanta) {
      const auto bundle = torus_flux(torus, quanta);
      const auto model = magnetic_dirac(torus, bundle, Stencil::Wilson);
      const auto est = analytic_index_density(model, FilterFunction::gaussian(1.0),
                                              FolnerSequence::whole_space(torus), policy);
      const double analytic = est.value * n * n;
      const double topological = topological_index_density(bundle, base) * n * n;
      worst_analytic = std::max(worst_analytic, std::abs(analytic - quanta));
      worst_match = std::max(worst_match, std::abs(analytic - topological));
      ++n_models;
    }
  }
  if (worst_analytic > 1e-6 || worst_match > 1e-6) {
    return fail("analytic err " + fmt(worst_analytic) + ", route gap " + fmt(worst_match));
  }
  return pass(std::to_string(n_models) + " models, analytic err " + fmt(worst_analytic) +
              ", route gap " + fmt(worst_match));
}

// ---------------------------------------------------------------- criterion 3
CriterionResult plane_density_folner(const Calibration& cal) {
  auto gap_torus = make_lattice(LatticeKind::Torus, 2, {16, 16});
  const double gap = spectral_gap(
      wilson_hamiltonian(gap_torus, torus_flux(gap_torus, 16), WilsonParams{}));

  auto plane = make_lattice(LatticeKind::PlaneWindow, 2, {64, 64});
  const double flux = 2.0 * kPi / 16.0;
  const auto bundle = GaugeBundle::uniform_flux(plane, flux);
  const auto h = wilson_hamiltonian(plane, bundle, WilsonParams{});

  const auto seq = folner_boxes(plane, {16, 20, 24, 28, 32}, 16);
  const auto& largest = seq.set(seq.size() - 1);
  const auto density = sign_density(h, largest, gap);
  std::unordered_map<int, double> by_site;
  for (std::size_t i = 0; i < largest.size(); ++i) by_site[largest[i]] = density[i];

  const double target = flux / (2.0 * kPi);
  std::vector<double> analytic;
  for (int i = 0; i < seq.size(); ++i) {
    double acc = 0.0;
    for (int s : seq.set(i)) acc += by_site.at(s);
    analytic.push_back(acc / static_cast<double>(seq.set(i).size()));
    if (std::abs(analytic.back() - target) > 0.1 * target) {
      return fail("box " + std::to_string(i) + " density " + fmt(analytic.back()) +
                  " misses " + fmt(target) + " by more than 10%");
    }
  }

  const MixedForm ind = index_form(bundle, cal.top_constant);
  const auto topological = topological_per_set(ind.two, cutoff_family(seq, 2));
  std::vector<double> diff;
  for (int i = 0; i < seq.size(); ++i) diff.push_back(std::abs(analytic[i] - topological[i]));
  for (std::size_t i = 1; i < diff.size(); ++i) {
    if (!(diff[i] < diff[i - 1])) {
      return fail("route gap not strictly decreasing: " + fmt(diff[i - 1]) + " then " +
                  fmt(diff[i]));
    }
  }
  return pass("densities within 10% of " + fmt(target) + ", route gap " + fmt(diff.front()) +
              " -> " + fmt(diff.back()) + " strictly decreasing");
}

// ---------------------------------------------------------------- criterion 4
CriterionResult toeplitz_winding(const Calibration& cal) {
  for (int k = -3; k <= 3; ++k) {
    const auto result = toeplitz_index(circle_exponential(128, k));
    if (result.index != -k) {
      return fail("toeplitz index " + std::to_string(result.index) + " != " +
                  std::to_string(-k));
    }
  }
  double worst = 0.0;
  for (int window : {32, 64}) {
    auto halfline = make_lattice(LatticeKind::HalfLine, 1, {window, 1});
    const auto module = halfline_hardy_module(halfline, 32, 4);
    for (int k = -3; k <= 3; ++k) {
      const auto u = circle_exponential(32, k);
      const cd calibrated = odd_pairing(module, u, 1) / cal.odd_pairing_per_winding;
      const double w = winding_number(u);
      worst = std::max(worst, std::abs(calibrated - cd(w, 0.0)));
    }
  }
  if (worst > 1e-6) return fail("calibrated pairing residual " + fmt(worst));
  return pass("index = -winding for |k| <= 3, pairing residual " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 5
CriterionResult elek_trace_commutators() {
  auto line = make_lattice(LatticeKind::HalfLine, 1, {100, 1});
  const auto seq = folner_boxes(line, {10, 20, 40}, 2);
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> reach(1, 3);
  double worst_margin = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = lattix_test::seeded_banded(line, 1, reach(gen), gen);
    const auto b = lattix_test::seeded_banded(line, 1, reach(gen), gen);
    for (int i = 0; i < seq.size(); ++i) {
      const auto check = commutator_trace_check(a, b, seq.set(i));
      if (!check.ok || check.lhs > check.bound) {
        return fail("trial " + std::to_string(trial) + " set " + std::to_string(i) +
                    ": lhs " + fmt(check.lhs) + " vs bound " + fmt(check.bound));
      }
      if (check.bound > 0.0) worst_margin = std::min(worst_margin, 1.0 - check.lhs / check.bound);
    }
  }
  return pass("100 pairs x 3 sets, min slack fraction " + fmt(worst_margin));
}

// ---------------------------------------------------------------- criterion 6
CriterionResult cocycle_battery() {
  std::mt19937_64 gen(909);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    FredholmModule m;
    m.lat = make_lattice(LatticeKind::HalfLine, 1, {6, 1});
    const Eigen::MatrixXcd u = lattix_test::random_unitary(3, gen);
    m.f_op = Eigen::MatrixXcd::Zero(6, 6);
    m.f_op.topRightCorner(3, 3) = u.adjoint();
    m.f_op.bottomLeftCorner(3, 3) = u;
    m.grading = Eigen::VectorXd::Ones(6);
    m.grading.tail(3) *= -1.0;
    m.rep = RepKind::Multiplication;
    m.validate();

    auto args_for = [&](int count) {
      std::vector<Eigen::MatrixXcd> args;
      for (int i = 0; i < count; ++i) {
        args.push_back(m.represent(lattix_test::random_matrix(6, 1, gen)));
      }
      return args;
    };
    for (int half = 0; half <= 2; ++half) {
      const auto ch = even_character(m, half);
      worst = std::max(worst, std::abs(cyclic_defect(ch, args_for(ch.degree + 1))));
      const auto bch = hochschild_b(ch);
      worst = std::max(worst, std::abs(bch.eval(args_for(bch.degree + 1))));
    }
    const Eigen::MatrixXcd seed_mat = lattix_test::random_matrix(6, 6, gen);
    CyclicCochain psi;
    psi.degree = 1 + trial % 3;
    psi.eval = [seed_mat](const std::vector<Eigen::MatrixXcd>& a) {
      Eigen::MatrixXcd prod = seed_mat;
      for (const auto& x : a) prod = prod * x;
      return prod.trace();
    };
    const auto killed = alpha_current(hochschild_b(psi));
    worst = std::max(worst, std::abs(killed.eval(args_for(killed.degree + 1))));
  }
  if (worst > 1e-10) return fail("max defect " + fmt(worst));
  return pass("50 modules, max defect " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 7
CriterionResult filter_agreement() {
  std::vector<FinitePropOperator> shipped;
  auto torus = make_lattice(LatticeKind::Torus, 2, {8, 8});
  shipped.push_back(wilson_hamiltonian(torus, torus_flux(torus, 2), WilsonParams{}));
  shipped.push_back(graded_envelope(one_sided_dirac(torus, torus_flux(torus, 2))).d);
  auto plane = make_lattice(LatticeKind::PlaneWindow, 2, {8, 8});
  shipped.push_back(wilson_hamiltonian(plane, GaugeBundle::uniform_flux(plane, 2.0 * kPi / 16.0),
                                       WilsonParams{}));
  const auto f = FilterFunction::gaussian(1.0);
  double worst = 0.0;
  for (const auto& h : shipped) {
    const auto eig = apply_filter(h, f, "eigen");
    const auto cheb = apply_filter(h, f, "chebyshev");
    worst = std::max(worst, operator_norm(eig.dense - cheb.dense));
  }
  if (worst > 1e-8) return fail("route disagreement " + fmt(worst));

  auto circle = make_lattice(LatticeKind::Circle, 1, {64, 1});
  const auto hop = shift_operator(circle, 0);
  const auto hermitian_hop = hop + hop.adjoint();
  const auto k = apply_filter(hermitian_hop, FilterFunction::gaussian(0.5), "chebyshev");
  int checked = 0;
  for (int x = 0; x < 64; ++x) {
    for (int y = 0; y < 64; ++y) {
      if (circle->dist(x, y) <= k.degree) continue;
      ++checked;
      if (k.block(x, y).cwiseAbs().maxCoeff() != 0.0) {
        return fail("kernel leaks beyond degree " + std::to_string(k.degree));
      }
    }
  }
  if (checked == 0) return fail("degree too large to test the support cutoff");

  auto profile_torus = make_lattice(LatticeKind::Torus, 2, {12, 12});
  const auto kp = apply_filter(wilson_hamiltonian(profile_torus,
                                                  GaugeBundle::trivial(profile_torus),
                                                  WilsonParams{}),
                               f, "chebyshev");
  const auto profile = quasilocality_profile(kp, {2, 3, 4, 5, 6});
  for (std::size_t i = 1; i < profile.tails.size(); ++i) {
    if (!(profile.tails[i] < profile.tails[i - 1])) {
      return fail("profile not strictly decreasing past R=2");
    }
  }
  return pass("routes agree to " + fmt(worst) + ", kernels cut exactly, profile decreasing");
}

// ---------------------------------------------------------------- criterion 8
CriterionResult folner_deficiency_schedules() {
  auto line = make_lattice(LatticeKind::HalfLine, 1, {100, 1});
  const auto seq = folner_boxes(line, {10, 20, 40}, 2);
  const std::vector<double> expected = {0.6, 0.3, 0.15};
  for (int i = 0; i < seq.size(); ++i) {
    const double got = folner_deficiency(*line, seq.set(i), 2);
    if (got != expected[static_cast<std::size_t>(i)]) {
      return fail("deficiency " + fmt(got) + " != " + fmt(expected[i]));
    }
  }
  std::mt19937_64 gen(55);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  int certified = 0;
  for (auto [extent, sizes, margin] :
       {std::tuple<int, std::vector<int>, int>{40, {12, 16, 20}, 4},
        std::tuple<int, std::vector<int>, int>{64, {16, 20, 24, 28, 32}, 16}}) {
    auto plane = make_lattice(LatticeKind::PlaneWindow, 2, {extent, extent});
    const auto boxes = folner_boxes(plane, sizes, margin);
    const auto cut = cutoff_family(boxes, 2);
    DiscreteForm beta = zero_form(plane, 1);
    for (int i = 0; i < beta.values.size(); ++i) beta.values(i) = coef(gen);
    for (int i = 0; i < boxes.size(); ++i) {
      const auto check = stokes_certificate(beta, cut, i);
      if (!check.ok) {
        return fail("stokes bound missed: lhs " + fmt(check.lhs) + " vs " + fmt(check.bound));
      }
      ++certified;
    }
  }
  return pass("1d deficiencies exact, " + std::to_string(certified) + " stokes certificates hold");
}

// ---------------------------------------------------------------- criterion 9
CriterionResult cover_partition() {
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<int> spacing_dist(2, 6);
  std::uniform_int_distribution<int> mult_dist(3, 5);
  std::uniform_int_distribution<int> slack_dist(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const int spacing = spacing_dist(gen);
    const bool wrap = trial % 2 == 0;
    // Extents aligned with the net keep radius spacing/2 a genuine cover.
    const int extent = spacing * mult_dist(gen) + (wrap ? 0 : 1);
    auto lat = make_lattice(wrap ? LatticeKind::Torus : LatticeKind::PlaneWindow, 2,
                            {extent, extent});
    const double radius = spacing / 2.0 + slack_dist(gen);
    const auto cover = build_colored_cover(lat, spacing, radius);
    if (!cover.covers_all_sites()) return fail("cover misses sites at trial " + std::to_string(trial));
    if (cover.n_colors > cover.max_degree + 1) {
      return fail("coloring used " + std::to_string(cover.n_colors) + " colors, degree " +
                  std::to_string(cover.max_degree));
    }
    for (std::size_t v = 0; v < cover.intersection.size(); ++v) {
      for (int w : cover.intersection[v]) {
        if (cover.color[v] == cover.color[static_cast<std::size_t>(w)]) {
          return fail("improper coloring at trial " + std::to_string(trial));
        }
      }
    }
  }
  auto torus = make_lattice(LatticeKind::Torus, 2, {24, 24});
  for (int taper : {1, 2, 4}) {
    const auto cover = build_colored_cover(torus, 6, 3.0 + taper);
    const auto pou = partition_of_unity(cover, taper);
    for (int s = 0; s < torus->n_sites(); ++s) {
      if (std::abs(pou.sum_at(s) - 1.0) > 1e-12) {
        return fail("partition sums to " + fmt(pou.sum_at(s)) + " at taper " +
                    std::to_string(taper));
      }
    }
    if (pou.max_hop_variation() > 1.0 / taper + 1e-12) {
      return fail("hop variation " + fmt(pou.max_hop_variation()) + " exceeds 1/" +
                  std::to_string(taper));
    }
  }
  return pass("100 covers colored within degree+1, partitions normalized and 1/w-Lipschitz");
}

// --------------------------------------------------------------- criterion 10
CriterionResult updo_assembly() {
  auto circle = make_lattice(LatticeKind::Circle, 1, {64, 1});
  auto sigma = [](double xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = 1.0 + std::cos(xi) + 0.5 * std::sin(2.0 * xi);
    return m;
  };
  const auto p = multiplier_symbol(circle, SymbolRegime::Toroidal, 0.0, 1, sigma);
  const Eigen::MatrixXcd global = global_multiplier(circle, sigma, 1).to_dense();
  const int taper = 4;
  double worst = 0.0;
  std::string patch_counts;
  for (int spacing : {64, 32, 16}) {
    const auto cover = build_colored_cover(circle, spacing, spacing / 2.0 + taper);
    const auto pou = partition_of_unity(cover, taper);
    const auto glued = assemble_updo(p, cover, pou, 2);
    worst = std::max(worst, operator_norm(glued.to_dense() - global));
    patch_counts += (patch_counts.empty() ? "" : "/") + std::to_string(cover.members.size());
  }
  if (worst > 1e-8) return fail("assembly error " + fmt(worst));

  auto line = make_lattice(LatticeKind::HalfLine, 1, {9, 1});
  std::vector<int> sites(9);
  for (int i = 0; i < 9; ++i) sites[static_cast<std::size_t>(i)] = i;
  auto laplace = multiplier_symbol(line, SymbolRegime::Asymptotic, 2.0, 1, [](double xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = 1.0 + xi * xi;
    return m;
  });
  const auto table = symbol_estimate(sample_symbol(laplace, sites, 64.0, 513), 0, 1);
  if (std::abs(table(0, 0) - 1.0) > 0.02 || std::abs(table(0, 1) - 2.0) > 0.04) {
    return fail("seminorms " + fmt(table(0, 0)) + ", " + fmt(table(0, 1)) +
                " off their targets 1, 2");
  }

  auto sine = multiplier_symbol(line, SymbolRegime::Asymptotic, 0.0, 1, [](double xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = std::sin(kPi * xi / 4.0);
    return m;
  });
  const auto witness = ellipticity_check(sample_symbol(sine, sites, 32.0, 1025), 1.0);
  if (witness.elliptic) return fail("sine symbol certified elliptic");
  const double cycles = std::abs(witness.witness_xi) / 4.0;
  if (std::abs(cycles - std::round(cycles)) > 1e-12) {
    return fail("witness " + fmt(witness.witness_xi) + " is not at a sine zero");
  }
  return pass(patch_counts + " patches, assembly error " + fmt(worst) +
              ", seminorms on target, sine witness at " + fmt(witness.witness_xi));
}

// --------------------------------------------------------------- criterion 11
CriterionResult pairing_certificates() {
  auto plane = make_lattice(LatticeKind::PlaneWindow, 2, {20, 20});
  const auto bundle = GaugeBundle::uniform_flux(plane, 0.3);
  const DiscreteForm curvature = plaquette_curvature(bundle);

  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> mass(0.0, 1.0);
  int checked = 0;
  auto certify = [&](const DiscreteForm& form, const Eigen::VectorXd& weight) {
    const double value = pair_compact(form, weight);
    const double bound = form.values.cwiseAbs().maxCoeff() * weight.cwiseAbs().sum();
    if (std::abs(value) > bound + 1e-12) {
      throw std::runtime_error("pairing " + fmt(value) + " exceeds bound " + fmt(bound));
    }
    ++checked;
  };
  try {
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd weight = Eigen::VectorXd::Zero(plane->n_sites());
      for (int s = 0; s < plane->n_sites(); ++s) {
        if (plane->interior(s) && mass(gen) < 0.3) weight(s) = mass(gen);
      }
      certify(curvature, weight);
    }
    Eigen::VectorXd uniform = Eigen::VectorXd::Zero(plane->n_sites());
    for (int x = 5; x < 15; ++x) {
      for (int y = 5; y < 15; ++y) uniform(plane->site(x, y)) = 0.01;
    }
    certify(curvature, uniform);
    Eigen::VectorXd point = Eigen::VectorXd::Zero(plane->n_sites());
    point(plane->site(10, 10)) = 1.0;
    certify(curvature, point);
    DiscreteForm site_form = zero_form(plane, 0);
    for (int i = 0; i < site_form.values.size(); ++i) site_form.values(i) = std::cos(0.2 * i);
    certify(site_form, uniform);
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return pass(std::to_string(checked) + " pairings inside their certificates");
}

}  // namespace

int main() {
  const Calibration cal = load_calibration();
  struct Entry {
    const char* name;
    std::function<CriterionResult()> run;
  };
  const std::vector<Entry> entries = {
      {"mckean_singer_torus", [&] { return mckean_singer_torus(); }},
      {"index_density_torus", [&] { return index_density_torus(cal); }},
      {"plane_density_folner", [&] { return plane_density_folner(cal); }},
      {"toeplitz_winding", [&] { return toeplitz_winding(cal); }},
      {"elek_trace_commutators", [&] { return elek_trace_commutators(); }},
      {"cocycle_battery", [&] { return cocycle_battery(); }},
      {"filter_agreement", [&] { return filter_agreement(); }},
      {"folner_deficiency", [&] { return folner_deficiency_schedules(); }},
      {"cover_partition", [&] { return cover_partition(); }},
      {"updo_assembly", [&] { return updo_assembly(); }},
      {"pairing_certificates", [&] { return pairing_certificates(); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CriterionResult result;
    try {
      result = entries[i].run();
    } catch (const std::exception& e) {
      result = fail(std::string("exception: ") + e.what());
    }
    if (!result.pass) ++failures;
    std::printf("criterion %02zu %s: %s (%s)\n", i + 1, entries[i].name,
                result.pass ? "PASS" : "FAIL", result.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
