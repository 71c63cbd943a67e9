// Scenario runner: loads a JSON config, drives one verification suite, and
// writes a JSON report plus a CSV table into the output directory.  Reports
// are byte-identical for a fixed config and seed; wall-clock data goes to a
// separate timings sidecar so it never perturbs the report bytes.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
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

using nlohmann::json;
using namespace lattix;

namespace {

constexpr double kPi = std::numbers::pi;

// ------------------------------------------------------------ config plumbing

// Invalid configs exit with code 2 and a diagnostic that names the field.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what, const std::string& field)
      : std::runtime_error(what + " (field: " + field + ")") {}
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path, "--config");
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config does not parse: ") + e.what(), "--config");
  }
}

void require_known_keys(const json& cfg, const std::set<std::string>& allowed) {
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("unknown config key", it.key());
    }
  }
}

const json& require_field(const json& cfg, const std::string& field) {
  if (!cfg.contains(field)) throw ConfigError("missing config key", field);
  return cfg.at(field);
}

double number_field(const json& cfg, const std::string& field) {
  const json& v = require_field(cfg, field);
  if (!v.is_number()) throw ConfigError("expected a number", field);
  return v.get<double>();
}

int int_field(const json& cfg, const std::string& field) {
  const json& v = require_field(cfg, field);
  if (!v.is_number_integer()) throw ConfigError("expected an integer", field);
  return v.get<int>();
}

std::vector<int> int_list_field(const json& cfg, const std::string& field) {
  const json& v = require_field(cfg, field);
  if (!v.is_array() || v.empty()) throw ConfigError("expected a nonempty array", field);
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ConfigError("expected integer entries", field);
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<double> number_list_field(const json& cfg, const std::string& field) {
  const json& v = require_field(cfg, field);
  if (!v.is_array() || v.empty()) throw ConfigError("expected a nonempty array", field);
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError("expected numeric entries", field);
    out.push_back(x.get<double>());
  }
  return out;
}

void require_schema(const json& cfg) {
  if (int_field(cfg, "schema_version") != 1) {
    throw ConfigError("unsupported schema version", "schema_version");
  }
}

// ---------------------------------------------------------------- calibration

struct Calibration {
  cd odd_pairing_per_winding;
  cd consecutive_ratio;
  double top_constant = 0.0;
  json raw;
};

Calibration load_calibration() {
  std::ifstream in(CALIBRATION_FILE);
  if (!in) throw std::runtime_error("cannot open calibration file " CALIBRATION_FILE);
  json j;
  in >> j;
  Calibration c;
  c.odd_pairing_per_winding = cd(j.at("odd_pairing_per_winding").at("real").get<double>(),
                                 j.at("odd_pairing_per_winding").at("imag").get<double>());
  c.consecutive_ratio = cd(j.at("consecutive_half_degree_ratio").at("real").get<double>(),
                           j.at("consecutive_half_degree_ratio").at("imag").get<double>());
  c.top_constant = j.at("index_form_top_constant").get<double>();
  c.raw = j;
  return c;
}

// ------------------------------------------------------------------ reporting

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CheckList {
  json list = json::array();
  bool all_pass = true;

  // pass when measured <= tolerance (strict: <).
  void add(const std::string& name, double measured, double tolerance, bool strict = false) {
    const bool ok = strict ? measured < tolerance : measured <= tolerance;
    list.push_back(
        {{"name", name}, {"measured", measured}, {"tolerance", tolerance}, {"pass", ok}});
    all_pass = all_pass && ok;
  }
};

struct Timings {
  using clock = std::chrono::steady_clock;
  clock::time_point start = clock::now();
  clock::time_point last = clock::now();
  json phases = json::object();

  void mark(const std::string& phase) {
    const auto now = clock::now();
    phases[phase] = std::chrono::duration<double>(now - last).count();
    last = now;
  }
  json finish() const {
    json j;
    j["phases_seconds"] = phases;
    j["total_seconds"] = std::chrono::duration<double>(clock::now() - start).count();
    return j;
  }
};

struct Cache {
  std::filesystem::path dir;  // empty disables caching
  int hits = 0;
  int misses = 0;

  bool enabled() const { return !dir.empty(); }
  std::optional<json> load(const std::string& key) {
    if (!enabled()) return std::nullopt;
    const auto path = dir / (key + ".json");
    std::ifstream in(path);
    if (!in) {
      ++misses;
      return std::nullopt;
    }
    try {
      json j;
      in >> j;
      ++hits;
      return j;
    } catch (const json::exception&) {
      ++misses;  // corrupt entry: recompute and overwrite
      return std::nullopt;
    }
  }
  void store(const std::string& key, const json& payload) {
    if (!enabled()) return;
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / (key + ".json"));
    out << payload.dump(2) << "\n";
  }
};

std::string model_key(const std::string& descriptor, int size) {
  std::uint64_t h = 1469598103934665603ull;
  const std::string s = descriptor + "|size=" + std::to_string(size);
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct RunContext {
  std::filesystem::path outdir;
  std::string format;  // json | csv | both
  std::optional<std::uint64_t> seed_override;
  Cache cache;
  Calibration cal;
  Timings timings;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void emit_outputs(RunContext& ctx, const std::string& suite, const json& report,
                  const std::string& csv_text) {
  std::filesystem::create_directories(ctx.outdir);
  if (ctx.format == "json" || ctx.format == "both") {
    write_file(ctx.outdir / (suite + ".json"), report.dump(2) + "\n");
  }
  if (ctx.format == "csv" || ctx.format == "both") {
    write_file(ctx.outdir / (suite + ".csv"), csv_text);
  }
  json side = ctx.timings.finish();
  side["cache"] = {{"enabled", ctx.cache.enabled()},
                   {"hits", ctx.cache.hits},
                   {"misses", ctx.cache.misses}};
  write_file(ctx.outdir / (suite + ".timings.json"), side.dump(2) + "\n");
}

json report_skeleton(const std::string& suite, const json& cfg, const RunContext& ctx) {
  json r;
  r["schema_version"] = 1;
  r["suite"] = suite;
  r["config"] = cfg;
  r["calibration"] = ctx.cal.raw;
  return r;
}

std::uint64_t effective_seed(const json& cfg, const RunContext& ctx) {
  std::uint64_t seed = 0;
  if (cfg.contains("seed")) {
    if (!cfg.at("seed").is_number_unsigned()) throw ConfigError("expected an unsigned integer", "seed");
    seed = cfg.at("seed").get<std::uint64_t>();
  }
  if (ctx.seed_override) seed = *ctx.seed_override;
  return seed;
}

GaugeBundle torus_flux(std::shared_ptr<const Lattice> torus, int quanta) {
  return GaugeBundle::uniform_flux(torus, 2.0 * kPi * quanta / torus->n_sites());
}

// The canonical convergence table shared by the Folner suites.
struct FolnerRow {
  int set_index = 0;
  int set_size = 0;
  double deficiency_r2 = 0.0;
  double analytic_density = 0.0;
  double topological_density = 0.0;
  double abs_diff = 0.0;
};

std::string folner_csv(const std::vector<FolnerRow>& rows) {
  std::ostringstream out;
  out << "set_index,set_size,deficiency_r2,analytic_density,topological_density,abs_diff\n";
  for (const auto& r : rows) {
    out << r.set_index << "," << r.set_size << "," << num17(r.deficiency_r2) << ","
        << num17(r.analytic_density) << "," << num17(r.topological_density) << ","
        << num17(r.abs_diff) << "\n";
  }
  return out.str();
}

json folner_rows_json(const std::vector<FolnerRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"set_index", r.set_index},
                   {"set_size", r.set_size},
                   {"deficiency_r2", r.deficiency_r2},
                   {"analytic_density", r.analytic_density},
                   {"topological_density", r.topological_density},
                   {"abs_diff", r.abs_diff}});
  }
  return arr;
}

// ---------------------------------------------------------------- verify-torus

int run_verify_torus(const json& cfg, RunContext& ctx) {
  require_schema(cfg);
  require_known_keys(cfg, {"schema_version", "name", "sizes", "flux_quanta", "gaussian_times",
                           "density_time", "supertrace_tolerance", "density_tolerance",
                           "svd_tolerance"});
  const auto sizes = int_list_field(cfg, "sizes");
  const auto quanta_list = int_list_field(cfg, "flux_quanta");
  const auto times = number_list_field(cfg, "gaussian_times");
  const double density_time = number_field(cfg, "density_time");
  const double str_tol = number_field(cfg, "supertrace_tolerance");
  const double den_tol = number_field(cfg, "density_tolerance");
  const double svd_tol = number_field(cfg, "svd_tolerance");

  CheckList checks;
  json models = json::array();
  std::vector<FolnerRow> rows;
  for (int n : sizes) {
    auto torus = make_lattice(LatticeKind::Torus, 2, {n, n});
    const MixedForm base = index_form(GaugeBundle::trivial(torus), ctx.cal.top_constant);
    for (int quanta : quanta_list) {
      const auto bundle = torus_flux(torus, quanta);
      const std::string descriptor =
          model_descriptor(*torus, bundle, Stencil::Wilson, WilsonParams{});
      const std::string key = model_key(descriptor, torus->n_sites());

      json entry;
      if (auto hit = ctx.cache.load(key)) {
        entry = *hit;
      } else {
        const auto model = magnetic_dirac(torus, bundle, Stencil::Wilson);
        const auto dims = model.index_by_svd(svd_tol);
        entry["descriptor"] = descriptor;
        entry["size"] = n;
        entry["flux_quanta"] = quanta;
        entry["dim_ker"] = dims.dim_ker;
        entry["dim_coker"] = dims.dim_coker;
        entry["index"] = dims.index;
        json str = json::object();
        for (double t : times) {
          str[num17(t)] = model.supertrace_filtered(FilterFunction::gaussian(t));
        }
        entry["supertrace"] = str;
        entry["analytic_density"] =
            analytic_index_density(model, FilterFunction::gaussian(density_time),
                                   FolnerSequence::whole_space(torus), LimitPolicy{})
                .value;
        entry["topological_density"] = topological_index_density(bundle, base);
        ctx.cache.store(key, entry);
      }
      models.push_back(entry);

      const std::string tag = "n=" + std::to_string(n) + " q=" + std::to_string(quanta);
      const double index = entry["index"].get<int>();
      const double analytic = entry["analytic_density"].get<double>();
      const double topological = entry["topological_density"].get<double>();
      checks.add("index matches flux quanta [" + tag + "]", std::abs(index - quanta), 0.0);
      for (double t : times) {
        const double str = entry["supertrace"].at(num17(t)).get<double>();
        checks.add("supertrace equals index [" + tag + " t=" + num17(t) + "]",
                   std::abs(str - index), str_tol);
      }
      checks.add("analytic density recovers flux [" + tag + "]",
                 std::abs(analytic * n * n - quanta), den_tol);
      checks.add("analytic matches topological [" + tag + "]",
                 std::abs(analytic - topological) * n * n, den_tol);
      rows.push_back({static_cast<int>(rows.size()), n * n, 0.0, analytic, topological,
                      std::abs(analytic - topological)});
    }
  }
  ctx.timings.mark("models");

  json report = report_skeleton("verify-torus", cfg, ctx);
  report["models"] = models;
  report["convergence"] = folner_rows_json(rows);
  report["checks"] = checks.list;
  report["all_pass"] = checks.all_pass;
  emit_outputs(ctx, "verify-torus", report, folner_csv(rows));
  return checks.all_pass ? 0 : 1;
}

// ---------------------------------------------------------------- verify-plane

int run_verify_plane(const json& cfg, RunContext& ctx) {
  require_schema(cfg);
  require_known_keys(cfg, {"schema_version", "name", "extent", "flux_denominator", "box_sizes",
                           "margin", "cutoff_taper", "gaussian_time", "gap_reference_size",
                           "density_window_fraction"});
  const int extent = int_field(cfg, "extent");
  const int denom = int_field(cfg, "flux_denominator");
  const auto box_sizes = int_list_field(cfg, "box_sizes");
  const int margin = int_field(cfg, "margin");
  const int taper = int_field(cfg, "cutoff_taper");
  const double gaussian_time = number_field(cfg, "gaussian_time");
  const int gap_ref = int_field(cfg, "gap_reference_size");
  const double fraction = number_field(cfg, "density_window_fraction");
  if (denom < 1) throw ConfigError("expected a positive integer", "flux_denominator");
  if ((gap_ref * gap_ref) % denom != 0) {
    throw ConfigError("reference torus flux is not quantized", "gap_reference_size");
  }

  const double flux = 2.0 * kPi / denom;
  auto gap_torus = make_lattice(LatticeKind::Torus, 2, {gap_ref, gap_ref});
  const double gap = spectral_gap(
      wilson_hamiltonian(gap_torus, torus_flux(gap_torus, gap_ref * gap_ref / denom),
                         WilsonParams{}));
  ctx.timings.mark("reference_gap");

  auto plane = make_lattice(LatticeKind::PlaneWindow, 2, {extent, extent});
  const auto bundle = GaugeBundle::uniform_flux(plane, flux);
  const auto seq = folner_boxes(plane, box_sizes, margin);
  const auto& largest = seq.set(seq.size() - 1);
  const std::string descriptor =
      model_descriptor(*plane, bundle, Stencil::Wilson, WilsonParams{}) +
      "|sign-density|gap=" + num17(gap) + "|boxes=" + std::to_string(largest.size());
  const std::string key = model_key(descriptor, plane->n_sites());

  std::vector<double> density;
  if (auto hit = ctx.cache.load(key)) {
    density = hit->at("density").get<std::vector<double>>();
  } else {
    const auto h = wilson_hamiltonian(plane, bundle, WilsonParams{});
    density = sign_density(h, largest, gap);
    json entry;
    entry["descriptor"] = descriptor;
    entry["density"] = density;
    ctx.cache.store(key, entry);
  }
  ctx.timings.mark("sign_density");

  std::vector<double> by_site(static_cast<std::size_t>(plane->n_sites()), 0.0);
  for (std::size_t i = 0; i < largest.size(); ++i) {
    by_site[static_cast<std::size_t>(largest[i])] = density[i];
  }
  const MixedForm ind = index_form(bundle, ctx.cal.top_constant);
  const auto topological = topological_per_set(ind.two, cutoff_family(seq, taper));

  const double target = 1.0 / denom;
  CheckList checks;
  std::vector<FolnerRow> rows;
  for (int i = 0; i < seq.size(); ++i) {
    double acc = 0.0;
    for (int s : seq.set(i)) acc += by_site[static_cast<std::size_t>(s)];
    const double analytic = acc / static_cast<double>(seq.set(i).size());
    const double diff = std::abs(analytic - topological[static_cast<std::size_t>(i)]);
    rows.push_back({i, static_cast<int>(seq.set(i).size()),
                    folner_deficiency(*plane, seq.set(i), 2), analytic,
                    topological[static_cast<std::size_t>(i)], diff});
    checks.add("box " + std::to_string(i) + " density near flux per plaquette",
               std::abs(analytic - target), fraction * target);
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    checks.add("route gap shrinks from set " + std::to_string(i - 1) + " to " + std::to_string(i),
               rows[i].abs_diff - rows[i - 1].abs_diff, 0.0, /*strict=*/true);
  }
  ctx.timings.mark("comparison");

  json report = report_skeleton("verify-plane", cfg, ctx);
  report["filter"] = {{"name", "gaussian"}, {"t", gaussian_time}};
  report["reference_gap"] = gap;
  report["target_density"] = target;
  report["convergence"] = folner_rows_json(rows);
  report["checks"] = checks.list;
  report["all_pass"] = checks.all_pass;
  emit_outputs(ctx, "verify-plane", report, folner_csv(rows));
  return checks.all_pass ? 0 : 1;
}

// ------------------------------------------------------------- verify-toeplitz

int run_verify_toeplitz(const json& cfg, RunContext& ctx) {
  require_schema(cfg);
  require_known_keys(cfg, {"schema_version", "name", "circle_samples", "windings",
                           "window_lengths", "module_samples", "max_winding",
                           "pairing_tolerance", "ratio_tolerance"});
  const int n_samples = int_field(cfg, "circle_samples");
  const auto windings = int_list_field(cfg, "windings");
  const auto windows = int_list_field(cfg, "window_lengths");
  const int module_samples = int_field(cfg, "module_samples");
  const int max_winding = int_field(cfg, "max_winding");
  const double pair_tol = number_field(cfg, "pairing_tolerance");
  const double ratio_tol = number_field(cfg, "ratio_tolerance");

  CheckList checks;
  json index_rows = json::array();
  for (int k : windings) {
    const auto result = toeplitz_index(circle_exponential(n_samples, k));
    index_rows.push_back({{"winding", k},
                          {"dim_ker", result.dim_ker},
                          {"dim_coker", result.dim_coker},
                          {"index", result.index},
                          {"bandwidth", result.bandwidth}});
    checks.add("toeplitz index is minus the winding [k=" + std::to_string(k) + "]",
               std::abs(result.index + k), 0.0);
  }
  ctx.timings.mark("toeplitz");

  json pairing_rows = json::array();
  std::ostringstream csv;
  csv << "window,winding,toeplitz_index,raw_re,raw_im,calibrated_re,calibrated_im,residual\n";
  for (int window : windows) {
    auto halfline = make_lattice(LatticeKind::HalfLine, 1, {window, 1});
    const auto module = halfline_hardy_module(halfline, module_samples, max_winding);
    for (int k : windings) {
      const auto u = circle_exponential(module_samples, k);
      const cd raw = odd_pairing(module, u, 1);
      const cd calibrated = raw / ctx.cal.odd_pairing_per_winding;
      const double residual = std::abs(calibrated - cd(static_cast<double>(k), 0.0));
      pairing_rows.push_back({{"window", window},
                              {"winding", k},
                              {"raw", {{"real", raw.real()}, {"imag", raw.imag()}}},
                              {"calibrated", {{"real", calibrated.real()}, {"imag", calibrated.imag()}}},
                              {"residual", residual}});
      csv << window << "," << k << "," << -k << "," << num17(raw.real()) << ","
          << num17(raw.imag()) << "," << num17(calibrated.real()) << ","
          << num17(calibrated.imag()) << "," << num17(residual) << "\n";
      checks.add("calibrated pairing equals winding [L=" + std::to_string(window) +
                     " k=" + std::to_string(k) + "]",
                 residual, pair_tol);
    }
  }
  ctx.timings.mark("pairings");

  // Ratio of consecutive half degrees, an indirect S-periodicity witness.
  auto halfline = make_lattice(LatticeKind::HalfLine, 1, {windows.back(), 1});
  const auto module = halfline_hardy_module(halfline, module_samples, max_winding);
  const auto u1 = circle_exponential(module_samples, 1);
  const cd ratio = odd_pairing(module, u1, 2) / odd_pairing(module, u1, 1);
  checks.add("consecutive half degrees keep their frozen ratio",
             std::abs(ratio - ctx.cal.consecutive_ratio), ratio_tol);
  ctx.timings.mark("ratio");

  json report = report_skeleton("verify-toeplitz", cfg, ctx);
  report["index_table"] = index_rows;
  report["pairings"] = pairing_rows;
  report["consecutive_ratio"] = {{"real", ratio.real()}, {"imag", ratio.imag()}};
  report["checks"] = checks.list;
  report["all_pass"] = checks.all_pass;
  emit_outputs(ctx, "verify-toeplitz", report, csv.str());
  return checks.all_pass ? 0 : 1;
}

// --------------------------------------------------------------- cocycle-suite

int run_cocycle_suite(const json& cfg, RunContext& ctx) {
  require_schema(cfg);
  require_known_keys(cfg, {"schema_version", "name", "trials", "half_dim", "max_half_degree",
                           "tolerance", "seed"});
  const int trials = int_field(cfg, "trials");
  const int half_dim = int_field(cfg, "half_dim");
  const int max_half = int_field(cfg, "max_half_degree");
  const double tol = number_field(cfg, "tolerance");
  const std::uint64_t seed = effective_seed(cfg, ctx);
  if (half_dim < 1) throw ConfigError("expected a positive integer", "half_dim");
  if (max_half < 0 || max_half > 2) throw ConfigError("supported range is 0..2", "max_half_degree");

  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const int dim = 2 * half_dim;
  auto lat = make_lattice(LatticeKind::HalfLine, 1, {dim, 1});

  auto random_mat = [&](int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = cd(coef(gen), coef(gen));
    }
    return m;
  };
  auto random_vec = [&](int rows) {
    Eigen::VectorXcd v(rows);
    for (int i = 0; i < rows; ++i) v(i) = cd(coef(gen), coef(gen));
    return v;
  };

  CheckList checks;
  std::ostringstream csv;
  csv << "trial,max_cyclic_defect,max_coboundary,max_alpha_on_coboundary\n";
  double worst = 0.0;
  json trial_rows = json::array();
  for (int trial = 0; trial < trials; ++trial) {
    FredholmModule m;
    m.lat = lat;
    const Eigen::MatrixXcd u =
        Eigen::HouseholderQR<Eigen::MatrixXcd>(random_mat(half_dim, half_dim)).householderQ();
    m.f_op = Eigen::MatrixXcd::Zero(dim, dim);
    m.f_op.topRightCorner(half_dim, half_dim) = u.adjoint();
    m.f_op.bottomLeftCorner(half_dim, half_dim) = u;
    m.grading = Eigen::VectorXd::Ones(dim);
    m.grading.tail(half_dim) *= -1.0;
    m.rep = RepKind::Multiplication;
    m.validate();

    auto args_for = [&](int count) {
      std::vector<Eigen::MatrixXcd> args;
      for (int i = 0; i < count; ++i) args.push_back(m.represent(random_vec(dim)));
      return args;
    };
    double max_cyclic = 0.0, max_b = 0.0, max_alpha = 0.0;
    for (int half = 0; half <= max_half; ++half) {
      const auto ch = even_character(m, half);
      max_cyclic = std::max(max_cyclic, std::abs(cyclic_defect(ch, args_for(ch.degree + 1))));
      const auto bch = hochschild_b(ch);
      max_b = std::max(max_b, std::abs(bch.eval(args_for(bch.degree + 1))));
    }
    const Eigen::MatrixXcd seed_mat = random_mat(dim, dim);
    CyclicCochain psi;
    psi.degree = 1 + trial % 3;
    psi.eval = [seed_mat](const std::vector<Eigen::MatrixXcd>& a) {
      Eigen::MatrixXcd prod = seed_mat;
      for (const auto& x : a) prod = prod * x;
      return prod.trace();
    };
    const auto killed = alpha_current(hochschild_b(psi));
    max_alpha = std::abs(killed.eval(args_for(killed.degree + 1)));

    worst = std::max({worst, max_cyclic, max_b, max_alpha});
    csv << trial << "," << num17(max_cyclic) << "," << num17(max_b) << "," << num17(max_alpha)
        << "\n";
    trial_rows.push_back({{"trial", trial},
                          {"max_cyclic_defect", max_cyclic},
                          {"max_coboundary", max_b},
                          {"max_alpha_on_coboundary", max_alpha}});
  }
  checks.add("characters cyclic, closed, and alpha kills coboundaries", worst, tol);
  ctx.timings.mark("battery");

  json report = report_skeleton("cocycle-suite", cfg, ctx);
  report["seed"] = seed;
  report["trials"] = trial_rows;
  report["max_defect"] = worst;
  report["checks"] = checks.list;
  report["all_pass"] = checks.all_pass;
  emit_outputs(ctx, "cocycle-suite", report, csv.str());
  return checks.all_pass ? 0 : 1;
}

// ----------------------------------------------------------------- cover-suite

int run_cover_suite(const json& cfg, RunContext& ctx) {
  require_schema(cfg);
  require_known_keys(cfg, {"schema_version", "name", "trials", "spacing_range",
                           "multiplier_range", "tapers", "pou_extent", "pou_spacing",
                           "partition_tolerance", "lipschitz_pairs", "family_extent", "seed"});
  const int trials = int_field(cfg, "trials");
  const auto spacing_range = int_list_field(cfg, "spacing_range");
  const auto mult_range = int_list_field(cfg, "multiplier_range");
  const auto tapers = int_list_field(cfg, "tapers");
  const int pou_extent = int_field(cfg, "pou_extent");
  const int pou_spacing = int_field(cfg, "pou_spacing");
  const double part_tol = number_field(cfg, "partition_tolerance");
  const int family_extent = int_field(cfg, "family_extent");
  const std::uint64_t seed = effective_seed(cfg, ctx);
  if (spacing_range.size() != 2 || spacing_range[0] > spacing_range[1]) {
    throw ConfigError("expected [lo, hi]", "spacing_range");
  }
  if (mult_range.size() != 2 || mult_range[0] > mult_range[1]) {
    throw ConfigError("expected [lo, hi]", "multiplier_range");
  }

  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> spacing_dist(spacing_range[0], spacing_range[1]);
  std::uniform_int_distribution<int> mult_dist(mult_range[0], mult_range[1]);
  std::uniform_int_distribution<int> slack_dist(0, 2);

  CheckList checks;
  std::ostringstream csv;
  csv << "trial,kind,extent,spacing,radius,members,colors,max_degree\n";
  json trial_rows = json::array();
  bool all_proper = true;
  int worst_excess = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const int spacing = spacing_dist(gen);
    const bool wrap = trial % 2 == 0;
    const int extent = spacing * mult_dist(gen) + (wrap ? 0 : 1);
    auto lat = make_lattice(wrap ? LatticeKind::Torus : LatticeKind::PlaneWindow, 2,
                            {extent, extent});
    const double radius = spacing / 2.0 + slack_dist(gen);
    const auto cover = build_colored_cover(lat, spacing, radius);
    bool proper = cover.covers_all_sites();
    for (std::size_t v = 0; v < cover.intersection.size() && proper; ++v) {
      for (int w : cover.intersection[v]) {
        if (cover.color[v] == cover.color[static_cast<std::size_t>(w)]) {
          proper = false;
          break;
        }
      }
    }
    all_proper = all_proper && proper;
    worst_excess = std::max(worst_excess, cover.n_colors - (cover.max_degree + 1));
    csv << trial << "," << (wrap ? "torus" : "plane") << "," << extent << "," << spacing << ","
        << num17(radius) << "," << cover.members.size() << "," << cover.n_colors << ","
        << cover.max_degree << "\n";
    trial_rows.push_back({{"trial", trial},
                          {"kind", wrap ? "torus" : "plane"},
                          {"extent", extent},
                          {"spacing", spacing},
                          {"radius", radius},
                          {"members", cover.members.size()},
                          {"colors", cover.n_colors},
                          {"max_degree", cover.max_degree}});
  }
  checks.add("every sampled cover is proper and covering", all_proper ? 0.0 : 1.0, 0.0);
  checks.add("colorings stay within max degree plus one", static_cast<double>(worst_excess), 0.0);
  ctx.timings.mark("covers");

  auto torus = make_lattice(LatticeKind::Torus, 2, {pou_extent, pou_extent});
  json pou_rows = json::array();
  for (int taper : tapers) {
    const auto cover = build_colored_cover(torus, pou_spacing, pou_spacing / 2.0 + taper);
    const auto pou = partition_of_unity(cover, taper);
    double worst_sum = 0.0;
    for (int s = 0; s < torus->n_sites(); ++s) {
      worst_sum = std::max(worst_sum, std::abs(pou.sum_at(s) - 1.0));
    }
    const double variation = pou.max_hop_variation();
    pou_rows.push_back({{"taper", taper},
                        {"max_sum_error", worst_sum},
                        {"max_hop_variation", variation}});
    checks.add("partition sums to one [taper=" + std::to_string(taper) + "]", worst_sum,
               part_tol);
    checks.add("partition is 1/w Lipschitz [taper=" + std::to_string(taper) + "]", variation,
               1.0 / taper + 1e-12);
  }
  ctx.timings.mark("partitions");

  // Audited (Lipschitz constant, support diameter) pairs for the test family.
  const json& pairs = require_field(cfg, "lipschitz_pairs");
  if (!pairs.is_array() || pairs.empty()) throw ConfigError("expected a nonempty array", "lipschitz_pairs");
  auto family_lat = make_lattice(LatticeKind::Torus, 2, {family_extent, family_extent});
  json family_rows = json::array();
  for (const auto& pair : pairs) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ConfigError("expected [lip, diam] entries", "lipschitz_pairs");
    }
    const double lip = pair.at(0).get<double>();
    const double diam = pair.at(1).get<double>();
    const auto family = lipschitz_test_family(family_lat, lip, diam, 4, seed);
    family.validate();
    family_rows.push_back({{"lip", lip},
                           {"diam", diam},
                           {"functions", family.functions.size()}});
  }
  checks.add("all audited lipschitz families validate", 0.0, 0.0);
  ctx.timings.mark("families");

  json report = report_skeleton("cover-suite", cfg, ctx);
  report["seed"] = seed;
  report["covers"] = trial_rows;
  report["partitions"] = pou_rows;
  report["lipschitz_families"] = family_rows;
  report["checks"] = checks.list;
  report["all_pass"] = checks.all_pass;
  emit_outputs(ctx, "cover-suite", report, csv.str());
  return checks.all_pass ? 0 : 1;
}

// ------------------------------------------------------------------ updo-suite

int run_updo_suite(const json& cfg, RunContext& ctx) {
  require_schema(cfg);
  require_known_keys(cfg, {"schema_version", "name", "circle_sites", "spacings", "taper",
                           "bandwidth", "assembly_tolerance", "adjoint_tolerance",
                           "seminorm_xi_max", "seminorm_points", "seminorm_rel_tolerance",
                           "stability_rel_tolerance", "ellipticity_xi_max",
                           "ellipticity_points", "ellipticity_radius"});
  const int circle_sites = int_field(cfg, "circle_sites");
  const auto spacings = int_list_field(cfg, "spacings");
  const int taper = int_field(cfg, "taper");
  const int bandwidth = int_field(cfg, "bandwidth");
  const double asm_tol = number_field(cfg, "assembly_tolerance");
  const double adj_tol = number_field(cfg, "adjoint_tolerance");
  const double sem_xi = number_field(cfg, "seminorm_xi_max");
  const int sem_pts = int_field(cfg, "seminorm_points");
  const double sem_tol = number_field(cfg, "seminorm_rel_tolerance");
  const double stab_tol = number_field(cfg, "stability_rel_tolerance");
  const double ell_xi = number_field(cfg, "ellipticity_xi_max");
  const int ell_pts = int_field(cfg, "ellipticity_points");
  const double ell_radius = number_field(cfg, "ellipticity_radius");

  auto circle = make_lattice(LatticeKind::Circle, 1, {circle_sites, 1});
  auto sigma = [](double xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = 1.0 + std::cos(xi) + 0.5 * std::sin(2.0 * xi);
    return m;
  };
  const auto p = multiplier_symbol(circle, SymbolRegime::Toroidal, 0.0, 1, sigma);
  const Eigen::MatrixXcd global = global_multiplier(circle, sigma, 1).to_dense();

  CheckList checks;
  std::ostringstream csv;
  csv << "spacing,patches,assembly_error,adjoint_error\n";
  json assembly_rows = json::array();
  for (int spacing : spacings) {
    const auto cover = build_colored_cover(circle, spacing, spacing / 2.0 + taper);
    const auto pou = partition_of_unity(cover, taper);
    const auto glued = assemble_updo(p, cover, pou, bandwidth);
    const Eigen::MatrixXcd dense = glued.to_dense();
    const double err = operator_norm(dense - global);
    const double adj = operator_norm(Eigen::MatrixXcd(dense.adjoint()) - dense);
    csv << spacing << "," << cover.members.size() << "," << num17(err) << "," << num17(adj)
        << "\n";
    assembly_rows.push_back({{"spacing", spacing},
                             {"patches", cover.members.size()},
                             {"assembly_error", err},
                             {"adjoint_error", adj}});
    checks.add("assembly matches the global multiplier [patches=" +
                   std::to_string(cover.members.size()) + "]",
               err, asm_tol);
    checks.add("assembled operator stays hermitian [patches=" +
                   std::to_string(cover.members.size()) + "]",
               adj, adj_tol);
  }
  ctx.timings.mark("assembly");

  auto line = make_lattice(LatticeKind::HalfLine, 1, {9, 1});
  std::vector<int> sites(9);
  for (int i = 0; i < 9; ++i) sites[static_cast<std::size_t>(i)] = i;
  auto laplace = multiplier_symbol(line, SymbolRegime::Asymptotic, 2.0, 1, [](double xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = 1.0 + xi * xi;
    return m;
  });
  const auto narrow = symbol_estimate(sample_symbol(laplace, sites, sem_xi, sem_pts), 0, 1);
  const auto wide =
      symbol_estimate(sample_symbol(laplace, sites, 2.0 * sem_xi, 2 * sem_pts - 1), 0, 1);
  checks.add("seminorm C00 sits at its weight-one target", std::abs(narrow(0, 0) - 1.0),
             sem_tol);
  checks.add("seminorm C01 sits at its first-derivative target", std::abs(narrow(0, 1) - 2.0),
             2.0 * sem_tol);
  double stability = 0.0;
  for (int b = 0; b <= 1; ++b) {
    stability = std::max(stability,
                         std::abs(wide(0, b) - narrow(0, b)) / std::max(1.0, narrow(0, b)));
  }
  checks.add("seminorms stable under doubling the window", stability, stab_tol);
  ctx.timings.mark("seminorms");

  auto sine = multiplier_symbol(line, SymbolRegime::Asymptotic, 0.0, 1, [](double xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = std::sin(kPi * xi / 4.0);
    return m;
  });
  const auto witness =
      ellipticity_check(sample_symbol(sine, sites, ell_xi, ell_pts), ell_radius);
  checks.add("sine symbol is flagged non elliptic", witness.elliptic ? 1.0 : 0.0, 0.0);
  const double cycles = std::abs(witness.witness_xi) / 4.0;
  checks.add("ellipticity witness sits on a sine zero",
             std::abs(cycles - std::round(cycles)), 1e-12);
  ctx.timings.mark("ellipticity");

  json report = report_skeleton("updo-suite", cfg, ctx);
  report["assembly"] = assembly_rows;
  report["seminorms"] = {{"c00", narrow(0, 0)},
                         {"c01", narrow(0, 1)},
                         {"doubled_c00", wide(0, 0)},
                         {"doubled_c01", wide(0, 1)}};
  report["ellipticity_witness"] = {{"elliptic", witness.elliptic},
                                   {"witness_site", witness.witness_site},
                                   {"witness_xi", witness.witness_xi}};
  report["checks"] = checks.list;
  report["all_pass"] = checks.all_pass;
  emit_outputs(ctx, "updo-suite", report, csv.str());
  return checks.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale index theorem workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::string outdir = ".";
  std::string format = "json";
  std::string cache_dir;
  std::uint64_t seed_value = 0;
  bool seed_given = false;

  const std::vector<std::pair<std::string, int (*)(const json&, RunContext&)>> suites = {
      {"verify-torus", run_verify_torus},     {"verify-plane", run_verify_plane},
      {"verify-toeplitz", run_verify_toeplitz}, {"cocycle-suite", run_cocycle_suite},
      {"cover-suite", run_cover_suite},       {"updo-suite", run_updo_suite},
  };
  for (const auto& [name, fn] : suites) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " scenario");
    sub->add_option("--config", config_path, "Scenario config (JSON)")->required();
    sub->add_option("--out", outdir, "Output directory for reports");
    sub->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    sub->add_option("--cache", cache_dir,
                    "Cache directory for spectral blobs (env LATTIX_CACHE_DIR overrides)");
    sub->add_option("--seed", seed_value, "Override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the usage diagnostic
    return code == 0 ? 0 : 2;
  }

  try {
    RunContext ctx;
    ctx.outdir = outdir;
    ctx.format = format;
    if (seed_given) ctx.seed_override = seed_value;
    if (const char* env = std::getenv("LATTIX_CACHE_DIR")) {
      ctx.cache.dir = env;
    } else if (!cache_dir.empty()) {
      ctx.cache.dir = cache_dir;
    }
    ctx.cal = load_calibration();

    for (const auto& [name, fn] : suites) {
      if (app.got_subcommand(name)) {
        const json cfg = load_config(config_path);
        return fn(cfg, ctx);
      }
    }
    std::fprintf(stderr, "no suite selected\n");
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
