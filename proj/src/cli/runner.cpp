#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "vvlab/cli.hpp"
#include "vvlab/diagnostics.hpp"
#include "vvlab/errors.hpp"
#include "vvlab/parallel.hpp"

#ifndef VVLAB_VERSION
#define VVLAB_VERSION "unknown"
#endif

namespace vvlab::cli {
namespace {

struct TableData {
  std::vector<double> x, y;
};

// Two numeric columns separated by a comma or whitespace. Lines starting
// with '#' and a non-numeric header line are skipped.
TableData read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"profile.path: cannot open table file '" + path.string() + "'"});
  TableData t;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::string a, b;
    if (!(ss >> a) || a[0] == '#') continue;
    double x = 0.0, y = 0.0;
    try {
      std::size_t ua = 0, ub = 0;
      if (!(ss >> b)) throw std::invalid_argument("one column");
      x = std::stod(a, &ua);
      y = std::stod(b, &ub);
      if (ua != a.size() || ub != b.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      if (t.x.empty() && number == 1) continue;
      throw ConfigError({"profile.path: '" + path.string() + "' line " + std::to_string(number) +
                         ": expected two numbers"});
    }
    t.x.push_back(x);
    t.y.push_back(y);
  }
  if (t.x.size() < 2) throw ConfigError({"profile.path: '" + path.string() + "' has fewer than two rows"});
  return t;
}

disk::RadialProfile disk_profile(const ProfileConfig& p) {
  if (p.type == "constant") return disk::RadialProfile::constant(p.value);
  if (p.type == "polynomial") return disk::RadialProfile::polynomial(p.coefficients);
  const TableData t = read_table(p.resolved);
  return disk::RadialProfile::table(t.x, t.y);
}

shear::ShearProfile shear_profile(const ProfileConfig& p) {
  if (p.type == "constant") return shear::ShearProfile::constant(p.value);
  if (p.type == "exp_decay") return shear::ShearProfile::exp_decay(p.amplitude, p.rate);
  if (p.type == "poly_gauss") return shear::ShearProfile::poly_gauss(p.coefficients, p.width);
  const TableData t = read_table(p.resolved);
  return shear::ShearProfile::table(t.x, t.y, p.bound, p.decay_rate);
}

diag::TestFunction test_function(const ExperimentConfig& c) {
  if (!c.test_function) {
    return c.flow == rates::Flow::disk ? diag::TestFunction::radial_polynomial({0.0, 1.0})
                                       : diag::TestFunction::channel({1.0}, 1.0);
  }
  const auto& f = *c.test_function;
  if (f.type == "bessel_mode") return diag::TestFunction::bessel_mode();
  if (f.type == "radial_polynomial") return diag::TestFunction::radial_polynomial(f.coefficients);
  return diag::TestFunction::channel(f.coefficients,
                                     f.scale > 0.0 ? f.scale : std::numeric_limits<double>::infinity());
}

std::string p_label(double p) {
  if (std::isinf(p)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

struct Generator {
  const char* label;  // no commas: it becomes a CSV column name
  disk::RadialProfile profile;
};

// Generators of the weak-pairing test fields v = Biot-Savart(g).
const std::vector<Generator>& weak_generators() {
  static const std::vector<Generator> g{{"1", disk::RadialProfile::constant(1.0)},
                                        {"r^2", disk::RadialProfile::polynomial({0.0, 1.0})},
                                        {"1-r^2", disk::RadialProfile::polynomial({1.0, -1.0})}};
  return g;
}

struct Output {
  std::string name;
  double time = 0.0;
  double value = 0.0;
  double error = 0.0;
};

double point_time(const ExperimentConfig& c) { return c.t ? *c.t : 0.5 * c.T; }

// Modes a disk row needs for every requested diagnostic.
std::size_t disk_modes_needed(const ExperimentConfig& c, const rates::Experiment& e, double nu) {
  std::size_t K = c.K;
  for (const auto& d : c.diagnostics) {
    if (d == "sup_error" || d == "mass_budget") K = std::max(K, rates::disk_modes(e, nu));
    if (d == "kato_layer") K = std::max(K, diag::kato_modes_required(nu, c.layer.kato_constant, c.T));
    if (d == "layer_l1") K = std::max(K, diag::layer_modes_required(nu, c.layer.delta, c.T));
    if (d == "lp_norm" || d == "sheet_pairing" || d == "mass_budget")
      K = std::max(K, diag::modes_for_time(nu, point_time(c)));
    if (d == "weak_pairing") K = std::max(K, diag::modes_for_time(nu, c.T));
  }
  return K;
}

std::vector<Output> evaluate_disk(const ExperimentConfig& c, const rates::Experiment& e,
                                  const disk::DiskSpectralSolution& ns, const disk::EulerDiskSolution& euler) {
  const double nu = ns.nu(), T = c.T, t = point_time(c);
  std::vector<Output> out;
  for (const auto& d : c.diagnostics) {
    try {
      if (d == "sup_error") {
        const auto s = rates::sup_l2_error(ns, euler, T, e.time_grid_size);
        out.push_back({d, T, s.value, s.tail});
      } else if (d == "kato_layer") {
        const auto v = diag::kato_layer_enstrophy(ns, T, c.layer);
        out.push_back({d, T, v.value, v.error});
      } else if (d == "layer_l1") {
        const auto v = diag::layer_l1_mass(ns, T, c.layer.delta);
        out.push_back({d, T, v.value, v.error});
      } else if (d == "sheet_pairing") {
        const auto v = diag::sheet_pairing(ns, euler, test_function(c), t);
        out.push_back({"sheet_pairing.gap", t, v.gap, v.error});
        out.push_back({"sheet_pairing.lhs", t, v.lhs, v.error});
        out.push_back({"sheet_pairing.rhs", t, v.rhs, v.error});
      } else if (d == "boundary_flux") {
        const auto v = diag::boundary_flux(ns, T, 1.0);
        out.push_back({d, T, v.value, v.error});
      } else if (d == "mass_budget") {
        // F(nu) is the measured sup error, not an assumed rate.
        const double f_nu = rates::sup_l2_error(ns, euler, T, e.time_grid_size).value;
        const auto b = diag::mass_budget(ns, euler, c.layer, t, f_nu);
        out.push_back({"mass_budget.inside", t, b.mass_inside, b.error});
        out.push_back({"mass_budget.outside", t, b.mass_outside, b.error});
        out.push_back({"mass_budget.cutoff_gap", t, b.cutoff_gap, b.error});
        out.push_back({"mass_budget.bound_scale", t, b.bound_scale, 0.0});
      } else if (d == "lp_norm") {
        const auto v = diag::lp_norm_scan(ns, t, c.p_list);
        for (std::size_t i = 0; i < v.size(); ++i)
          out.push_back({"lp_norm:p=" + p_label(c.p_list[i]), t, v[i].value, v[i].error});
      } else if (d == "weak_pairing") {
        for (const auto& g : weak_generators()) {
          const auto field = diag::AzimuthalTestField::from_vorticity(g.profile, ns.table());
          const auto v = diag::weak_velocity_pairing(ns, euler, field, T);
          out.push_back({std::string("weak_pairing:") + g.label, T, v.value, v.error});
        }
      }
    } catch (const std::exception& ex) {
      throw std::runtime_error(d + " at nu = " + format_number(nu) + ": " + ex.what());
    }
  }
  return out;
}

std::vector<Output> evaluate_shear(const ExperimentConfig& c, const rates::Experiment& e,
                                   const shear::ShearSolution& ns) {
  const double nu = ns.nu(), T = c.T, t = point_time(c);
  std::vector<Output> out;
  for (const auto& d : c.diagnostics) {
    try {
      if (d == "sup_error") {
        const auto s = rates::sup_l2_error(ns, T, e.time_grid_size);
        out.push_back({d, T, s.value, s.tail});
      } else if (d == "kato_layer") {
        const auto v = diag::kato_layer_enstrophy(ns, T, c.layer);
        out.push_back({d, T, v.value, v.error});
      } else if (d == "layer_l1") {
        const auto v = diag::layer_l1_mass(ns, T, c.layer.delta);
        out.push_back({d, T, v.value, v.error});
      } else if (d == "sheet_pairing") {
        const auto v = diag::sheet_pairing(ns, test_function(c), t);
        out.push_back({"sheet_pairing.gap", t, v.gap, v.error});
        out.push_back({"sheet_pairing.lhs", t, v.lhs, v.error});
        out.push_back({"sheet_pairing.rhs", t, v.rhs, v.error});
      } else if (d == "boundary_flux") {
        const auto v = diag::boundary_flux(ns, T, 1.0);
        out.push_back({d, T, v.value, v.error});
      } else if (d == "lp_norm") {
        const auto v = diag::lp_norm_scan(ns, t, c.p_list);
        for (std::size_t i = 0; i < v.size(); ++i)
          out.push_back({"lp_norm:p=" + p_label(c.p_list[i]), t, v[i].value, v[i].error});
      }
    } catch (const std::exception& ex) {
      throw std::runtime_error(d + " at nu = " + format_number(nu) + ": " + ex.what());
    }
  }
  return out;
}

// Per-viscosity evaluation shared by sweep and diagnose.
std::vector<Output> evaluate(const ExperimentConfig& c, const rates::Experiment& e, double nu,
                             const rates::RowContext* ctx) {
  if (c.flow == rates::Flow::shear) {
    if (ctx && ctx->shear_ns) return evaluate_shear(c, e, *ctx->shear_ns);
    const shear::ShearSolution ns(*e.shear_profile, nu, c.half_width);
    return evaluate_shear(c, e, ns);
  }
  const std::size_t K = disk_modes_needed(c, e, nu);
  if (ctx && ctx->disk_ns && ctx->disk_ns->mode_count() >= K) return evaluate_disk(c, e, *ctx->disk_ns, *ctx->disk_euler);
  const disk::DiskSpectralSolution ns(*e.disk_profile, specfun::shared_j1_zeros(K), nu);
  const disk::EulerDiskSolution euler(*e.disk_profile);
  return evaluate_disk(c, e, ns, euler);
}

Json number_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json versions() {
  return Json{{"vvlab", VVLAB_VERSION},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
              {"cli11", CLI11_VERSION}};
}

rates::Experiment make_experiment(const ExperimentConfig& c) {
  rates::Experiment e;
  e.flow = c.flow;
  if (c.flow == rates::Flow::disk)
    e.disk_profile = disk_profile(c.profile);
  else
    e.shear_profile = shear_profile(c.profile);
  e.T = c.T;
  e.modes = c.K;
  e.half_width = c.half_width;
  e.time_grid_size = c.time_grid;
  return e;
}

Artifacts run_sweep(const ExperimentConfig& c) {
  rates::Experiment e = make_experiment(c);
  // sup_error is the sweep's own column.
  ExperimentConfig extra = c;
  extra.diagnostics.erase(std::remove(extra.diagnostics.begin(), extra.diagnostics.end(), "sup_error"),
                          extra.diagnostics.end());
  if (!extra.diagnostics.empty()) {
    if (c.flow == rates::Flow::disk) {
      std::size_t K = 0;
      for (double nu : c.nu_grid)
        if (nu > 0.0) K = std::max(K, disk_modes_needed(extra, e, nu));
      specfun::shared_j1_zeros(K);
    }
    e.per_row = [&extra, &e](const rates::RowContext& ctx) {
      std::vector<rates::NamedValue> values;
      for (const auto& o : evaluate(extra, e, ctx.nu, &ctx)) values.push_back({o.name, o.value, o.error});
      return values;
    };
  }
  const rates::SweepResult sweep = rates::nu_sweep(e, c.nu_grid);
  const auto running = rates::running_alpha(sweep.rows);

  std::ostringstream csv;
  csv << "nu,sup_error,alpha_running";
  if (!sweep.rows.empty())
    for (const auto& v : sweep.rows.front().values) csv << ',' << v.name << ',' << v.name << "_error";
  csv << '\n';
  Json rows = Json::array();
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& r = sweep.rows[i];
    csv << format_number(r.nu) << ',' << format_number(r.sup.value) << ',' << format_number(running[i]);
    Json values = Json::object();
    for (const auto& v : r.values) {
      csv << ',' << format_number(v.value) << ',' << format_number(v.error);
      values[v.name] = Json{{"value", number_json(v.value)}, {"error", number_json(v.error)}};
    }
    csv << '\n';
    rows.push_back(Json{{"nu", r.nu},
                        {"sup_error", r.sup.value},
                        {"sup_error_tail", r.sup.tail},
                        {"t_at_max", r.sup.t_at_max},
                        {"alpha_running", number_json(running[i])},
                        {"values", values}});
  }
  Json fit;
  if (sweep.fit)
    fit = Json{{"alpha", sweep.fit->alpha},
               {"prefactor", sweep.fit->prefactor},
               {"residual", sweep.fit->residual},
               {"points", sweep.fit->points}};
  else
    fit = Json{{"refused", sweep.fit_refusal}};
  Artifacts a;
  a.csv = csv.str();
  a.summary = Json{{"config_echo", c.echo()},
                   {"rows", rows},
                   {"fit", fit},
                   {"fingerprint", sweep.fingerprint},
                   {"versions", versions()}};
  return a;
}

Artifacts run_diagnose(const ExperimentConfig& c) {
  if (c.diagnostics.empty()) throw ConfigError({"diagnostics: nothing to compute"});
  const rates::Experiment e = make_experiment(c);
  std::vector<double> grid = c.nu_grid;
  // Build the largest zero table once; rows take prefixes of the cached one.
  if (c.flow == rates::Flow::disk) {
    std::size_t K = 0;
    for (double nu : grid) K = std::max(K, disk_modes_needed(c, e, nu));
    specfun::shared_j1_zeros(K);
  }
  std::vector<std::vector<Output>> results(grid.size());
  std::vector<std::string> failures(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      results[i] = evaluate(c, e, grid[i], nullptr);
    } catch (const std::exception& ex) {
      failures[i] = ex.what();
    }
  });
  for (const auto& f : failures)
    if (!f.empty()) throw std::runtime_error(f);

  std::ostringstream csv;
  csv << "diagnostic,nu,t_or_T,value,error_estimate\n";
  Json rows = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (const auto& o : results[i]) {
      csv << o.name << ',' << format_number(grid[i]) << ',' << format_number(o.time) << ','
          << format_number(o.value) << ',' << format_number(o.error) << '\n';
      rows.push_back(Json{{"diagnostic", o.name},
                          {"nu", grid[i]},
                          {"t_or_T", o.time},
                          {"value", number_json(o.value)},
                          {"error_estimate", number_json(o.error)}});
    }
  }
  Artifacts a;
  a.csv = csv.str();
  a.summary = Json{{"config_echo", c.echo()}, {"rows", rows}, {"fit", nullptr}, {"versions", versions()}};
  return a;
}

std::string zeros_csv(std::size_t count) {
  const auto table = specfun::shared_j1_zeros(count);
  std::ostringstream out;
  out << "k,j_1k,J0(j_1k)\n";
  for (std::size_t k = 1; k <= count; ++k)
    out << k << ',' << format_number(table->zero(k)) << ',' << format_number(table->j0_at_zero(k)) << '\n';
  return out.str();
}

}  // namespace vvlab::cli
