#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "vvlab/cli.hpp"

namespace vvlab::cli {
namespace {

const char* const kColumns = R"(Output columns
  sweep CSV:     nu,sup_error,alpha_running, then <name>,<name>_error for every
                 value produced by the requested diagnostics. alpha_running is
                 the slope against the previous row and is empty on the first.
  diagnose CSV:  diagnostic,nu,t_or_T,value,error_estimate
                 diagnostic is one of sup_error, kato_layer, layer_l1,
                 boundary_flux (T), sheet_pairing.{gap,lhs,rhs},
                 mass_budget.{inside,outside,cutoff_gap,bound_scale},
                 lp_norm:p=<p> (t), weak_pairing:{1,r^2,1-r^2} (T), the
                 test field being the velocity of that vorticity.
  zeros CSV:     k,j_1k,J0(j_1k)
Numbers carry 17 significant digits. VVLAB_THREADS caps the worker count.)";

// Flags shared by sweep and diagnose; each one, when given, replaces the
// matching config field.
struct Overrides {
  std::string config;
  std::string flow, profile, format, out, summary;
  std::vector<double> nu;
  std::vector<std::string> diag, p;
  std::optional<double> T, c, delta, delta_star, t, half_width;
  std::optional<std::size_t> K, time_grid;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--flow", flow, "disk or shear");
    app->add_option("--profile", profile,
                    "constant:V | polynomial:c0,c1,.. | exp_decay:A,rate | poly_gauss:w,c0,.. | table:PATH");
    app->add_option("--nu", nu, "viscosities (repeat or comma separated)")->delimiter(',');
    app->add_option("--diag", diag, "diagnostics (repeat or comma separated)")->delimiter(',');
    app->add_option("--p", p, "L^p exponents for lp_norm, 'inf' allowed")->delimiter(',');
    app->add_option("--T", T, "time horizon");
    app->add_option("--K", K, "minimum number of disk modes");
    app->add_option("--c", c, "Kato layer constant");
    app->add_option("--delta", delta, "layer width");
    app->add_option("--delta-star", delta_star, "inner layer width for the cutoff");
    app->add_option("--t", t, "time for fixed-time diagnostics (default T/2)");
    app->add_option("--half-width", half_width, "channel half width L");
    app->add_option("--time-grid", time_grid, "points in the sup-in-time grid");
    app->add_option("--format", format, "csv or json for the main output");
    app->add_option("--out", out, "main output file (default: standard output)");
    app->add_option("--summary", summary, "also write the JSON summary here");
  }

  ExperimentConfig build() const {
    Json doc = Json::object();
    std::filesystem::path base = ".";
    if (!config.empty()) {
      std::ifstream in(config);
      std::stringstream ss;
      ss << in.rdbuf();
      const std::string text = ss.str();
      try {
        doc = Json::parse(text);
      } catch (const Json::parse_error&) {
        parse_config(text);  // rethrows with line and column
      }
      if (!doc.is_object()) throw ConfigError({"(root): expected an object"});
      base = std::filesystem::path(config).parent_path();
      if (base.empty()) base = ".";
    }
    if (!flow.empty()) doc["flow"] = flow;
    if (!profile.empty()) doc["profile"] = profile_shorthand(profile);
    if (!nu.empty()) doc["nu_grid"] = nu;
    if (!diag.empty()) doc["diagnostics"] = diag;
    if (!p.empty()) {
      Json ps = Json::array();
      for (const auto& s : p) {
        if (s == "inf") {
          ps.push_back(s);
          continue;
        }
        try {
          ps.push_back(std::stod(s));
        } catch (const std::exception&) {
          ps.push_back(s);  // reported by validation
        }
      }
      doc["p"] = ps;
    }
    if (T) doc["T"] = *T;
    if (K) doc["K"] = *K;
    if (half_width) doc["half_width"] = *half_width;
    if (time_grid) doc["time_grid"] = *time_grid;
    if (t) doc["t"] = *t;
    if (c) doc["layer"]["c"] = *c;
    if (delta) doc["layer"]["delta"] = *delta;
    if (delta_star) doc["layer"]["delta_star"] = *delta_star;
    if (!out.empty()) doc["output"]["path"] = out;
    if (!format.empty()) doc["output"]["format"] = format;
    return parse_config_json(doc, base);
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

// All files are written here, after every row has been computed.
void emit(const ExperimentConfig& config, const Artifacts& a, const std::string& summary_path) {
  if (config.output_format == "json")
    write_text(config.output_path, a.summary.dump(2) + "\n");
  else
    write_text(config.output_path, a.csv);
  if (!summary_path.empty()) write_text(summary_path, a.summary.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vvlab: exact Navier-Stokes/Euler solutions and vanishing-viscosity diagnostics"};
  app.footer(kColumns);
  app.require_subcommand(1);

  Overrides sweep_flags, diag_flags;
  auto* sweep = app.add_subcommand("sweep", "sup-in-time L2 error over a viscosity grid, with a rate fit");
  sweep_flags.attach(sweep);
  auto* diagnose = app.add_subcommand("diagnose", "evaluate diagnostics for each viscosity");
  diag_flags.attach(diagnose);
  auto* selftest_cmd = app.add_subcommand("selftest", "run the quick example suite");
  std::size_t zero_count = 100;
  std::string zeros_out;
  auto* zeros = app.add_subcommand("zeros", "dump the J1 zero table");
  zeros->add_option("--count", zero_count, "number of zeros")->check(CLI::PositiveNumber);
  zeros->add_option("--out", zeros_out, "output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*selftest_cmd) {
      const int failures = selftest(std::cout);
      std::cout << (failures == 0 ? "selftest passed\n" : "selftest failed\n");
      return failures == 0 ? 0 : 1;
    }
    if (*zeros) {
      write_text(zeros_out, zeros_csv(zero_count));
      return 0;
    }
    if (*sweep) {
      const ExperimentConfig config = sweep_flags.build();
      const Artifacts a = run_sweep(config);
      emit(config, a, sweep_flags.summary);
      const Json& fit = a.summary["fit"];
      if (fit.contains("alpha"))
        std::cerr << "alpha = " << format_number(fit["alpha"].get<double>())
                  << ", residual = " << format_number(fit["residual"].get<double>()) << '\n';
      else
        std::cerr << "fit refused: " << fit["refused"].get<std::string>() << '\n';
      return 0;
    }
    const ExperimentConfig config = diag_flags.build();
    emit(config, run_diagnose(config), diag_flags.summary);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "vvlab: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "vvlab: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace vvlab::cli
