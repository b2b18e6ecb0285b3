#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "vvlab/rates.hpp"

namespace vvlab::cli {

using Json = nlohmann::json;

// Names accepted in "diagnostics".
const std::vector<std::string>& diagnostic_names();

struct ProfileConfig {
  // disk: constant, polynomial, table; shear: constant, exp_decay, poly_gauss, table
  std::string type;
  double value = 0.0;
  std::vector<double> coefficients;
  double amplitude = 0.0, rate = 0.0, width = 0.0;
  std::string path;  // as written in the config
  std::filesystem::path resolved;
  double bound = 0.0, decay_rate = 0.0;
};

struct TestFunctionConfig {
  std::string type;  // radial_polynomial, bessel_mode, channel
  std::vector<double> coefficients;
  double scale = 0.0;  // channel; 0 means no exponential factor
};

struct ExperimentConfig {
  rates::Flow flow = rates::Flow::disk;
  ProfileConfig profile;
  std::vector<double> nu_grid;
  double T = 1.0;
  std::size_t K = 2000;
  double half_width = 0.5;
  std::size_t time_grid = rates::kDefaultTimeGrid;
  LayerSpec layer;
  std::vector<std::string> diagnostics;
  // Time for the fixed-time diagnostics; defaults to T / 2.
  std::optional<double> t;
  std::vector<double> p_list{1.0, 2.0, 4.0};
  std::optional<TestFunctionConfig> test_function;
  std::string output_path;  // empty: standard output
  std::string output_format = "csv";

  // Normalized config with every default filled in; parsing it again
  // reproduces this config exactly.
  Json echo() const;
};

// All problems found in one pass, each "path: message" or "line L, column C: message".
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// Table paths are resolved against base_dir.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentConfig parse_config_json(const Json& doc, const std::filesystem::path& base_dir = ".");

// "constant:2", "polynomial:1,-1", "exp_decay:1,3", "poly_gauss:w,c0,c1,...",
// "table:path"; used by --profile.
Json profile_shorthand(const std::string& text);

rates::Experiment make_experiment(const ExperimentConfig& config);

struct Artifacts {
  std::string csv;
  Json summary;
};

// Sweep: CSV nu,sup_error,alpha_running then value/error pairs for each
// requested diagnostic.
Artifacts run_sweep(const ExperimentConfig& config);
// Diagnose: CSV diagnostic,nu,t_or_T,value,error_estimate, one row per
// diagnostic output and viscosity.
Artifacts run_diagnose(const ExperimentConfig& config);

// CSV k,j_1k,J0(j_1k)
std::string zeros_csv(std::size_t count);

// Quick example suite; writes one PASS/FAIL line per check, returns the
// number of failures.
int selftest(std::ostream& out);

// 17 significant digits; empty for NaN.
std::string format_number(double x);

Json versions();

// Entry point behind tools/vvlab.
int main(int argc, char** argv);

}  // namespace vvlab::cli
