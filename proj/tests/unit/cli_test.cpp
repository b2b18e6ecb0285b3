#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vvlab/cli.hpp"

namespace {

using namespace vvlab;
using cli::ConfigError;
using cli::Json;
using cli::parse_config;

const char* kMinimal = R"({"flow": "disk", "profile": {"type": "constant", "value": 2}, "nu_grid": [1e-3], "T": 1})";

std::vector<std::string> issues_of(const std::string& text, const std::filesystem::path& base = ".") {
  try {
    parse_config(text, base);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
  for (const auto& s : issues)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "vvlab_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(ParseConfig, MinimalDiskIsValid) {
  const auto c = parse_config(kMinimal);
  EXPECT_EQ(c.flow, rates::Flow::disk);
  EXPECT_EQ(c.profile.type, "constant");
  EXPECT_EQ(c.profile.value, 2.0);
  ASSERT_EQ(c.nu_grid.size(), 1u);
  EXPECT_EQ(c.nu_grid[0], 1e-3);
  EXPECT_EQ(c.T, 1.0);
  EXPECT_EQ(c.K, 2000u);
  EXPECT_EQ(c.time_grid, 64u);
  EXPECT_EQ(c.output_format, "csv");
}

TEST(ParseConfig, ZeroViscosityRejected) {
  const auto issues =
      issues_of(R"({"flow": "disk", "profile": {"type": "constant", "value": 2}, "nu_grid": [1e-3, 0], "T": 1})");
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0], "nu_grid[1]: nu must be positive");
}

TEST(ParseConfig, MissingTableNamesPath) {
  const auto issues = issues_of(R"({"flow": "disk", "profile": {"type": "table", "path": "missing/omega.csv"},
                                    "nu_grid": [1e-3]})");
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues[0].find("profile.path"), std::string::npos);
  EXPECT_NE(issues[0].find("missing/omega.csv"), std::string::npos);
}

TEST(ParseConfig, ReportsEveryProblem) {
  const auto issues = issues_of(R"({"flow": "disk", "profile": {"type": "constant"}, "nu_grid": [-1, 1e-3, 0],
      "T": 0, "K": 0, "diagnostics": ["kato_layer", "nonsense", "layer_l1"], "colour": "red",
      "output": {"format": "xml"}})");
  EXPECT_TRUE(mentions(issues, "profile.value: missing required field"));
  EXPECT_TRUE(mentions(issues, "nu_grid[0]: nu must be positive"));
  EXPECT_TRUE(mentions(issues, "nu_grid[2]: nu must be positive"));
  EXPECT_TRUE(mentions(issues, "T: T must be positive"));
  EXPECT_TRUE(mentions(issues, "K: expected an integer >= 1"));
  EXPECT_TRUE(mentions(issues, "diagnostics[1]: unknown diagnostic 'nonsense'"));
  EXPECT_TRUE(mentions(issues, "layer.delta: required by layer_l1"));
  EXPECT_TRUE(mentions(issues, "colour: unknown field"));
  EXPECT_TRUE(mentions(issues, "output.format"));
  EXPECT_EQ(issues.size(), 9u);
}

TEST(ParseConfig, SyntaxErrorHasLineAndColumn) {
  const auto issues = issues_of("{\"flow\": \"disk\",\n  \"nu_grid\": [1e-3,,]}");
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].rfind("line 2, column 20", 0), 0u) << issues[0];
}

TEST(ParseConfig, FlowSpecificChecks) {
  EXPECT_TRUE(mentions(issues_of(R"({"flow": "shear", "profile": {"type": "polynomial", "coefficients": [1]},
                                     "nu_grid": [1e-3]})"),
                       "unknown shear profile type 'polynomial'"));
  EXPECT_TRUE(mentions(issues_of(R"({"flow": "shear", "profile": {"type": "constant", "value": 1},
                                     "nu_grid": [1e-3], "diagnostics": ["weak_pairing"]})"),
                       "only available for the disk"));
  EXPECT_TRUE(mentions(issues_of(R"({"flow": "disk", "profile": {"type": "constant", "value": 1},
                                     "nu_grid": [1e-3], "test_function": {"type": "channel", "coefficients": [1]}})"),
                       "does not live on the disk"));
  EXPECT_TRUE(mentions(issues_of(R"({"flow": "pipe", "profile": {"type": "constant", "value": 1}, "nu_grid": [1]})"),
                       "flow: must be"));
  EXPECT_TRUE(mentions(issues_of(R"({"flow": "disk", "profile": {"type": "constant", "value": 1}, "nu_grid": [1e-3],
                                     "layer": {"delta": 0.1, "delta_star": 0.2}})"),
                       "delta_star must be smaller than delta"));
}

TEST(ParseConfig, EchoRoundTrips) {
  const auto dir = temp_dir();
  {
    std::ofstream f(dir / "phi.csv");
    f << "z,phi\n0,1\n0.5,0.6\n1,0.2\n2,0.05\n";
  }
  const std::string text = R"({"flow": "shear", "profile": {"type": "table", "path": "phi.csv", "bound": 1,
      "decay_rate": 1.5}, "nu_grid": [1e-2, 1e-3, 1e-4, 1e-5], "T": 2, "half_width": 0.75, "time_grid": 32,
      "layer": {"delta": 0.05, "delta_star": 0.01, "c": 2}, "diagnostics": ["lp_norm", "kato_layer"],
      "p": [1, "inf"], "t": 0.25, "test_function": {"type": "channel", "coefficients": [1, 2], "scale": 0.5},
      "output": {"path": "x.csv", "format": "csv"}})";
  const auto a = parse_config(text, dir);
  const Json echo = a.echo();
  const auto b = cli::parse_config_json(echo, "/nonexistent");
  EXPECT_EQ(b.echo(), echo);
  EXPECT_EQ(b.profile.resolved, std::filesystem::absolute(dir / "phi.csv").lexically_normal());
  EXPECT_TRUE(std::isinf(b.p_list[1]));
  EXPECT_EQ(b.layer.kato_constant, 2.0);
  EXPECT_EQ(*b.t, 0.25);
}

TEST(ProfileShorthand, Forms) {
  EXPECT_EQ(cli::profile_shorthand("constant:2"), Json({{"type", "constant"}, {"value", 2.0}}));
  EXPECT_EQ(cli::profile_shorthand("polynomial:1,-1")["coefficients"], Json({1.0, -1.0}));
  EXPECT_EQ(cli::profile_shorthand("exp_decay:1,3")["rate"], Json(3.0));
  const Json pg = cli::profile_shorthand("poly_gauss:0.5,1,2");
  EXPECT_EQ(pg["width"], Json(0.5));
  EXPECT_EQ(pg["coefficients"], Json({1.0, 2.0}));
  EXPECT_EQ(cli::profile_shorthand("table:a/b.csv")["path"], Json("a/b.csv"));
  EXPECT_THROW(cli::profile_shorthand("constant:two"), ConfigError);
  EXPECT_THROW(cli::profile_shorthand("exp_decay:1"), ConfigError);
  EXPECT_THROW(cli::profile_shorthand("spiral:1"), ConfigError);
}

TEST(FormatNumber, SeventeenDigitsRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 1e-5, 6.02214076e23, -2.5e-300}) {
    const std::string s = cli::format_number(x);
    EXPECT_EQ(std::stod(s), x) << s;
  }
  EXPECT_EQ(cli::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(cli::format_number(std::nan("")), "");
}

TEST(RunDiagnose, KatoSmokeIsOneRow) {
  auto c = parse_config(R"({"flow": "disk", "profile": {"type": "constant", "value": 2}, "nu_grid": [1e-3], "T": 1,
                            "diagnostics": ["kato_layer"], "layer": {"c": 1}})");
  const auto a = cli::run_diagnose(c);
  const auto l = lines(a.csv);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0], "diagnostic,nu,t_or_T,value,error_estimate");
  EXPECT_EQ(l[1].rfind("kato_layer,0.001,1,", 0), 0u) << l[1];
  ASSERT_EQ(a.summary["rows"].size(), 1u);
  EXPECT_NEAR(a.summary["rows"][0]["value"].get<double>(), 0.017393, 1e-5);
  EXPECT_TRUE(a.summary.contains("versions"));
  EXPECT_TRUE(a.summary["fit"].is_null());
}

TEST(RunDiagnose, ShearRowsAndClosedForms) {
  auto c = parse_config(R"({"flow": "shear", "profile": {"type": "constant", "value": 1}, "nu_grid": [1e-2, 1e-4],
                            "T": 1, "diagnostics": ["boundary_flux", "sup_error", "sheet_pairing"]})");
  const auto a = cli::run_diagnose(c);
  const auto& rows = a.summary["rows"];
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& r : rows) {
    const double nu = r["nu"].get<double>();
    // The wall gradient of erf(z / sqrt(4 nu t)) is 1/sqrt(pi nu t) > 0 and the flux is -2L times its integral.
    if (r["diagnostic"] == "boundary_flux") {
      EXPECT_NEAR(r["value"].get<double>(), -4.0 * 0.5 * std::sqrt(nu) / std::sqrt(M_PI), 1e-8);
    }
    if (r["diagnostic"] == "sup_error") {
      EXPECT_NEAR(r["value"].get<double>(),
                  std::sqrt(2.0 * 0.5 * std::sqrt(4.0 * nu) * (2.0 - std::sqrt(2.0)) / std::sqrt(M_PI)), 1e-8);
    }
  }
  EXPECT_EQ(lines(a.csv).size(), 11u);
}

TEST(RunDiagnose, NeedsADiagnostic) {
  EXPECT_THROW(cli::run_diagnose(parse_config(kMinimal)), ConfigError);
}

TEST(RunDiagnose, FailureNamesDiagnosticAndNu) {
  // A strip wider than the disk cannot be evaluated.
  auto c = parse_config(R"({"flow": "disk", "profile": {"type": "constant", "value": 2}, "nu_grid": [1e-2],
                            "diagnostics": ["kato_layer"], "layer": {"c": 200}})");
  try {
    cli::run_diagnose(c);
    FAIL() << "expected failure";
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("kato_layer"), std::string::npos) << what;
    EXPECT_NE(what.find("0.01"), std::string::npos) << what;
  }
}

TEST(RunSweep, ShearUnitFitsQuarter) {
  auto c = parse_config(R"({"flow": "shear", "profile": {"type": "constant", "value": 1},
                            "nu_grid": [1e-2, 1e-3, 1e-4, 1e-5, 1e-6], "T": 1})");
  const auto a = cli::run_sweep(c);
  const auto l = lines(a.csv);
  ASSERT_EQ(l.size(), 6u);
  EXPECT_EQ(l[0], "nu,sup_error,alpha_running");
  EXPECT_EQ(l[1].back(), ',');  // no running slope on the first row
  EXPECT_NEAR(a.summary["fit"]["alpha"].get<double>(), 0.25, 0.005);
  EXPECT_EQ(a.summary["config_echo"], c.echo());
  EXPECT_EQ(a.summary["rows"].size(), 5u);
  EXPECT_EQ(a.summary["fingerprint"].get<std::string>().size(), 16u);
}

TEST(RunSweep, DiagnosticColumns) {
  auto c = parse_config(R"({"flow": "disk", "profile": {"type": "constant", "value": 2},
                            "nu_grid": [1e-2, 1e-3, 1e-4, 1e-5], "diagnostics": ["boundary_flux", "sup_error"]})");
  const auto l = lines(cli::run_sweep(c).csv);
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0], "nu,sup_error,alpha_running,boundary_flux,boundary_flux_error");
  for (std::size_t i = 1; i < l.size(); ++i) EXPECT_EQ(std::count(l[i].begin(), l[i].end(), ','), 4);
}

TEST(RunSweep, RefusedFitIsRecorded) {
  auto c = parse_config(R"({"flow": "shear", "profile": {"type": "constant", "value": 0},
                            "nu_grid": [1e-2, 1e-3, 1e-4, 1e-5]})");
  const auto a = cli::run_sweep(c);
  EXPECT_TRUE(a.summary["fit"].contains("refused"));
}

TEST(RunSweep, DeterministicAcrossThreadCounts) {
  auto c = parse_config(R"({"flow": "disk", "profile": {"type": "polynomial", "coefficients": [1, -1]},
                            "nu_grid": [1e-2, 1e-3, 1e-4, 1e-5, 1e-6], "diagnostics": ["weak_pairing"]})");
  setenv("VVLAB_THREADS", "1", 1);
  const auto one = cli::run_sweep(c);
  setenv("VVLAB_THREADS", "4", 1);
  const auto four = cli::run_sweep(c);
  const auto again = cli::run_sweep(c);
  unsetenv("VVLAB_THREADS");
  EXPECT_EQ(one.csv, four.csv);
  EXPECT_EQ(four.csv, again.csv);
  EXPECT_EQ(one.summary.dump(), four.summary.dump());
}

TEST(RunSweep, TableProfileFromFile) {
  const auto dir = temp_dir();
  {
    std::ofstream f(dir / "omega.csv");
    f << "# r omega\n0 2\n0.5 2\n1 2\n";
  }
  auto table = parse_config(R"({"flow": "disk", "profile": {"type": "table", "path": "omega.csv"},
                                "nu_grid": [1e-2, 1e-3, 1e-4, 1e-5]})",
                            dir);
  auto constant = parse_config(R"({"flow": "disk", "profile": {"type": "constant", "value": 2},
                                   "nu_grid": [1e-2, 1e-3, 1e-4, 1e-5]})");
  const auto a = cli::run_sweep(table).summary["rows"];
  const auto b = cli::run_sweep(constant).summary["rows"];
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_NEAR(a[i]["sup_error"].get<double>(), b[i]["sup_error"].get<double>(), 1e-8);
}

TEST(RunSweep, BadTableRowIsNamed) {
  const auto dir = temp_dir();
  {
    std::ofstream f(dir / "broken.csv");
    f << "0 1\n0.5 x\n1 0\n";
  }
  auto c = parse_config(R"({"flow": "disk", "profile": {"type": "table", "path": "broken.csv"},
                            "nu_grid": [1e-2, 1e-3, 1e-4, 1e-5]})",
                        dir);
  try {
    cli::run_sweep(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Zeros, TableDump) {
  const auto l = lines(cli::zeros_csv(2));
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "k,j_1k,J0(j_1k)");
  EXPECT_EQ(l[1].rfind("1,3.83170597020751", 0), 0u) << l[1];
}

TEST(Selftest, AllPass) {
  std::ostringstream out;
  EXPECT_EQ(cli::selftest(out), 0) << out.str();
  EXPECT_EQ(out.str().find("FAIL"), std::string::npos);
}

}  // namespace
