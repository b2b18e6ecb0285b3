#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "vvlab/cli.hpp"

namespace vvlab::cli {
namespace {

const char* const kDiagnostics[] = {"sup_error",   "kato_layer", "layer_l1",     "sheet_pairing",
                                    "boundary_flux", "mass_budget", "lp_norm", "weak_pairing"};

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

// Collects issues while reading fields; every getter records a problem and
// returns a fallback so that parsing continues.
class Reader {
 public:
  std::vector<std::string> issues;

  void fail(const std::string& path, const std::string& message) { issues.push_back(path + ": " + message); }

  std::optional<double> number(const Json& obj, const std::string& key, const std::string& path, bool required) {
    if (!obj.contains(key)) {
      if (required) fail(path, "missing required field");
      return std::nullopt;
    }
    const Json& v = obj.at(key);
    if (!v.is_number()) {
      fail(path, "expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<double> positive(const Json& obj, const std::string& key, const std::string& path, bool required,
                                 const std::string& name) {
    auto v = number(obj, key, path, required);
    if (v && !(*v > 0.0 && std::isfinite(*v))) {
      fail(path, name + " must be positive");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::size_t> count(const Json& obj, const std::string& key, const std::string& path,
                                   std::size_t minimum) {
    if (!obj.contains(key)) return std::nullopt;
    const Json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum)) {
      fail(path, "expected an integer >= " + std::to_string(minimum));
      return std::nullopt;
    }
    return static_cast<std::size_t>(v.get<long long>());
  }

  std::optional<std::string> string(const Json& obj, const std::string& key, const std::string& path,
                                    bool required) {
    if (!obj.contains(key)) {
      if (required) fail(path, "missing required field");
      return std::nullopt;
    }
    if (!obj.at(key).is_string()) {
      fail(path, "expected a string");
      return std::nullopt;
    }
    return obj.at(key).get<std::string>();
  }

  std::vector<double> numbers(const Json& obj, const std::string& key, const std::string& path, bool required) {
    std::vector<double> out;
    if (!obj.contains(key)) {
      if (required) fail(path, "missing required field");
      return out;
    }
    const Json& v = obj.at(key);
    if (!v.is_array() || v.empty()) {
      fail(path, "expected a non-empty array of numbers");
      return out;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        fail(path + "[" + std::to_string(i) + "]", "expected a number");
        continue;
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  void only(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return item.key() == a; });
      if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
    }
  }

  bool object(const Json& doc, const std::string& key) {
    if (!doc.contains(key)) return false;
    if (!doc.at(key).is_object()) {
      fail(key, "expected an object");
      return false;
    }
    return true;
  }
};

void read_profile(Reader& r, const Json& p, rates::Flow flow, const std::filesystem::path& base,
                  ProfileConfig& out) {
  auto type = r.string(p, "type", "profile.type", true);
  if (!type) return;
  out.type = *type;
  const bool disk = flow == rates::Flow::disk;
  if (out.type == "constant") {
    r.only(p, "profile", {"type", "value"});
    if (auto v = r.number(p, "value", "profile.value", true)) out.value = *v;
  } else if (out.type == "polynomial" && disk) {
    r.only(p, "profile", {"type", "coefficients"});
    out.coefficients = r.numbers(p, "coefficients", "profile.coefficients", true);
  } else if (out.type == "exp_decay" && !disk) {
    r.only(p, "profile", {"type", "amplitude", "rate"});
    if (auto v = r.number(p, "amplitude", "profile.amplitude", true)) out.amplitude = *v;
    if (auto v = r.positive(p, "rate", "profile.rate", true, "rate")) out.rate = *v;
  } else if (out.type == "poly_gauss" && !disk) {
    r.only(p, "profile", {"type", "coefficients", "width"});
    out.coefficients = r.numbers(p, "coefficients", "profile.coefficients", true);
    if (auto v = r.positive(p, "width", "profile.width", true, "width")) out.width = *v;
  } else if (out.type == "table") {
    if (disk)
      r.only(p, "profile", {"type", "path"});
    else
      r.only(p, "profile", {"type", "path", "bound", "decay_rate"});
    if (auto path = r.string(p, "path", "profile.path", true)) {
      out.path = *path;
      out.resolved = std::filesystem::path(*path).is_absolute() ? std::filesystem::path(*path) : base / *path;
      std::error_code ec;
      if (!std::filesystem::is_regular_file(out.resolved, ec))
        r.fail("profile.path", "table file '" + out.resolved.string() + "' does not exist");
    }
    if (!disk) {
      if (auto v = r.positive(p, "bound", "profile.bound", true, "bound")) out.bound = *v;
      if (auto v = r.number(p, "decay_rate", "profile.decay_rate", false)) {
        if (*v < 0.0)
          r.fail("profile.decay_rate", "decay_rate must be >= 0");
        else
          out.decay_rate = *v;
      }
    }
  } else {
    r.fail("profile.type", "unknown " + std::string(disk ? "disk" : "shear") + " profile type '" + out.type + "'");
  }
}

void read_test_function(Reader& r, const Json& f, rates::Flow flow, TestFunctionConfig& out) {
  auto type = r.string(f, "type", "test_function.type", true);
  if (!type) return;
  out.type = *type;
  if (out.type == "radial_polynomial") {
    r.only(f, "test_function", {"type", "coefficients"});
    out.coefficients = r.numbers(f, "coefficients", "test_function.coefficients", true);
  } else if (out.type == "bessel_mode") {
    r.only(f, "test_function", {"type"});
  } else if (out.type == "channel") {
    r.only(f, "test_function", {"type", "coefficients", "scale"});
    out.coefficients = r.numbers(f, "coefficients", "test_function.coefficients", true);
    if (auto v = r.positive(f, "scale", "test_function.scale", false, "scale")) out.scale = *v;
  } else {
    r.fail("test_function.type", "unknown test function type '" + out.type + "'");
    return;
  }
  const bool channel = out.type == "channel";
  if (channel != (flow == rates::Flow::shear))
    r.fail("test_function.type", "'" + out.type + "' does not live on the " +
                                     (flow == rates::Flow::disk ? "disk" : "channel"));
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

const std::vector<std::string>& diagnostic_names() {
  static const std::vector<std::string> names(std::begin(kDiagnostics), std::end(kDiagnostics));
  return names;
}

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error("invalid config:\n  " + join(issues, "\n  ")), issues_(std::move(issues)) {}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string what = e.what();
    // Drop the library's own "[json.exception.parse_error.101] parse error at line 1, column 2:" prefix.
    if (auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ConfigError({line_column(text, e.byte) + ": " + what});
  }
  return parse_config_json(doc, base_dir);
}

ExperimentConfig parse_config_json(const Json& doc, const std::filesystem::path& base_dir) {
  Reader r;
  ExperimentConfig c;
  if (!doc.is_object()) throw ConfigError({"(root): expected an object"});
  r.only(doc, "", {"flow", "profile", "nu_grid", "T", "K", "half_width", "time_grid", "layer", "diagnostics", "t",
                   "p", "test_function", "output"});

  bool flow_ok = false;
  if (auto flow = r.string(doc, "flow", "flow", true)) {
    if (*flow == "disk" || *flow == "shear") {
      c.flow = *flow == "disk" ? rates::Flow::disk : rates::Flow::shear;
      flow_ok = true;
    } else {
      r.fail("flow", "must be \"disk\" or \"shear\"");
    }
  }
  if (!doc.contains("profile"))
    r.fail("profile", "missing required field");
  else if (r.object(doc, "profile") && flow_ok)
    read_profile(r, doc.at("profile"), c.flow, base_dir, c.profile);

  c.nu_grid = r.numbers(doc, "nu_grid", "nu_grid", true);
  for (std::size_t i = 0; i < c.nu_grid.size(); ++i)
    if (!(c.nu_grid[i] > 0.0) || !std::isfinite(c.nu_grid[i]))
      r.fail("nu_grid[" + std::to_string(i) + "]", "nu must be positive");

  if (auto v = r.positive(doc, "T", "T", false, "T")) c.T = *v;
  if (auto v = r.count(doc, "K", "K", 1)) c.K = *v;
  if (auto v = r.positive(doc, "half_width", "half_width", false, "half_width")) c.half_width = *v;
  if (auto v = r.count(doc, "time_grid", "time_grid", 2)) c.time_grid = *v;
  if (auto v = r.positive(doc, "t", "t", false, "t")) c.t = *v;
  if (c.t && *c.t > c.T) r.fail("t", "t must not exceed T");

  bool has_delta = false, has_delta_star = false;
  if (r.object(doc, "layer")) {
    const Json& l = doc.at("layer");
    r.only(l, "layer", {"delta", "delta_star", "c"});
    if (auto v = r.positive(l, "delta", "layer.delta", false, "delta")) {
      c.layer.delta = *v;
      has_delta = true;
    }
    if (auto v = r.positive(l, "delta_star", "layer.delta_star", false, "delta_star")) {
      c.layer.delta_star = *v;
      has_delta_star = true;
    }
    if (auto v = r.positive(l, "c", "layer.c", false, "c")) c.layer.kato_constant = *v;
    if (has_delta && has_delta_star && !(c.layer.delta_star < c.layer.delta))
      r.fail("layer.delta_star", "delta_star must be smaller than delta");
  }

  if (doc.contains("diagnostics")) {
    const Json& d = doc.at("diagnostics");
    if (!d.is_array()) {
      r.fail("diagnostics", "expected an array of names");
    } else {
      for (std::size_t i = 0; i < d.size(); ++i) {
        const std::string path = "diagnostics[" + std::to_string(i) + "]";
        if (!d[i].is_string()) {
          r.fail(path, "expected a string");
          continue;
        }
        const std::string name = d[i].get<std::string>();
        const auto& known = diagnostic_names();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
          r.fail(path, "unknown diagnostic '" + name + "' (known: " + join(known, ", ") + ")");
          continue;
        }
        if (std::find(c.diagnostics.begin(), c.diagnostics.end(), name) != c.diagnostics.end()) {
          r.fail(path, "diagnostic '" + name + "' listed twice");
          continue;
        }
        c.diagnostics.push_back(name);
        if (flow_ok && c.flow == rates::Flow::shear && (name == "mass_budget" || name == "weak_pairing"))
          r.fail(path, "'" + name + "' is only available for the disk");
        if (name == "layer_l1" && !has_delta) r.fail("layer.delta", "required by layer_l1");
        if (name == "mass_budget" && !(has_delta && has_delta_star))
          r.fail("layer", "mass_budget needs delta and delta_star");
      }
    }
  }

  if (doc.contains("p")) {
    const Json& p = doc.at("p");
    c.p_list.clear();
    if (!p.is_array() || p.empty()) r.fail("p", "expected a non-empty array");
    for (std::size_t i = 0; p.is_array() && i < p.size(); ++i) {
      const std::string path = "p[" + std::to_string(i) + "]";
      if (p[i].is_string() && p[i].get<std::string>() == "inf")
        c.p_list.push_back(std::numeric_limits<double>::infinity());
      else if (p[i].is_number() && p[i].get<double>() >= 1.0)
        c.p_list.push_back(p[i].get<double>());
      else
        r.fail(path, "p must be a number >= 1 or \"inf\"");
    }
  }

  if (r.object(doc, "test_function") && flow_ok) {
    TestFunctionConfig f;
    read_test_function(r, doc.at("test_function"), c.flow, f);
    c.test_function = f;
  }

  if (r.object(doc, "output")) {
    const Json& o = doc.at("output");
    r.only(o, "output", {"path", "format"});
    if (auto v = r.string(o, "path", "output.path", false)) c.output_path = *v;
    if (auto v = r.string(o, "format", "output.format", false)) {
      if (*v == "csv" || *v == "json")
        c.output_format = *v;
      else
        r.fail("output.format", "must be \"csv\" or \"json\"");
    }
  }

  if (!r.issues.empty()) throw ConfigError(r.issues);
  return c;
}

Json ExperimentConfig::echo() const {
  Json j;
  j["flow"] = flow == rates::Flow::disk ? "disk" : "shear";
  Json p;
  p["type"] = profile.type;
  if (profile.type == "constant") p["value"] = profile.value;
  if (profile.type == "polynomial" || profile.type == "poly_gauss") p["coefficients"] = profile.coefficients;
  if (profile.type == "exp_decay") {
    p["amplitude"] = profile.amplitude;
    p["rate"] = profile.rate;
  }
  if (profile.type == "poly_gauss") p["width"] = profile.width;
  if (profile.type == "table") {
    p["path"] = std::filesystem::absolute(profile.resolved).lexically_normal().string();
    if (flow == rates::Flow::shear) {
      p["bound"] = profile.bound;
      p["decay_rate"] = profile.decay_rate;
    }
  }
  j["profile"] = p;
  j["nu_grid"] = nu_grid;
  j["T"] = T;
  j["K"] = K;
  j["half_width"] = half_width;
  j["time_grid"] = time_grid;
  Json layer_json;
  if (layer.delta > 0.0) layer_json["delta"] = layer.delta;
  if (layer.delta_star > 0.0) layer_json["delta_star"] = layer.delta_star;
  layer_json["c"] = layer.kato_constant;
  j["layer"] = layer_json;
  j["diagnostics"] = diagnostics;
  if (t) j["t"] = *t;
  Json ps = Json::array();
  for (double v : p_list) {
    if (std::isinf(v))
      ps.push_back("inf");
    else
      ps.push_back(v);
  }
  j["p"] = ps;
  if (test_function) {
    Json f;
    f["type"] = test_function->type;
    if (test_function->type != "bessel_mode") f["coefficients"] = test_function->coefficients;
    if (test_function->type == "channel" && test_function->scale > 0.0) f["scale"] = test_function->scale;
    j["test_function"] = f;
  }
  Json out;
  if (!output_path.empty()) out["path"] = output_path;
  out["format"] = output_format;
  j["output"] = out;
  return j;
}

Json profile_shorthand(const std::string& text) {
  const auto colon = text.find(':');
  const std::string type = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  Json p;
  p["type"] = type;
  if (type == "table") {
    p["path"] = rest;
    return p;
  }
  std::vector<double> values;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw ConfigError({"--profile: '" + item + "' is not a number in '" + text + "'"});
    values.push_back(v);
  }
  auto need = [&](std::size_t n) {
    if (values.size() < n) throw ConfigError({"--profile: '" + text + "' needs " + std::to_string(n) + " numbers"});
  };
  if (type == "constant") {
    need(1);
    p["value"] = values[0];
  } else if (type == "polynomial") {
    need(1);
    p["coefficients"] = values;
  } else if (type == "exp_decay") {
    need(2);
    p["amplitude"] = values[0];
    p["rate"] = values[1];
  } else if (type == "poly_gauss") {
    need(2);
    p["width"] = values[0];
    p["coefficients"] = std::vector<double>(values.begin() + 1, values.end());
  } else {
    throw ConfigError({"--profile: unknown profile type '" + type + "'"});
  }
  return p;
}

}  // namespace vvlab::cli
