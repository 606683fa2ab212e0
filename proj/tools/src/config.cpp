#include "entland/cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "entland/error.hpp"

namespace entland::cli {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<std::int64_t>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

SourceSpec parse_source(const json& s, const std::string& where) {
  if (!s.is_object() || !s.contains("type") || !s["type"].is_string()) {
    throw ConfigError(where + ": needs a string \"type\"");
  }
  const std::string type = s["type"].get<std::string>();
  if (type == "gaussian") {
    require_keys(s, where, {"type"});
    return SourceSpec::gaussian();
  }
  if (type == "uniform") {
    require_keys(s, where, {"type"});
    return SourceSpec::uniform();
  }
  if (type != "discrete-plus-noise") throw ConfigError(where + ": unknown type \"" + type + "\"");

  require_keys(s, where, {"type", "values", "probs", "sigma", "kernel"});
  for (const char* k : {"values", "probs", "sigma"}) {
    if (!s.contains(k)) throw ConfigError(where + ": missing \"" + k + "\"");
  }
  ScalarKernel kernel = ScalarKernel::gaussian();
  if (s.contains("kernel")) {
    const json& k = s["kernel"];
    if (k == "uniform") {
      kernel = ScalarKernel::uniform();
    } else if (k != "gaussian") {
      throw ConfigError(where + ".kernel: expected \"gaussian\" or \"uniform\"");
    }
  }
  const double sigma = number(s["sigma"], where + ".sigma");
  if (!(sigma > 0.0)) throw ConfigError(where + ".sigma: must be positive");
  SourceSpec spec = SourceSpec::discrete(numbers(s["values"], where + ".values"),
                                         numbers(s["probs"], where + ".probs"), sigma, kernel);
  try {
    spec.marginal().validate();
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return spec;
}

ScanOptions parse_scan(const json& s) {
  require_keys(s, "scan", {"grid_size", "quadrature", "merge_tol"});
  ScanOptions o;
  if (s.contains("grid_size")) o.grid_size = static_cast<int>(integer(s["grid_size"], "scan.grid_size"));
  if (s.contains("merge_tol")) o.merge_tol = number(s["merge_tol"], "scan.merge_tol");
  if (s.contains("quadrature")) {
    const json& q = s["quadrature"];
    require_keys(q, "scan.quadrature", {"half_width_sigmas", "steps"});
    if (q.contains("half_width_sigmas")) {
      o.rule.half_width_sigmas = number(q["half_width_sigmas"], "scan.quadrature.half_width_sigmas");
    }
    if (q.contains("steps")) o.rule.steps = static_cast<int>(integer(q["steps"], "scan.quadrature.steps"));
  }
  try {
    o.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("scan: ") + e.what());
  }
  return o;
}

}  // namespace

VarianceMode ModelConfig::variance_mode() const {
  return equal_variance ? VarianceMode::rescale_to_unit : VarianceMode::as_given;
}

SourceModel ModelConfig::model() const {
  return SourceModel(sources, variance_mode(), equal_variance);
}

ModelConfig parse_config(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  require_keys(doc, origin, {"description", "sources", "equal_variance", "scan", "seed", "samples"});

  ModelConfig c;
  if (doc.contains("description")) {
    if (!doc["description"].is_string()) throw ConfigError("description: expected a string");
    c.description = doc["description"].get<std::string>();
  }
  if (!doc.contains("sources") || !doc["sources"].is_array() || doc["sources"].empty()) {
    throw ConfigError(origin + ": \"sources\" must be a non-empty array");
  }
  for (std::size_t i = 0; i < doc["sources"].size(); ++i) {
    c.sources.push_back(parse_source(doc["sources"][i], "sources[" + std::to_string(i) + "]"));
  }
  if (doc.contains("equal_variance")) {
    if (!doc["equal_variance"].is_boolean()) throw ConfigError("equal_variance: expected a boolean");
    c.equal_variance = doc["equal_variance"].get<bool>();
  }
  if (doc.contains("scan")) c.scan = parse_scan(doc["scan"]);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("samples")) {
    const auto n = integer(doc["samples"], "samples");
    if (n < 2) throw ConfigError("samples: need at least 2");
    c.samples = static_cast<std::size_t>(n);
  }

  try {
    (void)c.model();
  } catch (const Error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return c;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace entland::cli
