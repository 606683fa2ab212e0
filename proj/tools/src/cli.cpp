#include "entland/cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "entland/bounds.hpp"
#include "entland/cli/config.hpp"
#include "entland/cli/format.hpp"
#include "entland/discrete.hpp"
#include "entland/error.hpp"
#include "entland/landscape.hpp"

namespace entland::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string command;
  std::string config;
  std::string out;
  std::string minima_out;
  std::string sigma;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  double h_step = 1e-2;
  int source = 1;
};

/// A numeric failure tagged with what was being computed.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_sigma_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--sigma: cannot parse \"" + item + "\"");
    }
    if (used != item.size()) throw ConfigError("--sigma: cannot parse \"" + item + "\"");
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("--sigma: values must be positive, got " + item);
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--sigma: empty list");
  return out;
}

void dump(const Json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    std::size_t i = 0;
    for (const auto& [k, v] : j.items()) {
      os << inner << Json(k).dump() << ": ";
      dump(v, os, indent + 1);
      os << (++i < j.size() ? ",\n" : "\n");
    }
    os << pad << '}';
  } else if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
      return;
    }
    // Short numeric vectors stay on one line.
    const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number(); });
    if (flat) {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ", ";
        dump(j[i], os, indent + 1);
      }
      os << ']';
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      os << inner;
      dump(j[i], os, indent + 1);
      os << (i + 1 < j.size() ? ",\n" : "\n");
    }
    os << pad << ']';
  } else if (j.is_number_float()) {
    const double x = j.get<double>();
    os << (std::isfinite(x) ? format_number(x) : "null");
  } else {
    os << j.dump();
  }
}

std::string to_text(const Json& j) {
  std::ostringstream os;
  dump(j, os, 0);
  os << '\n';
  return os.str();
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

// Writes `text` to `path`, or to `out` when no path was given.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

std::string default_minima_path(const std::string& out) {
  const std::filesystem::path p(out);
  return (p.parent_path() / (p.stem().string() + ".minima" + p.extension().string())).string();
}

ScanOptions scan_options(const ModelConfig& cfg, const Options& o) {
  ScanOptions s = cfg.scan;
  if (o.grid) s.grid_size = *o.grid;
  try {
    s.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return s;
}

int cmd_bounds(const ModelConfig& cfg, const Options& o, std::ostream& out, std::ostream& err) {
  std::size_t discrete = 0;
  for (const auto& s : cfg.sources) discrete += s.type == SourceSpec::Type::discrete_plus_noise;
  if (cfg.sources.size() != 1 || discrete != 1) {
    throw ConfigError("bounds needs exactly one discrete-plus-noise source");
  }
  const SourceSpec& src = cfg.sources.front();
  const std::vector<double> sigmas = o.sigma.empty() ? std::vector<double>{src.sigma}
                                                     : parse_sigma_list(o.sigma);

  std::ostringstream csv;
  csv << "sigma,entropy,upper,lower,bayes_error,decision_upper,decision_lower\n";
  for (double sigma : sigmas) {
    try {
      const MixtureDensity m(src.probs, src.values,
                             std::vector<double>(src.values.size(), sigma), src.kernel);
      const QuadratureSpec q = default_quadrature(m, cfg.scan.rule);
      const double h = entropy_quadrature(m, q);
      const EntropyBoundsReport r = entropy_bounds(m, q, true);
      csv << format_number(sigma) << ',' << format_number(h) << ',' << format_number(r.approximator)
          << ',' << format_number(r.lower) << ',' << format_number(*r.bayes_error) << ','
          << format_number(*r.decision_upper) << ',' << format_number(*r.decision_lower) << '\n';
    } catch (const Error& e) {
      err << "entropy-landscape: bounds failed at sigma=" << format_number(sigma) << ": "
          << e.what() << '\n';
      return kExitNumeric;
    }
  }
  emit(csv.str(), o.out, out);
  return kExitOk;
}

int cmd_scan(const ModelConfig& cfg, const Options& o, std::ostream& out, std::ostream&) {
  SourceModel model = cfg.model();
  if (model.dim() != 2) throw ConfigError("scan needs exactly two sources");
  if (!o.sigma.empty()) {
    const auto sigmas = parse_sigma_list(o.sigma);
    if (sigmas.size() != 1) throw ConfigError("scan takes a single --sigma value");
    model = model.with_noise_scale(sigmas.front());
  }
  const LandscapeScan scan = scan_theta(model, scan_options(cfg, o));

  std::ostringstream curve;
  curve << "theta,entropy,upper,lower\n";
  for (std::size_t i = 0; i < scan.thetas.size(); ++i) {
    curve << format_number(scan.thetas[i]) << ',' << format_number(scan.entropy[i]) << ','
          << format_number(scan.upper[i]) << ',' << format_number(scan.lower[i]) << '\n';
  }
  std::ostringstream minima;
  minima << "theta,value,class\n";
  for (const auto& m : scan.minima) {
    minima << format_number(m.theta) << ',' << format_number(m.value) << ',' << to_string(m.cls)
           << '\n';
  }

  if (o.out.empty() && o.minima_out.empty()) {
    out << curve.str() << '\n' << minima.str();
    return kExitOk;
  }
  emit(curve.str(), o.out, out);
  emit(minima.str(), o.minima_out.empty() ? default_minima_path(o.out) : o.minima_out, out);
  return kExitOk;
}

Json candidate_json(const DiscreteVectorDistribution& u, const CandidateDirection& c) {
  Json j;
  j["angle"] = number_or_null(c.theta);
  j["w"] = c.w_star;
  Json pairs = Json::array();
  for (const auto& [a, b] : c.generating_pairs) pairs.push_back(Json::array({u.atom(a), u.atom(b)}));
  j["generating_pairs"] = std::move(pairs);
  j["entropy"] = c.entropy;
  j["entropy_drop"] = c.entropy_drop;
  j["class"] = c.mixing ? "mixing" : "non-mixing";
  return j;
}

int cmd_discrete(const ModelConfig& cfg, const Options&, std::ostream& out, std::ostream& err,
                 const std::string& out_path) {
  const SourceModel model = cfg.model();
  if (model.dim() < 2) throw ConfigError("discrete needs at least two sources");
  const DiscreteVectorDistribution& u = model.atoms();
  const double tol = cfg.scan.merge_tol_for(model);

  std::vector<CandidateDirection> cands;
  if (u.dim() == 2) {
    cands = candidate_directions_2d(u, tol);
  } else {
    cands = candidate_directions_axes(u, tol);
    if (auto general = candidate_directions_general(u, tol)) {
      for (auto& c : *general) {
        if (c.mixing) cands.push_back(std::move(c));
      }
    } else {
      err << "entropy-landscape: " << u.size() << " atoms exceed the limit of "
          << kGeneralCandidateAtomLimit
          << " for mixing-candidate enumeration; only axis candidates are listed\n";
    }
  }
  Json arr = Json::array();
  for (const auto& c : cands) arr.push_back(candidate_json(u, c));
  emit(to_text(arr), out_path, out);
  return kExitOk;
}

int cmd_taylor(const ModelConfig& cfg, const Options& o, std::ostream& out, std::ostream&) {
  const SourceModel model = cfg.model();
  if (model.dim() != 2) throw ConfigError("taylor needs exactly two sources");
  if (o.source < 1 || o.source > 2) throw ConfigError("--source must be 1 or 2");
  if (!(o.h_step > 0.0)) throw ConfigError("--h-step must be positive");
  const TaylorCheck t =
      taylor_curvature_check(model, static_cast<std::size_t>(o.source - 1), o.h_step, scan_options(cfg, o));
  Json j;
  j["numeric"] = t.numeric;
  j["analytic"] = t.analytic;
  j["relative_error"] = t.relative_error;
  emit(to_text(j), o.out, out);
  return kExitOk;
}

int cmd_parzen(const ModelConfig& cfg, const Options& o, std::ostream& out, std::ostream&) {
  const std::optional<std::uint64_t> seed = o.seed ? o.seed : cfg.seed;
  if (!seed) throw ConfigError("parzen needs a seed (--seed or \"seed\" in the config)");
  const SourceModel model = cfg.model();
  if (model.dim() != 2) throw ConfigError("parzen needs exactly two sources");
  const ParzenScan p = parzen_scan(model, cfg.samples, *seed, scan_options(cfg, o));
  std::ostringstream csv;
  csv << "theta,entropy_parzen\n";
  for (std::size_t i = 0; i < p.thetas.size(); ++i) {
    csv << format_number(p.thetas[i]) << ',' << format_number(p.entropy[i]) << '\n';
  }
  emit(csv.str(), o.out, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy landscapes of projected multimodal sources", "entropy-landscape"};
  app.require_subcommand(1);
  Options o;

  struct Flags {
    bool sigma = false, seed = false, grid = false, h_step = false, source = false, minima = false;
  };
  const auto add = [&](const std::string& name, const std::string& help, Flags f) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "Model file (JSON)")->required();
    sub->add_option("--out", o.out, "Output file (default: stdout)");
    if (f.sigma) sub->add_option("--sigma", o.sigma, "Comma-separated mode scales");
    if (f.seed) sub->add_option("--seed", o.seed, "Random seed");
    if (f.grid) sub->add_option("--grid", o.grid, "Number of angles over [0, pi)");
    if (f.h_step) sub->add_option("--h-step", o.h_step, "Finite-difference step (rad)");
    if (f.source) sub->add_option("--source", o.source, "Source index, 1-based");
    if (f.minima) sub->add_option("--minima-out", o.minima_out, "Minima CSV (default: <out>.minima.csv)");
    sub->callback([&o, name] { o.command = name; });
  };
  add("bounds", "Entropy and its bounds versus sigma", {.sigma = true});
  add("scan", "Entropy landscape over theta with detected minima",
      {.sigma = true, .grid = true, .minima = true});
  add("discrete", "Candidate minimum directions of the discrete part", {});
  add("taylor", "Curvature at a source axis versus Fisher information",
      {.h_step = true, .source = true});
  add("parzen", "Sample-based (Parzen) entropy landscape", {.seed = true, .grid = true});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const ModelConfig cfg = load_config(o.config);
    if (o.command == "bounds") return cmd_bounds(cfg, o, out, err);
    if (o.command == "scan") return cmd_scan(cfg, o, out, err);
    if (o.command == "discrete") return cmd_discrete(cfg, o, out, err, o.out);
    if (o.command == "taylor") return cmd_taylor(cfg, o, out, err);
    if (o.command == "parzen") return cmd_parzen(cfg, o, out, err);
    err << "entropy-landscape: unknown command\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "entropy-landscape: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "entropy-landscape: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace entland::cli
