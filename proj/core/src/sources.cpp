#include "entland/sources.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "entland/error.hpp"

namespace entland {

namespace {

std::vector<SourceSpec> apply_mode(const std::vector<SourceSpec>& specs, VarianceMode mode) {
  std::vector<SourceSpec> out = specs;
  for (auto& s : out) {
    if (!(s.sigma > 0.0) || !std::isfinite(s.sigma)) {
      throw Error(ErrorCode::invalid_argument, "source sigma must be positive and finite");
    }
    s.marginal().validate();
    if (mode == VarianceMode::as_given) continue;
    const double m = s.marginal().mean();
    const double sd = std::sqrt(s.variance());
    for (double& v : s.values) v = (v - m) / sd;
    s.sigma /= sd;
  }
  return out;
}

DiscreteVectorDistribution build_atoms(const std::vector<SourceSpec>& sources) {
  std::vector<Marginal> marginals;
  for (const auto& s : sources) marginals.push_back(s.marginal());
  return product_distribution(marginals);
}

}  // namespace

SourceSpec SourceSpec::gaussian() { return SourceSpec{}; }

SourceSpec SourceSpec::uniform() {
  SourceSpec s;
  s.type = Type::uniform;
  s.kernel = ScalarKernel::uniform();
  return s;
}

SourceSpec SourceSpec::discrete(std::vector<double> values, std::vector<double> probs,
                                double sigma, ScalarKernel kernel) {
  SourceSpec s;
  s.type = Type::discrete_plus_noise;
  s.values = std::move(values);
  s.probs = std::move(probs);
  s.sigma = sigma;
  s.kernel = kernel;
  return s;
}

double SourceSpec::variance() const { return marginal().variance() + sigma * sigma; }

const char* to_string(SourceSpec::Type type) noexcept {
  switch (type) {
    case SourceSpec::Type::gaussian: return "gaussian";
    case SourceSpec::Type::uniform: return "uniform";
    case SourceSpec::Type::discrete_plus_noise: return "discrete-plus-noise";
  }
  return "unknown";
}

double NoiseKernel::stddev() const {
  double v = gauss_sd * gauss_sd;
  for (double a : uniform_half_widths) v += a * a / 3.0;
  return std::sqrt(v);
}

SourceModel::SourceModel(std::vector<SourceSpec> specs, VarianceMode mode,
                         bool enforce_equal_variance)
    : specs_(std::move(specs)),
      sources_(apply_mode(specs_, mode)),
      mode_(mode),
      enforce_equal_variance_(enforce_equal_variance),
      atoms_(build_atoms(sources_)) {
  if (sources_.empty()) throw Error(ErrorCode::invalid_argument, "model needs at least one source");
  if (enforce_equal_variance_ && !equal_variances()) {
    std::ostringstream os;
    os.precision(17);
    os << "source variances differ:";
    for (const auto& s : sources_) os << ' ' << s.variance();
    throw Error(ErrorCode::invalid_argument, os.str());
  }
}

bool SourceModel::equal_variances(double tol) const {
  const double v0 = sources_.front().variance();
  return std::all_of(sources_.begin(), sources_.end(),
                     [&](const SourceSpec& s) { return std::abs(s.variance() - v0) <= tol; });
}

MixtureDensity SourceModel::source_density(std::size_t k) const {
  const SourceSpec& s = sources_.at(k);
  return MixtureDensity(s.probs, s.values, std::vector<double>(s.values.size(), s.sigma), s.kernel);
}

SourceModel SourceModel::with_noise_scale(double sigma) const {
  std::vector<SourceSpec> specs = specs_;
  for (auto& s : specs) {
    if (s.type == SourceSpec::Type::discrete_plus_noise) s.sigma = sigma;
  }
  return SourceModel(std::move(specs), mode_, enforce_equal_variance_);
}

NoiseKernel SourceModel::noise(std::span<const double> w) const {
  if (w.size() != dim()) throw Error(ErrorCode::invalid_argument, "direction has wrong dimension");
  NoiseKernel n;
  double var = 0.0, largest = 0.0;
  for (std::size_t k = 0; k < dim(); ++k) largest = std::max(largest, std::abs(w[k]) * sources_[k].sigma);
  for (std::size_t k = 0; k < dim(); ++k) {
    const double c = std::abs(w[k]) * sources_[k].sigma;
    // cos(π/2) and friends leave ~1e-17 residues; those are exact zeros.
    if (c <= 1e-12 * largest) continue;
    if (sources_[k].kernel.is_gaussian()) {
      var += c * c;
    } else {
      n.uniform_half_widths.push_back(c * kSqrt3);
    }
  }
  n.gauss_sd = std::sqrt(var);
  std::sort(n.uniform_half_widths.begin(), n.uniform_half_widths.end(), std::greater<>());
  return n;
}

std::vector<double> SourceModel::sample(SplitMix64& rng) const {
  std::vector<double> out(dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    const SourceSpec& s = sources_[k];
    const double u = rng.uniform();
    std::size_t i = 0;
    double cdf = s.probs[0];
    while (u >= cdf && i + 1 < s.probs.size()) cdf += s.probs[++i];
    const double z = s.kernel.is_gaussian() ? rng.normal() : kSqrt3 * (2.0 * rng.uniform() - 1.0);
    out[k] = s.values[i] + s.sigma * z;
  }
  return out;
}

}  // namespace entland
