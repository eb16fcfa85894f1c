#include "skm/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "skm/grid.hpp"

namespace skm {

Constellation::Constellation(std::vector<int> symbols) : symbols_(std::move(symbols)) {
  const std::size_t m = symbols_.size();
  if (m < 2 || m > 16 || (m & (m - 1)) != 0)
    throw ParameterError("Constellation: size must be a power of two in [2, 16]");
  for (std::size_t i = 0; i < m; ++i) {
    const int s = symbols_[i];
    if (s == 0 || s < -8 || s > 8) throw ParameterError("Constellation: symbols must lie in {-8..-1, 1..8}");
    if (i > 0 && symbols_[i - 1] >= s) throw ParameterError("Constellation: symbols must be strictly ascending");
  }
}

int Constellation::bits_per_symbol() const {
  int k = 0;
  while ((std::size_t{1} << k) < symbols_.size()) ++k;
  return k;
}

std::vector<int> skyrmion_universe() {
  std::vector<int> s;
  for (int v = -8; v <= 8; ++v)
    if (v != 0) s.push_back(v);
  return s;
}

// ---------------------------------------------------------------------------

double HistogramModel::pdf(double x) const {
  if (bin_width <= 0.0 || density.empty()) return 0.0;
  const double pos = (x - origin) / bin_width;
  if (pos < 0.0) return 0.0;
  const auto bin = static_cast<std::size_t>(pos);
  return bin < density.size() ? density[bin] : 0.0;
}

HistogramModel fit_histogram(std::span<const double> samples) {
  if (samples.size() < 2) throw ParameterError("fit_histogram: need at least two samples");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  const double range = s.back() - s.front();
  double width = 2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
  if (!(width > 0.0)) width = range > 0.0 ? range / std::sqrt(static_cast<double>(s.size())) : 1e-6;
  HistogramModel h;
  h.origin = s.front();
  h.bin_width = width;
  const auto bins = static_cast<std::size_t>(std::floor(range / width)) + 1;
  h.density.assign(bins, 0.0);
  for (double v : s) {
    auto b = static_cast<std::size_t>((v - h.origin) / width);
    h.density[std::min(b, bins - 1)] += 1.0;
  }
  for (double& d : h.density) d /= static_cast<double>(s.size()) * width;
  return h;
}

// ---------------------------------------------------------------------------

SymbolChannelStats SymbolChannelStats::fit(const std::map<int, std::vector<double>>& samples) {
  SymbolChannelStats stats;
  for (const auto& [symbol, values] : samples) {
    if (values.size() < 2)
      throw ParameterError("fit_symbol_stats: symbol " + std::to_string(symbol) + " has fewer than 2 samples");
    SymbolFit f;
    f.count = values.size();
    f.samples = values;
    double sum = 0.0;
    for (double v : values) sum += v;
    f.mean = sum / static_cast<double>(f.count);
    double ss = 0.0;
    for (double v : values) ss += (v - f.mean) * (v - f.mean);
    f.stddev = std::sqrt(ss / static_cast<double>(f.count - 1));
    if (!(f.stddev > 0.0))
      throw std::domain_error("fit_symbol_stats: symbol " + std::to_string(symbol) +
                              " has zero sample variance; increase the number of trials");
    stats.fits_[symbol] = std::move(f);
  }
  return stats;
}

SymbolChannelStats SymbolChannelStats::from_parameters(const std::map<int, std::pair<double, double>>& mean_std) {
  SymbolChannelStats stats;
  for (const auto& [symbol, ms] : mean_std) {
    if (!(ms.second > 0.0)) throw ParameterError("SymbolChannelStats: sigma must be positive");
    SymbolFit f;
    f.mean = ms.first;
    f.stddev = ms.second;
    stats.fits_[symbol] = f;
  }
  return stats;
}

const SymbolFit& SymbolChannelStats::at(int symbol) const {
  const auto it = fits_.find(symbol);
  if (it == fits_.end()) throw ParameterError("SymbolChannelStats: no statistics for symbol " + std::to_string(symbol));
  return it->second;
}

SymbolChannelStats SymbolChannelStats::shifted(double c) const {
  SymbolChannelStats out = *this;
  for (auto& [symbol, f] : out.fits_) {
    f.mean += c;
    for (double& v : f.samples) v += c;
  }
  return out;
}

SymbolChannelStats fit_symbol_stats(const std::map<int, std::vector<double>>& samples) {
  return SymbolChannelStats::fit(samples);
}

// ---------------------------------------------------------------------------

double gaussian_intersection(double m1, double s1, double m2, double s2) {
  const double mid = 0.5 * (m1 + m2);
  if (s1 == s2) return mid;
  // log N(x; m1, s1) = log N(x; m2, s2)  ->  a x^2 + b x + c = 0
  const double v1 = s1 * s1;
  const double v2 = s2 * s2;
  const double a = 1.0 / v2 - 1.0 / v1;
  const double b = 2.0 * (m1 / v1 - m2 / v2);
  const double c = m2 * m2 / v2 - m1 * m1 / v1 + 2.0 * std::log(s2 / s1);
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return mid;
  const double sq = std::sqrt(disc);
  // numerically stable pair of roots
  const double qv = -0.5 * (b + std::copysign(sq, b));
  double r1 = qv / a;
  double r2 = qv != 0.0 ? c / qv : r1;
  const double lo = std::min(m1, m2);
  const double hi = std::max(m1, m2);
  const bool in1 = r1 > lo && r1 < hi;
  const bool in2 = r2 > lo && r2 < hi;
  if (in1 && in2) return std::abs(r1 - mid) <= std::abs(r2 - mid) ? r1 : r2;
  if (in1) return r1;
  if (in2) return r2;
  return mid;
}

DecisionScheme solve_boundaries(const SymbolChannelStats& stats, const Constellation& constellation) {
  const auto& sym = constellation.symbols();
  std::vector<double> beta;
  beta.reserve(sym.size() - 1);
  for (std::size_t k = 0; k + 1 < sym.size(); ++k) {
    const SymbolFit& a = stats.at(sym[k]);
    const SymbolFit& b = stats.at(sym[k + 1]);
    if (!(a.mean < b.mean)) {
      throw MeanOrderError("solve_boundaries: fitted means of symbols " + std::to_string(sym[k]) + " and " +
                           std::to_string(sym[k + 1]) + " are out of order; the constellation is unusable");
    }
    beta.push_back(gaussian_intersection(a.mean, a.stddev, b.mean, b.stddev));
  }
  for (std::size_t k = 1; k < beta.size(); ++k) {
    if (!(beta[k - 1] < beta[k]))
      throw MeanOrderError("solve_boundaries: decision thresholds are not strictly increasing");
  }
  return DecisionScheme{constellation, std::move(beta)};
}

std::size_t decision_region(double n_tilde, const DecisionScheme& scheme) {
  // first boundary >= x: region k is (beta_{k-1}, beta_k]
  const auto it = std::lower_bound(scheme.boundaries.begin(), scheme.boundaries.end(), n_tilde);
  return static_cast<std::size_t>(it - scheme.boundaries.begin());
}

int hard_decide(double n_tilde, const DecisionScheme& scheme) {
  return scheme.constellation.symbols()[decision_region(n_tilde, scheme)];
}

}  // namespace skm
