#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace skm {

/// Strictly ascending, distinct, nonzero skyrmion numbers; size a power of two in {2,...,16},
/// drawn from {-8..-1, 1..8}.
class Constellation {
 public:
  explicit Constellation(std::vector<int> symbols);

  const std::vector<int>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  int bits_per_symbol() const;

  bool operator==(const Constellation&) const = default;

 private:
  std::vector<int> symbols_;
};

/// The legitimate skyrmion numbers {-8, ..., -1, 1, ..., 8}.
std::vector<int> skyrmion_universe();

/// Per-symbol Gaussian fit (mean, unbiased std) of received N~ plus the raw samples.
struct SymbolFit {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
  std::vector<double> samples;
};

/// Empirical density of N~ with Freedman-Diaconis bins, kept for cross-checks against the
/// Gaussian model.
struct HistogramModel {
  double origin = 0.0;
  double bin_width = 0.0;
  std::vector<double> density;  // per unit N~, integrates to 1

  double pdf(double x) const;
};

HistogramModel fit_histogram(std::span<const double> samples);

class SymbolChannelStats {
 public:
  SymbolChannelStats() = default;

  /// Throws ParameterError when a symbol has < 2 samples and std::domain_error when its
  /// sample variance is zero.
  static SymbolChannelStats fit(const std::map<int, std::vector<double>>& samples);
  /// Directly specified Gaussian parameters (sigma > 0).
  static SymbolChannelStats from_parameters(const std::map<int, std::pair<double, double>>& mean_std);

  bool has(int symbol) const { return fits_.count(symbol) != 0; }
  const SymbolFit& at(int symbol) const;
  const std::map<int, SymbolFit>& fits() const { return fits_; }

  /// Gaussian stats with every sample shifted by c.
  SymbolChannelStats shifted(double c) const;

 private:
  std::map<int, SymbolFit> fits_;
};

SymbolChannelStats fit_symbol_stats(const std::map<int, std::vector<double>>& samples);

/// Ordered thresholds beta_1 < ... < beta_{M-1}; region k is (beta_{k-1}, beta_k].
struct DecisionScheme {
  Constellation constellation;
  std::vector<double> boundaries;
};

/// Thrown when the fitted means are not ordered like the symbols.
class MeanOrderError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Crossing point of two Gaussian densities N(m1, s1) and N(m2, s2) lying in (m1, m2);
/// midpoint when the variances match or no root falls in the interval.
double gaussian_intersection(double m1, double s1, double m2, double s2);

/// Pairwise ML thresholds from the fitted Gaussians (equal priors).
DecisionScheme solve_boundaries(const SymbolChannelStats& stats, const Constellation& constellation);

int hard_decide(double n_tilde, const DecisionScheme& scheme);
/// Index k (0-based) of the region containing n_tilde.
std::size_t decision_region(double n_tilde, const DecisionScheme& scheme);

}  // namespace skm
