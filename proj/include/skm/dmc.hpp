#pragma once

#include <cstdint>
#include <vector>

#include "skm/detection.hpp"

namespace skm {

/// Row-major M x M matrix, P[i][j] = Pr(decide n_j | sent n_i).
using Matrix = std::vector<std::vector<double>>;

/// Standard normal CDF, accurate in both tails.
double normal_cdf(double x);

/// P_ij = Phi((beta_j - mu_i)/sigma_i) - Phi((beta_{j-1} - mu_i)/sigma_i).
Matrix transition_matrix(const SymbolChannelStats& stats, const DecisionScheme& scheme);

/// Fraction of each symbol's samples decided into each region (cross-check of the Gaussian model).
Matrix empirical_transition_matrix(const SymbolChannelStats& stats, const DecisionScheme& scheme);

/// Throws ParameterError unless P is square, entries lie in [0,1] and rows sum to 1 within tol.
void require_row_stochastic(const Matrix& p, double tol = 1e-10);

struct CapacityResult {
  double capacity = 0.0;  // bits per channel use
  std::vector<double> input;  // p*
  int iterations = 0;
  bool converged = false;
};

CapacityResult arimoto_blahut(const Matrix& p, double tol = 1e-10, int max_iter = 10000);

/// Mutual information I(X;Y) in bits for input distribution px.
double mutual_information(const Matrix& p, const std::vector<double>& px);

/// Binary-reflected Gray word of sorted-symbol index k.
struct BitMapping {
  int bits = 0;
  std::vector<std::uint32_t> words;

  int hamming(std::size_t i, std::size_t j) const;
};

BitMapping gray_mapping(std::size_t m);

double symbol_error_rate(const Matrix& p, const std::vector<double>& px);
double bit_error_rate(const Matrix& p, const std::vector<double>& px, const BitMapping& mapping);

/// Inputs with p* below this are reported as deactivated.
inline constexpr double kDeactivatedThreshold = 1e-12;

struct DmcModel {
  Constellation constellation;
  DecisionScheme scheme;
  Matrix transition;
  CapacityResult capacity;
  double ser = 0.0;  // at p*
  double ber = 0.0;
  double ser_uniform = 0.0;
  double ber_uniform = 0.0;

  std::vector<int> deactivated_symbols() const;
};

/// Boundaries, P, capacity and error rates for one constellation. Throws MeanOrderError when
/// the fitted means are misordered.
DmcModel build_dmc_model(const SymbolChannelStats& stats, const Constellation& constellation);

}  // namespace skm
