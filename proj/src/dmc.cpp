#include "skm/dmc.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "skm/grid.hpp"

namespace skm {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

double region_probability(double mu, double sigma, double lo, double hi) {
  // upper tail difference is more accurate when the region lies right of the mean
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  if (a > 0.0) return normal_cdf(-a) - normal_cdf(-b);
  return normal_cdf(b) - normal_cdf(a);
}

}  // namespace

Matrix transition_matrix(const SymbolChannelStats& stats, const DecisionScheme& scheme) {
  const auto& sym = scheme.constellation.symbols();
  const std::size_t m = sym.size();
  if (scheme.boundaries.size() + 1 != m) throw ParameterError("transition_matrix: boundary count mismatch");
  Matrix p(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    const SymbolFit& f = stats.at(sym[i]);
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double lo = j == 0 ? -INFINITY : scheme.boundaries[j - 1];
      const double hi = j + 1 == m ? INFINITY : scheme.boundaries[j];
      p[i][j] = std::max(0.0, region_probability(f.mean, f.stddev, lo, hi));
      total += p[i][j];
    }
    for (double& v : p[i]) v /= total;
  }
  return p;
}

Matrix empirical_transition_matrix(const SymbolChannelStats& stats, const DecisionScheme& scheme) {
  const auto& sym = scheme.constellation.symbols();
  const std::size_t m = sym.size();
  Matrix p(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    const SymbolFit& f = stats.at(sym[i]);
    if (f.samples.empty()) throw ParameterError("empirical_transition_matrix: no samples for a symbol");
    for (double x : f.samples) p[i][decision_region(x, scheme)] += 1.0;
    for (double& v : p[i]) v /= static_cast<double>(f.samples.size());
  }
  return p;
}

void require_row_stochastic(const Matrix& p, double tol) {
  const std::size_t m = p.size();
  if (m == 0) throw ParameterError("transition matrix is empty");
  for (std::size_t i = 0; i < m; ++i) {
    if (p[i].size() != m) throw ParameterError("transition matrix must be square");
    double sum = 0.0;
    for (double v : p[i]) {
      if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("transition matrix entries must lie in [0, 1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      throw ParameterError("transition matrix row " + std::to_string(i) + " does not sum to 1");
  }
}

double mutual_information(const Matrix& p, const std::vector<double>& px) {
  const std::size_t m = p.size();
  std::vector<double> q(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) q[j] += px[i] * p[i][j];
  double info = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (px[i] <= 0.0) continue;
    for (std::size_t j = 0; j < m; ++j)
      if (p[i][j] > 0.0) info += px[i] * p[i][j] * std::log2(p[i][j] / q[j]);
  }
  return std::max(0.0, info);
}

CapacityResult arimoto_blahut(const Matrix& p, double tol, int max_iter) {
  require_row_stochastic(p, 1e-9);
  if (!(tol > 0.0)) throw ParameterError("arimoto_blahut: tol must be positive");
  if (max_iter < 1) throw ParameterError("arimoto_blahut: max_iter must be >= 1");
  const std::size_t m = p.size();
  CapacityResult r;
  r.input.assign(m, 1.0 / static_cast<double>(m));
  std::vector<double> q(m), d(m);
  double lower = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) q[j] += r.input[i] * p[i][j];
    // d_i = D(P_i || q) in bits, 0 log 0 := 0
    double upper = -INFINITY;
    lower = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double di = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (p[i][j] > 0.0) di += p[i][j] * std::log2(p[i][j] / q[j]);
      d[i] = di;
      upper = std::max(upper, di);
      lower += r.input[i] * di;
    }
    r.iterations = it;
    if (upper - lower < tol) {
      r.converged = true;
      break;
    }
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      r.input[i] *= std::exp2(d[i]);
      z += r.input[i];
    }
    for (double& v : r.input) v /= z;
  }
  r.capacity = std::max(0.0, lower);
  return r;
}

int BitMapping::hamming(std::size_t i, std::size_t j) const { return std::popcount(words.at(i) ^ words.at(j)); }

BitMapping gray_mapping(std::size_t m) {
  if (m < 2 || !std::has_single_bit(m)) throw ParameterError("gray_mapping: M must be a power of two >= 2");
  BitMapping b;
  b.bits = std::countr_zero(m);
  b.words.resize(m);
  for (std::size_t k = 0; k < m; ++k) b.words[k] = static_cast<std::uint32_t>(k ^ (k >> 1));
  return b;
}

double symbol_error_rate(const Matrix& p, const std::vector<double>& px) {
  if (px.size() != p.size()) throw ParameterError("symbol_error_rate: dimension mismatch");
  double ps = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (j != i) ps += p[i][j] * px[i];
  return std::clamp(ps, 0.0, 1.0);
}

double bit_error_rate(const Matrix& p, const std::vector<double>& px, const BitMapping& mapping) {
  if (px.size() != p.size() || mapping.words.size() != p.size())
    throw ParameterError("bit_error_rate: dimension mismatch");
  double pb = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (j != i) pb += mapping.hamming(i, j) * p[i][j] * px[i];
  return std::clamp(pb / mapping.bits, 0.0, 1.0);
}

std::vector<int> DmcModel::deactivated_symbols() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < capacity.input.size(); ++i)
    if (capacity.input[i] < kDeactivatedThreshold) out.push_back(constellation.symbols()[i]);
  return out;
}

DmcModel build_dmc_model(const SymbolChannelStats& stats, const Constellation& constellation) {
  DmcModel model{constellation, solve_boundaries(stats, constellation), {}, {}};
  model.transition = transition_matrix(stats, model.scheme);
  model.capacity = arimoto_blahut(model.transition);
  const BitMapping gray = gray_mapping(constellation.size());
  model.ser = symbol_error_rate(model.transition, model.capacity.input);
  model.ber = bit_error_rate(model.transition, model.capacity.input, gray);
  const std::vector<double> uniform(constellation.size(), 1.0 / static_cast<double>(constellation.size()));
  model.ser_uniform = symbol_error_rate(model.transition, uniform);
  model.ber_uniform = bit_error_rate(model.transition, uniform, gray);
  return model;
}

}  // namespace skm
