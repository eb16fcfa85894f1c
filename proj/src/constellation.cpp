#include "skm/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>
#include <thread>

#include "skm/grid.hpp"

namespace skm {

std::vector<std::vector<int>> enumerate_subsets(const std::vector<int>& universe, std::size_t m) {
  std::vector<std::vector<int>> out;
  if (m == 0 || m > universe.size()) return out;
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  const std::size_t n = universe.size();
  while (true) {
    std::vector<int> s(m);
    for (std::size_t i = 0; i < m; ++i) s[i] = universe[idx[i]];
    out.push_back(std::move(s));
    std::size_t i = m;
    while (i > 0 && idx[i - 1] == n - m + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::optional<double> subset_capacity(const SymbolChannelStats& stats, const std::vector<int>& subset) {
  try {
    const Constellation c(subset);
    const DecisionScheme scheme = solve_boundaries(stats, c);
    return arimoto_blahut(transition_matrix(stats, scheme)).capacity;
  } catch (const MeanOrderError&) {
    return std::nullopt;
  }
}

namespace {

// quantized so near-equal capacities compare as ties
long long capacity_key(double c) { return std::llround(c / kCapacityTieTolerance); }

bool ranks_before(const RankedConstellation& a, const RankedConstellation& b) {
  const long long ka = capacity_key(a.capacity);
  const long long kb = capacity_key(b.capacity);
  if (ka != kb) return ka > kb;
  return a.symbols < b.symbols;
}

}  // namespace

ConstellationSearchResult optimize_constellation(const SymbolChannelStats& stats, std::size_t m, unsigned workers,
                                                 std::size_t top_k) {
  return optimize_constellation_over(stats, skyrmion_universe(), m, workers, top_k);
}

ConstellationSearchResult optimize_constellation_over(const SymbolChannelStats& stats, const std::vector<int>& universe,
                                                      std::size_t m, unsigned workers, std::size_t top_k) {
  for (int s : universe)
    if (!stats.has(s)) throw ParameterError("optimize_constellation: missing statistics for symbol " + std::to_string(s));
  if (m < 2 || m > 16 || (m & (m - 1)) != 0)
    throw ParameterError("optimize_constellation: M must be a power of two in [2, 16]");
  if (m > universe.size())
    throw ParameterError("optimize_constellation: M = " + std::to_string(m) + " exceeds the " +
                         std::to_string(universe.size()) + " available symbols");

  const auto subsets = enumerate_subsets(universe, m);
  std::vector<std::optional<double>> caps(subsets.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(subsets.size())));
  auto run = [&](unsigned w) {
    for (std::size_t i = w; i < subsets.size(); i += workers) caps[i] = subset_capacity(stats, subsets[i]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  std::vector<RankedConstellation> ranked;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (caps[i]) {
      ranked.push_back({subsets[i], *caps[i]});
    } else {
      ++skipped;
    }
  }
  if (skipped > 0)
    std::cerr << "optimize_constellation: skipped " << skipped << " of " << subsets.size()
              << " subsets with misordered means (M=" << m << ")\n";
  if (ranked.empty()) throw MeanOrderError("optimize_constellation: every subset has misordered means");
  std::sort(ranked.begin(), ranked.end(), ranks_before);
  ConstellationSearchResult result{build_dmc_model(stats, Constellation(ranked.front().symbols)), {},
                                   subsets.size(), skipped};
  ranked.resize(std::min(top_k, ranked.size()));
  result.ranking = std::move(ranked);
  return result;
}

}  // namespace skm
