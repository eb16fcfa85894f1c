#pragma once

#include <optional>
#include <vector>

#include "skm/dmc.hpp"

namespace skm {

struct RankedConstellation {
  std::vector<int> symbols;
  double capacity = 0.0;
};

struct ConstellationSearchResult {
  DmcModel best;
  std::vector<RankedConstellation> ranking;  // top entries, best first
  std::size_t evaluated = 0;  // subsets enumerated, skipped ones included
  std::size_t skipped_misordered = 0;
};

/// Capacities closer than this are treated as ties and resolved lexicographically.
inline constexpr double kCapacityTieTolerance = 1e-12;

/// All sorted M-subsets of `universe` in lexicographic order.
std::vector<std::vector<int>> enumerate_subsets(const std::vector<int>& universe, std::size_t m);

/// Capacity of one subset, or nullopt when its fitted means are out of order.
std::optional<double> subset_capacity(const SymbolChannelStats& stats, const std::vector<int>& subset);

/// Exhaustive search over the C(16, M) subsets of the skyrmion universe, maximizing capacity;
/// ties go to the lexicographically smallest subset. Throws ParameterError when a universe
/// symbol has no statistics and MeanOrderError when every subset is misordered.
ConstellationSearchResult optimize_constellation(const SymbolChannelStats& stats, std::size_t m,
                                                 unsigned workers = 1, std::size_t top_k = 10);

/// Same search restricted to a smaller symbol set (runs simulated with ell_max < 8).
ConstellationSearchResult optimize_constellation_over(const SymbolChannelStats& stats, const std::vector<int>& universe,
                                                      std::size_t m, unsigned workers = 1, std::size_t top_k = 10);

}  // namespace skm
