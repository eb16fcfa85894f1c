#pragma once

#include <filesystem>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "skm/topology.hpp"

namespace skm {

/// Received N~ keyed by (turbulence level, symbol, mask, realization), plus one vacuum
/// reference per (symbol, mask). Dense layout, so results may arrive in any order.
class SampleStore {
 public:
  SampleStore() = default;
  SampleStore(std::string fingerprint, std::vector<double> levels, std::vector<int> symbols,
              std::vector<MaskSpec> masks, int trials);

  const std::string& fingerprint() const { return fingerprint_; }
  const std::vector<double>& levels() const { return levels_; }
  const std::vector<int>& symbols() const { return symbols_; }
  const std::vector<MaskSpec>& masks() const { return masks_; }
  int trials() const { return trials_; }

  std::size_t level_index(double cn2) const;
  std::size_t symbol_index(int symbol) const;
  std::size_t mask_index(const MaskSpec& mask) const;
  /// Masks of one kind, in store order.
  std::vector<MaskSpec> masks_of_kind(MaskKind kind) const;

  /// One realization: `values` holds N~ for every mask in store order.
  void record(std::size_t level, std::size_t symbol, int trial, std::span<const double> values);
  void record_vacuum(std::size_t symbol, std::span<const double> values);

  double value(std::size_t level, std::size_t symbol, std::size_t mask, int trial) const;
  double vacuum(std::size_t symbol, std::size_t mask) const;
  /// All realizations of one (level, symbol, mask).
  std::vector<double> samples(std::size_t level, std::size_t symbol, std::size_t mask) const;

  /// True once every realization and vacuum reference has been recorded.
  bool complete() const;

  /// Columnar text table: a "# fingerprint=..." line, a header, then rows
  /// level, symbol, mask, trial, n_tilde sorted by level, symbol, mask, trial.
  void write(const std::filesystem::path& path) const;
  static SampleStore read(const std::filesystem::path& path);

  bool operator==(const SampleStore&) const = default;

 private:
  std::size_t offset(std::size_t level, std::size_t symbol, std::size_t mask, int trial) const;

  std::string fingerprint_;
  std::vector<double> levels_;
  std::vector<int> symbols_;
  std::vector<MaskSpec> masks_;
  int trials_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> filled_;
  std::vector<double> vacuum_;
  std::vector<std::uint8_t> vacuum_filled_;
};

/// Canonical text label of a turbulence level ("%.6g" of C_n^2).
std::string level_label(double cn2);

}  // namespace skm
