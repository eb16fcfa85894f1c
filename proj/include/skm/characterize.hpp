#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "skm/config.hpp"
#include "skm/constellation.hpp"
#include "skm/sample_store.hpp"

namespace skm {

/// Mask-parameter search of one kind at one level against the stored vacuum references.
MaskSearchResult optimize_stored_mask(const SampleStore& store, std::size_t level, MaskKind kind);

/// Gaussian fits of every stored symbol at one level under one mask.
SymbolChannelStats level_statistics(const SampleStore& store, std::size_t level, const MaskSpec& mask);

struct ReportRow {
  double cn2 = 0.0;
  double rytov = 0.0;
  std::string regime;
  MaskSpec mask;
  double mask_mse = 0.0;
  std::size_t m = 0;
  bool usable = true;  // false when every M-subset has misordered means; capacity is then 0
  double capacity = 0.0;
  double ser = 0.0;
  double ber = 0.0;
  double ser_uniform = 0.0;
  double ber_uniform = 0.0;
  std::vector<int> constellation;
  std::vector<double> boundaries;
  std::vector<double> input;  // p*
  Matrix transition;
  std::vector<int> deactivated;
  std::vector<RankedConstellation> ranking;
  std::size_t skipped_misordered = 0;
};

/// Per (level, M): mask optimization, stats fit, constellation search and channel model.
std::vector<ReportRow> characterize(const SampleStore& store, const RunConfig& config,
                                    const std::vector<std::size_t>& ms, MaskKind kind);

/// Delimited table, one row per (level, M).
void write_report_tsv(const std::filesystem::path& path, const std::vector<ReportRow>& rows);
nlohmann::json report_json(const std::vector<ReportRow>& rows);
void write_report_json(const std::filesystem::path& path, const std::vector<ReportRow>& rows);

struct BoxplotRecord {
  double cn2 = 0.0;
  MaskSpec mask;
  int symbol = 0;
  std::size_t count = 0;
  double whisker_low = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_high = 0.0;
  std::size_t outliers = 0;
};

/// Quartiles (linear interpolation between order statistics), whiskers at the most extreme
/// samples within 1.5 IQR of the box, and the count beyond them.
BoxplotRecord box_statistics(std::vector<double> samples);

/// One record per (level, mask kind, symbol); each kind uses its optimized parameter.
std::vector<BoxplotRecord> emit_boxplot_data(const SampleStore& store);
void write_boxplot_tsv(const std::filesystem::path& path, const std::vector<BoxplotRecord>& records);

}  // namespace skm
