#include "skm/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace skm {

MaskSearchResult optimize_stored_mask(const SampleStore& store, std::size_t level, MaskKind kind) {
  const std::vector<MaskSpec> candidates = store.masks_of_kind(kind);
  if (candidates.empty()) throw ParameterError("sample store holds no masks of kind " + to_string(kind));
  const std::size_t n_sym = store.symbols().size();
  TurbulentEvaluator turbulent = [&](const MaskSpec& m) {
    const std::size_t mi = store.mask_index(m);
    std::vector<std::vector<double>> out(n_sym);
    for (std::size_t s = 0; s < n_sym; ++s) out[s] = store.samples(level, s, mi);
    return out;
  };
  VacuumEvaluator vacuum = [&](const MaskSpec& m) {
    const std::size_t mi = store.mask_index(m);
    std::vector<double> out(n_sym);
    for (std::size_t s = 0; s < n_sym; ++s) out[s] = store.vacuum(s, mi);
    return out;
  };
  return optimize_mask_parameter(turbulent, vacuum, candidates);
}

SymbolChannelStats level_statistics(const SampleStore& store, std::size_t level, const MaskSpec& mask) {
  const std::size_t mi = store.mask_index(mask);
  std::map<int, std::vector<double>> samples;
  for (std::size_t s = 0; s < store.symbols().size(); ++s) samples[store.symbols()[s]] = store.samples(level, s, mi);
  return fit_symbol_stats(samples);
}

std::vector<ReportRow> characterize(const SampleStore& store, const RunConfig& config,
                                    const std::vector<std::size_t>& ms, MaskKind kind) {
  std::vector<ReportRow> rows;
  for (std::size_t l = 0; l < store.levels().size(); ++l) {
    const double cn2 = store.levels()[l];
    const MaskSearchResult mask = optimize_stored_mask(store, l, kind);
    const SymbolChannelStats stats = level_statistics(store, l, mask.best);
    for (std::size_t m : ms) {
      ReportRow r;
      r.cn2 = cn2;
      if (cn2 > 0.0) {
        r.rytov = rytov_variance(cn2, config.beam.wavelength, config.link.distance);
        r.regime = to_string(classify_regime(r.rytov));
      } else {
        r.regime = "vacuum";
      }
      r.mask = mask.best;
      r.mask_mse = mask.best_mse;
      r.m = m;
      std::optional<ConstellationSearchResult> search;
      try {
        search = optimize_constellation_over(stats, config.symbols(), m, config.workers);
      } catch (const MeanOrderError&) {
        // no M-subset keeps its means ordered: nothing decodable at this level
        r.usable = false;
        r.ser = r.ber = r.ser_uniform = r.ber_uniform = std::numeric_limits<double>::quiet_NaN();
        r.skipped_misordered = enumerate_subsets(config.symbols(), m).size();
        rows.push_back(std::move(r));
        continue;
      }
      const DmcModel& d = search->best;
      r.capacity = d.capacity.capacity;
      r.ser = d.ser;
      r.ber = d.ber;
      r.ser_uniform = d.ser_uniform;
      r.ber_uniform = d.ber_uniform;
      r.constellation = d.constellation.symbols();
      r.boundaries = d.scheme.boundaries;
      r.input = d.capacity.input;
      r.transition = d.transition;
      r.deactivated = d.deactivated_symbols();
      r.ranking = search->ranking;
      r.skipped_misordered = search->skipped_misordered;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v, char sep = ',') {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << sep;
    if constexpr (std::is_floating_point_v<T>) {
      os << fmt(v[i]);
    } else {
      os << v[i];
    }
  }
  return os.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

}  // namespace

void write_report_tsv(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
  std::ofstream os = open_out(path);
  os << "level\trytov\tregime\tmask\tM\tusable\tcapacity\tser\tber\tser_uniform\tber_uniform\tconstellation\tboundaries\n";
  for (const ReportRow& r : rows) {
    os << level_label(r.cn2) << '\t' << fmt(r.rytov) << '\t' << r.regime << '\t' << r.mask.key() << '\t' << r.m
       << '\t' << (r.usable ? 1 : 0) << '\t' << fmt(r.capacity) << '\t' << fmt(r.ser) << '\t' << fmt(r.ber) << '\t' << fmt(r.ser_uniform) << '\t'
       << fmt(r.ber_uniform) << '\t' << join(r.constellation) << '\t' << join(r.boundaries) << '\n';
  }
}

nlohmann::json report_json(const std::vector<ReportRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const ReportRow& r : rows) {
    nlohmann::json ranking = nlohmann::json::array();
    for (const auto& c : r.ranking) ranking.push_back({{"constellation", c.symbols}, {"capacity", c.capacity}});
    out.push_back({
        {"level", level_label(r.cn2)},
        {"cn2", r.cn2},
        {"rytov", r.rytov},
        {"regime", r.regime},
        {"mask", r.mask.key()},
        {"mask_mse", r.mask_mse},
        {"M", r.m},
        {"usable", r.usable},
        {"capacity", r.capacity},
        {"ser", r.ser},
        {"ber", r.ber},
        {"ser_uniform", r.ser_uniform},
        {"ber_uniform", r.ber_uniform},
        {"constellation", r.constellation},
        {"boundaries", r.boundaries},
        {"input_distribution", r.input},
        {"transition", r.transition},
        {"deactivated", r.deactivated},
        {"skipped_misordered", r.skipped_misordered},
        {"ranking", ranking},
    });
  }
  return out;
}

void write_report_json(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
  std::ofstream os = open_out(path);
  os << report_json(rows).dump(2) << '\n';
}

BoxplotRecord box_statistics(std::vector<double> s) {
  BoxplotRecord b;
  b.count = s.size();
  if (s.empty()) return b;
  std::sort(s.begin(), s.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
  };
  b.q1 = quantile(0.25);
  b.median = quantile(0.5);
  b.q3 = quantile(0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double v : s) {
    if (v < lo_fence || v > hi_fence) {
      ++b.outliers;
      continue;
    }
    b.whisker_low = std::min(b.whisker_low, v);
    b.whisker_high = std::max(b.whisker_high, v);
  }
  return b;
}

std::vector<BoxplotRecord> emit_boxplot_data(const SampleStore& store) {
  std::vector<MaskKind> kinds;
  for (const MaskSpec& m : store.masks())
    if (std::find(kinds.begin(), kinds.end(), m.kind) == kinds.end()) kinds.push_back(m.kind);
  std::vector<BoxplotRecord> out;
  if (store.trials() == 0) return out;
  for (std::size_t l = 0; l < store.levels().size(); ++l) {
    for (MaskKind k : kinds) {
      const MaskSpec best = optimize_stored_mask(store, l, k).best;
      const std::size_t mi = store.mask_index(best);
      for (std::size_t s = 0; s < store.symbols().size(); ++s) {
        BoxplotRecord b = box_statistics(store.samples(l, s, mi));
        b.cn2 = store.levels()[l];
        b.mask = best;
        b.symbol = store.symbols()[s];
        out.push_back(b);
      }
    }
  }
  return out;
}

void write_boxplot_tsv(const std::filesystem::path& path, const std::vector<BoxplotRecord>& records) {
  std::ofstream os = open_out(path);
  os << "level\tmask\tsymbol\tcount\twhisker_low\tq1\tmedian\tq3\twhisker_high\toutliers\n";
  for (const BoxplotRecord& b : records) {
    os << level_label(b.cn2) << '\t' << b.mask.key() << '\t' << b.symbol << '\t' << b.count << '\t'
       << fmt(b.whisker_low) << '\t' << fmt(b.q1) << '\t' << fmt(b.median) << '\t' << fmt(b.q3) << '\t'
       << fmt(b.whisker_high) << '\t' << b.outliers << '\n';
  }
}

}  // namespace skm
