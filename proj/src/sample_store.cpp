#include "skm/sample_store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace skm {

std::string level_label(double cn2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", cn2);
  return buf;
}

SampleStore::SampleStore(std::string fingerprint, std::vector<double> levels, std::vector<int> symbols,
                         std::vector<MaskSpec> masks, int trials)
    : fingerprint_(std::move(fingerprint)),
      levels_(std::move(levels)),
      symbols_(std::move(symbols)),
      masks_(std::move(masks)),
      trials_(trials) {
  if (trials < 0) throw ParameterError("SampleStore: trials must be >= 0");
  const std::size_t n = levels_.size() * symbols_.size() * masks_.size() * static_cast<std::size_t>(trials_);
  values_.assign(n, 0.0);
  filled_.assign(n, 0);
  vacuum_.assign(symbols_.size() * masks_.size(), 0.0);
  vacuum_filled_.assign(vacuum_.size(), 0);
}

std::size_t SampleStore::level_index(double cn2) const {
  for (std::size_t i = 0; i < levels_.size(); ++i)
    if (levels_[i] == cn2 || level_label(levels_[i]) == level_label(cn2)) return i;
  throw ParameterError("SampleStore: no turbulence level " + level_label(cn2));
}

std::size_t SampleStore::symbol_index(int symbol) const {
  const auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end()) throw ParameterError("SampleStore: no symbol " + std::to_string(symbol));
  return static_cast<std::size_t>(it - symbols_.begin());
}

std::size_t SampleStore::mask_index(const MaskSpec& mask) const {
  const auto it = std::find(masks_.begin(), masks_.end(), mask);
  if (it == masks_.end()) throw ParameterError("SampleStore: no mask " + mask.key());
  return static_cast<std::size_t>(it - masks_.begin());
}

std::vector<MaskSpec> SampleStore::masks_of_kind(MaskKind kind) const {
  std::vector<MaskSpec> out;
  for (const MaskSpec& m : masks_)
    if (m.kind == kind) out.push_back(m);
  return out;
}

std::size_t SampleStore::offset(std::size_t level, std::size_t symbol, std::size_t mask, int trial) const {
  if (level >= levels_.size() || symbol >= symbols_.size() || mask >= masks_.size() || trial < 0 ||
      trial >= trials_)
    throw std::out_of_range("SampleStore: index out of range");
  return ((level * symbols_.size() + symbol) * masks_.size() + mask) * static_cast<std::size_t>(trials_) +
         static_cast<std::size_t>(trial);
}

void SampleStore::record(std::size_t level, std::size_t symbol, int trial, std::span<const double> values) {
  if (values.size() != masks_.size()) throw ParameterError("SampleStore::record: one value per mask required");
  for (std::size_t m = 0; m < masks_.size(); ++m) {
    const std::size_t o = offset(level, symbol, m, trial);
    if (filled_[o]) throw std::logic_error("SampleStore is append-only; realization recorded twice");
    values_[o] = values[m];
    filled_[o] = 1;
  }
}

void SampleStore::record_vacuum(std::size_t symbol, std::span<const double> values) {
  if (values.size() != masks_.size()) throw ParameterError("SampleStore::record_vacuum: one value per mask required");
  if (symbol >= symbols_.size()) throw std::out_of_range("SampleStore: symbol index out of range");
  for (std::size_t m = 0; m < masks_.size(); ++m) {
    const std::size_t o = symbol * masks_.size() + m;
    if (vacuum_filled_[o]) throw std::logic_error("SampleStore is append-only; vacuum reference recorded twice");
    vacuum_[o] = values[m];
    vacuum_filled_[o] = 1;
  }
}

double SampleStore::value(std::size_t level, std::size_t symbol, std::size_t mask, int trial) const {
  const std::size_t o = offset(level, symbol, mask, trial);
  if (!filled_[o]) throw std::logic_error("SampleStore: realization not recorded");
  return values_[o];
}

double SampleStore::vacuum(std::size_t symbol, std::size_t mask) const {
  if (symbol >= symbols_.size() || mask >= masks_.size()) throw std::out_of_range("SampleStore: index out of range");
  const std::size_t o = symbol * masks_.size() + mask;
  if (!vacuum_filled_[o]) throw std::logic_error("SampleStore: vacuum reference not recorded");
  return vacuum_[o];
}

std::vector<double> SampleStore::samples(std::size_t level, std::size_t symbol, std::size_t mask) const {
  std::vector<double> out(static_cast<std::size_t>(trials_));
  for (int t = 0; t < trials_; ++t) out[static_cast<std::size_t>(t)] = value(level, symbol, mask, t);
  return out;
}

bool SampleStore::complete() const {
  return std::all_of(filled_.begin(), filled_.end(), [](auto f) { return f != 0; }) &&
         std::all_of(vacuum_filled_.begin(), vacuum_filled_.end(), [](auto f) { return f != 0; });
}

void SampleStore::write(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write sample store " + path.string());
  os << "# fingerprint=" << fingerprint_ << " trials=" << trials_ << '\n';
  os << "level\tsymbol\tmask\ttrial\tn_tilde\n";
  char buf[40];
  auto put = [&](const std::string& level, int symbol, const std::string& mask, int trial, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << level << '\t' << symbol << '\t' << mask << '\t' << trial << '\t' << buf << '\n';
  };
  std::vector<std::string> keys;
  for (const MaskSpec& m : masks_) keys.push_back(m.key());
  for (std::size_t s = 0; s < symbols_.size(); ++s)
    for (std::size_t m = 0; m < masks_.size(); ++m)
      if (vacuum_filled_[s * masks_.size() + m]) put("vacuum", symbols_[s], keys[m], 0, vacuum_[s * masks_.size() + m]);
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const std::string label = level_label(levels_[l]);
    for (std::size_t s = 0; s < symbols_.size(); ++s)
      for (std::size_t m = 0; m < masks_.size(); ++m)
        for (int t = 0; t < trials_; ++t) {
          const std::size_t o = offset(l, s, m, t);
          if (filled_[o]) put(label, symbols_[s], keys[m], t, values_[o]);
        }
  }
  if (!os) throw std::runtime_error("error while writing sample store " + path.string());
}

SampleStore SampleStore::read(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open sample store " + path.string());
  std::string line;
  std::getline(is, line);
  std::string fingerprint;
  int trials = 0;
  {
    const auto f = line.find("fingerprint=");
    const auto t = line.find("trials=");
    if (line.rfind("# ", 0) != 0 || f == std::string::npos || t == std::string::npos)
      throw ParameterError("sample store " + path.string() + ": missing fingerprint header");
    fingerprint = line.substr(f + 12, line.find(' ', f) - (f + 12));
    trials = std::stoi(line.substr(t + 7));
  }
  std::getline(is, line);
  if (line != "level\tsymbol\tmask\ttrial\tn_tilde")
    throw ParameterError("sample store " + path.string() + ": unexpected column header");

  struct Row {
    std::string level;
    int symbol;
    std::string mask;
    int trial;
    double v;
  };
  std::vector<Row> rows;
  std::vector<std::string> level_labels, mask_keys;
  std::vector<int> symbols;
  auto note = [](auto& list, const auto& v) {
    if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Row r;
    std::string sym, trial, v;
    if (!std::getline(ls, r.level, '\t') || !std::getline(ls, sym, '\t') || !std::getline(ls, r.mask, '\t') ||
        !std::getline(ls, trial, '\t') || !std::getline(ls, v))
      throw ParameterError("sample store " + path.string() + ": malformed row '" + line + "'");
    r.symbol = std::stoi(sym);
    r.trial = std::stoi(trial);
    r.v = std::strtod(v.c_str(), nullptr);
    if (r.level != "vacuum") note(level_labels, r.level);
    note(symbols, r.symbol);
    note(mask_keys, r.mask);
    rows.push_back(std::move(r));
  }
  std::vector<double> levels;
  for (const auto& l : level_labels) levels.push_back(std::strtod(l.c_str(), nullptr));
  std::sort(levels.begin(), levels.end());
  std::sort(symbols.begin(), symbols.end());
  std::vector<MaskSpec> masks;
  for (const auto& k : mask_keys) masks.push_back(MaskSpec::parse(k));

  SampleStore store(fingerprint, levels, symbols, masks, trials);
  std::map<std::string, std::size_t> level_of, mask_of;
  for (std::size_t i = 0; i < levels.size(); ++i) level_of[level_label(levels[i])] = i;
  for (std::size_t i = 0; i < masks.size(); ++i) mask_of[masks[i].key()] = i;
  for (const Row& r : rows) {
    const std::size_t s = store.symbol_index(r.symbol);
    const std::size_t m = mask_of.at(r.mask);
    if (r.level == "vacuum") {
      store.vacuum_[s * masks.size() + m] = r.v;
      store.vacuum_filled_[s * masks.size() + m] = 1;
    } else {
      const std::size_t o = store.offset(level_of.at(r.level), s, m, r.trial);
      store.values_[o] = r.v;
      store.filled_[o] = 1;
    }
  }
  return store;
}

}  // namespace skm
