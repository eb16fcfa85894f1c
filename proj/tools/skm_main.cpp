// skm: command-line front end of the simulator.
//
// Exit codes: 0 success, 1 acceptance failure, 2 invalid configuration or arguments,
// 3 sampling violation, 4 file I/O, 5 channel unusable (misordered means), 6 other.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "criteria.hpp"
#include "skm/characterize.hpp"
#include "skm/config.hpp"
#include "skm/simulation.hpp"

namespace fs = std::filesystem;
using namespace skm;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::vector<double> levels;
  std::string mask;
  std::string out = "skm_out";
  std::optional<int> trials;
  std::optional<unsigned> workers;
  std::vector<std::size_t> ms{2, 4, 8, 16};
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_m) {
  cmd->add_option("--config", a.config_path, "run configuration (JSON)");
  cmd->add_option("--preset", a.preset, "scale preset when no --config is given")
      ->check(CLI::IsMember({"paper", "desk"}));
  cmd->add_option("--seed", a.seed, "base seed");
  cmd->add_option("--levels", a.levels, "C_n^2 levels, comma separated")->delimiter(',');
  cmd->add_option("--mask", a.mask, "mask kind used for reporting")
      ->check(CLI::IsMember({"none", "scaled_mean", "top_epsilon", "super_gaussian"}));
  cmd->add_option("--out", a.out, "output directory")->capture_default_str();
  cmd->add_option("--trials", a.trials, "realizations per symbol and level");
  cmd->add_option("--workers", a.workers, "worker threads (results do not depend on it)");
  if (with_m) cmd->add_option("-M,--sizes", a.ms, "constellation sizes, comma separated")->delimiter(',');
}

RunConfig resolve(const CommonArgs& a) {
  RunConfig c;
  if (!a.config_path.empty()) {
    if (!a.preset.empty()) throw ParameterError("--preset conflicts with --config; set \"preset\" in the file instead");
    if (!fs::exists(a.config_path)) throw IoError("config file " + a.config_path + " does not exist");
    c = load_config(a.config_path);
  } else {
    c = RunConfig::make(a.preset.empty() ? ScalePreset::desk : parse_preset(a.preset));
  }
  if (a.seed) c.seed = *a.seed;
  if (!a.levels.empty()) c.cn2_levels = a.levels;
  if (!a.mask.empty()) c.report_mask = parse_mask_kind(a.mask);
  if (a.trials) c.trials = *a.trials;
  if (a.workers) c.workers = std::max(1u, *a.workers);
  c.validate();
  return c;
}

SampleStore obtain_store(const RunConfig& c, const fs::path& out) {
  fs::create_directories(out);
  save_config(out / "config.json", c);
  bool reused = false;
  int last = -1;
  const ProgressCallback progress = [&](std::size_t done, std::size_t total) {
    const int pct = static_cast<int>(100 * done / total);
    if (pct / 5 != last / 5 || done == total) {
      last = pct;
      std::cerr << "\rsimulating: " << done << "/" << total << " (" << pct << "%)" << std::flush;
      if (done == total) std::cerr << "\n";
    }
  };
  SampleStore st = load_or_simulate(c, out / "samples.tsv", &reused, progress);
  std::cerr << (reused ? "reused " : "wrote ") << (out / "samples.tsv").string() << " (fingerprint " << c.fingerprint()
            << ")\n";
  return st;
}

std::size_t level_of(const SampleStore& st, double cn2) { return st.level_index(cn2); }

int cmd_simulate(const CommonArgs& a) {
  const RunConfig c = resolve(a);
  obtain_store(c, a.out);
  return 0;
}

int cmd_characterize(const CommonArgs& a) {
  const RunConfig c = resolve(a);
  const SampleStore st = obtain_store(c, a.out);
  const auto rows = characterize(st, c, a.ms, c.report_mask);
  write_report_tsv(fs::path(a.out) / "report.tsv", rows);
  write_report_json(fs::path(a.out) / "report.json", rows);
  std::printf("%-9s %-9s %-24s %3s %9s %11s %11s\n", "level", "regime", "mask", "M", "capacity", "SER", "BER");
  for (const ReportRow& r : rows) {
    std::printf("%-9s %-9s %-24s %3zu %9.4f %11.3e %11.3e%s\n", level_label(r.cn2).c_str(), r.regime.c_str(),
                r.mask.key().c_str(), r.m, r.capacity, r.ser, r.ber, r.usable ? "" : "  (unusable)");
  }
  return 0;
}

int cmd_optimize_mask(const CommonArgs& a) {
  const RunConfig c = resolve(a);
  const SampleStore st = obtain_store(c, a.out);
  std::vector<MaskKind> kinds;
  if (!a.mask.empty()) {
    kinds.push_back(c.report_mask);
  } else {
    for (MaskKind k : c.mask_kinds)
      if (k != MaskKind::none) kinds.push_back(k);
  }
  const fs::path path = fs::path(a.out) / "masks.tsv";
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << "level\tkind\tmask\tmse\n";
  for (double cn2 : c.cn2_levels) {
    for (MaskKind k : kinds) {
      const MaskSearchResult r = optimize_stored_mask(st, level_of(st, cn2), k);
      for (const auto& [m, mse] : r.mse_by_candidate)
        os << level_label(cn2) << '\t' << to_string(k) << '\t' << m.key() << '\t' << mse << '\n';
      std::printf("%-9s %-15s best %-24s mse %.6g\n", level_label(cn2).c_str(), to_string(k).c_str(),
                  r.best.key().c_str(), r.best_mse);
    }
  }
  return 0;
}

int cmd_optimize_constellation(const CommonArgs& a) {
  const RunConfig c = resolve(a);
  const SampleStore st = obtain_store(c, a.out);
  const fs::path path = fs::path(a.out) / "constellations.tsv";
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << "level\tmask\tM\trank\tconstellation\tcapacity\n";
  for (double cn2 : c.cn2_levels) {
    const std::size_t l = level_of(st, cn2);
    const MaskSpec mask = optimize_stored_mask(st, l, c.report_mask).best;
    const SymbolChannelStats stats = level_statistics(st, l, mask);
    for (std::size_t m : a.ms) {
      const ConstellationSearchResult r = optimize_constellation_over(stats, c.symbols(), m, c.workers);
      std::printf("%s M=%zu mask=%s\n", level_label(cn2).c_str(), m, mask.key().c_str());
      for (std::size_t i = 0; i < r.ranking.size(); ++i) {
        std::string syms;
        for (std::size_t k = 0; k < r.ranking[i].symbols.size(); ++k)
          syms += (k ? "," : "") + std::to_string(r.ranking[i].symbols[k]);
        std::printf("  %2zu  C=%.6f  {%s}\n", i + 1, r.ranking[i].capacity, syms.c_str());
        os << level_label(cn2) << '\t' << mask.key() << '\t' << m << '\t' << i + 1 << '\t' << syms << '\t'
           << r.ranking[i].capacity << '\n';
      }
    }
  }
  return 0;
}

int cmd_boxplot(const CommonArgs& a) {
  const RunConfig c = resolve(a);
  const SampleStore st = obtain_store(c, a.out);
  const fs::path path = fs::path(a.out) / "boxplot.tsv";
  write_boxplot_tsv(path, emit_boxplot_data(st));
  std::cerr << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_report(const CommonArgs& a) {
  const fs::path path = fs::path(a.out) / "report.json";
  std::ifstream is(path);
  if (!is) throw IoError(path.string() + " not found; run `skm characterize` first");
  const nlohmann::json rows = nlohmann::json::parse(is);
  std::printf("%-9s %-9s %3s %9s %11s %11s  %s\n", "level", "regime", "M", "capacity", "SER", "BER", "constellation");
  for (const auto& r : rows) {
    std::string syms;
    for (const auto& s : r["constellation"]) syms += (syms.empty() ? "" : ",") + std::to_string(s.get<int>());
    auto num = [](const nlohmann::json& v) { return v.is_number() ? v.get<double>() : std::nan(""); };
    std::printf("%-9s %-9s %3d %9.4f %11.3e %11.3e  {%s}\n", r["level"].get<std::string>().c_str(),
                r["regime"].get<std::string>().c_str(), r["M"].get<int>(), num(r["capacity"]), num(r["ser"]),
                num(r["ber"]), syms.c_str());
  }
  return 0;
}

int cmd_validate(const std::string& out, unsigned workers, int trials) {
  skm_acceptance::Options opt;
  opt.store_dir = fs::path(out) / "acceptance";
  opt.workers = workers;
  opt.trials = trials;
  const auto results = skm_acceptance::run_all(opt, std::cout, std::cerr);
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  std::cout << (failed ? "FAILED: " : "ALL PASSED: ") << results.size() - failed << "/" << results.size()
            << " criteria\n";
  return failed ? 1 : 0;
}

int fail(const char* cause, int code, const std::exception& e) {
  std::cerr << "skm: " << cause << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skyrmion-number modulation FSO simulator"};
  app.require_subcommand(1);
  CommonArgs args;
  unsigned v_workers = 1;
  int v_trials = 200;
  std::string v_out = "skm_out";

  auto* simulate = app.add_subcommand("simulate", "run the Monte Carlo and store the samples");
  auto* characterize_cmd = app.add_subcommand("characterize", "capacity / SER / BER report per level and M");
  auto* mask = app.add_subcommand("optimize-mask", "mask-parameter search per level and kind");
  auto* constel = app.add_subcommand("optimize-constellation", "ranked constellations per level and M");
  auto* box = app.add_subcommand("boxplot", "per-symbol box statistics");
  auto* report = app.add_subcommand("report", "print a stored report");
  auto* validate = app.add_subcommand("validate", "run the acceptance criteria");
  add_common(simulate, args, false);
  add_common(characterize_cmd, args, true);
  add_common(mask, args, false);
  add_common(constel, args, true);
  add_common(box, args, false);
  report->add_option("--out", args.out, "directory holding report.json")->capture_default_str();
  validate->add_option("--out", v_out, "directory for cached acceptance stores")->capture_default_str();
  validate->add_option("--workers", v_workers, "worker threads")->check(CLI::PositiveNumber);
  validate->add_option("--trials", v_trials, "realizations per symbol for the desk runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*simulate) return cmd_simulate(args);
    if (*characterize_cmd) return cmd_characterize(args);
    if (*mask) return cmd_optimize_mask(args);
    if (*constel) return cmd_optimize_constellation(args);
    if (*box) return cmd_boxplot(args);
    if (*report) return cmd_report(args);
    if (*validate) return cmd_validate(v_out, v_workers, v_trials);
  } catch (const SamplingViolation& e) {
    return fail("sampling violation", 3, e);
  } catch (const MeanOrderError& e) {
    return fail("channel unusable", 5, e);
  } catch (const ParameterError& e) {
    return fail("invalid configuration", 2, e);
  } catch (const nlohmann::json::exception& e) {
    return fail("invalid configuration", 2, e);
  } catch (const IoError& e) {
    return fail("file I/O", 4, e);
  } catch (const std::exception& e) {
    return fail("error", 6, e);
  }
  return 0;
}
