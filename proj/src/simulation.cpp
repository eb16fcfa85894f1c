#include "skm/simulation.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace skm {

std::uint64_t realization_seed(std::uint64_t base, double cn2, int symbol, int trial) {
  return hash_words({base, double_bits(cn2), static_cast<std::uint64_t>(static_cast<std::int64_t>(symbol)),
                     static_cast<std::uint64_t>(trial)});
}

std::vector<double> masked_numbers(const StokesField& measured, const ApertureRegion& aperture,
                                   std::span<const MaskSpec> masks, DensityMethod method, double floor) {
  const NormalizedStokesField s = normalize_stokes(measured, floor);
  const SkyrmionDensityField d = skyrmion_density(s, method, &aperture);
  const auto& idx = aperture.indices();
  RealArray intensity(idx.size()), density(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    intensity[k] = measured.s0[idx[k]];
    density[k] = d.density[idx[k]];
  }
  const double scale = measured.grid.pixel_area() / (4.0 * std::numbers::pi);
  std::vector<double> out;
  out.reserve(masks.size());
  for (const MaskSpec& m : masks) {
    double sum = 0.0;
    if (m.kind == MaskKind::none) {
      for (double v : density) sum += v;
    } else {
      const RealArray w = build_mask(intensity, m);
      for (std::size_t k = 0; k < density.size(); ++k) sum += w[k] * density[k];
    }
    out.push_back(sum * scale);
  }
  return out;
}

RealizationEngine::RealizationEngine(const RunConfig& config)
    : config_(config),
      grid_(config.grid()),
      masks_(config.mask_candidates()),
      aperture_(ApertureRegion::circle(grid_, config.link.aperture_diameter)),
      propagator_(grid_, config.link, config.beam, config.absorber) {
  config.validate();
  for (double cn2 : config.cn2_levels)
    generators_.emplace_back(config.profile(cn2), grid_, config.beam.wavenumber(), config.subharmonics);
  for (int s : config.symbols())
    transmitted_.emplace(s, synthesize_skm_beam(s, skm_beam_spec(s, config.beam), grid_));
}

std::vector<PhaseScreen> RealizationEngine::screens(std::size_t level, const CounterRng& stream) const {
  const PhaseScreenGenerator& gen = generators_.at(level);
  const auto n = static_cast<std::size_t>(config_.link.n_steps);
  std::vector<PhaseScreen> out;
  out.reserve(n + 1);
  for (std::size_t pair = 0; out.size() < n; ++pair) {
    auto [a, b] = gen.generate_pair(stream.substream(pair));
    out.push_back(std::move(a));
    if (out.size() < n) out.push_back(std::move(b));
  }
  return out;
}

VectorField RealizationEngine::received_field(int symbol, std::span<const PhaseScreen> screens) const {
  const auto it = transmitted_.find(symbol);
  if (it == transmitted_.end()) {
    const BeamSpec spec = skm_beam_spec(symbol, config_.beam);
    return propagator_.propagate(synthesize_skm_beam(symbol, spec, grid_), screens);
  }
  return propagator_.propagate(it->second, screens);
}

std::vector<double> RealizationEngine::realization(std::size_t level, int symbol, int trial) const {
  const CounterRng stream(realization_seed(config_.seed, config_.cn2_levels.at(level), symbol, trial));
  const std::vector<PhaseScreen> phase = screens(level, stream.substream(0));
  const VectorField rx = received_field(symbol, phase);
  const StokesField measured = measure_stokes(rx, config_.noise, aperture_, stream.substream(1));
  return masked_numbers(measured, aperture_, masks_, config_.density_method, config_.stokes_floor);
}

std::vector<double> RealizationEngine::vacuum_reference(int symbol) const {
  const VectorField rx = received_field(symbol, {});
  return masked_numbers(stokes(rx), aperture_, masks_, config_.density_method, config_.stokes_floor);
}

SampleStore run_simulation(const RunConfig& config, const ProgressCallback& progress) {
  config.validate();
  const std::vector<int> symbols = config.symbols();
  SampleStore store(config.fingerprint(), config.cn2_levels, symbols, config.mask_candidates(), config.trials);

  struct Unit {
    bool vacuum;
    std::size_t level;
    std::size_t symbol;
    int trial;
  };
  std::vector<Unit> units;
  for (std::size_t s = 0; s < symbols.size(); ++s) units.push_back({true, 0, s, 0});
  for (std::size_t l = 0; l < config.cn2_levels.size(); ++l)
    for (std::size_t s = 0; s < symbols.size(); ++s)
      for (int t = 0; t < config.trials; ++t) units.push_back({false, l, s, t});

  const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(units.size())));
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> failed{false};
  std::mutex mutex;
  std::exception_ptr error;

  auto work = [&] {
    try {
      const RealizationEngine engine(config);
      while (!failed) {
        const std::size_t i = next++;
        if (i >= units.size()) break;
        const Unit& u = units[i];
        const std::vector<double> values = u.vacuum ? engine.vacuum_reference(symbols[u.symbol])
                                                    : engine.realization(u.level, symbols[u.symbol], u.trial);
        std::lock_guard lock(mutex);
        if (u.vacuum) {
          store.record_vacuum(u.symbol, values);
        } else {
          store.record(u.level, u.symbol, u.trial, values);
        }
        const std::size_t d = ++done;
        if (progress) progress(d, units.size());
      }
    } catch (...) {
      std::lock_guard lock(mutex);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return store;
}

SampleStore load_or_simulate(const RunConfig& config, const std::filesystem::path& path, bool* reused,
                             const ProgressCallback& progress) {
  if (std::filesystem::exists(path)) {
    try {
      SampleStore s = SampleStore::read(path);
      if (s.fingerprint() == config.fingerprint() && s.complete()) {
        if (reused) *reused = true;
        return s;
      }
    } catch (const std::exception&) {
      // unreadable store: fall through and regenerate
    }
  }
  SampleStore s = run_simulation(config, progress);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  s.write(path);
  if (reused) *reused = false;
  return s;
}

}  // namespace skm
