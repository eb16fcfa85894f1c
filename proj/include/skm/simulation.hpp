#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "skm/config.hpp"
#include "skm/sample_store.hpp"

namespace skm {

/// Seed of one realization: hash of (base seed, bit pattern of C_n^2, symbol, trial). Levels are
/// keyed by value, so adding a level never perturbs the streams of existing ones.
std::uint64_t realization_seed(std::uint64_t base, double cn2, int symbol, int trial);

/// N~ of a measured Stokes field for each mask, integrated over the aperture. Masks use the
/// measured s0 of the aperture pixels; the density is evaluated inside the aperture only.
std::vector<double> masked_numbers(const StokesField& measured, const ApertureRegion& aperture,
                                   std::span<const MaskSpec> masks, DensityMethod method, double floor);

/// Per-worker state: FFT plans, screen generators and the aperture.
class RealizationEngine {
 public:
  explicit RealizationEngine(const RunConfig& config);

  const ApertureRegion& aperture() const { return aperture_; }

  /// Screens for one realization, drawn in pairs from substreams of `stream`.
  std::vector<PhaseScreen> screens(std::size_t level, const CounterRng& stream) const;
  /// Field at the receiver plane (before the aperture).
  VectorField received_field(int symbol, std::span<const PhaseScreen> screens) const;
  /// N~ for every mask candidate of the configuration.
  std::vector<double> realization(std::size_t level, int symbol, int trial) const;
  std::vector<double> vacuum_reference(int symbol) const;

 private:
  RunConfig config_;
  SamplingGrid grid_;
  std::vector<MaskSpec> masks_;
  ApertureRegion aperture_;
  SplitStepPropagator propagator_;
  std::vector<PhaseScreenGenerator> generators_;
  std::map<int, VectorField> transmitted_;
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// Full Monte Carlo run. Results do not depend on the worker count.
SampleStore run_simulation(const RunConfig& config, const ProgressCallback& progress = {});

/// Reads `path` when it holds a store with a matching fingerprint, otherwise simulates and
/// writes it. Sets `reused` accordingly.
SampleStore load_or_simulate(const RunConfig& config, const std::filesystem::path& path, bool* reused = nullptr,
                             const ProgressCallback& progress = {});

}  // namespace skm
