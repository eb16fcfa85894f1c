#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "skm/field.hpp"
#include "skm/propagation.hpp"
#include "skm/topology.hpp"
#include "skm/turbulence.hpp"

namespace skm {

enum class ScalePreset { paper, desk };

std::string to_string(ScalePreset p);
ScalePreset parse_preset(const std::string& name);

/// Everything that determines a simulation run. Physics constants are shared by both presets;
/// only the grid and the trial count differ.
struct RunConfig {
  ScalePreset preset = ScalePreset::desk;

  BeamParams beam;
  int ell_max = 8;  // symbols simulated: +-1 .. +-ell_max

  LinkGeometry link;

  std::size_t n_points = 256;
  double spacing = 2.93e-3;

  std::vector<double> cn2_levels{1e-15, 2.5e-14, 1e-13};
  double inner_scale = 5e-3;
  double outer_scale = 20.0;
  bool subharmonics = false;

  std::vector<MaskKind> mask_kinds{MaskKind::none, MaskKind::scaled_mean, MaskKind::top_epsilon,
                                   MaskKind::super_gaussian};
  MaskKind report_mask = MaskKind::scaled_mean;

  NoiseSpec noise;
  DensityMethod density_method = DensityMethod::solid_angle;
  double stokes_floor = 0.0;
  bool absorber = false;

  int trials = 200;
  std::uint64_t seed = 20240601;
  unsigned workers = 1;  // does not affect results

  static RunConfig make(ScalePreset preset);

  SamplingGrid grid() const { return SamplingGrid(n_points, spacing); }
  double screen_spacing() const { return link.step(); }
  TurbulenceProfile profile(double cn2) const;
  /// Simulated symbols in ascending order.
  std::vector<int> symbols() const;
  /// Every mask candidate evaluated per realization, in canonical order (kinds as listed).
  std::vector<MaskSpec> mask_candidates() const;

  /// Throws ParameterError naming the first inconsistent field.
  void validate() const;

  /// Stable 16-hex-digit FNV-1a digest of every result-affecting field.
  std::string fingerprint() const;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

RunConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const RunConfig& c);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace skm
