#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "skm/field.hpp"

namespace skm {

/// Unit Stokes vectors S(rho); pixels whose raw norm fell below the floor carry
/// the placeholder (0,0,1) and valid == 0.
struct NormalizedStokesField {
  SamplingGrid grid;
  std::vector<Vec3> s_hat;
  std::vector<std::uint8_t> valid;
};

/// s_hat = s / |s| where |s| > 0 and |s| >= floor * max(s0), else (0,0,1) and invalid.
/// Throws ParameterError if floor < 0 and std::domain_error for an all-zero field.
NormalizedStokesField normalize_stokes(const StokesField& raw, double floor);

enum class MaskKind { none, scaled_mean, top_epsilon, super_gaussian };

/// Intensity-weighting function W(rho). Only the parameters of the chosen kind are used.
struct MaskSpec {
  MaskKind kind = MaskKind::none;
  double alpha = 0.0;    // scaled-mean, super-Gaussian: I_th = alpha * I_avg
  double epsilon = 0.0;  // top-epsilon: retained power fraction in (0, 1]
  double q = 0.0;        // super-Gaussian steepness

  static MaskSpec none() { return {}; }
  static MaskSpec scaled_mean(double alpha) { return {MaskKind::scaled_mean, alpha, 0.0, 0.0}; }
  static MaskSpec top_epsilon(double eps) { return {MaskKind::top_epsilon, 0.0, eps, 0.0}; }
  static MaskSpec super_gaussian(double alpha, double q) { return {MaskKind::super_gaussian, alpha, 0.0, q}; }

  void validate() const;

  /// Canonical text key, e.g. "scaled-mean:alpha=0.25". Used in config files and sample stores.
  std::string key() const;
  static MaskSpec parse(const std::string& key);

  /// (primary, secondary) tuning parameters, for deterministic ordering of candidates.
  std::pair<double, double> parameters() const;

  bool operator==(const MaskSpec&) const = default;
};

std::string to_string(MaskKind kind);
MaskKind parse_mask_kind(const std::string& name);

/// Mean intensity over pixels with I > 1e-12 max(I).
double nonzero_mean_intensity(std::span<const double> intensity);

/// W(rho) in [0, 1] for each sample of `intensity`.
///  scaled-mean:    W = [I >= alpha I_avg]
///  top-epsilon:    W = [I >= I_th], I_th the largest level whose superlevel set holds >= eps of the power
///  super-Gaussian: W = 1 - exp(-(I / (alpha I_avg))^(2q))
RealArray build_mask(std::span<const double> intensity, const MaskSpec& spec);

/// Pixels of the grid whose centres lie within a centred disc; the integration domain.
class ApertureRegion {
 public:
  static ApertureRegion full(const SamplingGrid& grid);
  static ApertureRegion circle(const SamplingGrid& grid, double diameter);

  const SamplingGrid& grid() const { return grid_; }
  const std::vector<std::size_t>& indices() const { return indices_; }
  bool contains(std::size_t flat_index) const { return inside_[flat_index] != 0; }
  /// Diameter in metres; +inf for the full grid.
  double diameter() const { return diameter_; }
  /// True when the disc reaches beyond the grid edge.
  bool clipped() const { return clipped_; }

 private:
  ApertureRegion(SamplingGrid g) : grid_(g) {}

  SamplingGrid grid_;
  double diameter_ = 0.0;
  bool clipped_ = false;
  std::vector<std::uint8_t> inside_;
  std::vector<std::size_t> indices_;
};

/// Discretization of S . (dS/dx x dS/dy).
///  central_difference: literal finite differences, central inside the domain, one-sided at its edge.
///  solid_angle: signed solid angle of the two geodesic triangles of every plaquette whose four
///               corners lie in the domain, shared equally by the corners. Integrates to an
///               exact integer on closed textures and stays accurate on coarse grids.
enum class DensityMethod { central_difference, solid_angle };

std::string to_string(DensityMethod m);
DensityMethod parse_density_method(const std::string& name);

struct SkyrmionDensityField {
  SamplingGrid grid;
  RealArray density;  // per unit area, 1/m^2
};

/// Density over the grid; pixels outside `domain` (when given) are zero and never read.
SkyrmionDensityField skyrmion_density(const NormalizedStokesField& s,
                                      DensityMethod method = DensityMethod::solid_angle,
                                      const ApertureRegion* domain = nullptr);

/// (1 / 4 pi) sum over the aperture of W * density * dx dy.
double masked_skyrmion_number(const SkyrmionDensityField& density, std::span<const double> weights,
                              const ApertureRegion& aperture);

/// Convenience: density restricted to the aperture, then the weighted sum.
double masked_skyrmion_number(const NormalizedStokesField& s, std::span<const double> weights,
                              const ApertureRegion& aperture,
                              DensityMethod method = DensityMethod::solid_angle);

/// Default tuning grids: alpha in [0.05, 2.0] step 0.05, eps in [0.5, 1.0] step 0.025,
/// q in {1, 2, 4, 8} crossed with the alpha grid. `none` yields the single no-mask spec.
std::vector<MaskSpec> default_search_grid(MaskKind kind);

struct MaskSearchResult {
  MaskSpec best;
  double best_mse = 0.0;
  std::vector<std::pair<MaskSpec, double>> mse_by_candidate;  // in ascending parameter order
};

/// Per-symbol realizations of N~ for a candidate: outer index symbol, inner realization.
using TurbulentEvaluator = std::function<std::vector<std::vector<double>>(const MaskSpec&)>;
/// Per-symbol vacuum N~ for a candidate (same symbol order as the turbulent evaluator).
using VacuumEvaluator = std::function<std::vector<double>(const MaskSpec&)>;

/// argmin over candidates of mean (N~_turb - N~_vac)^2 across symbols and realizations.
/// Ties resolve to the smallest parameters. Throws ParameterError on empty input.
MaskSearchResult optimize_mask_parameter(const TurbulentEvaluator& turbulent,
                                         const VacuumEvaluator& vacuum,
                                         std::vector<MaskSpec> candidates);

}  // namespace skm
