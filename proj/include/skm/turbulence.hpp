#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skm/fft.hpp"
#include "skm/grid.hpp"
#include "skm/rng.hpp"

namespace skm {

/// Statistics of a uniform-C_n^2 path sliced into equally spaced phase screens.
struct TurbulenceProfile {
  double cn2 = 1e-15;            // m^(-2/3)
  double inner_scale = 5e-3;     // l0, m
  double outer_scale = 20.0;     // L0, m
  double screen_spacing = 50.0;  // dz, m
  int n_screens = 20;

  double path_length() const { return screen_spacing * n_screens; }
  /// Throws ParameterError unless cn2 >= 0, 0 < l0 < L0, dz > L0 and n_screens >= 1.
  void validate() const;
};

/// Modified (Andrews) Kolmogorov spectrum Phi_n(kappa), with kappa_l = 3.3/l0, kappa_0 = 2 pi/L0.
double kolmogorov_spectrum(double kappa, const TurbulenceProfile& profile);

struct PhaseScreen {
  SamplingGrid grid;
  RealArray phase;  // radians, zero mean
};

/// FFT phase-screen generator for one slab of thickness dz.
///
/// Spectral weights are sqrt(2 pi k^2 dz Phi_n(kappa)) dkappa with the DC bin zeroed;
/// coefficients are (a + i b) with a, b ~ N(0, 1), so the real part of the unnormalized
/// inverse transform carries the slab's phase power spectrum. The imaginary part is an
/// independent screen with the same statistics, which generate_pair() returns as well.
///
/// With subharmonics enabled three levels of 3x3 low-frequency components at
/// dkappa / 3^p are added (drawn from a separate substream) and the mean removed.
class PhaseScreenGenerator {
 public:
  PhaseScreenGenerator(const TurbulenceProfile& profile, const SamplingGrid& grid, double wavenumber,
                       bool subharmonics = false);

  const SamplingGrid& grid() const { return grid_; }

  PhaseScreen generate(const CounterRng& stream) const;
  std::pair<PhaseScreen, PhaseScreen> generate_pair(const CounterRng& stream) const;

 private:
  void add_subharmonics(const CounterRng& stream, RealArray& first, RealArray& second) const;

  TurbulenceProfile profile_;
  SamplingGrid grid_;
  double wavenumber_;
  bool subharmonics_;
  RealArray amplitude_;
  Fft2d fft_;
  bool zero_ = false;
};

/// One screen drawn from `stream` (first member of the generator's pair).
PhaseScreen generate_phase_screen(const TurbulenceProfile& profile, const SamplingGrid& grid, double wavenumber,
                                  const CounterRng& stream, bool subharmonics = false);

/// sigma_R^2 = 1.23 C_n^2 k^(7/6) L^(11/6)
double rytov_variance(double cn2, double wavelength, double distance);

enum class TurbulenceRegime { weak, moderate, strong };

/// weak < 0.3 <= moderate < 3 <= strong
TurbulenceRegime classify_regime(double sigma_r2);
std::string to_string(TurbulenceRegime r);

/// Empirical D_phi(lag dx) averaged over all screens and over x- and y-separated,
/// non-wrapping pixel pairs.
RealArray phase_structure_function(std::span<const PhaseScreen> screens, std::span<const int> pixel_lags);

/// Row-major little-endian float64 dump, n*n values, no header.
void write_phase_screen(const std::filesystem::path& path, const PhaseScreen& screen);

}  // namespace skm
