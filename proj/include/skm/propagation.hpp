#pragma once

#include <filesystem>
#include <span>

#include "skm/fft.hpp"
#include "skm/field.hpp"
#include "skm/rng.hpp"
#include "skm/topology.hpp"
#include "skm/turbulence.hpp"

namespace skm {

struct LinkGeometry {
  double distance = 1000.0;           // L, m
  int n_steps = 20;
  double aperture_diameter = 0.1397;  // d_rx, m

  double step() const { return distance / n_steps; }
  /// Throws ParameterError for non-positive values or an aperture wider than the grid.
  void validate(const SamplingGrid& grid) const;
};

/// d_rx = 2 w(L) sqrt(ell_max + 1): the largest constituent LG spot at the receiver.
double aperture_rule(const BeamParams& beam, double distance, int ell_max);

/// Additive Stokes-space measurement noise; sigma_eta is relative to the aperture-mean s0.
struct NoiseSpec {
  bool enabled = false;
  double sigma_eta = 0.0;
};

/// Throws SamplingViolation unless dz <= extent * dx / lambda, the angular-spectrum
/// transfer-function sampling limit.
void check_angular_spectrum_sampling(const SamplingGrid& grid, double dz, double wavelength);

/// Exact angular-spectrum propagator for a fixed step,
/// exp(i dz sqrt(k^2 - kx^2 - ky^2)) with evanescent components decaying.
class AngularSpectrumPropagator {
 public:
  /// `absorber` enables a super-Gaussian edge window applied after every step.
  AngularSpectrumPropagator(const SamplingGrid& grid, double dz, double wavenumber, bool absorber = false);

  const SamplingGrid& grid() const { return grid_; }
  double step_length() const { return dz_; }

  void apply(ComplexArray& field) const;

 private:
  SamplingGrid grid_;
  double dz_;
  ComplexArray transfer_;
  RealArray window_;
  Fft2d fft_;
};

/// One vacuum diffraction step of a scalar field.
ComplexArray vacuum_step(const ComplexArray& field, const SamplingGrid& grid, double dz, double wavenumber);

/// Split-step propagation: for each of the n_steps segments, a vacuum step of dz followed
/// by multiplication of both polarization components by the same exp(i phi_m).
class SplitStepPropagator {
 public:
  SplitStepPropagator(const SamplingGrid& grid, const LinkGeometry& geometry, const BeamParams& beam,
                      bool absorber = false);

  const LinkGeometry& geometry() const { return geometry_; }

  /// `screens` must hold n_steps screens, or be empty for pure vacuum propagation.
  VectorField propagate(VectorField field, std::span<const PhaseScreen> screens) const;

 private:
  LinkGeometry geometry_;
  AngularSpectrumPropagator step_;
};

VectorField propagate_turbulent(const VectorField& field, const LinkGeometry& geometry,
                                const TurbulenceProfile& profile, const BeamParams& beam,
                                std::span<const PhaseScreen> screens);

/// Zero everything outside the centred disc of diameter d_rx (warns on stderr if the disc is clipped).
VectorField apply_aperture(VectorField field, double diameter);
StokesField apply_aperture(StokesField field, double diameter);

/// s~ = <Psi|sigma|Psi> + eta, eta ~ N(0, (sigma_eta * mean_aperture(s0))^2) i.i.d. on s1, s2, s3
/// at every aperture pixel. Noise disabled returns stokes(field) exactly.
StokesField measure_stokes(const VectorField& field, const NoiseSpec& noise, const ApertureRegion& aperture,
                           const CounterRng& stream);

/// Raw dump: e_r then e_l, each n*n interleaved (re, im) little-endian float64, row-major.
void write_vector_field(const std::filesystem::path& path, const VectorField& field);

}  // namespace skm
