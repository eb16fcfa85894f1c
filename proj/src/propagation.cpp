#include "skm/propagation.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

namespace skm {

using std::numbers::pi;

void LinkGeometry::validate(const SamplingGrid& grid) const {
  if (!(distance > 0.0)) throw ParameterError("LinkGeometry: distance must be positive");
  if (n_steps < 1) throw ParameterError("LinkGeometry: n_steps must be >= 1");
  if (!(aperture_diameter > 0.0)) throw ParameterError("LinkGeometry: aperture diameter must be positive");
  if (aperture_diameter > grid.extent())
    throw ParameterError("LinkGeometry: aperture diameter exceeds the grid extent");
}

double aperture_rule(const BeamParams& beam, double distance, int ell_max) {
  return 2.0 * beam_width(beam.waist, distance, beam.wavelength) * std::sqrt(ell_max + 1.0);
}

void check_angular_spectrum_sampling(const SamplingGrid& grid, double dz, double wavelength) {
  if (!(dz >= 0.0)) throw ParameterError("vacuum step: dz must be >= 0");
  const double limit = grid.extent() * grid.spacing() / wavelength;
  if (dz > limit) {
    throw SamplingViolation("angular-spectrum sampling: step " + std::to_string(dz) +
                            " m exceeds extent*dx/lambda = " + std::to_string(limit) + " m");
  }
}

AngularSpectrumPropagator::AngularSpectrumPropagator(const SamplingGrid& grid, double dz, double wavenumber,
                                                     bool absorber)
    : grid_(grid), dz_(dz), transfer_(grid.size()), fft_(grid.n()) {
  check_angular_spectrum_sampling(grid, dz, 2.0 * pi / wavenumber);
  const double inv_n2 = 1.0 / static_cast<double>(grid.size());
  const double k2 = wavenumber * wavenumber;
  for (std::size_t iy = 0; iy < grid.n(); ++iy) {
    const double ky = grid.frequency(iy);
    for (std::size_t ix = 0; ix < grid.n(); ++ix) {
      const double kx = grid.frequency(ix);
      const double kt2 = kx * kx + ky * ky;
      Complex h;
      if (kt2 <= k2) {
        // kz - k keeps the phase small; the dropped exp(ikz) carrier is a global phase
        const double kz_minus_k = -kt2 / (wavenumber + std::sqrt(k2 - kt2));
        h = std::polar(1.0, dz * kz_minus_k);
      } else {
        h = Complex(std::exp(-dz * std::sqrt(kt2 - k2)), 0.0);
      }
      transfer_[grid.index(ix, iy)] = h * inv_n2;
    }
  }
  if (absorber) {
    window_.resize(grid.size());
    const double r_edge = 0.45 * grid.extent();
    for (std::size_t iy = 0; iy < grid.n(); ++iy) {
      for (std::size_t ix = 0; ix < grid.n(); ++ix) {
        const double r = std::hypot(grid.coord(ix), grid.coord(iy)) / r_edge;
        window_[grid.index(ix, iy)] = std::exp(-std::pow(r, 16.0));
      }
    }
  }
}

void AngularSpectrumPropagator::apply(ComplexArray& field) const {
  if (field.size() != grid_.size()) throw ParameterError("AngularSpectrumPropagator: size mismatch");
  if (dz_ == 0.0) return;
  fft_.forward(field);
  for (std::size_t i = 0; i < field.size(); ++i) field[i] *= transfer_[i];
  fft_.inverse(field);
  if (!window_.empty())
    for (std::size_t i = 0; i < field.size(); ++i) field[i] *= window_[i];
}

ComplexArray vacuum_step(const ComplexArray& field, const SamplingGrid& grid, double dz, double wavenumber) {
  ComplexArray out = field;
  AngularSpectrumPropagator(grid, dz, wavenumber).apply(out);
  return out;
}

SplitStepPropagator::SplitStepPropagator(const SamplingGrid& grid, const LinkGeometry& geometry,
                                         const BeamParams& beam, bool absorber)
    : geometry_(geometry), step_(grid, geometry.step(), beam.wavenumber(), absorber) {
  geometry.validate(grid);
}

VectorField SplitStepPropagator::propagate(VectorField field, std::span<const PhaseScreen> screens) const {
  require_same_grid(field.grid(), step_.grid(), "SplitStepPropagator");
  if (!screens.empty() && screens.size() != static_cast<std::size_t>(geometry_.n_steps))
    throw ParameterError("SplitStepPropagator: need one phase screen per step");
  ComplexArray& er = field.e_r();
  ComplexArray& el = field.e_l();
  for (int m = 0; m < geometry_.n_steps; ++m) {
    step_.apply(er);
    step_.apply(el);
    if (screens.empty()) continue;
    const RealArray& phi = screens[m].phase;
    for (std::size_t i = 0; i < er.size(); ++i) {
      const Complex t = std::polar(1.0, phi[i]);
      er[i] *= t;
      el[i] *= t;
    }
  }
  return field;
}

VectorField propagate_turbulent(const VectorField& field, const LinkGeometry& geometry,
                                const TurbulenceProfile& profile, const BeamParams& beam,
                                std::span<const PhaseScreen> screens) {
  profile.validate();
  if (std::abs(profile.path_length() - geometry.distance) > 1e-9 * geometry.distance)
    throw ParameterError("propagate_turbulent: n_screens * screen spacing must equal the link distance");
  if (profile.n_screens != geometry.n_steps)
    throw ParameterError("propagate_turbulent: screen count must equal the step count");
  return SplitStepPropagator(field.grid(), geometry, beam).propagate(field, screens);
}

namespace {

void warn_if_clipped(const ApertureRegion& region) {
  if (region.clipped())
    std::cerr << "warning: aperture of diameter " << region.diameter() << " m is clipped by the grid edge\n";
}

}  // namespace

VectorField apply_aperture(VectorField field, double diameter) {
  const ApertureRegion region = ApertureRegion::circle(field.grid(), diameter);
  warn_if_clipped(region);
  for (std::size_t i = 0; i < field.grid().size(); ++i) {
    if (!region.contains(i)) {
      field.e_r()[i] = 0.0;
      field.e_l()[i] = 0.0;
    }
  }
  return field;
}

StokesField apply_aperture(StokesField field, double diameter) {
  const ApertureRegion region = ApertureRegion::circle(field.grid, diameter);
  warn_if_clipped(region);
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    if (!region.contains(i)) {
      field.s0[i] = 0.0;
      field.s_vec[i] = {0.0, 0.0, 0.0};
    }
  }
  return field;
}

StokesField measure_stokes(const VectorField& field, const NoiseSpec& noise, const ApertureRegion& aperture,
                           const CounterRng& stream) {
  require_same_grid(field.grid(), aperture.grid(), "measure_stokes");
  StokesField s = stokes(field);
  if (!noise.enabled || noise.sigma_eta == 0.0) return s;
  if (!(noise.sigma_eta >= 0.0)) throw ParameterError("measure_stokes: sigma_eta must be >= 0");
  const auto& idx = aperture.indices();
  if (idx.empty()) return s;
  double mean_s0 = 0.0;
  for (std::size_t i : idx) mean_s0 += s.s0[i];
  mean_s0 /= static_cast<double>(idx.size());
  const double sigma = noise.sigma_eta * mean_s0;
  NormalSampler normal(stream);
  for (std::size_t i : idx)
    for (double& c : s.s_vec[i]) c += sigma * normal();
  return s;
}

void write_vector_field(const std::filesystem::path& path, const VectorField& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_vector_field: cannot open " + path.string());
  const auto bytes = static_cast<std::streamsize>(field.grid().size() * sizeof(Complex));
  os.write(reinterpret_cast<const char*>(field.e_r().data()), bytes);
  os.write(reinterpret_cast<const char*>(field.e_l().data()), bytes);
}

}  // namespace skm
