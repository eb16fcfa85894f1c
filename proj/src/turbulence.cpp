#include "skm/turbulence.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace skm {

using std::numbers::pi;

void TurbulenceProfile::validate() const {
  if (!(cn2 >= 0.0) || !std::isfinite(cn2)) throw ParameterError("TurbulenceProfile: cn2 must be >= 0");
  if (!(inner_scale > 0.0) || !(inner_scale < outer_scale))
    throw ParameterError("TurbulenceProfile: need 0 < inner scale < outer scale");
  if (n_screens < 1) throw ParameterError("TurbulenceProfile: n_screens must be >= 1");
  if (!(screen_spacing > outer_scale))
    throw ParameterError("TurbulenceProfile: screen spacing must exceed the outer scale");
}

double kolmogorov_spectrum(double kappa, const TurbulenceProfile& profile) {
  if (!(kappa >= 0.0)) throw ParameterError("kolmogorov_spectrum: kappa must be >= 0");
  const double kappa_l = 3.3 / profile.inner_scale;
  const double kappa_0 = 2.0 * pi / profile.outer_scale;
  const double r = kappa / kappa_l;
  const double bump = 1.0 + 1.802 * r - 0.254 * std::pow(r, 7.0 / 6.0);
  return 0.033 * profile.cn2 * bump * std::exp(-r * r) / std::pow(kappa * kappa + kappa_0 * kappa_0, 11.0 / 6.0);
}

PhaseScreenGenerator::PhaseScreenGenerator(const TurbulenceProfile& profile, const SamplingGrid& grid,
                                           double wavenumber, bool subharmonics)
    : profile_(profile),
      grid_(grid),
      wavenumber_(wavenumber),
      subharmonics_(subharmonics),
      amplitude_(grid.size(), 0.0),
      fft_(grid.n()) {
  profile.validate();
  if (!(wavenumber > 0.0)) throw ParameterError("PhaseScreenGenerator: wavenumber must be positive");
  zero_ = profile.cn2 == 0.0;
  const double dk = grid.frequency_spacing();
  const double slab = 2.0 * pi * wavenumber * wavenumber * profile.screen_spacing;
  for (std::size_t iy = 0; iy < grid.n(); ++iy) {
    const double ky = grid.frequency(iy);
    for (std::size_t ix = 0; ix < grid.n(); ++ix) {
      const double kx = grid.frequency(ix);
      const double kappa = std::hypot(kx, ky);
      amplitude_[grid.index(ix, iy)] = std::sqrt(slab * kolmogorov_spectrum(kappa, profile)) * dk;
    }
  }
  amplitude_[0] = 0.0;
}

std::pair<PhaseScreen, PhaseScreen> PhaseScreenGenerator::generate_pair(const CounterRng& stream) const {
  PhaseScreen a{grid_, RealArray(grid_.size(), 0.0)};
  PhaseScreen b{grid_, RealArray(grid_.size(), 0.0)};
  if (zero_) return {std::move(a), std::move(b)};

  ComplexArray spectrum(grid_.size());
  NormalSampler normal(stream);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double re = normal();
    const double im = normal();
    spectrum[i] = Complex(re, im) * amplitude_[i];
  }
  fft_.inverse(spectrum);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    a.phase[i] = spectrum[i].real();
    b.phase[i] = spectrum[i].imag();
  }
  if (subharmonics_) add_subharmonics(stream.substream(1), a.phase, b.phase);
  return {std::move(a), std::move(b)};
}

PhaseScreen PhaseScreenGenerator::generate(const CounterRng& stream) const {
  return std::move(generate_pair(stream).first);
}

void PhaseScreenGenerator::add_subharmonics(const CounterRng& stream, RealArray& first, RealArray& second) const {
  const std::size_t n = grid_.n();
  const double slab = 2.0 * pi * wavenumber_ * wavenumber_ * profile_.screen_spacing;
  NormalSampler normal(stream);
  RealArray low_a(grid_.size(), 0.0);
  RealArray low_b(grid_.size(), 0.0);
  double dk = grid_.frequency_spacing();
  for (int level = 1; level <= 3; ++level) {
    dk /= 3.0;
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        if (a == 0 && b == 0) continue;
        const double kx = a * dk;
        const double ky = b * dk;
        const double amp = std::sqrt(slab * kolmogorov_spectrum(std::hypot(kx, ky), profile_)) * dk;
        const Complex c(normal() * amp, normal() * amp);
        for (std::size_t iy = 0; iy < n; ++iy) {
          const double y = grid_.coord(iy);
          for (std::size_t ix = 0; ix < n; ++ix) {
            const double x = grid_.coord(ix);
            const Complex v = c * std::polar(1.0, kx * x + ky * y);
            low_a[grid_.index(ix, iy)] += v.real();
            low_b[grid_.index(ix, iy)] += v.imag();
          }
        }
      }
    }
  }
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < low_a.size(); ++i) {
    mean_a += low_a[i];
    mean_b += low_b[i];
  }
  mean_a /= static_cast<double>(low_a.size());
  mean_b /= static_cast<double>(low_b.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    first[i] += low_a[i] - mean_a;
    second[i] += low_b[i] - mean_b;
  }
}

PhaseScreen generate_phase_screen(const TurbulenceProfile& profile, const SamplingGrid& grid, double wavenumber,
                                  const CounterRng& stream, bool subharmonics) {
  return PhaseScreenGenerator(profile, grid, wavenumber, subharmonics).generate(stream);
}

double rytov_variance(double cn2, double wavelength, double distance) {
  if (!(cn2 > 0.0) || !(wavelength > 0.0) || !(distance > 0.0))
    throw ParameterError("rytov_variance: all arguments must be positive");
  const double k = 2.0 * pi / wavelength;
  return 1.23 * cn2 * std::pow(k, 7.0 / 6.0) * std::pow(distance, 11.0 / 6.0);
}

TurbulenceRegime classify_regime(double sigma_r2) {
  if (!(sigma_r2 >= 0.0)) throw ParameterError("classify_regime: Rytov variance must be >= 0");
  if (sigma_r2 < 0.3) return TurbulenceRegime::weak;
  if (sigma_r2 < 3.0) return TurbulenceRegime::moderate;
  return TurbulenceRegime::strong;
}

std::string to_string(TurbulenceRegime r) {
  switch (r) {
    case TurbulenceRegime::weak: return "weak";
    case TurbulenceRegime::moderate: return "moderate";
    case TurbulenceRegime::strong: return "strong";
  }
  return "weak";
}

RealArray phase_structure_function(std::span<const PhaseScreen> screens, std::span<const int> pixel_lags) {
  RealArray out(pixel_lags.size(), 0.0);
  if (screens.empty()) return out;
  for (std::size_t li = 0; li < pixel_lags.size(); ++li) {
    const int lag = pixel_lags[li];
    double sum = 0.0;
    std::size_t count = 0;
    for (const PhaseScreen& s : screens) {
      const std::size_t n = s.grid.n();
      if (lag <= 0 || static_cast<std::size_t>(lag) >= n)
        throw ParameterError("phase_structure_function: lag must be in [1, n)");
      const std::size_t l = static_cast<std::size_t>(lag);
      for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix + l < n; ++ix) {
          const double d = s.phase[iy * n + ix + l] - s.phase[iy * n + ix];
          sum += d * d;
          ++count;
        }
      }
      for (std::size_t iy = 0; iy + l < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
          const double d = s.phase[(iy + l) * n + ix] - s.phase[iy * n + ix];
          sum += d * d;
          ++count;
        }
      }
    }
    out[li] = sum / static_cast<double>(count);
  }
  return out;
}

void write_phase_screen(const std::filesystem::path& path, const PhaseScreen& screen) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_phase_screen: cannot open " + path.string());
  os.write(reinterpret_cast<const char*>(screen.phase.data()),
           static_cast<std::streamsize>(screen.phase.size() * sizeof(double)));
}

}  // namespace skm
