#include "skm/field.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace skm {

using std::numbers::pi;

double BeamParams::wavenumber() const { return 2.0 * pi / wavelength; }

double BeamParams::rayleigh_range() const { return pi * waist * waist / wavelength; }

void BeamParams::validate() const {
  if (!(wavelength > 0.0)) throw ParameterError("BeamParams: wavelength must be positive");
  if (!(waist > 0.0)) throw ParameterError("BeamParams: waist must be positive");
}

VectorField::VectorField(SamplingGrid grid, ComplexArray e_r, ComplexArray e_l)
    : grid_(grid), e_r_(std::move(e_r)), e_l_(std::move(e_l)) {
  if (e_r_.size() != grid_.size() || e_l_.size() != grid_.size())
    throw ParameterError("VectorField: component arrays must be n_points x n_points");
  for (std::size_t i = 0; i < e_r_.size(); ++i) {
    if (!std::isfinite(e_r_[i].real()) || !std::isfinite(e_r_[i].imag()) ||
        !std::isfinite(e_l_[i].real()) || !std::isfinite(e_l_[i].imag()))
      throw ParameterError("VectorField: non-finite sample");
  }
}

double VectorField::power() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < e_r_.size(); ++i) sum += std::norm(e_r_[i]) + std::norm(e_l_[i]);
  return sum * grid_.pixel_area();
}

StokesField::StokesField(SamplingGrid g, RealArray intensity, std::vector<Vec3> vec)
    : grid(g), s0(std::move(intensity)), s_vec(std::move(vec)) {
  if (s0.size() != grid.size() || s_vec.size() != grid.size())
    throw ParameterError("StokesField: arrays must be n_points x n_points");
}

double beam_width(double waist, double z, double wavelength) {
  if (!(waist > 0.0) || !(wavelength > 0.0))
    throw ParameterError("beam_width: waist and wavelength must be positive");
  const double z_r = pi * waist * waist / wavelength;
  return waist * std::sqrt(1.0 + (z / z_r) * (z / z_r));
}

double laguerre(int p, double alpha, double x) {
  if (p < 0) throw ParameterError("laguerre: degree must be non-negative");
  if (p == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < p; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

ComplexArray lg_mode(const BeamParams& params, LgIndex idx, const SamplingGrid& grid, double z) {
  params.validate();
  if (idx.p < 0) throw ParameterError("lg_mode: radial index p must be >= 0");
  if (!std::isfinite(z)) throw ParameterError("lg_mode: z must be finite");

  const int abs_l = std::abs(idx.ell);
  const double w = beam_width(params.waist, z, params.wavelength);
  const double spot = 3.0 * w * std::sqrt(2.0 * idx.p + abs_l + 1.0);
  if (grid.extent() < spot) {
    throw SamplingViolation("lg_mode: grid extent " + std::to_string(grid.extent()) +
                            " m is smaller than 3 w(z) sqrt(2p+|l|+1) = " + std::to_string(spot) + " m");
  }

  const double z_r = params.rayleigh_range();
  const double k = params.wavenumber();
  // sqrt(2 p! / (pi (p+|l|)!)) in log space
  const double log_norm =
      0.5 * (std::log(2.0 / pi) + std::lgamma(idx.p + 1.0) - std::lgamma(idx.p + abs_l + 1.0));
  const double norm = std::exp(log_norm) / w;
  const double curvature = k * z / (2.0 * (z * z + z_r * z_r));
  const double gouy = -(2.0 * idx.p + abs_l + 1.0) * std::atan2(z, z_r);

  const std::size_t n = grid.n();
  ComplexArray out(grid.size());
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double y = grid.coord(iy);
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double x = grid.coord(ix);
      const double r2 = x * x + y * y;
      const double rho = std::sqrt(2.0 * r2) / w;
      double amp = norm * std::exp(-r2 / (w * w)) * laguerre(idx.p, abs_l, 2.0 * r2 / (w * w));
      if (abs_l > 0) amp *= std::pow(rho, abs_l);
      const double phase = idx.ell * std::atan2(y, x) + curvature * r2 + gouy;
      out[grid.index(ix, iy)] = std::polar(amp, phase);
    }
  }
  return out;
}

VectorField synthesize_vector_beam(const BeamSpec& spec, const SamplingGrid& grid, double z) {
  ComplexArray e_r = lg_mode(spec.params, spec.component0, grid, z);
  ComplexArray e_l = lg_mode(spec.params, spec.component1, grid, z);
  const double s = 1.0 / std::sqrt(2.0);
  const Complex rot = std::polar(s, spec.global_phase);
  for (auto& v : e_r) v *= s;
  for (auto& v : e_l) v *= rot;
  return VectorField(grid, std::move(e_r), std::move(e_l));
}

BeamSpec skm_beam_spec(int n_sk, const BeamParams& params, double global_phase) {
  if (n_sk == 0) throw ParameterError("skm_beam_spec: n_sk = 0 gives |l0| = |l1|");
  return BeamSpec{params, global_phase, LgIndex{0, 0}, LgIndex{0, n_sk}};
}

VectorField synthesize_skm_beam(int n_sk, const BeamSpec& spec, const SamplingGrid& grid) {
  if (n_sk == 0) throw ParameterError("synthesize_skm_beam: n_sk = 0 gives |l0| = |l1|");
  if (spec.component0 != LgIndex{0, 0} || spec.component1 != LgIndex{0, n_sk})
    throw ParameterError("synthesize_skm_beam: spec must be LG(0,0) |R> + LG(0,n_sk) |L>");
  return synthesize_vector_beam(spec, grid, 0.0);
}

int predicted_nsk(int ell0, int ell1) {
  const int d = std::abs(ell1) - std::abs(ell0);
  if (d == 0) throw ParameterError("predicted_nsk: |ell0| == |ell1| has no defined skyrmion number");
  return (d > 0 ? 1 : -1) * (ell1 - ell0);
}

StokesField stokes(const VectorField& field) {
  const auto& er = field.e_r();
  const auto& el = field.e_l();
  RealArray s0(er.size());
  std::vector<Vec3> sv(er.size());
  for (std::size_t i = 0; i < er.size(); ++i) {
    const double ir = std::norm(er[i]);
    const double il = std::norm(el[i]);
    const Complex c = std::conj(er[i]) * el[i];
    s0[i] = ir + il;
    sv[i] = {2.0 * c.real(), 2.0 * c.imag(), ir - il};
  }
  return StokesField(field.grid(), std::move(s0), std::move(sv));
}

}  // namespace skm
