#pragma once

#include <compare>

#include "skm/grid.hpp"

namespace skm {

/// Laguerre-Gaussian mode index: radial p >= 0, signed azimuthal ell.
struct LgIndex {
  int p = 0;
  int ell = 0;
  auto operator<=>(const LgIndex&) const = default;
};

/// Scalar Gaussian-beam parameters shared by every LG mode of a beam.
struct BeamParams {
  double wavelength = 850e-9;  // m
  double waist = 0.016;        // w0, m

  double wavenumber() const;     // k = 2 pi / lambda
  double rayleigh_range() const; // z_R = pi w0^2 / lambda
  void validate() const;
};

/// Two-mode vector beam u0 |R> + exp(i theta0) u1 |L>.
struct BeamSpec {
  BeamParams params;
  double global_phase = 0.0;  // theta0
  LgIndex component0{0, 0};
  LgIndex component1{0, 1};
};

/// Transverse beam field in the circular basis.
///
/// The polarization basis is fixed: e_r multiplies |0> = |R>, e_l multiplies |1> = |L>.
class VectorField {
 public:
  VectorField(SamplingGrid grid, ComplexArray e_r, ComplexArray e_l);

  const SamplingGrid& grid() const { return grid_; }
  const ComplexArray& e_r() const { return e_r_; }
  const ComplexArray& e_l() const { return e_l_; }
  ComplexArray& e_r() { return e_r_; }
  ComplexArray& e_l() { return e_l_; }

  /// sum (|e_r|^2 + |e_l|^2) dx dy
  double power() const;

 private:
  SamplingGrid grid_;
  ComplexArray e_r_;
  ComplexArray e_l_;
};

/// Raw Stokes field: s0 = I(rho) and s = (s1, s2, s3).
struct StokesField {
  SamplingGrid grid;
  RealArray s0;
  std::vector<Vec3> s_vec;

  StokesField(SamplingGrid g, RealArray intensity, std::vector<Vec3> vec);
};

double beam_width(double waist, double z, double wavelength);

/// u_p^ell(r, phi, z) sampled on the grid: normalization, Laguerre polynomial,
/// vortex phase, wavefront curvature and Gouy phase (exp(+ikz) convention, the
/// carrier exp(ikz) itself omitted).
///
/// Throws ParameterError for p < 0 and SamplingViolation when the grid extent is
/// below 3 w(z) sqrt(2p + |ell| + 1).
ComplexArray lg_mode(const BeamParams& params, LgIndex idx, const SamplingGrid& grid, double z);

/// Generalized Laguerre polynomial L_p^alpha(x) via the three-term recurrence.
double laguerre(int p, double alpha, double x);

/// Generic two-mode vector beam at distance z (components are each scaled by 1/sqrt 2).
VectorField synthesize_vector_beam(const BeamSpec& spec, const SamplingGrid& grid, double z = 0.0);

/// Beam spec for skyrmion number n_sk: component0 = LG(0,0), component1 = LG(0, n_sk).
BeamSpec skm_beam_spec(int n_sk, const BeamParams& params, double global_phase = 0.0);

/// Transmitted SkM field (u_0^0 |R> + u_0^{n_sk} |L>) / sqrt 2 at z = 0.
VectorField synthesize_skm_beam(int n_sk, const BeamSpec& spec, const SamplingGrid& grid);

/// sgn(|ell1| - |ell0|) (ell1 - ell0); throws ParameterError when |ell0| == |ell1|.
int predicted_nsk(int ell0, int ell1);

/// Pointwise <Psi| sigma |Psi> with |0> = |R>, |1> = |L>:
///   s0 = |e_r|^2 + |e_l|^2,  s1 = 2 Re(e_r* e_l),  s2 = 2 Im(e_r* e_l),  s3 = |e_r|^2 - |e_l|^2.
StokesField stokes(const VectorField& field);

}  // namespace skm
