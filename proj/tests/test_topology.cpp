#include <doctest.h>

#include <cmath>
#include <numbers>

#include "skm/propagation.hpp"
#include "skm/topology.hpp"
#include "support.hpp"

using namespace skm;
using std::numbers::pi;

namespace {

// theta rises linearly 0 -> pi out to r0 and stays at the south pole beyond; N = n exactly.
NormalizedStokesField neel_texture(const SamplingGrid& g, int n, double r0) {
  NormalizedStokesField s{g, std::vector<Vec3>(g.size()), std::vector<std::uint8_t>(g.size(), 1)};
  for (std::size_t iy = 0; iy < g.n(); ++iy)
    for (std::size_t ix = 0; ix < g.n(); ++ix) {
      const double x = g.coord(ix), y = g.coord(iy);
      const double r = std::hypot(x, y);
      const double th = r < r0 ? pi * r / r0 : pi;
      const double ph = n * std::atan2(y, x);
      s.s_hat[g.index(ix, iy)] = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
    }
  return s;
}

RealArray ones(std::size_t n) { return RealArray(n, 1.0); }

double beam_number(int ell0, int ell1, const SamplingGrid& g, DensityMethod m = DensityMethod::solid_angle) {
  BeamSpec spec;
  spec.component0 = {0, ell0};
  spec.component1 = {0, ell1};
  const NormalizedStokesField s = normalize_stokes(stokes(synthesize_vector_beam(spec, g)), 0.0);
  return masked_skyrmion_number(s, ones(g.size()), ApertureRegion::full(g), m);
}

}  // namespace

TEST_SUITE("skyrmion-topology") {

TEST_CASE("normalize_stokes examples") {
  const SamplingGrid g(8, 1.0);
  std::vector<Vec3> v(64, Vec3{0.0, 0.0, 5.0});
  v[1] = {3.0, 4.0, 0.0};
  v[2] = {1e-9, 0.0, 0.0};
  RealArray s0(64, 5.0);
  s0[2] = 1e-9;
  const StokesField raw(g, s0, v);
  const auto n = normalize_stokes(raw, 0.0);
  CHECK(n.s_hat[0][2] == doctest::Approx(1.0));
  CHECK(n.s_hat[1][0] == doctest::Approx(0.6));
  CHECK(n.s_hat[1][1] == doctest::Approx(0.8));
  CHECK(n.valid[2] == 1);
  const auto f = normalize_stokes(raw, 1e-3);
  CHECK(f.valid[2] == 0);
  CHECK(f.s_hat[2] == Vec3{0.0, 0.0, 1.0});
  CHECK_THROWS_AS(normalize_stokes(raw, -1.0), ParameterError);
  const StokesField zero(g, RealArray(64, 0.0), std::vector<Vec3>(64, Vec3{0, 0, 0}));
  CHECK_THROWS_AS(normalize_stokes(zero, 0.0), std::domain_error);
}

TEST_CASE("mask examples") {
  const RealArray i{4, 2, 2, 0};
  CHECK(nonzero_mean_intensity(i) == doctest::Approx(8.0 / 3.0));
  CHECK(build_mask(i, MaskSpec::scaled_mean(1.0)) == RealArray{1, 0, 0, 0});
  CHECK(build_mask(i, MaskSpec::top_epsilon(1.0)) == RealArray{1, 1, 1, 0});
  // ties enter together: 4 alone holds 0.5 of the power, 0.6 needs both 2s
  CHECK(build_mask(i, MaskSpec::top_epsilon(0.5)) == RealArray{1, 0, 0, 0});
  CHECK(build_mask(i, MaskSpec::top_epsilon(0.6)) == RealArray{1, 1, 1, 0});
  const RealArray at{8.0 / 3.0 * 0.5, 4, 2, 2, 0};
  for (double q : {1.0, 2.0, 7.0}) {
    const RealArray w = build_mask(RealArray{2, 2, 2, 2}, MaskSpec::super_gaussian(1.0, q));
    for (double v : w) CHECK(v == doctest::Approx(1.0 - std::exp(-1.0)));
  }
  CHECK(build_mask(i, MaskSpec::none()) == RealArray{1, 1, 1, 1});
  CHECK_THROWS_AS(build_mask(i, MaskSpec::top_epsilon(0.0)), ParameterError);
  CHECK_THROWS_AS(build_mask(i, MaskSpec::top_epsilon(1.5)), ParameterError);
  CHECK_THROWS_AS(build_mask(i, MaskSpec::scaled_mean(-1.0)), ParameterError);
  CHECK_THROWS_AS(build_mask(i, MaskSpec::super_gaussian(1.0, 0.0)), ParameterError);
}

TEST_CASE("mask keys round-trip") {
  for (MaskKind k : {MaskKind::none, MaskKind::scaled_mean, MaskKind::top_epsilon, MaskKind::super_gaussian}) {
    CHECK(parse_mask_kind(to_string(k)) == k);
    for (const MaskSpec& m : default_search_grid(k)) CHECK(MaskSpec::parse(m.key()) == m);
  }
  CHECK(MaskSpec::scaled_mean(0.25).key() == "scaled-mean:alpha=0.25");
  CHECK(default_search_grid(MaskKind::scaled_mean).size() == 40);
  CHECK(default_search_grid(MaskKind::top_epsilon).size() == 21);
  CHECK(default_search_grid(MaskKind::super_gaussian).size() == 160);
  CHECK_THROWS_AS(MaskSpec::parse("bogus"), ParameterError);
  CHECK_THROWS_AS(parse_mask_kind("gaussian"), ParameterError);
}

TEST_CASE("property: scaled-mean monotonic in alpha, masks scale invariant, super-Gaussian limit") {
  skm_test::for_all(25, 3, [](skm_test::Gen& gen, int) {
    RealArray in(200);
    for (double& v : in) v = std::exp(3.0 * gen.normal());
    std::size_t last = in.size() + 1;
    for (double a = 0.05; a < 3.0; a += 0.05) {
      const RealArray w = build_mask(in, MaskSpec::scaled_mean(a));
      const auto kept = static_cast<std::size_t>(std::count(w.begin(), w.end(), 1.0));
      CHECK(kept <= last);
      last = kept;
    }
    const double c = gen.uniform(0.1, 50.0);
    RealArray scaled = in;
    for (double& v : scaled) v *= c;
    for (const MaskSpec& m : {MaskSpec::scaled_mean(0.7), MaskSpec::top_epsilon(0.8)})
      CHECK(build_mask(in, m) == build_mask(scaled, m));
    const double avg = nonzero_mean_intensity(in);
    const RealArray soft = build_mask(in, MaskSpec::super_gaussian(0.9, 50.0));
    const RealArray hard = build_mask(in, MaskSpec::scaled_mean(0.9));
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (std::abs(in[i] / (0.9 * avg) - 1.0) < 0.1) continue;  // away from the level set
      CHECK(std::abs(soft[i] - hard[i]) < 1e-3);
    }
  });
}

TEST_CASE("aperture region geometry") {
  const SamplingGrid paper(1024, 0.733e-3);
  const ApertureRegion a = ApertureRegion::circle(paper, 0.1397);
  const double r_px = 0.06985 / 0.733e-3;
  CHECK(r_px == doctest::Approx(95.3).epsilon(1e-3));
  const double area = pi * r_px * r_px;
  CHECK(std::abs(static_cast<double>(a.indices().size()) - area) < 2.0 * pi * r_px);
  CHECK_FALSE(a.clipped());
  const SamplingGrid small(64, 1e-3);
  CHECK(ApertureRegion::circle(small, 0.1).clipped());
  CHECK(ApertureRegion::full(small).indices().size() == small.size());
  CHECK_THROWS_AS(ApertureRegion::circle(small, 0.0), ParameterError);
}

TEST_CASE("uniform fields and annihilating masks give zero") {
  const SamplingGrid g(32, 1.0);
  NormalizedStokesField s{g, std::vector<Vec3>(g.size(), Vec3{0.6, 0.0, 0.8}), std::vector<std::uint8_t>(g.size(), 1)};
  for (DensityMethod m : {DensityMethod::central_difference, DensityMethod::solid_angle}) {
    const auto d = skyrmion_density(s, m);
    for (double v : d.density) CHECK(v == 0.0);
    CHECK(masked_skyrmion_number(s, ones(g.size()), ApertureRegion::full(g), m) == 0.0);
  }
  const SamplingGrid b(256, 2.93e-3);
  const auto tex = neel_texture(b, 2, 0.2);
  CHECK(masked_skyrmion_number(tex, RealArray(b.size(), 0.0), ApertureRegion::full(b)) == 0.0);
}

TEST_CASE("analytic texture integrates to its winding number") {
  const SamplingGrid g(256, 1e-3);
  for (int n : {1, -1, 2, 3, -4}) {
    const auto tex = neel_texture(g, n, 0.1);
    CHECK(masked_skyrmion_number(tex, ones(g.size()), ApertureRegion::full(g), DensityMethod::solid_angle) ==
          doctest::Approx(n).epsilon(1e-9));
  }
  // literal central differences on a resolved texture
  for (int n : {1, 2}) {
    const auto tex = neel_texture(g, n, 0.1);
    const double cd = masked_skyrmion_number(tex, ones(g.size()), ApertureRegion::full(g),
                                             DensityMethod::central_difference);
    const double sa = masked_skyrmion_number(tex, ones(g.size()), ApertureRegion::full(g),
                                             DensityMethod::solid_angle);
    CHECK(std::abs(cd - n) < 1e-2);
    CHECK(std::abs(cd - sa) < 1e-2);
  }
}

TEST_CASE("density negates under a mirror flip") {
  const SamplingGrid g(64, 1e-3);
  const auto tex = neel_texture(g, 2, 0.02);
  NormalizedStokesField flip = tex;
  for (std::size_t iy = 0; iy < g.n(); ++iy)
    for (std::size_t ix = 0; ix < g.n(); ++ix) flip.s_hat[g.index(ix, iy)] = tex.s_hat[g.index(g.n() - 1 - ix, iy)];
  for (DensityMethod m : {DensityMethod::central_difference, DensityMethod::solid_angle}) {
    const auto a = skyrmion_density(tex, m);
    const auto b = skyrmion_density(flip, m);
    double peak = 0.0;
    for (double v : a.density) peak = std::max(peak, std::abs(v));
    for (std::size_t iy = 0; iy < g.n(); ++iy)
      for (std::size_t ix = 0; ix < g.n(); ++ix)
        CHECK(std::abs(b.density[g.index(ix, iy)] + a.density[g.index(g.n() - 1 - ix, iy)]) < 1e-9 * peak);
  }
}

TEST_CASE("property: skyrmion number is invariant under global rotations of S") {
  const SamplingGrid g(256, 16.0 * 0.016 / 256);
  const auto base = normalize_stokes(stokes(synthesize_skm_beam(3, skm_beam_spec(3, BeamParams{}), g)), 0.0);
  const double ref = masked_skyrmion_number(base, ones(g.size()), ApertureRegion::full(g));
  skm_test::for_all(5, 17, [&](skm_test::Gen& gen, int) {
    // random rotation from a random unit quaternion
    double q[4];
    double nrm = 0.0;
    for (double& v : q) {
      v = gen.normal();
      nrm += v * v;
    }
    for (double& v : q) v /= std::sqrt(nrm);
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    const double r[3][3] = {{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
                            {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
                            {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
    NormalizedStokesField rot = base;
    for (Vec3& s : rot.s_hat) {
      const Vec3 o = s;
      for (int i = 0; i < 3; ++i) s[i] = r[i][0] * o[0] + r[i][1] * o[1] + r[i][2] * o[2];
    }
    CHECK(std::abs(masked_skyrmion_number(rot, ones(g.size()), ApertureRegion::full(g)) - ref) < 1e-3);
  });
}

TEST_CASE("scaling the raw Stokes field leaves N unchanged") {
  const SamplingGrid g(128, 2.0 * 2.93e-3);
  const StokesField s = stokes(synthesize_skm_beam(2, skm_beam_spec(2, BeamParams{}), g));
  StokesField t = s;
  for (double& v : t.s0) v *= 37.0;
  for (Vec3& v : t.s_vec)
    for (double& c : v) c *= 37.0;
  const ApertureRegion a = ApertureRegion::circle(g, 0.2);
  const auto w1 = build_mask(s.s0, MaskSpec::scaled_mean(0.3));
  const auto w2 = build_mask(t.s0, MaskSpec::scaled_mean(0.3));
  CHECK(w1 == w2);
  CHECK(masked_skyrmion_number(normalize_stokes(s, 0.0), w1, a) ==
        doctest::Approx(masked_skyrmion_number(normalize_stokes(t, 0.0), w2, a)).epsilon(1e-12));
}

TEST_CASE("synthesized beams at z = 0 carry the predicted number") {
  // 16 w0 across: wide enough for the mode tails, small enough that no pixel underflows to zero
  const SamplingGrid g(256, 16.0 * 0.016 / 256);
  CHECK(beam_number(0, 4, g) == doctest::Approx(4.0).epsilon(2.5e-3));
  CHECK(beam_number(0, 1, g) == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(beam_number(0, -1, g) == doctest::Approx(-1.0).epsilon(1e-2));
  // confirms sgn(|l1| - |l0|)(l1 - l0) for a polarity-swapped pair
  CHECK(beam_number(1, 0, g) == doctest::Approx(predicted_nsk(1, 0)).epsilon(1e-2));
  CHECK(beam_number(3, 1, g) == doctest::Approx(predicted_nsk(3, 1)).epsilon(1e-2));
  for (int n = 1; n <= 8; ++n) CHECK(std::abs(beam_number(0, n, g) + beam_number(0, -n, g)) < 1e-2);
}

TEST_CASE("mask-parameter optimization") {
  const std::vector<MaskSpec> cands{MaskSpec::scaled_mean(0.3), MaskSpec::scaled_mean(0.1), MaskSpec::scaled_mean(0.2)};
  SUBCASE("degenerate objective picks the smallest parameter") {
    const auto r = optimize_mask_parameter([](const MaskSpec&) { return std::vector<std::vector<double>>{{1, 1}, {2}}; },
                                           [](const MaskSpec&) { return std::vector<double>{1, 2}; }, cands);
    CHECK(r.best == MaskSpec::scaled_mean(0.1));
    CHECK(r.best_mse == 0.0);
    CHECK(r.mse_by_candidate.front().first == MaskSpec::scaled_mean(0.1));
  }
  SUBCASE("candidate reproducing vacuum wins") {
    const auto r = optimize_mask_parameter(
        [](const MaskSpec& m) {
          const double off = m.alpha == 0.2 ? 0.0 : 0.5;
          return std::vector<std::vector<double>>{{1 + off, 1 - off}, {2 + off}};
        },
        [](const MaskSpec&) { return std::vector<double>{1, 2}; }, cands);
    CHECK(r.best == MaskSpec::scaled_mean(0.2));
    CHECK(r.mse_by_candidate.size() == 3);
  }
  CHECK_THROWS_AS(optimize_mask_parameter([](const MaskSpec&) { return std::vector<std::vector<double>>{}; },
                                          [](const MaskSpec&) { return std::vector<double>{}; }, {}),
                  ParameterError);
  CHECK_THROWS_AS(optimize_mask_parameter([](const MaskSpec&) { return std::vector<std::vector<double>>{{}}; },
                                          [](const MaskSpec&) { return std::vector<double>{0.0}; }, cands),
                  ParameterError);
}

}  // TEST_SUITE
