#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "skm/detection.hpp"
#include "skm/grid.hpp"
#include "support.hpp"

using namespace skm;

namespace {

SymbolChannelStats two(double m1, double s1, double m2, double s2) {
  return SymbolChannelStats::from_parameters({{1, {m1, s1}}, {2, {m2, s2}}});
}

}  // namespace

TEST_SUITE("detection") {

TEST_CASE("constellation validation") {
  CHECK(Constellation({-1, 1}).bits_per_symbol() == 1);
  CHECK(Constellation(skyrmion_universe()).bits_per_symbol() == 4);
  CHECK(skyrmion_universe().size() == 16);
  CHECK_THROWS_AS(Constellation({1, 2, 3}), ParameterError);
  CHECK_THROWS_AS(Constellation({2, 1}), ParameterError);
  CHECK_THROWS_AS(Constellation({1, 1}), ParameterError);
  CHECK_THROWS_AS(Constellation({0, 1}), ParameterError);
  CHECK_THROWS_AS(Constellation({1, 9}), ParameterError);
  CHECK_THROWS_AS(Constellation({1}), ParameterError);
}

TEST_CASE("fit_symbol_stats examples") {
  const auto s = fit_symbol_stats({{1, {0.0, 2.0}}});
  CHECK(s.at(1).mean == doctest::Approx(1.0));
  CHECK(s.at(1).stddev == doctest::Approx(std::sqrt(2.0)));
  CHECK(s.at(1).count == 2);
  const auto j = fit_symbol_stats({{3, {1.0, 1.0, 1.0, 1.0 + 1e-9}}});
  CHECK(j.at(3).mean == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_symbol_stats({{1, {1.0, 1.0, 1.0}}}), std::domain_error);
  CHECK_THROWS_AS(fit_symbol_stats({{1, {1.0}}}), ParameterError);
  CHECK_THROWS_AS(s.at(2), ParameterError);
  CHECK_THROWS_AS(SymbolChannelStats::from_parameters({{1, {0.0, 0.0}}}), ParameterError);
}

TEST_CASE("boundary examples") {
  CHECK(solve_boundaries(two(1, 0.2, 2, 0.2), Constellation({1, 2})).boundaries[0] == doctest::Approx(1.5));
  const double beta = solve_boundaries(two(0, 0.1, 2, 0.3), Constellation({1, 2})).boundaries[0];
  CHECK(beta == doctest::Approx(skm_oracle::gaussian_crossing_bisect(0, 0.1, 2, 0.3)).epsilon(1e-10));
  // both log-densities equal -11.03 here
  CHECK(beta == doctest::Approx(0.51630).epsilon(1e-4));
  // no crossing inside (m1, m2) falls back to the midpoint
  CHECK(gaussian_intersection(0.0, 1.0, 0.01, 3.0) == doctest::Approx(0.005));
  CHECK(gaussian_intersection(-2.0, 0.5, 1.0, 0.5) == doctest::Approx(-0.5));

  const auto four = SymbolChannelStats::from_parameters({{-2, {-2, 0.2}}, {-1, {-1, 0.3}}, {1, {1, 0.1}}, {3, {3, 0.5}}});
  const DecisionScheme d = solve_boundaries(four, Constellation({-2, -1, 1, 3}));
  REQUIRE(d.boundaries.size() == 3);
  CHECK(d.boundaries[0] < d.boundaries[1]);
  CHECK(d.boundaries[1] < d.boundaries[2]);
  CHECK_THROWS_AS(solve_boundaries(two(2, 0.1, 1, 0.1), Constellation({1, 2})), MeanOrderError);
}

TEST_CASE("hard decision examples") {
  const auto st = SymbolChannelStats::from_parameters({{1, {1, 0.2}}, {2, {2, 0.2}}, {3, {3.2, 0.4}}, {5, {5, 0.3}}});
  const DecisionScheme d = solve_boundaries(st, Constellation({1, 2, 3, 5}));
  for (int s : {1, 2, 3, 5}) CHECK(hard_decide(st.at(s).mean, d) == s);
  CHECK(hard_decide(d.boundaries[0], d) == 1);
  CHECK(hard_decide(std::nextafter(d.boundaries[0], 10.0), d) == 2);
  CHECK(hard_decide(d.boundaries[2], d) == 3);
  CHECK(hard_decide(1e300, d) == 5);
  CHECK(hard_decide(std::numeric_limits<double>::infinity(), d) == 5);
  CHECK(hard_decide(-std::numeric_limits<double>::infinity(), d) == 1);
}

TEST_CASE("property: regions partition the line and shifts are equivariant") {
  skm_test::for_all(200, 21, [](skm_test::Gen& g, int) {
    const std::size_t m = std::size_t{1} << g.integer(1, 4);
    const auto syms = g.subset(skyrmion_universe(), m);
    std::map<int, std::vector<double>> samples;
    double mean = -20.0;
    for (int s : syms) {
      mean += g.uniform(0.5, 3.0);
      const double sd = g.uniform(0.05, 0.6);
      for (int k = 0; k < 30; ++k) samples[s].push_back(mean + sd * g.normal());
    }
    const auto stats = fit_symbol_stats(samples);
    // means are generated increasing, so the sampled fits stay ordered
    const DecisionScheme d = solve_boundaries(stats, Constellation(syms));
    for (std::size_t k = 0; k + 1 < m; ++k) {
      CHECK(d.boundaries[k] > stats.at(syms[k]).mean);
      CHECK(d.boundaries[k] < stats.at(syms[k + 1]).mean);
    }
    const double c = g.uniform(-5.0, 5.0);
    const auto shifted = stats.shifted(c);
    const DecisionScheme ds = solve_boundaries(shifted, Constellation(syms));
    for (std::size_t k = 0; k + 1 < m; ++k) CHECK(ds.boundaries[k] == doctest::Approx(d.boundaries[k] + c).epsilon(1e-9));
    for (int t = 0; t < 50; ++t) {
      const double x = g.uniform(-25.0, 30.0);
      const std::size_t r = decision_region(x, d);
      REQUIRE(r < m);
      if (r > 0) CHECK(x > d.boundaries[r - 1]);
      if (r + 1 < m) CHECK(x <= d.boundaries[r]);
      // skip points within roundoff of a shifted threshold
      bool near = false;
      for (double b : d.boundaries) near = near || std::abs(x - b) < 1e-9;
      if (!near) CHECK(hard_decide(x + c, ds) == hard_decide(x, d));
    }
  });
}

TEST_CASE("property: equal variances with equal spacing give midpoints") {
  skm_test::for_all(50, 22, [](skm_test::Gen& g, int) {
    const double start = g.uniform(-5, 5), step = g.uniform(0.5, 2), sd = g.uniform(0.01, 1);
    std::map<int, std::pair<double, double>> p;
    const std::vector<int> syms{-3, -1, 2, 4};
    for (std::size_t k = 0; k < 4; ++k) p[syms[k]] = {start + step * static_cast<double>(k), sd};
    const auto d = solve_boundaries(SymbolChannelStats::from_parameters(p), Constellation(syms));
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(d.boundaries[k] == doctest::Approx(start + step * (static_cast<double>(k) + 0.5)));
  });
}

TEST_CASE("histogram model integrates to one") {
  skm_test::Gen g(5);
  std::vector<double> s;
  for (int i = 0; i < 5000; ++i) s.push_back(2.0 + 0.5 * g.normal());
  const HistogramModel h = fit_histogram(s);
  double total = 0.0;
  for (double d : h.density) total += d * h.bin_width;
  CHECK(total == doctest::Approx(1.0));
  CHECK(h.pdf(2.0) == doctest::Approx(1.0 / (0.5 * std::sqrt(2 * std::numbers::pi))).epsilon(0.1));
  CHECK(h.pdf(-10.0) == 0.0);
  CHECK(h.pdf(10.0) == 0.0);
}

}  // TEST_SUITE
