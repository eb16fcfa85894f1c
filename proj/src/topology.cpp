#include "skm/topology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace skm {

using std::numbers::pi;

namespace {

constexpr Vec3 kPlaceholder{0.0, 0.0, 1.0};

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = dot(a, cross(b, c));
  const double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
  return 2.0 * std::atan2(num, den);
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParameterError("mask key: bad number '" + s + "'");
  return v;
}

}  // namespace

NormalizedStokesField normalize_stokes(const StokesField& raw, double floor) {
  if (!(floor >= 0.0)) throw ParameterError("normalize_stokes: floor must be >= 0");
  const double max_s0 = raw.s0.empty() ? 0.0 : *std::max_element(raw.s0.begin(), raw.s0.end());
  const double level = floor * max_s0;

  NormalizedStokesField out{raw.grid, std::vector<Vec3>(raw.grid.size(), kPlaceholder),
                            std::vector<std::uint8_t>(raw.grid.size(), 0)};
  std::size_t n_valid = 0;
  for (std::size_t i = 0; i < raw.s_vec.size(); ++i) {
    const Vec3& s = raw.s_vec[i];
    const double norm = std::sqrt(dot(s, s));
    if (norm > 0.0 && norm >= level) {
      out.s_hat[i] = {s[0] / norm, s[1] / norm, s[2] / norm};
      out.valid[i] = 1;
      ++n_valid;
    }
  }
  if (n_valid == 0) throw std::domain_error("normalize_stokes: field carries no polarization texture");
  return out;
}

// ---------------------------------------------------------------------------
// Masks

std::string to_string(MaskKind kind) {
  switch (kind) {
    case MaskKind::none: return "none";
    case MaskKind::scaled_mean: return "scaled-mean";
    case MaskKind::top_epsilon: return "top-epsilon";
    case MaskKind::super_gaussian: return "super-gaussian";
  }
  return "none";
}

MaskKind parse_mask_kind(const std::string& name) {
  if (name == "none") return MaskKind::none;
  if (name == "scaled-mean") return MaskKind::scaled_mean;
  if (name == "top-epsilon") return MaskKind::top_epsilon;
  if (name == "super-gaussian") return MaskKind::super_gaussian;
  throw ParameterError("unknown mask kind '" + name + "'");
}

void MaskSpec::validate() const {
  switch (kind) {
    case MaskKind::none: break;
    case MaskKind::scaled_mean:
      if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("scaled-mean mask: alpha must be > 0");
      break;
    case MaskKind::top_epsilon:
      if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParameterError("top-epsilon mask: epsilon must be in (0, 1]");
      break;
    case MaskKind::super_gaussian:
      if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("super-gaussian mask: alpha must be > 0");
      if (!(q > 0.0) || !std::isfinite(q)) throw ParameterError("super-gaussian mask: q must be > 0");
      break;
  }
}

std::string MaskSpec::key() const {
  switch (kind) {
    case MaskKind::none: return "none";
    case MaskKind::scaled_mean: return "scaled-mean:alpha=" + format_number(alpha);
    case MaskKind::top_epsilon: return "top-epsilon:epsilon=" + format_number(epsilon);
    case MaskKind::super_gaussian:
      return "super-gaussian:alpha=" + format_number(alpha) + ",q=" + format_number(q);
  }
  return "none";
}

MaskSpec MaskSpec::parse(const std::string& key) {
  const auto colon = key.find(':');
  MaskSpec spec;
  spec.kind = parse_mask_kind(key.substr(0, colon));
  if (colon != std::string::npos) {
    std::stringstream rest(key.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ParameterError("mask key: expected name=value in '" + key + "'");
      const std::string name = item.substr(0, eq);
      const double v = parse_number(item.substr(eq + 1));
      if (name == "alpha") spec.alpha = v;
      else if (name == "epsilon") spec.epsilon = v;
      else if (name == "q") spec.q = v;
      else throw ParameterError("mask key: unknown parameter '" + name + "'");
    }
  }
  spec.validate();
  return spec;
}

std::pair<double, double> MaskSpec::parameters() const {
  switch (kind) {
    case MaskKind::none: return {0.0, 0.0};
    case MaskKind::scaled_mean: return {alpha, 0.0};
    case MaskKind::top_epsilon: return {epsilon, 0.0};
    case MaskKind::super_gaussian: return {alpha, q};
  }
  return {0.0, 0.0};
}

double nonzero_mean_intensity(std::span<const double> intensity) {
  if (intensity.empty()) return 0.0;
  const double max_i = *std::max_element(intensity.begin(), intensity.end());
  if (!(max_i > 0.0)) return 0.0;
  const double floor = 1e-12 * max_i;
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : intensity) {
    if (v > floor) {
      sum += v;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

RealArray build_mask(std::span<const double> intensity, const MaskSpec& spec) {
  spec.validate();
  RealArray w(intensity.size(), 0.0);
  for (double v : intensity)
    if (v < 0.0) throw ParameterError("build_mask: intensity must be non-negative");

  switch (spec.kind) {
    case MaskKind::none:
      std::fill(w.begin(), w.end(), 1.0);
      break;
    case MaskKind::scaled_mean: {
      const double i_avg = nonzero_mean_intensity(intensity);
      if (i_avg <= 0.0) break;
      const double th = spec.alpha * i_avg;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = intensity[i] >= th ? 1.0 : 0.0;
      break;
    }
    case MaskKind::top_epsilon: {
      RealArray sorted(intensity.begin(), intensity.end());
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      RealArray cum(sorted.size());
      std::partial_sum(sorted.begin(), sorted.end(), cum.begin());
      const double total = cum.empty() ? 0.0 : cum.back();
      if (!(total > 0.0)) break;
      const double target = spec.epsilon * total;
      const auto it = std::lower_bound(cum.begin(), cum.end(), target);
      const std::size_t k = it == cum.end() ? cum.size() - 1 : static_cast<std::size_t>(it - cum.begin());
      // every pixel equal to sorted[k] is included, so ties enter together
      const double th = sorted[k];
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = (intensity[i] >= th && intensity[i] > 0.0) ? 1.0 : 0.0;
      break;
    }
    case MaskKind::super_gaussian: {
      const double i_avg = nonzero_mean_intensity(intensity);
      if (i_avg <= 0.0) break;
      const double scale = spec.alpha * i_avg;
      for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = -std::expm1(-std::pow(intensity[i] / scale, 2.0 * spec.q));
      break;
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Integration domain

ApertureRegion ApertureRegion::full(const SamplingGrid& grid) {
  ApertureRegion a(grid);
  a.diameter_ = std::numeric_limits<double>::infinity();
  a.clipped_ = false;
  a.inside_.assign(grid.size(), 1);
  a.indices_.resize(grid.size());
  std::iota(a.indices_.begin(), a.indices_.end(), std::size_t{0});
  return a;
}

ApertureRegion ApertureRegion::circle(const SamplingGrid& grid, double diameter) {
  if (!(diameter > 0.0)) throw ParameterError("ApertureRegion: diameter must be positive");
  ApertureRegion a(grid);
  a.diameter_ = diameter;
  const double r = diameter / 2.0;
  const double half_extent = grid.extent() / 2.0;
  a.clipped_ = r > half_extent;
  a.inside_.assign(grid.size(), 0);
  for (std::size_t iy = 0; iy < grid.n(); ++iy) {
    const double y = grid.coord(iy);
    for (std::size_t ix = 0; ix < grid.n(); ++ix) {
      const double x = grid.coord(ix);
      if (x * x + y * y <= r * r) {
        const std::size_t idx = grid.index(ix, iy);
        a.inside_[idx] = 1;
        a.indices_.push_back(idx);
      }
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// Density

std::string to_string(DensityMethod m) {
  return m == DensityMethod::solid_angle ? "solid-angle" : "central-difference";
}

DensityMethod parse_density_method(const std::string& name) {
  if (name == "solid-angle") return DensityMethod::solid_angle;
  if (name == "central-difference") return DensityMethod::central_difference;
  throw ParameterError("unknown density method '" + name + "'");
}

namespace {

SkyrmionDensityField central_difference_density(const NormalizedStokesField& s, const ApertureRegion& dom) {
  const SamplingGrid& g = s.grid;
  const std::size_t n = g.n();
  const double dx = g.spacing();
  SkyrmionDensityField out{g, RealArray(g.size(), 0.0)};

  auto derivative = [&](std::size_t center, bool has_minus, std::size_t minus, bool has_plus, std::size_t plus) {
    Vec3 d{0.0, 0.0, 0.0};
    const auto& v = s.s_hat;
    if (has_minus && has_plus) {
      for (int c = 0; c < 3; ++c) d[c] = (v[plus][c] - v[minus][c]) / (2.0 * dx);
    } else if (has_plus) {
      for (int c = 0; c < 3; ++c) d[c] = (v[plus][c] - v[center][c]) / dx;
    } else if (has_minus) {
      for (int c = 0; c < 3; ++c) d[c] = (v[center][c] - v[minus][c]) / dx;
    }
    return d;
  };

  for (std::size_t idx : dom.indices()) {
    const std::size_t ix = idx % n;
    const std::size_t iy = idx / n;
    const bool xm = ix > 0 && dom.contains(idx - 1);
    const bool xp = ix + 1 < n && dom.contains(idx + 1);
    const bool ym = iy > 0 && dom.contains(idx - n);
    const bool yp = iy + 1 < n && dom.contains(idx + n);
    const Vec3 dsx = derivative(idx, xm, xm ? idx - 1 : 0, xp, xp ? idx + 1 : 0);
    const Vec3 dsy = derivative(idx, ym, ym ? idx - n : 0, yp, yp ? idx + n : 0);
    out.density[idx] = dot(s.s_hat[idx], cross(dsx, dsy));
  }
  return out;
}

SkyrmionDensityField solid_angle_density(const NormalizedStokesField& s, const ApertureRegion& dom) {
  const SamplingGrid& g = s.grid;
  const std::size_t n = g.n();
  SkyrmionDensityField out{g, RealArray(g.size(), 0.0)};
  const double share = 0.25 / g.pixel_area();
  const auto& v = s.s_hat;
  for (std::size_t idx : dom.indices()) {
    const std::size_t ix = idx % n;
    const std::size_t iy = idx / n;
    if (ix + 1 >= n || iy + 1 >= n) continue;
    const std::size_t b = idx + 1;
    const std::size_t c = idx + n + 1;
    const std::size_t d = idx + n;
    if (!dom.contains(b) || !dom.contains(c) || !dom.contains(d)) continue;
    const double omega = triangle_solid_angle(v[idx], v[b], v[c]) + triangle_solid_angle(v[idx], v[c], v[d]);
    const double part = omega * share;
    out.density[idx] += part;
    out.density[b] += part;
    out.density[c] += part;
    out.density[d] += part;
  }
  return out;
}

}  // namespace

SkyrmionDensityField skyrmion_density(const NormalizedStokesField& s, DensityMethod method,
                                      const ApertureRegion* domain) {
  if (s.s_hat.size() != s.grid.size()) throw ParameterError("skyrmion_density: field shape mismatch");
  if (domain != nullptr) require_same_grid(domain->grid(), s.grid, "skyrmion_density");
  std::optional<ApertureRegion> full;
  if (domain == nullptr) full = ApertureRegion::full(s.grid);
  const ApertureRegion& dom = domain == nullptr ? *full : *domain;
  return method == DensityMethod::solid_angle ? solid_angle_density(s, dom) : central_difference_density(s, dom);
}

double masked_skyrmion_number(const SkyrmionDensityField& density, std::span<const double> weights,
                              const ApertureRegion& aperture) {
  require_same_grid(density.grid, aperture.grid(), "masked_skyrmion_number");
  if (weights.size() != density.grid.size())
    throw ParameterError("masked_skyrmion_number: weight array shape mismatch");
  double sum = 0.0;
  for (std::size_t idx : aperture.indices()) sum += weights[idx] * density.density[idx];
  return sum * density.grid.pixel_area() / (4.0 * pi);
}

double masked_skyrmion_number(const NormalizedStokesField& s, std::span<const double> weights,
                              const ApertureRegion& aperture, DensityMethod method) {
  return masked_skyrmion_number(skyrmion_density(s, method, &aperture), weights, aperture);
}

// ---------------------------------------------------------------------------
// Parameter search

std::vector<MaskSpec> default_search_grid(MaskKind kind) {
  std::vector<MaskSpec> out;
  auto alpha_at = [](int i) { return 0.05 * i; };
  switch (kind) {
    case MaskKind::none:
      out.push_back(MaskSpec::none());
      break;
    case MaskKind::scaled_mean:
      for (int i = 1; i <= 40; ++i) out.push_back(MaskSpec::scaled_mean(alpha_at(i)));
      break;
    case MaskKind::top_epsilon:
      for (int i = 0; i <= 20; ++i) out.push_back(MaskSpec::top_epsilon(0.5 + 0.025 * i));
      break;
    case MaskKind::super_gaussian:
      for (int i = 1; i <= 40; ++i)
        for (double q : {1.0, 2.0, 4.0, 8.0}) out.push_back(MaskSpec::super_gaussian(alpha_at(i), q));
      break;
  }
  return out;
}

MaskSearchResult optimize_mask_parameter(const TurbulentEvaluator& turbulent, const VacuumEvaluator& vacuum,
                                         std::vector<MaskSpec> candidates) {
  if (candidates.empty()) throw ParameterError("optimize_mask_parameter: no candidates");
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const MaskSpec& a, const MaskSpec& b) { return a.parameters() < b.parameters(); });

  MaskSearchResult result;
  bool have_best = false;
  for (const MaskSpec& spec : candidates) {
    const auto samples = turbulent(spec);
    const auto reference = vacuum(spec);
    if (samples.size() != reference.size())
      throw ParameterError("optimize_mask_parameter: symbol sets differ between evaluators");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      for (double v : samples[s]) {
        const double e = v - reference[s];
        sum += e * e;
        ++count;
      }
    }
    if (count == 0) throw ParameterError("optimize_mask_parameter: empty sample set");
    const double mse = sum / static_cast<double>(count);
    result.mse_by_candidate.emplace_back(spec, mse);
    if (!have_best || mse < result.best_mse) {
      result.best = spec;
      result.best_mse = mse;
      have_best = true;
    }
  }
  return result;
}

}  // namespace skm
