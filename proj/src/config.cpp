#include "skm/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace skm {

using nlohmann::json;

std::string to_string(ScalePreset p) { return p == ScalePreset::paper ? "paper" : "desk"; }

ScalePreset parse_preset(const std::string& name) {
  if (name == "paper") return ScalePreset::paper;
  if (name == "desk") return ScalePreset::desk;
  throw ParameterError("unknown preset '" + name + "' (expected paper or desk)");
}

RunConfig RunConfig::make(ScalePreset preset) {
  RunConfig c;
  c.preset = preset;
  if (preset == ScalePreset::paper) {
    c.n_points = 1024;
    c.spacing = 0.733e-3;
    c.trials = 20000;
  }
  return c;
}

TurbulenceProfile RunConfig::profile(double cn2) const {
  TurbulenceProfile p;
  p.cn2 = cn2;
  p.inner_scale = inner_scale;
  p.outer_scale = outer_scale;
  p.screen_spacing = screen_spacing();
  p.n_screens = link.n_steps;
  return p;
}

std::vector<int> RunConfig::symbols() const {
  std::vector<int> s;
  for (int v = -ell_max; v <= ell_max; ++v)
    if (v != 0) s.push_back(v);
  return s;
}

std::vector<MaskSpec> RunConfig::mask_candidates() const {
  std::vector<MaskSpec> out;
  for (MaskKind k : mask_kinds) {
    const auto g = default_search_grid(k);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

void RunConfig::validate() const {
  beam.validate();
  if (ell_max < 1 || ell_max > 8) throw ParameterError("config: ell_max must be in [1, 8]");
  const SamplingGrid g = grid();
  link.validate(g);
  profile(cn2_levels.empty() ? 0.0 : cn2_levels.front()).validate();
  for (double c : cn2_levels)
    if (!(c >= 0.0) || !std::isfinite(c)) throw ParameterError("config: every cn2 level must be >= 0");
  for (std::size_t i = 1; i < cn2_levels.size(); ++i)
    if (!(cn2_levels[i - 1] < cn2_levels[i])) throw ParameterError("config: cn2 levels must be strictly ascending");
  if (mask_kinds.empty()) throw ParameterError("config: at least one mask kind is required");
  for (std::size_t i = 0; i < mask_kinds.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (mask_kinds[i] == mask_kinds[j]) throw ParameterError("config: duplicate mask kind");
  if (noise.sigma_eta < 0.0) throw ParameterError("config: noise sigma_eta must be >= 0");
  if (!(stokes_floor >= 0.0)) throw ParameterError("config: stokes_floor must be >= 0");
  if (trials < 0) throw ParameterError("config: trials must be >= 0");
}

json to_json(const RunConfig& c) {
  json kinds = json::array();
  for (MaskKind k : c.mask_kinds) kinds.push_back(to_string(k));
  return json{
      {"preset", to_string(c.preset)},
      {"beam", {{"wavelength", c.beam.wavelength}, {"waist", c.beam.waist}, {"ell_max", c.ell_max}}},
      {"link",
       {{"distance", c.link.distance}, {"n_steps", c.link.n_steps}, {"aperture_diameter", c.link.aperture_diameter}}},
      {"grid", {{"n_points", c.n_points}, {"spacing", c.spacing}}},
      {"turbulence",
       {{"cn2_levels", c.cn2_levels},
        {"inner_scale", c.inner_scale},
        {"outer_scale", c.outer_scale},
        {"subharmonics", c.subharmonics}}},
      {"mask", {{"kinds", kinds}, {"report", to_string(c.report_mask)}}},
      {"noise", {{"enabled", c.noise.enabled}, {"sigma_eta", c.noise.sigma_eta}}},
      {"receiver",
       {{"density_method", to_string(c.density_method)}, {"stokes_floor", c.stokes_floor}, {"absorber", c.absorber}}},
      {"trials", c.trials},
      {"seed", c.seed},
      {"workers", c.workers},
  };
}

namespace {

template <class T>
void read(const json& j, const char* section, const char* key, T& out) {
  const json* node = &j;
  if (section != nullptr) {
    if (!j.contains(section)) return;
    node = &j.at(section);
  }
  if (node->contains(key)) out = node->at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c = RunConfig::make(j.contains("preset") ? parse_preset(j.at("preset").get<std::string>())
                                                     : ScalePreset::desk);
  try {
    read(j, "beam", "wavelength", c.beam.wavelength);
    read(j, "beam", "waist", c.beam.waist);
    read(j, "beam", "ell_max", c.ell_max);
    read(j, "link", "distance", c.link.distance);
    read(j, "link", "n_steps", c.link.n_steps);
    read(j, "link", "aperture_diameter", c.link.aperture_diameter);
    read(j, "grid", "n_points", c.n_points);
    read(j, "grid", "spacing", c.spacing);
    read(j, "turbulence", "cn2_levels", c.cn2_levels);
    read(j, "turbulence", "inner_scale", c.inner_scale);
    read(j, "turbulence", "outer_scale", c.outer_scale);
    read(j, "turbulence", "subharmonics", c.subharmonics);
    if (j.contains("mask")) {
      const json& m = j.at("mask");
      if (m.contains("kinds")) {
        c.mask_kinds.clear();
        for (const auto& k : m.at("kinds")) c.mask_kinds.push_back(parse_mask_kind(k.get<std::string>()));
      }
      if (m.contains("report")) c.report_mask = parse_mask_kind(m.at("report").get<std::string>());
    }
    read(j, "noise", "enabled", c.noise.enabled);
    read(j, "noise", "sigma_eta", c.noise.sigma_eta);
    if (j.contains("receiver") && j.at("receiver").contains("density_method"))
      c.density_method = parse_density_method(j.at("receiver").at("density_method").get<std::string>());
    read(j, "receiver", "stokes_floor", c.stokes_floor);
    read(j, "receiver", "absorber", c.absorber);
    read(j, nullptr, "trials", c.trials);
    read(j, nullptr, "seed", c.seed);
    read(j, nullptr, "workers", c.workers);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ParameterError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const std::filesystem::path& path, const RunConfig& c) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write config file " + path.string());
  os << to_json(c).dump(2) << '\n';
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::fingerprint() const {
  json j = to_json(*this);
  j.erase("workers");
  j["mask"].erase("report");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

}  // namespace skm
