#include "skm/rng.hpp"

#include <bit>

namespace skm {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x5EED5EED5EED5EEDULL;
  for (std::uint64_t w : words) h = splitmix64(h + kGolden + splitmix64(w));
  return h;
}

std::uint64_t double_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

CounterRng CounterRng::substream(std::uint64_t id) const {
  return CounterRng(hash_words({key_, id}));
}

}  // namespace skm
