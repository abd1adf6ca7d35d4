#include "wsd/rng.hpp"

#include <cmath>

namespace wsd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  // rejection sampling keeps the draw exactly uniform
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::exponential() {
  double u;
  do {
    u = uniform01();
  } while (u == 0.0);
  return -std::log(u);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<SeedPart> parts) {
  std::uint64_t h = splitmix64(master ^ splitmix64(Rng::kVersion));
  for (const auto& part : parts) {
    const std::uint64_t v = std::holds_alternative<std::uint64_t>(part)
                                ? splitmix64(std::get<std::uint64_t>(part))
                                : fnv1a(std::get<std::string_view>(part));
    h = splitmix64(h ^ v);
  }
  return h;
}

}  // namespace wsd
