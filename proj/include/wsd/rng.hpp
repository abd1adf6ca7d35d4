#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <variant>

namespace wsd {

/// Seeded random stream used for tie-breaking and EM initialization.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
/// performs every integer/real conversion itself so that results are
/// identical across standard library implementations. Bump kVersion if the
/// derivation or conversion scheme ever changes.
class Rng {
public:
  static constexpr std::uint32_t kVersion = 1;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, n); n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard exponential variate (rate 1).
  double exponential();

private:
  std::mt19937_64 engine_;
};

using SeedPart = std::variant<std::uint64_t, std::string_view>;

/// Derive an independent stream seed from a master seed and a path of tags,
/// e.g. derive_seed(master, {"concern", "A", "em", 3}).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<SeedPart> parts);

}  // namespace wsd
