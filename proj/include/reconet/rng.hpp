#pragma once

#include <cstdint>
#include <random>

namespace reconet {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream). Each simulator and generator
/// owns a fixed stream id so the same seed never aliases across them.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix64(mix64(seed) ^ mix64(stream + 0x5851f42d4c957f2dULL)));
}

namespace stream {
inline constexpr std::uint64_t kErdosRenyi = 1;
inline constexpr std::uint64_t kBarabasiAlbert = 2;
inline constexpr std::uint64_t kIsing = 10;
inline constexpr std::uint64_t kSis = 11;
inline constexpr std::uint64_t kVoter = 12;
inline constexpr std::uint64_t kWalker = 13;
inline constexpr std::uint64_t kKuramoto = 14;
inline constexpr std::uint64_t kDiffusion = 15;
}  // namespace stream

}  // namespace reconet
