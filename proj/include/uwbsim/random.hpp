#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace uwbsim {

using Rng = std::mt19937_64;
using Bits = std::vector<std::uint8_t>;

/// splitmix64 finaliser; used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for an independent stream. Distinct (seed, stream, index) triples give
/// unrelated generators; the result never depends on call order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

// Stream tags keep generators seeded from the same user seed apart.
namespace stream {
inline constexpr std::uint64_t bits = 0x62697473;       // "bits"
inline constexpr std::uint64_t polarity = 0x706f6c61;   // "pola"
inline constexpr std::uint64_t phase = 0x70686173;      // "phas"
inline constexpr std::uint64_t noise = 0x6e6f6973;      // "nois"
inline constexpr std::uint64_t block = 0x626c6f63;      // "bloc"
} // namespace stream

/// n i.i.d. standard normal samples scaled by sigma.
std::vector<double> gaussian_samples(std::size_t n, double sigma, std::uint64_t seed);

} // namespace uwbsim
