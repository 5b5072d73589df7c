#include "uwbsim/random.hpp"

namespace uwbsim {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ stream) + index);
}

std::vector<double> gaussian_samples(std::size_t n, double sigma, std::uint64_t seed) {
  std::vector<double> out(n, 0.0);
  if (!(sigma > 0.0)) {
    return out;
  }
  Rng rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  for (auto& x : out) {
    x = dist(rng);
  }
  return out;
}

} // namespace uwbsim
