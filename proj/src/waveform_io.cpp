#include "uwbsim/waveform_io.hpp"

#include "uwbsim/errors.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace uwbsim {
namespace {

constexpr std::array<char, 4> kMagic{'U', 'W', 'B', 'W'};
constexpr std::uint32_t kVersion = 1;

template <typename U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& in, const char* field) {
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw FormatError(std::string("UWBW: truncated field '") + field + "'");
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(bytes[i]) << (8 * i);
  }
  return value;
}

} // namespace

void write_uwbw(std::ostream& out, const Waveform& wave) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(wave.sample_rate()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(wave.size()));
  std::vector<char> buf(wave.size() * 4);
  for (std::size_t i = 0; i < wave.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(wave[i]));
    for (std::size_t b = 0; b < 4; ++b) {
      buf[4 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

Waveform read_uwbw(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kMagic) {
    throw FormatError("UWBW: bad field 'magic' (expected \"UWBW\")");
  }
  const auto version = get_le<std::uint32_t>(in, "version");
  if (version != kVersion) {
    throw FormatError("UWBW: unsupported field 'version' = " + std::to_string(version));
  }
  const double fs = std::bit_cast<double>(get_le<std::uint64_t>(in, "sample_rate_hz"));
  if (!(fs > 0.0) || !std::isfinite(fs)) {
    throw FormatError("UWBW: invalid field 'sample_rate_hz'");
  }
  const auto n = get_le<std::uint64_t>(in, "n_samples");
  if (n == 0) {
    throw FormatError("UWBW: field 'n_samples' is zero");
  }
  constexpr std::uint64_t kMaxSamples = std::uint64_t{1} << 34;
  if (n > kMaxSamples) {
    throw FormatError("UWBW: field 'n_samples' is implausibly large");
  }
  std::vector<unsigned char> buf(n * 4);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::uint64_t>(in.gcount()) != buf.size()) {
    throw FormatError("UWBW: truncated field 'samples' (header declares " + std::to_string(n) + ")");
  }
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t bits = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      bits |= static_cast<std::uint32_t>(buf[4 * i + b]) << (8 * b);
    }
    samples[i] = std::bit_cast<float>(bits);
  }
  return Waveform(std::move(samples), fs);
}

void write_uwbw_file(const std::filesystem::path& path, const Waveform& wave) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  write_uwbw(out, wave);
  if (!out) {
    throw IoError("write failed for '" + path.string() + "'");
  }
}

Waveform read_uwbw_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  try {
    return read_uwbw(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

} // namespace uwbsim
