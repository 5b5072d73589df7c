#pragma once

#include "uwbsim/waveform.hpp"

#include <filesystem>
#include <iosfwd>

namespace uwbsim {

// UWBW v1, little-endian:
//   "UWBW" | u32 version=1 | f64 sample_rate_hz | u64 n_samples | n_samples x f32
// Samples are narrowed to binary32 on write.

void write_uwbw(std::ostream& out, const Waveform& wave);
Waveform read_uwbw(std::istream& in);

void write_uwbw_file(const std::filesystem::path& path, const Waveform& wave);
Waveform read_uwbw_file(const std::filesystem::path& path);

} // namespace uwbsim
