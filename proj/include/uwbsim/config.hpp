#pragma once

#include "uwbsim/channel.hpp"
#include "uwbsim/rx.hpp"
#include "uwbsim/tx.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace uwbsim {

enum class OutputFormat { csv, json, table };

OutputFormat parse_output_format(std::string_view s);
std::string_view to_string(OutputFormat f);

struct RunSection {
  std::size_t n_bits = 1000;
  std::uint64_t master_seed = 1;
  std::string out;  // empty: stdout (text reports) / required (waveforms)
  OutputFormat format = OutputFormat::csv;
};

/// Everything an experiment needs, as stored in the INI-style config file
/// with sections [tx], [channel], [rx] and [run].
struct RunConfig {
  TxConfig tx;
  ChannelConfig channel;
  RxConfig rx;
  RunSection run;

  /// Validates every section.
  void validate() const;
};

/// Parses the config text. Unknown sections or keys and malformed values
/// raise FormatError naming the key. Missing keys keep their defaults.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);

/// Writes every key (round-trip exact: doubles use 17 significant digits).
std::string serialize_run_config(const RunConfig& cfg);

/// Sets one key, e.g. ("tx.carrier_hz", "5e9"). Same errors as the parser.
void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

} // namespace uwbsim
