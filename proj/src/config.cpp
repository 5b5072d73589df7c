#include "uwbsim/config.hpp"

#include "uwbsim/errors.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace uwbsim {

OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") {
    return OutputFormat::csv;
  }
  if (s == "json") {
    return OutputFormat::json;
  }
  if (s == "table") {
    return OutputFormat::table;
  }
  throw ParameterError("unknown format '" + std::string(s) + "' (expected csv|json|table)");
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::json:
      return "json";
    case OutputFormat::table:
      return "table";
    case OutputFormat::csv:
      break;
  }
  return "csv";
}

void RunConfig::validate() const {
  tx.validate();
  channel.validate();
  RxConfig r = rx;
  r.bit_rate_bps = tx.data_rate_bps;
  r.validate();
  if (run.n_bits == 0) {
    throw ParameterError("run: n_bits must be >= 1");
  }
}

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) {
      return d;
    }
  } catch (const std::logic_error&) {
  }
  throw FormatError("config: key '" + key + "' expects a number, got '" + v + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw FormatError("config: key '" + key + "' expects an unsigned integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    return true;
  }
  if (v == "false" || v == "0" || v == "no" || v == "off") {
    return false;
  }
  throw FormatError("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

template <typename F>
auto wrap(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ParameterError& e) {
    throw FormatError("config: key '" + key + "': " + e.what());
  }
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
  Setter set;
  Getter get;
};

PhaseNoiseSpec& pn(RunConfig& c) {
  if (!c.tx.phase_noise) {
    c.tx.phase_noise.emplace();
  }
  return *c.tx.phase_noise;
}

const PhaseNoiseSpec& pn_or_default(const RunConfig& c) {
  static const PhaseNoiseSpec defaults{};
  return c.tx.phase_noise ? *c.tx.phase_noise : defaults;
}

// Ordered key table; serialisation follows this order.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    auto num = [&t](std::string key, auto member) {
      t.emplace_back(key, Field{[member](RunConfig& c, const std::string& k, const std::string& v) {
                                  member(c) = to_double(k, v);
                                },
                                [member](const RunConfig& c) {
                                  return fmt_double(member(const_cast<RunConfig&>(c)));
                                }});
    };
    auto u64 = [&t](std::string key, auto member) {
      t.emplace_back(key, Field{[member](RunConfig& c, const std::string& k, const std::string& v) {
                                  member(c) = to_u64(k, v);
                                },
                                [member](const RunConfig& c) {
                                  return std::to_string(member(const_cast<RunConfig&>(c)));
                                }});
    };
    auto flag = [&t](std::string key, auto member) {
      t.emplace_back(key, Field{[member](RunConfig& c, const std::string& k, const std::string& v) {
                                  member(c) = to_bool(k, v);
                                },
                                [member](const RunConfig& c) {
                                  return fmt_bool(member(const_cast<RunConfig&>(c)));
                                }});
    };
    auto pn_num = [&t](std::string key, double PhaseNoiseSpec::*m) {
      t.emplace_back(key, Field{[m](RunConfig& c, const std::string& k, const std::string& v) {
                                  pn(c).*m = to_double(k, v);
                                },
                                [m](const RunConfig& c) { return fmt_double(pn_or_default(c).*m); }});
    };

    num("tx.carrier_hz", [](RunConfig& c) -> double& { return c.tx.carrier_hz; });
    num("tx.pulse_width_s", [](RunConfig& c) -> double& { return c.tx.pulse_width_s; });
    num("tx.data_rate_bps", [](RunConfig& c) -> double& { return c.tx.data_rate_bps; });
    num("tx.p_out_dbm", [](RunConfig& c) -> double& { return c.tx.p_out_dbm; });
    t.emplace_back("tx.template",
                   Field{[](RunConfig& c, const std::string& k, const std::string& v) {
                           c.tx.pulse_template = wrap(k, [&] { return PulseTemplate::parse(v); });
                         },
                         [](const RunConfig& c) { return c.tx.pulse_template.to_string(); }});
    flag("tx.scramble", [](RunConfig& c) -> bool& { return c.tx.scramble; });
    u64("tx.scramble_seed", [](RunConfig& c) -> std::uint64_t& { return c.tx.scramble_seed; });
    t.emplace_back("tx.phase_noise",
                   Field{[](RunConfig& c, const std::string& k, const std::string& v) {
                           if (to_bool(k, v)) {
                             pn(c);
                           } else {
                             c.tx.phase_noise.reset();
                           }
                         },
                         [](const RunConfig& c) { return fmt_bool(c.tx.phase_noise.has_value()); }});
    pn_num("tx.pn_l_inband_dbc_hz", &PhaseNoiseSpec::l_inband_dbc_hz);
    pn_num("tx.pn_f_inband_ref_hz", &PhaseNoiseSpec::f_inband_ref_hz);
    pn_num("tx.pn_l_outband_dbc_hz", &PhaseNoiseSpec::l_outband_dbc_hz);
    pn_num("tx.pn_f_outband_ref_hz", &PhaseNoiseSpec::f_outband_ref_hz);
    t.emplace_back("tx.pn_corner_hz",
                   Field{[](RunConfig& c, const std::string& k, const std::string& v) {
                           if (v == "auto") {
                             pn(c).corner_hz.reset();
                           } else {
                             pn(c).corner_hz = to_double(k, v);
                           }
                         },
                         [](const RunConfig& c) {
                           const auto& corner = pn_or_default(c).corner_hz;
                           return corner ? fmt_double(*corner) : std::string("auto");
                         }});
    pn_num("tx.pn_integ_lo_hz", &PhaseNoiseSpec::integ_lo_hz);
    pn_num("tx.pn_integ_hi_hz", &PhaseNoiseSpec::integ_hi_hz);
    pn_num("tx.pn_target_rms_jitter_s", &PhaseNoiseSpec::target_rms_jitter_s);
    pn_num("tx.pn_ref_carrier_hz", &PhaseNoiseSpec::ref_carrier_hz);
    u64("tx.phase_noise_seed", [](RunConfig& c) -> std::uint64_t& { return c.tx.phase_noise_seed; });
    num("tx.sample_rate_hz", [](RunConfig& c) -> double& { return c.tx.sample_rate_hz; });

    num("channel.distance_m", [](RunConfig& c) -> double& { return c.channel.distance_m; });
    num("channel.freq_hz", [](RunConfig& c) -> double& { return c.channel.freq_hz; });
    num("channel.g_tx_dbi", [](RunConfig& c) -> double& { return c.channel.g_tx_dbi; });
    num("channel.g_rx_dbi", [](RunConfig& c) -> double& { return c.channel.g_rx_dbi; });
    num("channel.nf_db", [](RunConfig& c) -> double& { return c.channel.nf_db; });
    num("channel.link_bw_hz", [](RunConfig& c) -> double& { return c.channel.link_bw_hz; });
    u64("channel.filter_order", [](RunConfig& c) -> int& { return c.channel.filter_order; });
    num("channel.temperature_k", [](RunConfig& c) -> double& { return c.channel.temperature_k; });
    flag("channel.noise", [](RunConfig& c) -> bool& { return c.channel.noise; });
    u64("channel.seed", [](RunConfig& c) -> std::uint64_t& { return c.channel.seed; });
    t.emplace_back("channel.calibrated_ebn0_db",
                   Field{[](RunConfig& c, const std::string& k, const std::string& v) {
                           if (v == "none") {
                             c.channel.calibrated_ebn0_db.reset();
                           } else {
                             c.channel.calibrated_ebn0_db = to_double(k, v);
                           }
                         },
                         [](const RunConfig& c) {
                           return c.channel.calibrated_ebn0_db ? fmt_double(*c.channel.calibrated_ebn0_db)
                                                               : std::string("none");
                         }});

    t.emplace_back("rx.detector", Field{[](RunConfig& c, const std::string& k, const std::string& v) {
                                          c.rx.detector = wrap(k, [&] { return parse_detector(v); });
                                        },
                                        [](const RunConfig& c) { return std::string(to_string(c.rx.detector)); }});
    t.emplace_back("rx.threshold_policy",
                   Field{[](RunConfig& c, const std::string& k, const std::string& v) {
                           c.rx.threshold_policy = wrap(k, [&] { return parse_threshold_policy(v); });
                         },
                         [](const RunConfig& c) { return std::string(to_string(c.rx.threshold_policy)); }});
    u64("rx.preamble_bits", [](RunConfig& c) -> std::size_t& { return c.rx.preamble_bits; });
    flag("rx.known_timing", [](RunConfig& c) -> bool& { return c.rx.known_timing; });
    t.emplace_back("rx.polarity", Field{[](RunConfig& c, const std::string& k, const std::string& v) {
                                          c.rx.polarity = wrap(k, [&] { return parse_polarity_mode(v); });
                                        },
                                        [](const RunConfig& c) { return std::string(to_string(c.rx.polarity)); }});
    num("rx.filter_center_hz", [](RunConfig& c) -> double& { return c.rx.filter_center_hz; });
    num("rx.filter_bw_hz", [](RunConfig& c) -> double& { return c.rx.filter_bw_hz; });
    u64("rx.filter_order", [](RunConfig& c) -> int& { return c.rx.filter_order; });

    u64("run.n_bits", [](RunConfig& c) -> std::size_t& { return c.run.n_bits; });
    u64("run.master_seed", [](RunConfig& c) -> std::uint64_t& { return c.run.master_seed; });
    t.emplace_back("run.out", Field{[](RunConfig& c, const std::string&, const std::string& v) { c.run.out = v; },
                                    [](const RunConfig& c) { return c.run.out; }});
    t.emplace_back("run.format", Field{[](RunConfig& c, const std::string& k, const std::string& v) {
                                         c.run.format = wrap(k, [&] { return parse_output_format(v); });
                                       },
                                       [](const RunConfig& c) { return std::string(to_string(c.run.format)); }});
    return t;
  }();
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& [name, field] : fields()) {
    if (name == key) {
      return &field;
    }
  }
  return nullptr;
}

} // namespace

void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const Field* f = find_field(dotted_key);
  if (f == nullptr) {
    throw FormatError("config: unknown key '" + dotted_key + "'");
  }
  f->set(cfg, dotted_key, value);
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  // pn_* keys enable phase noise on their own; an explicit flag wins regardless of order.
  std::optional<std::string> pn_flag;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") {
      continue;
    }
    const std::string key = item.fullname();
    const char sep = key == "tx.template" ? ',' : ' ';
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) {
      value += (i ? std::string(1, sep) : std::string()) + item.inputs[i];
    }
    apply_override(cfg, key, value);
    if (key == "tx.phase_noise") {
      pn_flag = value;
    }
  }
  if (pn_flag) {
    apply_override(cfg, "tx.phase_noise", *pn_flag);
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config '" + path.string() + "'");
  }
  try {
    return parse_run_config(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string serialize_run_config(const RunConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& [key, field] : fields()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      os << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
      section = sec;
    }
    std::string value = field.get(cfg);
    if (key == "run.out") {
      value = '"' + value + '"';
    }
    os << key.substr(dot + 1) << " = " << value << '\n';
  }
  return os.str();
}

} // namespace uwbsim
