#include "uwbsim/commands.hpp"

#include "uwbsim/compliance.hpp"
#include "uwbsim/errors.hpp"
#include "uwbsim/report.hpp"
#include "uwbsim/spectrum.hpp"
#include "uwbsim/template_opt.hpp"
#include "uwbsim/units.hpp"
#include "uwbsim/waveform_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace uwbsim::cli {
namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::vector<std::string> sets;
};

struct SpectrumOptions {
  std::optional<std::size_t> segment;
  double overlap = 0.5;
  std::string window = "hann";
};

// Resolves file > --set > dedicated flags, in that order of application.
RunConfig resolve_config(const GlobalOptions& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_run_config(g.config_path);
  for (const auto& kv : g.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("--set expects KEY=VALUE, got '" + kv + "'");
    }
    apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) {
    cfg.run.master_seed = *g.seed;
  }
  if (g.format) {
    cfg.run.format = parse_output_format(*g.format);
  }
  if (g.out) {
    cfg.run.out = *g.out;
  }
  return cfg;
}

// Report sink: the --out file when given, else the caller's stream.
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::trunc);
      if (!*file_) {
        throw IoError("cannot open '" + path + "' for writing");
      }
      stream_ = file_.get();
    }
  }
  std::ostream& os() { return *stream_; }
  void finish(const std::string& path) {
    stream_->flush();
    if (file_ && !*file_) {
      throw IoError("write failed for '" + path + "'");
    }
  }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

PsdEstimate estimate(const Waveform& wave, const SpectrumOptions& s) {
  // Default: 1 MHz resolution, shrunk to the record if it is shorter.
  const auto one_mhz = static_cast<std::size_t>(std::llround(wave.sample_rate() / kMaskRbwHz));
  const std::size_t seg = s.segment.value_or(std::min(one_mhz, wave.size()));
  return psd_welch(wave, seg, s.overlap, parse_window(s.window));
}

void add_spectrum_flags(CLI::App* app, SpectrumOptions& s) {
  app->add_option("--segment", s.segment, "Welch segment length in samples (default: 1 MHz RBW)");
  app->add_option("--overlap", s.overlap, "Welch overlap fraction in [0,1)");
  app->add_option("--window", s.window, "hann|rect");
}

int cmd_txgen(const RunConfig& cfg, std::ostream& err) {
  if (cfg.run.out.empty()) {
    throw ParameterError("txgen: an output path is required (--out or run.out)");
  }
  if (cfg.run.n_bits == 0) {
    throw ParameterError("txgen: n_bits must be >= 1");
  }
  const auto bits = prbs_bits(cfg.run.n_bits, cfg.run.master_seed);
  const auto wave = modulate(bits, cfg.tx);
  write_uwbw_file(cfg.run.out, wave);
  err << "wrote " << cfg.run.out << ": n_samples=" << wave.size() << " duration_s=" << wave.duration()
      << " mean_power_dbm=" << watts_to_dbm(mean_power(wave)) << '\n';
  return kSuccess;
}

int cmd_psd(const RunConfig& cfg, const std::string& input, const SpectrumOptions& s, std::ostream& out) {
  const auto psd = estimate(read_uwbw_file(input), s);
  Sink sink(cfg.run.out, out);
  if (cfg.run.format == OutputFormat::json) {
    sink.os() << to_json(psd).dump() << '\n';
  } else {
    write_psd_csv(sink.os(), psd);
  }
  sink.finish(cfg.run.out);
  return kSuccess;
}

int cmd_mask(const RunConfig& cfg, const std::string& input, const SpectrumOptions& s, double eirp_offset_db,
             std::ostream& out) {
  const auto psd = estimate(read_uwbw_file(input), s).shifted(eirp_offset_db);
  const auto report = check_mask(psd, fcc_indoor_mask());
  Sink sink(cfg.run.out, out);
  if (cfg.run.format == OutputFormat::json) {
    sink.os() << to_json(report).dump(2) << '\n';
  } else {
    write_mask_csv(sink.os(), report);
  }
  sink.finish(cfg.run.out);
  return report.pass ? kSuccess : kCheckFailed;
}

struct ToneOptions {
  std::optional<double> prr;
  std::size_t harmonics = 3;
  std::optional<double> center;
  bool no_center = false;
  std::size_t window_bins = kDefaultContinuumWindow;
  double max_excess_db = 3.0;
};

int cmd_tones(const RunConfig& cfg, const std::string& input, const SpectrumOptions& s, const ToneOptions& t,
              std::ostream& out) {
  const auto psd = estimate(read_uwbw_file(input), s);
  const std::optional<double> centre =
      t.no_center ? std::nullopt : std::optional<double>(t.center.value_or(cfg.tx.carrier_hz));
  const auto report = detect_tones(psd, t.prr.value_or(cfg.tx.data_rate_bps), t.harmonics, t.window_bins, centre);
  Sink sink(cfg.run.out, out);
  if (cfg.run.format == OutputFormat::json) {
    auto j = to_json(report);
    j["max_allowed_excess_db"] = t.max_excess_db;
    j["pass"] = report.max_excess_db() <= t.max_excess_db;
    sink.os() << j.dump(2) << '\n';
  } else {
    write_tones_csv(sink.os(), report);
  }
  sink.finish(cfg.run.out);
  return report.max_excess_db() <= t.max_excess_db ? kSuccess : kCheckFailed;
}

struct LinkOptions {
  std::vector<double> distances;
  std::vector<double> rates;
  double tx_power_mw = 13.2;
  double required_ebn0_db = kDefaultRequiredEbn0Db;
};

int cmd_link(const RunConfig& cfg, const LinkOptions& l, std::ostream& out) {
  if (l.distances.empty() || l.rates.empty()) {
    throw ParameterError("link: --distances and --rates must both be non-empty");
  }
  std::vector<LinkRow> rows;
  for (double d : l.distances) {
    for (double r : l.rates) {
      ChannelConfig ch = cfg.channel;
      ch.distance_m = d;
      rows.push_back({link_budget(ch, cfg.tx.p_out_dbm, r, l.required_ebn0_db), efficiency_metrics(l.tx_power_mw, r, d)});
    }
  }
  Sink sink(cfg.run.out, out);
  if (cfg.run.format == OutputFormat::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
      arr.push_back(to_json(row));
    }
    sink.os() << arr.dump(2) << '\n';
  } else if (cfg.run.format == OutputFormat::table) {
    write_link_table(sink.os(), rows);
  } else {
    write_link_csv(sink.os(), rows);
  }
  sink.finish(cfg.run.out);
  return kSuccess;
}

struct BerOptions {
  std::vector<double> distances;
  std::vector<double> ebn0;
};

int cmd_ber(const RunConfig& cfg, const BerOptions& b, std::ostream& out) {
  if (b.distances.empty() == b.ebn0.empty()) {
    throw ParameterError("ber: give exactly one of --distances or --ebn0");
  }
  if (cfg.run.n_bits < 1000) {
    throw ParameterError("ber: n_bits must be >= 1000");
  }
  cfg.validate();
  std::vector<BerRow> rows;
  const bool by_distance = !b.distances.empty();
  const auto& points = by_distance ? b.distances : b.ebn0;
  for (double p : points) {
    ChannelConfig ch = cfg.channel;
    std::optional<double> ebn0;
    if (by_distance) {
      ch.distance_m = p;
      ch.calibrated_ebn0_db.reset();
    } else {
      ch.calibrated_ebn0_db = p;
      ebn0 = p;
    }
    const auto result = monte_carlo_ber(cfg.tx, ch, cfg.rx, cfg.run.n_bits, cfg.run.master_seed);
    rows.push_back({ch.distance_m, cfg.tx.data_rate_bps, cfg.rx.detector, result, ebn0});
  }
  Sink sink(cfg.run.out, out);
  if (cfg.run.format == OutputFormat::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
      arr.push_back(to_json(row));
    }
    sink.os() << arr.dump(2) << '\n';
  } else {
    write_ber_csv(sink.os(), rows);
  }
  sink.finish(cfg.run.out);
  return kSuccess;
}

struct TemplateOptions {
  std::size_t taps = 8;
  double max_bw_hz = 1.2e9;
  bool asymmetric = false;
};

int cmd_template_opt(const RunConfig& cfg, const TemplateOptions& t, std::ostream& out) {
  const auto res = optimize_template(t.taps, t.max_bw_hz, !t.asymmetric, cfg.tx.pulse_width_s, cfg.tx.carrier_hz);
  nlohmann::json j = {{"feasible", res.best.has_value()},
                      {"n_taps", t.taps},
                      {"symmetric", !t.asymmetric},
                      {"max_mainlobe_bw_hz", t.max_bw_hz},
                      {"exhaustive", res.exhaustive},
                      {"evaluated", res.evaluated}};
  if (res.best) {
    j["taps"] = std::vector<int>(res.best->taps().begin(), res.best->taps().end());
    j["mainlobe_bw_10db_hz"] = res.metrics->mainlobe_bw_10db_hz;
    j["peak_sidelobe_dbc"] = res.metrics->peak_sidelobe_dbc;
  }
  Sink sink(cfg.run.out, out);
  if (cfg.run.format == OutputFormat::json) {
    sink.os() << j.dump(2) << '\n';
  } else {
    sink.os() << "feasible,taps,mainlobe_bw_10db_hz,peak_sidelobe_dbc,evaluated\n";
    if (res.best) {
      sink.os() << "true,\"" << res.best->to_string() << "\"," << res.metrics->mainlobe_bw_10db_hz << ','
                << res.metrics->peak_sidelobe_dbc << ',' << res.evaluated << '\n';
    } else {
      sink.os() << "false,,,," << res.evaluated << '\n';
    }
  }
  sink.finish(cfg.run.out);
  return res.best ? kSuccess : kCheckFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"IR-UWB link simulator: transmitter, channel, receiver and spectral checks", "uwbsim"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "INI config file with [tx] [channel] [rx] [run] sections");
  app.add_option("--seed", g.seed, "Master seed (run.master_seed)");
  app.add_option("--format", g.format, "csv|json|table");
  app.add_option("--out", g.out, "Output path (run.out)");
  app.add_option("--set", g.sets, "Override a config key, e.g. --set tx.carrier_hz=5e9")
      ->allow_extra_args(false);

  std::optional<std::size_t> n_bits;
  auto* txgen = app.add_subcommand("txgen", "Modulate PRBS bits and write a UWBW v1 waveform");
  txgen->add_option("--bits", n_bits, "Number of bits (run.n_bits)");

  std::string input;
  SpectrumOptions spec_opts;
  auto* psd = app.add_subcommand("psd", "Welch PSD of a waveform file (dBm/MHz)");
  psd->add_option("input", input, "UWBW waveform")->required();
  add_spectrum_flags(psd, spec_opts);

  double eirp_offset_db = 0.0;
  auto* mask = app.add_subcommand("mask", "FCC indoor UWB mask check (exit 1 on violation)");
  mask->add_option("input", input, "UWBW waveform")->required();
  mask->add_option("--eirp-offset-db", eirp_offset_db, "Added to the PSD before comparison (antenna gain)");
  add_spectrum_flags(mask, spec_opts);

  ToneOptions tone_opts;
  auto* tones = app.add_subcommand("tones", "Discrete-line detection at PRR harmonics (exit 1 above limit)");
  tones->add_option("input", input, "UWBW waveform")->required();
  tones->add_option("--prr", tone_opts.prr, "Pulse repetition rate in Hz (default tx.data_rate_bps)");
  tones->add_option("--harmonics", tone_opts.harmonics, "Harmonics to probe");
  tones->add_option("--center-hz", tone_opts.center, "Probe harmonics nearest this frequency (default carrier)");
  tones->add_flag("--first-harmonics", tone_opts.no_center, "Probe k = 1..n instead of around the carrier");
  tones->add_option("--window-bins", tone_opts.window_bins, "Continuum median window");
  tones->add_option("--max-excess-db", tone_opts.max_excess_db, "Pass threshold");
  add_spectrum_flags(tones, spec_opts);

  LinkOptions link_opts;
  auto* link = app.add_subcommand("link", "Link budget and efficiency per (distance, rate)");
  link->add_option("--distances", link_opts.distances, "Distances in m")->delimiter(',');
  link->add_option("--rates", link_opts.rates, "Data rates in b/s")->delimiter(',');
  link->add_option("--tx-power-mw", link_opts.tx_power_mw, "Transmitter DC power for efficiency metrics");
  link->add_option("--required-ebn0-db", link_opts.required_ebn0_db, "Eb/N0 used for the margin column");

  BerOptions ber_opts;
  auto* ber = app.add_subcommand("ber", "Monte Carlo BER sweep over distance or calibrated Eb/N0");
  ber->add_option("--distances", ber_opts.distances, "Distances in m")->delimiter(',');
  ber->add_option("--ebn0", ber_opts.ebn0, "Calibrated-AWGN Eb/N0 points in dB")->delimiter(',');
  ber->add_option("--bits", n_bits, "Bits per point (run.n_bits)");

  TemplateOptions tmpl_opts;
  auto* topt = app.add_subcommand("template-opt", "Search 4-bit templates for minimum peak sidelobe");
  topt->add_option("--taps", tmpl_opts.taps, "Tap count");
  topt->add_option("--max-bw-hz", tmpl_opts.max_bw_hz, "Upper bound on the -10 dB main-lobe width");
  topt->add_flag("--asymmetric", tmpl_opts.asymmetric, "Search asymmetric templates");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    RunConfig cfg = resolve_config(g);
    if (n_bits) {
      cfg.run.n_bits = *n_bits;
    }
    if (*txgen) {
      return cmd_txgen(cfg, err);
    }
    if (*psd) {
      return cmd_psd(cfg, input, spec_opts, out);
    }
    if (*mask) {
      return cmd_mask(cfg, input, spec_opts, eirp_offset_db, out);
    }
    if (*tones) {
      return cmd_tones(cfg, input, spec_opts, tone_opts, out);
    }
    if (*link) {
      return cmd_link(cfg, link_opts, out);
    }
    if (*ber) {
      return cmd_ber(cfg, ber_opts, out);
    }
    if (*topt) {
      return cmd_template_opt(cfg, tmpl_opts, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

} // namespace uwbsim::cli
