#include <doctest.h>

#include "oracles.hpp"
#include "uwbsim/commands.hpp"
#include "uwbsim/config.hpp"
#include "uwbsim/errors.hpp"
#include "uwbsim/tx.hpp"
#include "uwbsim/waveform_io.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace uwbsim;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  Scratch() {
    static std::atomic<int> counter{0};
    dir = fs::temp_directory_path() /
          ("uwbsim_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  [[nodiscard]] std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      cells.push_back(cell);
    }
    rows.push_back(cells);
  }
  return rows;
}

std::string read_file(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST_CASE("help and usage errors") {
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"--format", "xml", "link", "--distances", "1", "--rates", "5e8"}).code == 2);
  CHECK(run_cli({"--set", "tx.nope=1", "link", "--distances", "1", "--rates", "5e8"}).code == 2);
  CHECK(run_cli({"--set", "tx.carrier_hz", "link", "--distances", "1", "--rates", "5e8"}).code == 2);
}

TEST_CASE("txgen writes the modulated waveform") {
  Scratch s;
  const auto file = s.path("a.uwbw");
  const auto r = run_cli({"--out", file, "txgen"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("mean_power_dbm") != std::string::npos);
  CHECK(r.err.find("duration_s") != std::string::npos);
  const auto w = read_uwbw_file(file);
  CHECK(w.size() == static_cast<std::size_t>(std::ceil(1000 / 500e6 * 20e9)));
  CHECK(w.sample_rate() == 20e9);
  const auto ref = modulate(prbs_bits(1000, 1), TxConfig{});
  bool same = true;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    same = same && w[i] == static_cast<double>(static_cast<float>(ref[i]));
  }
  CHECK(same);

  // Re-reading and re-writing is the identity on the stored samples.
  const auto copy = s.path("b.uwbw");
  write_uwbw_file(copy, w);
  CHECK(read_file(copy) == read_file(file));

  CHECK(run_cli({"--out", file, "txgen", "--bits", "0"}).code == 2);
  CHECK(run_cli({"txgen"}).code == 2);
  CHECK(run_cli({"--out", s.path("missing/dir/x.uwbw"), "txgen"}).code == 3);
  CHECK(run_cli({"--out", file, "--set", "tx.carrier_hz=9e9", "txgen"}).code == 2);
}

TEST_CASE("psd, file errors") {
  Scratch s;
  const auto file = s.path("a.uwbw");
  REQUIRE(run_cli({"--out", file, "txgen", "--bits", "2000"}).code == 0);
  const auto r = run_cli({"psd", file, "--segment", "4000"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  CHECK(rows.front() == std::vector<std::string>{"freq_hz", "dbm_per_mhz"});
  CHECK(rows.size() == 1 + 4000 / 2 + 1);

  const auto j = run_cli({"--format", "json", "psd", file, "--segment", "4000"});
  REQUIRE(j.code == 0);
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["freqs_hz"].size() == 2001);
  CHECK(parsed["rbw_hz"].get<double>() == doctest::Approx(5e6));

  CHECK(run_cli({"psd", s.path("nope.uwbw")}).code == 3);
  std::ofstream(s.path("bad.uwbw"), std::ios::binary) << "UWBX....";
  const auto bad = run_cli({"psd", s.path("bad.uwbw")});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("magic") != std::string::npos);
  CHECK(run_cli({"psd", file, "--segment", "4", "--window", "hann"}).code == 2);
  CHECK(run_cli({"psd", file, "--window", "kaiser"}).code == 2);

  const auto out_file = s.path("psd.csv");
  CHECK(run_cli({"--out", out_file, "psd", file, "--segment", "4000"}).code == 0);
  CHECK(read_file(out_file) == r.out);
}

TEST_CASE("mask exit codes follow the verdict") {
  Scratch s;
  const auto file = s.path("a.uwbw");
  REQUIRE(run_cli({"--out", file, "txgen", "--bits", "20000"}).code == 0);
  const auto j = run_cli({"--format", "json", "mask", file, "--eirp-offset-db", "0"});
  const double margin = nlohmann::json::parse(j.out)["worst_margin_db"].get<double>();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", margin);
  const auto ok = run_cli({"mask", file, "--eirp-offset-db", buf});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("pass,", 0) == 0);
  std::snprintf(buf, sizeof buf, "%.12g", margin + 3.0);
  CHECK(run_cli({"mask", file, "--eirp-offset-db", buf}).code == 1);
}

TEST_CASE("tones: unscrambled fails, scrambled passes") {
  Scratch s;
  const auto plain = s.path("plain.uwbw");
  const auto scr = s.path("scr.uwbw");
  REQUIRE(run_cli({"--out", plain, "--set", "tx.scramble=false", "txgen", "--bits", "20000"}).code == 0);
  REQUIRE(run_cli({"--out", scr, "txgen", "--bits", "20000"}).code == 0);
  const auto a = run_cli({"tones", plain});
  const auto b = run_cli({"tones", scr});
  CHECK(a.code == 1);
  CHECK(b.code == 0);
  const auto rows = csv_rows(b.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][0] == "4000000000");
  CHECK(rows[2][0] == "4500000000");
  CHECK(rows[3][0] == "5000000000");
  const auto j = nlohmann::json::parse(run_cli({"--format", "json", "tones", plain}).out);
  CHECK_FALSE(j["pass"].get<bool>());
}

TEST_CASE("link rows") {
  const auto r = run_cli({"link", "--distances", "1.0,1.5", "--rates", "500e6,375e6"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 5);
  const auto& head = rows[0];
  auto col = [&](const std::string& name) {
    const auto it = std::find(head.begin(), head.end(), name);
    REQUIRE(it != head.end());
    return static_cast<std::size_t>(it - head.begin());
  };
  const auto& r1 = rows[1];  // (1.0 m, 500 Mb/s)
  CHECK(std::stod(r1[col("fspl_db")]) == doctest::Approx(45.70).epsilon(2e-4));
  CHECK(std::stod(r1[col("p_rx_dbm")]) == doctest::Approx(-55.00).epsilon(2e-4));
  CHECK(std::stod(r1[col("noise_floor_dbm")]) == doctest::Approx(-83.77).epsilon(2e-4));
  CHECK(std::stod(r1[col("ebn0_db")]) == doctest::Approx(30.81).epsilon(3e-4));
  CHECK(std::stod(r1[col("normalized_pj_per_bit_per_m")]) == doctest::Approx(26.4));
  const auto& r4 = rows[4];  // (1.5 m, 375 Mb/s)
  CHECK(std::abs(std::stod(r4[col("ebn0_db")]) - 28.54) < 0.01);

  CHECK(run_cli({"link", "--rates", "5e8"}).code == 2);
  CHECK(run_cli({"link", "--distances", "1"}).code == 2);
  CHECK(run_cli({"link", "--distances", "--rates", "5e8"}).code == 2);
  CHECK(run_cli({"--format", "table", "link", "--distances", "1", "--rates", "5e8"}).code == 0);
  const auto j = nlohmann::json::parse(run_cli({"--format", "json", "link", "--distances", "1", "--rates", "8e8"}).out);
  CHECK(j[0]["energy_pj_per_bit"].get<double>() == doctest::Approx(16.5));
}

TEST_CASE("ber sweeps") {
  SUBCASE("calibrated Eb/N0 sweep tracks the closed form") {
    const auto r = run_cli({"ber", "--ebn0", "8,10,12", "--bits", "200000"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"distance_m", "rate_bps", "detector", "n_bits", "n_errors", "ber",
                                              "ci95", "ebn0_db"});
    const double q[] = {oracle::kQ_8dB, oracle::kQ_10dB, oracle::kQ_12dB};
    double prev = 1.0;
    for (int i = 0; i < 3; ++i) {
      const double ber = std::stod(rows[static_cast<std::size_t>(i) + 1][5]);
      CHECK(ber <= prev);
      prev = ber;
      CHECK(std::abs(ber - q[i]) <= oracle::binomial_3sigma(q[i], 2e5));
    }
  }
  SUBCASE("distance sweep at the nominal parameters has no errors") {
    const auto r = run_cli({"ber", "--distances", "0.5,1.0,1.5", "--bits", "100000"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].size() == 7);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i][4] == "0");
    }
  }
  SUBCASE("same seed, same bytes") {
    const auto a = run_cli({"--seed", "5", "ber", "--ebn0", "7", "--bits", "20000"});
    const auto b = run_cli({"--seed", "5", "ber", "--ebn0", "7", "--bits", "20000"});
    const auto c = run_cli({"--seed", "6", "ber", "--ebn0", "7", "--bits", "20000"});
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
  }
  SUBCASE("argument errors") {
    CHECK(run_cli({"ber", "--ebn0", "8", "--bits", "999"}).code == 2);
    CHECK(run_cli({"ber", "--bits", "1000"}).code == 2);
    CHECK(run_cli({"ber", "--ebn0", "8", "--distances", "1", "--bits", "1000"}).code == 2);
  }
}

TEST_CASE("template-opt") {
  const auto two = run_cli({"template-opt", "--taps", "2", "--max-bw-hz", "5e9"});
  CHECK(two.code == 0);
  CHECK(two.out.find("\"15,15\"") != std::string::npos);
  CHECK(run_cli({"template-opt", "--taps", "8", "--max-bw-hz", "1e6"}).code == 1);
  const auto j = nlohmann::json::parse(run_cli({"--format", "json", "template-opt", "--taps", "4"}).out);
  CHECK(j["feasible"].get<bool>());
  CHECK(j["taps"].size() == 4);
}

TEST_CASE("config file: round trip and precedence") {
  RunConfig cfg;
  cfg.tx.carrier_hz = 4.7e9;
  cfg.tx.pulse_template = PulseTemplate({1, 5, 9, 15, 11, 6, 2}, false);
  cfg.tx.phase_noise = PhaseNoiseSpec{};
  cfg.tx.phase_noise->corner_hz = 7.5e6;
  cfg.channel.distance_m = 0.1 + 0.2;  // not exactly representable
  cfg.channel.calibrated_ebn0_db = 9.5;
  cfg.rx.detector = Detector::energy;
  cfg.rx.threshold_policy = ThresholdPolicy::trained_preamble;
  cfg.run.out = "some dir/out file.csv";
  cfg.run.format = OutputFormat::json;
  cfg.run.master_seed = 18446744073709551615ull;

  const std::string once = serialize_run_config(cfg);
  std::istringstream in(once);
  const RunConfig back = parse_run_config(in);
  CHECK(serialize_run_config(back) == once);
  CHECK(back.channel.distance_m == cfg.channel.distance_m);
  CHECK(back.tx.pulse_template == cfg.tx.pulse_template);
  CHECK(back.tx.phase_noise->corner_hz == 7.5e6);
  CHECK(back.run.out == cfg.run.out);
  CHECK(back.run.master_seed == cfg.run.master_seed);

  const std::string defaults = serialize_run_config(RunConfig{});
  std::istringstream din(defaults);
  CHECK(serialize_run_config(parse_run_config(din)) == defaults);

  std::istringstream unknown("[tx]\nwobble = 3\n");
  CHECK_THROWS_AS(parse_run_config(unknown), FormatError);
  std::istringstream badnum("[channel]\ndistance_m = far\n");
  try {
    (void)parse_run_config(badnum);
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("distance_m") != std::string::npos);
  }

  // flag > --set > file > default
  Scratch s;
  const auto path = s.path("run.ini");
  std::ofstream(path) << "[run]\nmaster_seed = 3\nn_bits = 1500\n[channel]\ndistance_m = 2.0\n";
  RunConfig loaded = load_run_config(path);
  CHECK(loaded.run.master_seed == 3);
  CHECK(loaded.channel.distance_m == 2.0);
  CHECK(loaded.tx.carrier_hz == TxConfig{}.carrier_hz);
  const auto via_file = run_cli({"--config", path, "link", "--distances", "1", "--rates", "5e8"});
  CHECK(via_file.code == 0);
  const auto a = run_cli({"--config", path, "ber", "--ebn0", "6"});
  const auto b = run_cli({"--config", path, "--seed", "3", "ber", "--ebn0", "6", "--bits", "1500"});
  const auto c = run_cli({"--config", path, "--set", "run.master_seed=4", "ber", "--ebn0", "6"});
  const auto d = run_cli({"--config", path, "--set", "run.master_seed=4", "--seed", "3", "ber", "--ebn0", "6"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(a.out == d.out);
  CHECK(run_cli({"--config", s.path("none.ini"), "link", "--distances", "1", "--rates", "5e8"}).code == 3);
}

TEST_CASE("executable passes exit codes through") {
  const std::string exe = UWBSIM_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("link --distances 1 --rates 5e8") == 0);
  CHECK(status("template-opt --taps 8 --max-bw-hz 1e6") == 1);
  CHECK(status("link --rates 5e8") == 2);
  CHECK(status("psd /nonexistent.uwbw") == 3);
}
