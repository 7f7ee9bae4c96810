// End-to-end checks of the command-line tool: exit codes, report values, and
// byte-level determinism against the golden reports.  Each test shells out to
// the built binary, so these only run where a POSIX shell is available.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "omc/report.hpp"

using doctest::Approx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = OMC_CLI_PATH;
const std::string kGolden = OMC_GOLDEN_DIR;
const std::string kConfigs = OMC_CONFIG_DIR;

int run_cli(const std::string& args, const std::string& stderr_to = "/dev/null") {
  const std::string cmd = kCli + " " + args + " > /dev/null 2> " + stderr_to;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

// corpus directory, populated once per test-process
const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "omc_cli_corpus";
    fs::remove_all(d);
    fs::create_directories(d);
    REQUIRE(run_cli("synth --kind fano --out " + (d / "fano.csv").string()) == 0);
    REQUIRE(run_cli("synth --kind psd --out " + (d / "psd.csv").string()) == 0);
    REQUIRE(run_cli("synth --kind psd --gamma-hz 4756.5 --out " +
                    (d / "psd_warm.csv").string()) == 0);
    REQUIRE(run_cli("synth --kind backaction --out " +
                    (d / "backaction.csv").string()) == 0);
    REQUIRE(run_cli("synth --kind echo --out " + (d / "echo.csv").string()) == 0);
    REQUIRE(run_cli("synth --kind rabi --out " + (d / "rabi.csv").string()) == 0);
    return d;
  }();
  return dir;
}

std::string corpus(const char* name) { return (workdir() / name).string(); }

json report_for(const std::string& args, const char* out_name) {
  const std::string out = (workdir() / out_name).string();
  REQUIRE(run_cli(args + " --out " + out) == 0);
  return json::parse(omc::read_file(out));
}

void check_against_golden(const std::string& args, const char* golden_name) {
  const std::string out = (workdir() / golden_name).string();
  REQUIRE(run_cli(args + " --out " + out) == 0);
  const std::string got = omc::read_file(out);
  const std::string want = omc::read_file(kGolden + "/" + golden_name);
  CHECK_MESSAGE(got == want, "report differs from golden ", golden_name);
}

double value_of(const json& report, const char* key) {
  return report.at("quantities").at(key).at("value").get<double>();
}

}  // namespace

TEST_CASE("synth corpus is deterministic") {
  const fs::path redo = fs::temp_directory_path() / "omc_cli_corpus_redo";
  fs::remove_all(redo);
  fs::create_directories(redo);
  REQUIRE(run_cli("synth --kind fano --out " + (redo / "fano.csv").string()) == 0);
  REQUIRE(run_cli("synth --kind backaction --out " +
                  (redo / "backaction.csv").string()) == 0);
  CHECK(omc::read_file(corpus("fano.csv")) ==
        omc::read_file((redo / "fano.csv").string()));
  CHECK(omc::read_file(corpus("backaction.csv")) ==
        omc::read_file((redo / "backaction.csv").string()));
  fs::remove_all(redo);
}

TEST_CASE("fit-optical recovers the scan parameters and matches its golden") {
  const json r = report_for("fit-optical " + corpus("fano.csv") + " --dip-contrast",
                            "fit_optical_report.json");
  CHECK(value_of(r, "lambda_o_nm") == Approx(1576.87).epsilon(1e-9));
  CHECK(value_of(r, "kappa_hz") == Approx(5.03e9).epsilon(1e-9));
  CHECK(value_of(r, "fano_q") == Approx(0.3).epsilon(1e-9));
  CHECK(value_of(r, "q_o") == Approx(37796.956).epsilon(1e-6));
  CHECK(r.at("quantities").contains("kappa_e_hz"));
  CHECK(r.at("inputs").contains("fano.csv"));
  CHECK(r.at("version") == "0.1.0");

  check_against_golden("fit-optical " + corpus("fano.csv") + " --dip-contrast",
                       "fit_optical.json");
}

TEST_CASE("fit-mechanical recovers the linewidth chain") {
  const json r = report_for("fit-mechanical " + corpus("psd.csv"), "fit_mech_report.json");
  CHECK(value_of(r, "f_m_hz") == Approx(6.23e9).epsilon(1e-10));
  CHECK(value_of(r, "gamma_m_hz") == Approx(3280.0).epsilon(1e-10));
  CHECK(value_of(r, "q_m") == Approx(1.8993902439e6).epsilon(1e-8));
  CHECK(value_of(r, "qf_product_hz") == Approx(1.18332012195e16).epsilon(1e-8));

  check_against_golden("fit-mechanical " + corpus("psd.csv"), "fit_mechanical.json");

  SUBCASE("warmer-device linewidth") {
    const json w =
        report_for("fit-mechanical " + corpus("psd_warm.csv"), "fit_warm_report.json");
    CHECK(value_of(w, "q_m") == Approx(1.31e6).epsilon(1e-3));
    check_against_golden("fit-mechanical " + corpus("psd_warm.csv"),
                         "fit_mechanical_warm.json");
  }
}

TEST_CASE("backaction recovers the pump-side physics") {
  const std::string args = "backaction " + corpus("backaction.csv") + " --config " +
                           kConfigs + "/device_a.json --nc 41000";
  const json r = report_for(args, "backaction_report.json");
  CHECK(value_of(r, "g0_hz") == Approx(216e3).epsilon(1e-9));
  CHECK(value_of(r, "g0_red_hz") == Approx(216e3).epsilon(1e-9));
  CHECK(value_of(r, "g0_blue_hz") == Approx(216e3).epsilon(1e-9));
  CHECK(value_of(r, "gamma_i_hz") == Approx(28e3).epsilon(1e-9));
  CHECK(value_of(r, "cooperativity") == Approx(54.328).epsilon(1e-4));
  // opposite pump sides tilt the linewidth in opposite directions
  CHECK(value_of(r, "slope_red_hz_per_photon") > 0.0);
  CHECK(value_of(r, "slope_blue_hz_per_photon") < 0.0);
  CHECK(value_of(r, "slope_red_hz_per_photon") ==
        Approx(-value_of(r, "slope_blue_hz_per_photon")).epsilon(1e-10));

  check_against_golden(args, "backaction.json");
}

TEST_CASE("spin fits recover coherence and contrast") {
  const json echo = report_for("spin " + corpus("echo.csv") + " --kind echo",
                               "spin_echo_report.json");
  CHECK(value_of(echo, "t2_s") == Approx(227e-6).epsilon(1e-9));
  CHECK(value_of(echo, "stretch_n") == Approx(1.44).epsilon(1e-9));
  check_against_golden("spin " + corpus("echo.csv") + " --kind echo", "spin_echo.json");

  const json rabi = report_for("spin " + corpus("rabi.csv") + " --kind rabi",
                               "spin_rabi_report.json");
  CHECK(value_of(rabi, "contrast") == Approx(0.312).epsilon(1e-9));
  CHECK(value_of(rabi, "rabi_hz") == Approx(5e6).epsilon(1e-9));
  check_against_golden("spin " + corpus("rabi.csv") + " --kind rabi", "spin_rabi.json");
}

TEST_CASE("metrics reports the derived figures of merit") {
  const std::string args_a = "metrics --config " + kConfigs + "/device_a.json";
  const json a = report_for(args_a, "metrics_a_report.json");
  CHECK(value_of(a, "sideband_resolution") == Approx(4.9543).epsilon(1e-4));
  CHECK(value_of(a, "q_o") == Approx(3.78e4).epsilon(5e-3));
  CHECK(value_of(a, "q_m") == Approx(1.90e6).epsilon(1e-2));
  CHECK(value_of(a, "qf_product_hz") == Approx(1.18e16).epsilon(1e-2));
  CHECK(value_of(a, "nc") == Approx(41000).epsilon(1e-3));
  CHECK(value_of(a, "x_zpf_m") == Approx(1.44e-15).epsilon(1e-2));
  check_against_golden(args_a, "metrics_device_a.json");

  const std::string args_e = "metrics --config " + kConfigs + "/device_e.json";
  const json e = report_for(args_e, "metrics_e_report.json");
  CHECK(value_of(e, "q_m") == Approx(1.6306e6).epsilon(1e-3));
  CHECK_FALSE(e.at("quantities").contains("nc"));  // no pump section
  check_against_golden(args_e, "metrics_device_e.json");
}

TEST_CASE("reports are byte-identical across repeat runs") {
  const std::string args = "fit-mechanical " + corpus("psd.csv");
  const std::string out1 = (workdir() / "repeat1.json").string();
  const std::string out2 = (workdir() / "repeat2.json").string();
  REQUIRE(run_cli(args + " --out " + out1) == 0);
  REQUIRE(run_cli(args + " --out " + out2) == 0);
  CHECK(omc::read_file(out1) == omc::read_file(out2));
}

TEST_CASE("input digests follow the file bytes") {
  const json r1 = report_for("fit-mechanical " + corpus("psd.csv"), "digest1.json");

  // same bytes under another name elsewhere: same digest, keyed by basename
  const fs::path dir2 = workdir() / "copy";
  fs::create_directories(dir2);
  fs::copy_file(corpus("psd.csv"), dir2 / "psd.csv",
                fs::copy_options::overwrite_existing);
  const json r2 =
      report_for("fit-mechanical " + (dir2 / "psd.csv").string(), "digest2.json");
  CHECK(r1.at("inputs").at("psd.csv") == r2.at("inputs").at("psd.csv"));

  // one changed byte: different digest
  std::string bytes = omc::read_file(corpus("psd.csv"));
  bytes[bytes.size() - 2] = bytes[bytes.size() - 2] == '1' ? '2' : '1';
  omc::write_file((dir2 / "psd.csv").string(), bytes);
  const json r3 =
      report_for("fit-mechanical " + (dir2 / "psd.csv").string(), "digest3.json");
  CHECK(r1.at("inputs").at("psd.csv") != r3.at("inputs").at("psd.csv"));
}

TEST_CASE("validation failures exit with code 2") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("no-such-command") == 2);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("fit-optical --help") == 0);

  SUBCASE("schema mismatch") {
    CHECK(run_cli("fit-optical " + corpus("psd.csv")) == 2);
  }
  SUBCASE("header typo") {
    const std::string bad = (workdir() / "typo.csv").string();
    std::string content = "frequensy_hz,psd\n";
    for (int i = 1; i <= 9; ++i) content += std::to_string(i) + ",1\n";
    omc::write_file(bad, content);
    const std::string err = (workdir() / "typo.err").string();
    CHECK(run_cli("fit-mechanical " + bad, err) == 2);
    CHECK(omc::read_file(err).find("frequensy_hz") != std::string::npos);
  }
  SUBCASE("empty file") {
    const std::string empty = (workdir() / "empty.csv").string();
    omc::write_file(empty, "");
    CHECK(run_cli("fit-optical " + empty) == 2);
  }
  SUBCASE("unknown spin kind") {
    CHECK(run_cli("spin " + corpus("echo.csv") + " --kind bogus") == 2);
  }
  SUBCASE("config missing a required section") {
    const std::string cfg = (workdir() / "no_device.json").string();
    omc::write_file(cfg, "{}\n");
    const std::string err = (workdir() / "no_device.err").string();
    CHECK(run_cli("metrics --config " + cfg, err) == 2);
    CHECK(omc::read_file(err).find("'device' section") != std::string::npos);
  }
  SUBCASE("config with an unknown key") {
    const std::string cfg = (workdir() / "unknown_key.json").string();
    omc::write_file(cfg, R"({"device": {"lamda_o_nm": 1576.87}})");
    const std::string err = (workdir() / "unknown_key.err").string();
    CHECK(run_cli("metrics --config " + cfg, err) == 2);
    CHECK(omc::read_file(err).find("lamda_o_nm") != std::string::npos);
  }
}

TEST_CASE("fit failures exit with code 3") {
  const std::string ramp = (workdir() / "ramp.csv").string();
  std::string content = "wavelength_nm,reflection\n";
  for (int i = 0; i < 40; ++i) {
    content += std::to_string(1570.0 + 0.1 * i) + "," +
               std::to_string(1.0 - 0.002 * i) + "\n";
  }
  omc::write_file(ramp, content);
  const std::string err = (workdir() / "ramp.err").string();
  CHECK(run_cli("fit-optical " + ramp, err) == 3);
  CHECK(omc::read_file(err).find("resonance not captured") != std::string::npos);
}

TEST_CASE("design runs its stages deterministically") {
  const std::string cfg = kConfigs + "/design_desk.json";
  const fs::path art1 = workdir() / "design1";
  const fs::path art2 = workdir() / "design2";
  const std::string out1 = (workdir() / "design1.json").string();
  const std::string out2 = (workdir() / "design2.json").string();

  REQUIRE(run_cli("design --config " + cfg + " --stage both --out-dir " +
                  art1.string() + " --out " + out1) == 0);
  REQUIRE(run_cli("design --config " + cfg + " --stage both --out-dir " +
                  art2.string() + " --out " + out2) == 0);

  // equal seeds, equal bytes, trace and report both
  CHECK(omc::read_file((art1 / "ga_trace.jsonl").string()) ==
        omc::read_file((art2 / "ga_trace.jsonl").string()));
  CHECK(omc::read_file(out1) == omc::read_file(out2));

  const json r = json::parse(omc::read_file(out1));
  const double fitness = r.at("ga").at("fitness").at("value").get<double>();
  const double baseline = r.at("ga").at("baseline_fitness").at("value").get<double>();
  CHECK(fitness > 0.0);
  CHECK(fitness >= baseline);  // the search never loses to the plain linear taper
  CHECK(fs::exists(art1 / "grid_table.csv"));
  CHECK(fs::exists(art1 / "optical_band.csv"));
  CHECK(fs::exists(art1 / "acoustic_band.csv"));
  const std::string band = omc::read_file((art1 / "optical_band.csv").string());
  CHECK(band.rfind("frequency_hz,cos_bloch_phase,transmission\n", 0) == 0);

  SUBCASE("a thread cap does not change the arithmetic") {
    const fs::path art3 = workdir() / "design3";
    const std::string out3 = (workdir() / "design3.json").string();
    const std::string cmd = "OMC_THREADS=1 " + kCli + " design --config " + cfg +
                            " --stage both --out-dir " + art3.string() + " --out " +
                            out3 + " > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) != -1);
    CHECK(omc::read_file((art1 / "ga_trace.jsonl").string()) ==
          omc::read_file((art3 / "ga_trace.jsonl").string()));
  }
}

TEST_CASE("design grid stage matches its golden") {
  const fs::path art = workdir() / "design_grid";
  check_against_golden("design --config " + kConfigs +
                           "/design_desk.json --stage grid --out-dir " + art.string(),
                       "design_grid.json");
}

TEST_CASE("infeasible searches exit with code 4 and keep their evidence") {
  SUBCASE("ga trapped outside the feasible region") {
    const std::string cfg = (workdir() / "infeasible_ga.json").string();
    omc::write_file(cfg, R"({
      "material": {"slab_index": 1.337, "sound_speed": 10660},
      "ga": {"population_size": 8, "generations": 6, "rng_seed": 3},
      "design": {"defect_scale_min": 0.985, "defect_scale_max": 0.995}
    })");
    const fs::path art = workdir() / "infeasible_ga";
    CHECK(run_cli("design --config " + cfg + " --stage ga --out-dir " +
                  art.string()) == 4);
    // the partial trace survives the failure
    CHECK(fs::exists(art / "ga_trace.jsonl"));
    CHECK(omc::read_file((art / "ga_trace.jsonl").string()).find("no defect mode") !=
          std::string::npos);
  }
  SUBCASE("grid with no usable bandgaps") {
    const std::string cfg = (workdir() / "infeasible_grid.json").string();
    omc::write_file(cfg, R"({
      "grid": {"a_min_nm": 650, "a_max_nm": 650, "a_steps": 1,
               "hx_min_nm": 343, "hx_max_nm": 343, "hx_steps": 1,
               "hy_min_nm": 0.001, "hy_max_nm": 0.001, "hy_steps": 1}
    })");
    const std::string err = (workdir() / "infeasible_grid.err").string();
    CHECK(run_cli("design --config " + cfg + " --stage grid --out-dir " +
                      (workdir() / "infeasible_grid_art").string(),
                  err) == 4);
  }
}
