#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "omc/config.hpp"
#include "omc/csv.hpp"
#include "omc/errors.hpp"
#include "omc/report.hpp"

using namespace omc;
using doctest::Approx;
using nlohmann::json;

namespace {

// self-cleaning scratch file
struct TempFile {
  std::filesystem::path path;

  explicit TempFile(const std::string& name, const std::string& content)
      : path(std::filesystem::temp_directory_path() / name) {
    write_file(path.string(), content);
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
  std::string str() const { return path.string(); }
};

std::string rows(const char* header, int n, double x0 = 1.0, double dx = 1.0) {
  std::string out = header;
  out += '\n';
  for (int i = 0; i < n; ++i) {
    out += std::to_string(x0 + i * dx) + "," + std::to_string(0.5 + 0.01 * i) + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("spectrum csv schema detection") {
  TempFile optical("omc_io_optical.csv", rows("wavelength_nm,reflection", 10));
  TempFile psd("omc_io_psd.csv", rows("frequency_hz,psd", 10));
  TempFile trace("omc_io_trace.csv", rows("time_s,signal", 10));

  CHECK(load_spectrum_csv(optical.str()).schema == SpectrumSchema::OpticalScan);
  CHECK(load_spectrum_csv(psd.str()).schema == SpectrumSchema::MechanicalPsd);
  CHECK(load_spectrum_csv(trace.str()).schema == SpectrumSchema::TimeTrace);

  const SpectrumTable t = load_spectrum_csv(optical.str());
  CHECK(t.x.size() == 10);
  CHECK(t.y.size() == 10);
  CHECK(t.sigma.empty());
  CHECK(t.x[0] == Approx(1.0));
  CHECK(t.y[9] == Approx(0.59));
}

TEST_CASE("header matching is case-insensitive and whitespace-tolerant") {
  TempFile f("omc_io_case.csv", rows(" Wavelength_NM , Reflection ", 9));
  CHECK(load_spectrum_csv(f.str()).schema == SpectrumSchema::OpticalScan);

  TempFile crlf("omc_io_crlf.csv",
                "frequency_hz,psd\r\n1,1\r\n2,1\r\n3,1\r\n4,1\r\n5,1\r\n6,1\r\n7,1\r\n8,1\r\n");
  CHECK(load_spectrum_csv(crlf.str()).schema == SpectrumSchema::MechanicalPsd);
}

TEST_CASE("sigma column is parsed when present") {
  std::string content = "time_s,signal,sigma\n";
  for (int i = 1; i <= 8; ++i) {
    content += std::to_string(i) + ",1.0,0.1\n";
  }
  TempFile f("omc_io_sigma.csv", content);
  const SpectrumTable t = load_spectrum_csv(f.str());
  CHECK(t.sigma.size() == 8);
  CHECK(t.sigma[3] == Approx(0.1));
}

TEST_CASE("csv rejections name the offender") {
  SUBCASE("misspelled first column") {
    TempFile f("omc_io_bad1.csv", rows("wavelenght_nm,reflection", 10));
    CHECK_THROWS_WITH_AS(load_spectrum_csv(f.str()),
                         doctest::Contains("'wavelenght_nm'"), ValidationError);
  }
  SUBCASE("misspelled second column") {
    TempFile f("omc_io_bad2.csv", rows("frequency_hz,power", 10));
    CHECK_THROWS_WITH_AS(load_spectrum_csv(f.str()), doctest::Contains("'power'"),
                         ValidationError);
  }
  SUBCASE("empty file") {
    TempFile f("omc_io_empty.csv", "");
    CHECK_THROWS_WITH_AS(load_spectrum_csv(f.str()), doctest::Contains("is empty"),
                         ValidationError);
  }
  SUBCASE("too few rows") {
    TempFile f("omc_io_short.csv", rows("time_s,signal", 7));
    CHECK_THROWS_WITH_AS(load_spectrum_csv(f.str()),
                         doctest::Contains("at least 8 are required"), ValidationError);
  }
  SUBCASE("non-finite value") {
    std::string content = rows("time_s,signal", 8);
    content += "9,nan\n";
    TempFile f("omc_io_nan.csv", content);
    CHECK_THROWS_WITH_AS(load_spectrum_csv(f.str()), doctest::Contains("non-finite"),
                         ValidationError);
  }
  SUBCASE("non-numeric cell with its location") {
    std::string content = "time_s,signal\n1,1\n2,oops\n3,1\n4,1\n5,1\n6,1\n7,1\n8,1\n";
    TempFile f("omc_io_text.csv", content);
    CHECK_THROWS_WITH_AS(load_spectrum_csv(f.str()),
                         doctest::Contains("row 2 column 2"), ValidationError);
  }
  SUBCASE("ragged row with its number") {
    std::string content = "time_s,signal\n1,1\n2,1,9\n3,1\n4,1\n5,1\n6,1\n7,1\n8,1\n";
    TempFile f("omc_io_ragged.csv", content);
    CHECK_THROWS_WITH_AS(load_spectrum_csv(f.str()),
                         doctest::Contains("row 2: expected 2 columns, found 3"),
                         ValidationError);
  }
  SUBCASE("wrong schema for the command") {
    TempFile f("omc_io_wrongschema.csv", rows("frequency_hz,psd", 10));
    CHECK_THROWS_WITH_AS(load_spectrum_csv(f.str(), SpectrumSchema::OpticalScan),
                         doctest::Contains("needs (wavelength_nm,reflection)"),
                         ValidationError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(load_spectrum_csv("/nonexistent/nope.csv"),
                         doctest::Contains("cannot open"), ValidationError);
  }
}

TEST_CASE("blank lines are skipped") {
  std::string content = rows("time_s,signal", 8);
  content.insert(content.find('\n') + 1, "\n");
  content += "\n\n";
  TempFile f("omc_io_blank.csv", content);
  CHECK(load_spectrum_csv(f.str()).x.size() == 8);
}

TEST_CASE("backaction csv") {
  SUBCASE("both sides parse and convert") {
    TempFile f("omc_io_ba.csv",
               "nc,gamma_m_hz,side\n100,28000,red\n200,28500,RED\n100,27500,Blue\n");
    const auto points = load_backaction_csv(f.str());
    REQUIRE(points.size() == 3);
    CHECK(points[0].side == SidebandChoice::Red);
    CHECK(points[1].side == SidebandChoice::Red);
    CHECK(points[2].side == SidebandChoice::Blue);
    CHECK(points[1].gamma_m.hz() == Approx(28500));
    CHECK(points[2].nc == Approx(100));
  }
  SUBCASE("two data rows suffice") {
    TempFile f("omc_io_ba2.csv", "nc,gamma_m_hz,side\n100,28000,red\n200,28500,red\n");
    CHECK(load_backaction_csv(f.str()).size() == 2);
  }
  SUBCASE("one data row does not") {
    TempFile f("omc_io_ba1.csv", "nc,gamma_m_hz,side\n100,28000,red\n");
    CHECK_THROWS_WITH_AS(load_backaction_csv(f.str()),
                         doctest::Contains("at least 2 are required"), ValidationError);
  }
  SUBCASE("header typo names the cell") {
    TempFile f("omc_io_ba3.csv", "nc,gamma_hz,side\n100,28000,red\n200,28500,red\n");
    CHECK_THROWS_WITH_AS(load_backaction_csv(f.str()), doctest::Contains("'gamma_hz'"),
                         ValidationError);
  }
  SUBCASE("unknown side word") {
    TempFile f("omc_io_ba4.csv",
               "nc,gamma_m_hz,side\n100,28000,red\n200,28500,green\n");
    CHECK_THROWS_WITH_AS(load_backaction_csv(f.str()),
                         doctest::Contains("side must be red or blue"), ValidationError);
  }
}

TEST_CASE("run config parses every section and converts frequencies") {
  const std::string text = R"({
    "material": {"slab_index": 1.337, "sound_speed": 10660, "density": 3515},
    "device": {"label": "A", "lambda_o_nm": 1576.87, "kappa_hz": 5.03e9,
               "kappa_e_hz": 2.99e9, "omega_m_hz": 6.23e9, "gamma_m_hz": 3280,
               "g0_hz": 216e3, "m_eff_kg": 6.48e-16},
    "pump": {"input_power_w": 1.633e-3, "fiber_efficiency": 0.3,
             "detuning_hz": -6.23e9},
    "grid": {"a_min_nm": 600, "a_max_nm": 700, "a_steps": 3,
             "hx_min_nm": 300, "hx_max_nm": 380, "hx_steps": 3,
             "hy_min_nm": 580, "hy_max_nm": 650, "hy_steps": 3},
    "ga": {"population_size": 12, "generations": 7, "rng_seed": 42,
           "mutation_scale": 0.08},
    "windows": {"mu_o_hz": 1.9e14, "delta_o_hz": 2e13, "mu_m_hz": 6e9,
                "delta_m_hz": 4e9},
    "design": {"n_taper": 5, "defect_scale": 0.8, "mirror_a_nm": 650,
               "mirror_hx_nm": 343, "mirror_hy_nm": 617,
               "defect_scale_min": 0.72, "defect_scale_max": 0.93,
               "exp_min": 0.5, "exp_max": 2.5},
    "spin": {"g_sm_hz": 132, "gamma_s_hz": 701.1}
  })";
  const RunConfig cfg = parse_run_config(text, "inline");

  CHECK(cfg.has_material);
  CHECK(cfg.material.effective_slab_index == Approx(1.337));
  CHECK(cfg.material.longitudinal_sound_speed == Approx(10660));

  CHECK(cfg.has_device);
  CHECK(cfg.device.label == "A");
  CHECK(cfg.device.kappa.hz() == Approx(5.03e9).epsilon(1e-12));
  CHECK(cfg.device.kappa.rad_s() ==
        Approx(2.0 * constants::pi * 5.03e9).epsilon(1e-12));
  CHECK(cfg.device_g0.hz() == Approx(216e3));
  CHECK(cfg.device_m_eff_kg == Approx(6.48e-16));

  CHECK(cfg.has_pump);
  CHECK(cfg.pump.input_power.watts() == Approx(1.633e-3));
  CHECK(cfg.pump.detuning.hz() == Approx(-6.23e9));
  CHECK(cfg.pump.omega_laser.rad_s() == 0.0);

  CHECK(cfg.has_grid);
  CHECK(cfg.grid.a.steps == 3);
  CHECK(cfg.grid.hy.max_nm == Approx(650));

  CHECK(cfg.ga.population_size == 12);
  CHECK(cfg.ga.generations == 7);
  CHECK(cfg.ga.rng_seed == 42);
  CHECK(cfg.ga.mutation_scale == Approx(0.08));
  CHECK(cfg.ga.crossover_fraction == Approx(0.9));  // untouched default

  REQUIRE(cfg.windows.has_value());
  CHECK(cfg.windows->mu_o.hz() == Approx(1.9e14));
  CHECK(cfg.windows->sigma_m().hz() == Approx(4e9 / 6.0));

  CHECK(cfg.base_design.n_taper == 5);
  CHECK(cfg.base_design.defect_scale == Approx(0.8));
  CHECK(cfg.base_design.mirror_cell.a_nm == Approx(650));
  CHECK(cfg.base_design.mirror_cell.w_nm == Approx(800));  // preset beam width
  CHECK(cfg.bounds.defect_scale.lo == Approx(0.72));
  CHECK(cfg.bounds.defect_scale.hi == Approx(0.93));
  CHECK(cfg.bounds.exp_a.lo == Approx(0.5));
  CHECK(cfg.bounds.exp_hx.hi == Approx(2.5));
  CHECK(cfg.bounds.exp_hy.lo == Approx(0.5));

  CHECK(cfg.has_spin);
  CHECK(cfg.spin.g_sm.hz() == Approx(132));
  // mechanical linewidth flows in from the device section
  CHECK(cfg.spin.gamma_m.hz() == Approx(3280));
}

TEST_CASE("run config rejections") {
  SUBCASE("unknown root key") {
    CHECK_THROWS_WITH_AS(parse_run_config(R"({"devise": {}})", "inline"),
                         doctest::Contains("unknown key 'devise' in config root"),
                         ValidationError);
  }
  SUBCASE("unknown section key") {
    const std::string text = R"({"device": {"kappa": 5e9}})";
    CHECK_THROWS_WITH_AS(parse_run_config(text, "inline"),
                         doctest::Contains("unknown key 'kappa' in section 'device'"),
                         ValidationError);
  }
  SUBCASE("missing required key") {
    const std::string text = R"({"device": {"lambda_o_nm": 1576.87}})";
    CHECK_THROWS_WITH_AS(parse_run_config(text, "inline"),
                         doctest::Contains("missing 'kappa_hz'"), ValidationError);
  }
  SUBCASE("wrong value type") {
    const std::string text =
        R"({"device": {"lambda_o_nm": 1576.87, "kappa_hz": "fast",
             "kappa_e_hz": 1e9, "omega_m_hz": 6e9, "gamma_m_hz": 3e3}})";
    CHECK_THROWS_WITH_AS(parse_run_config(text, "inline"),
                         doctest::Contains("'kappa_hz' must be a number"),
                         ValidationError);
  }
  SUBCASE("integer field given a float") {
    const std::string text = R"({"ga": {"population_size": 12.5}})";
    CHECK_THROWS_WITH_AS(parse_run_config(text, "inline"),
                         doctest::Contains("'population_size' must be an integer"),
                         ValidationError);
  }
  SUBCASE("not json") {
    CHECK_THROWS_WITH_AS(parse_run_config("{nope", "cfg.json"),
                         doctest::Contains("'cfg.json' is not valid JSON"),
                         ValidationError);
  }
  SUBCASE("not an object") {
    CHECK_THROWS_WITH_AS(parse_run_config("[1,2]", "cfg.json"),
                         doctest::Contains("must hold a JSON object"), ValidationError);
  }
  SUBCASE("section requirements name the command") {
    const RunConfig cfg = parse_run_config("{}", "inline");
    CHECK_THROWS_WITH_AS(cfg.require_device("metrics"),
                         doctest::Contains("metrics needs a 'device' section"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(cfg.require_grid("design"),
                         doctest::Contains("design needs a 'grid' section"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(cfg.require_pump("metrics"),
                         doctest::Contains("'pump' section"), ValidationError);
  }
  SUBCASE("device invariants still apply") {
    const std::string text =
        R"({"device": {"lambda_o_nm": 1576.87, "kappa_hz": 5.03e9,
             "kappa_e_hz": 6.0e9, "omega_m_hz": 6.23e9, "gamma_m_hz": 3280}})";
    CHECK_THROWS_AS(parse_run_config(text, "inline"), ValidationError);
  }
}

TEST_CASE("fnv1a digests") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(digest_hex("") == "cbf29ce484222325");
  CHECK(digest_hex("a") == "af63dc4c8601ec8c");

  // digest changes iff the bytes change
  CHECK(digest_hex("run 1 data") == digest_hex("run 1 data"));
  CHECK(digest_hex("run 1 data") != digest_hex("run 2 data"));
}

TEST_CASE("render_json output is exact and stable") {
  json j;
  j["b"] = 1.5;
  j["a"] = json{{"x", true}};
  j["c"] = json::array({1, "two"});
  const std::string expected =
      "{\n"
      "  \"a\": {\n"
      "    \"x\": true\n"
      "  },\n"
      "  \"b\": 1.5,\n"
      "  \"c\": [\n"
      "    1,\n"
      "    \"two\"\n"
      "  ]\n"
      "}\n";
  CHECK(render_json(j) == expected);

  SUBCASE("empty containers") {
    json e;
    e["arr"] = json::array();
    e["obj"] = json::object();
    CHECK(render_json(e) == "{\n  \"arr\": [],\n  \"obj\": {}\n}\n");
  }
  SUBCASE("12 significant digits") {
    json f;
    f["v"] = 1.9011868955612345e14;
    CHECK(render_json(f) == "{\n  \"v\": 1.90118689556e+14\n}\n");
  }
  SUBCASE("non-finite floats degrade to null") {
    json f;
    f["v"] = std::nan("");
    CHECK(render_json(f) == "{\n  \"v\": null\n}\n");
  }
  SUBCASE("control characters are escaped") {
    json f;
    f["v"] = std::string("a\x01") + "b\nc";
    CHECK(render_json(f) == "{\n  \"v\": \"a\\u0001b\\nc\"\n}\n");
  }
}

TEST_CASE("reports round-trip parse then serialize byte-identically") {
  json report;
  report["command"] = "fit-optical";
  report["version"] = kToolVersion;
  report["inputs"] = json{{"scan.csv", "3edf172c36e72f7b"}};
  report["quantities"] = json{
      {"f_o_hz", quantity(Uncertain{1.90118689556e14, 0.000848774524664}, "Hz")},
      {"kappa_hz", quantity(Uncertain{5.03e9, 0.0018}, "Hz")},
      {"q_o", quantity(37796.9561741, "dimensionless")},
      {"count", quantity(41000.0, "photons")},
  };
  report["notes"] = json::array({"one note"});

  const std::string once = render_json(report);
  const std::string twice = render_json(json::parse(once));
  CHECK(once == twice);
}

TEST_CASE("quantity helpers carry units") {
  const json plain = quantity(42.5, "Hz");
  CHECK(plain["value"] == 42.5);
  CHECK(plain["unit"] == "Hz");
  CHECK(plain.size() == 2);

  const json with_sigma = quantity(Uncertain{4.0, 0.25}, "nm");
  CHECK(with_sigma["value"] == 4.0);
  CHECK(with_sigma["sigma"] == 0.25);
  CHECK(with_sigma["unit"] == "nm");
}

TEST_CASE("file io errors") {
  CHECK_THROWS_WITH_AS(read_file("/nonexistent/nope.txt"),
                       doctest::Contains("cannot open"), ValidationError);
  CHECK_THROWS_WITH_AS(write_file("/nonexistent/dir/out.txt", "x"),
                       doctest::Contains("cannot write"), ValidationError);
  TempFile f("omc_io_roundtrip.bin", std::string("a\0b\n", 4));
  CHECK(read_file(f.str()) == std::string("a\0b\n", 4));
}
