#include "oscdeform/config.hpp"
#include "oscdeform/report.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace oscdeform;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("oscdeform_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = scratch_dir();
  const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("err" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string("\"") + OSCDEFORM_CLI_PATH + "\" " + args + " > \"" +
                          out.string() + "\" 2> \"" + err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

// Golden comparison: text columns exact, numeric columns within a relative 1e-12.
void compare_golden(const std::string& produced, const std::string& golden_name) {
  const std::string golden = read_file(fs::path(OSCDEFORM_GOLDEN_DIR) / golden_name);
  REQUIRE_FALSE(golden.empty());
  const auto a = parse_csv(produced);
  const auto b = parse_csv(golden);
  REQUIRE(a.size() == b.size());
  CHECK(a[0] == b[0]);
  for (std::size_t i = 1; i < a.size(); ++i) {
    REQUIRE(a[i].size() == b[i].size());
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (j == 0 || j == 2 || j >= 7) {
        CHECK(a[i][j] == b[i][j]);
      } else {
        const double x = std::stod(a[i][j]);
        const double y = std::stod(b[i][j]);
        CHECK_MESSAGE(std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)),
                      golden_name << " row " << i << " col " << j);
      }
    }
  }
}

ScanConfig preset_config(PresetKind kind, double lambda) {
  ScanConfig cfg;
  cfg.preset = kind;
  cfg.lambda = lambda;
  return cfg;
}

}  // namespace

TEST_CASE("config: JSON round trip") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int i = 0; i < 50; ++i) {
    ScanConfig cfg;
    if (i % 2) {
      cfg.preset = PresetKind::case_iii;
      cfg.lambda = u(rng);
      cfg.grid = LambdaGrid{-0.5, u(rng) * 0.4 + 0.5, 3 + i};
    } else {
      cfg.c = sample_constrained(rng);
    }
    cfg.n_max = i % 7;
    cfg.quad_order = 16 + i;
    cfg.dim = 4 + i;
    cfg.format = i % 3 ? OutputFormat::csv : OutputFormat::json;
    if (i % 5 == 0) cfg.out = "table_" + std::to_string(i) + ".csv";
    const ScanConfig back = config_from_json(nlohmann::json::parse(to_json(cfg).dump()));
    CHECK(back == cfg);
  }
}

TEST_CASE("config: schema and unknown fields") {
  nlohmann::json j = to_json(preset_config(PresetKind::case_i, 0.5));
  CHECK_NOTHROW(config_from_json(j));

  nlohmann::json typo = j;
  typo["lamda"] = 1.0;
  CHECK_THROWS_WITH_AS(config_from_json(typo), doctest::Contains("lamda"), ConfigError);

  nlohmann::json v2 = j;
  v2["schema"] = 2;
  CHECK_THROWS_AS(config_from_json(v2), ConfigError);

  nlohmann::json none = j;
  none.erase("schema");
  CHECK_THROWS_AS(config_from_json(none), ConfigError);

  CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), ConfigError);
  nlohmann::json wrong_type = j;
  wrong_type["n_max"] = "eight";
  CHECK_THROWS_AS(config_from_json(wrong_type), ConfigError);
  nlohmann::json bad_preset = j;
  bad_preset["preset"] = "case_iv";
  CHECK_THROWS_AS(config_from_json(bad_preset), ConfigError);
}

TEST_CASE("config: a preset without lambda uses the harmonic reduction") {
  CHECK(default_lambda(PresetKind::case_ii) == 1.0);
  CHECK(default_lambda(PresetKind::case_iii) == 0.0);
  const ScanConfig cfg = config_from_json({{"schema", 1}, {"preset", "case_ii"}});
  CHECK(cfg.lambda == 1.0);
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("config: validation") {
  CHECK_NOTHROW(validate(preset_config(PresetKind::harmonic, 0.0)));

  ScanConfig neither;
  CHECK_THROWS_AS(validate(neither), ConfigError);

  ScanConfig both = preset_config(PresetKind::harmonic, 0.0);
  both.c = CParams{};
  CHECK_THROWS_AS(validate(both), ConfigError);

  ScanConfig quad = preset_config(PresetKind::harmonic, 0.0);
  quad.quad_order = 15;
  CHECK_THROWS_AS(validate(quad), ConfigError);

  ScanConfig dim = preset_config(PresetKind::harmonic, 0.0);
  dim.dim = 3;
  CHECK_THROWS_AS(validate(dim), ConfigError);

  ScanConfig steps = preset_config(PresetKind::harmonic, 0.0);
  steps.grid = LambdaGrid{0.0, 1.0, 1};
  CHECK_THROWS_AS(validate(steps), ConfigError);

  ScanConfig reversed = preset_config(PresetKind::harmonic, 0.0);
  reversed.grid = LambdaGrid{1.0, 0.0, 5};
  CHECK_THROWS_AS(validate(reversed), ConfigError);

  ScanConfig outside = preset_config(PresetKind::case_iii, 0.0);
  outside.grid = LambdaGrid{-0.5, 1.0, 5};
  CHECK_THROWS_AS(validate(outside), ConfigError);

  ScanConfig negative = preset_config(PresetKind::harmonic, 0.0);
  negative.n_max = -1;
  CHECK_THROWS_AS(validate(negative), ConfigError);

  CHECK_THROWS_WITH_AS(validate(preset_config(PresetKind::case_iii, 1.5)),
                       doctest::Contains("admissibility A<0 violated"), ConfigError);

  ScanConfig broken;
  broken.c = CParams{1, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(validate(broken), ConfigError);

  ScanConfig inadmissible;
  inadmissible.c = CParams{0, 1.5, 0, 0, 0, 0};
  CHECK_THROWS_WITH_AS(validate(inadmissible), doctest::Contains("A<0"), ConfigError);
}

TEST_CASE("config: default grids and formats") {
  CHECK(effective_grid(preset_config(PresetKind::case_ii, 2.0)).min > 0.0);
  const LambdaGrid g3 = effective_grid(preset_config(PresetKind::case_iii, 0.0));
  CHECK(g3.min > -1.0);
  CHECK(g3.max < 1.0);
  CHECK(parse_format("csv") == OutputFormat::csv);
  CHECK(parse_format("json") == OutputFormat::json);
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
  CHECK(format_name(OutputFormat::json) == "json");
}

TEST_CASE("format_real uses 17 significant digits") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(-4.0) == "-4");
}

TEST_CASE("verify: every suite runs and passes on presets") {
  const VerifyReport r = run_verify(preset_config(PresetKind::case_ii, 9.0));
  REQUIRE(r.suites.size() == 6);
  const char* names[] = {"constraint", "spectrum", "normalization", "heisenberg", "commutator", "gram"};
  for (std::size_t i = 0; i < 6; ++i) CHECK(r.suites[i].name == names[i]);
  CHECK(r.all_passed());
  CHECK(format_verify_text(r).find("6/6 suites pass") != std::string::npos);
  const nlohmann::json j = verify_json(r);
  CHECK(j["passed"] == 6);
  CHECK(j["total"] == 6);

  ScanConfig harmonic_c;
  harmonic_c.c = CParams{};
  CHECK(run_verify(harmonic_c).all_passed());
}

TEST_CASE("scan: row order and squeezing pattern") {
  ScanConfig cfg = preset_config(PresetKind::case_ii, 1.0);
  cfg.n_max = 5;
  cfg.grid = LambdaGrid{1.0, 15.0, 15};
  const auto rows = run_scan(cfg);
  REQUIRE(rows.size() == 6 * 15);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n == static_cast<int>(i / 15));
    CHECK(rows[i].lambda == 1.0 + static_cast<double>(i % 15));
    CHECK(rows[i].moments.squeezed_x == (rows[i].lambda > 2 * rows[i].n + 1));
  }
  const std::string csv = format_scan_csv(rows);
  CHECK(csv.rfind("preset,lambda,n,mean_x,var_x,var_p,product,squeezed_x,squeezed_p\n", 0) == 0);

  const auto windows = scan_windows(cfg);
  REQUIRE(windows.size() == 6);
  for (int n = 0; n < 6; ++n) {
    if (2 * n + 1 < 15) {
      REQUIRE(windows[static_cast<std::size_t>(n)].intervals.size() == 1);
      CHECK(std::abs(*windows[static_cast<std::size_t>(n)].intervals[0].lo - (2 * n + 1)) < 1e-6);
    }
  }
  const nlohmann::json j = scan_json(rows, windows);
  CHECK(j["rows"].size() == rows.size());
  CHECK(j["windows"].size() == 6);
}

TEST_CASE("scan: case_iii ground state squeezes x for lambda > 0 and p for lambda < 0") {
  ScanConfig cfg = preset_config(PresetKind::case_iii, 0.0);
  cfg.n_max = 0;
  cfg.grid = LambdaGrid{-0.9, 0.9, 19};
  for (const ScanRow& r : run_scan(cfg)) {
    CHECK(r.moments.squeezed_x == (r.lambda > 1e-12));
    CHECK(r.moments.squeezed_p == (r.lambda < -1e-12));
  }
}

TEST_CASE("scan: an explicit sextuple yields one row per n") {
  ScanConfig cfg;
  cfg.c = CParams{};
  cfg.n_max = 3;
  const auto rows = run_scan(cfg);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].preset == "custom");
  CHECK(format_scan_csv(rows).find("custom,,0,") != std::string::npos);
}

TEST_CASE("spectrum lines") {
  ScanConfig cfg = preset_config(PresetKind::lambda_shift, 1.0);
  cfg.dim = 100;
  const auto lines = run_spectrum(cfg, 5);
  REQUIRE(lines.size() == 5);
  for (const SpectrumLine& l : lines) {
    CHECK(std::abs(l.closed_form - (l.n + 0.5)) < 1e-10);
    CHECK(std::abs(l.truncated - (l.n + 0.5)) < 1e-6);
  }
  CHECK(format_spectrum_text(lines).rfind("n,closed_form,truncated,deviation\n", 0) == 0);
}

TEST_CASE("discrepancy report content") {
  const std::string text = discrepancy_report();
  CHECK(text.find("at n=1, lambda=1: quoted = -3.5, oracle = 0.5, difference = -4") !=
        std::string::npos);
  CHECK(text.find("C = 0") != std::string::npos);
  CHECK(text.find("r(n) strictly decreasing over n=1..8: yes") != std::string::npos);
  CHECK(text == discrepancy_report());
}

TEST_CASE("cli: verify exit codes") {
  RunResult ok = run_cli("verify --preset case_ii --lambda 9");
  CHECK(ok.status == 0);
  CHECK(ok.out.find("6/6 suites pass") != std::string::npos);

  RunResult base = run_cli("verify --c 0,0,0,0,0,0");
  CHECK(base.status == 0);

  RunResult bad = run_cli("verify --preset case_iii --lambda 1.5");
  CHECK(bad.status == 2);
  CHECK(bad.err.find("admissibility A<0 violated") != std::string::npos);

  CHECK(run_cli("verify --c 1,0,0,0,0,0").status == 2);
  CHECK(run_cli("verify --c 1,2,3").status == 2);
  CHECK(run_cli("verify --c 0,0,0,0,0,zero").status == 2);
  CHECK(run_cli("verify --preset case_iv").status == 2);
  CHECK(run_cli("verify").status == 2);
  CHECK(run_cli("verify --preset harmonic --quad-order 8").status == 2);
  CHECK(run_cli("verify --preset harmonic --format xml").status == 2);
  CHECK(run_cli("frobnicate").status == 2);
  CHECK(run_cli("").status == 2);
  CHECK(run_cli("--help").status == 0);

  RunResult json = run_cli("verify --preset case_iii --lambda 0.5 --format json");
  CHECK(json.status == 0);
  const nlohmann::json j = nlohmann::json::parse(json.out);
  CHECK(j["passed"] == 6);
}

TEST_CASE("cli: spectrum reports truncation failures with status 1") {
  CHECK(run_cli("spectrum --preset lambda_shift --lambda 1 --dim 100").status == 0);
  // tanh r = 0.8 squeezing is not converged at 80 Fock states.
  CHECK(run_cli("spectrum --preset case_ii --lambda 9 --dim 80").status == 1);
  CHECK(run_cli("spectrum --preset case_ii --lambda 9 --dim 160").status == 0);
}

TEST_CASE("cli: scan output is deterministic and matches golden files") {
  const std::string args = "scan --preset case_ii --n-max 5 --lambda-min 1 --lambda-max 15 --lambda-steps 15";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  compare_golden(a.out, "case_ii_scan.csv");

  const RunResult c1 = run_cli("scan --preset case_i --n-max 5 --lambda-min -1 --lambda-max 1 --lambda-steps 3");
  REQUIRE(c1.status == 0);
  compare_golden(c1.out, "case_i_scan.csv");

  const RunResult c3 = run_cli("scan --preset case_iii --n-max 0 --lambda-min -0.9 --lambda-max 0.9 --lambda-steps 7");
  REQUIRE(c3.status == 0);
  compare_golden(c3.out, "case_iii_scan.csv");

  CHECK(run_cli("scan --preset case_ii --lambda-min -1 --lambda-max 3 --lambda-steps 5").status == 2);
  CHECK(run_cli("scan --preset case_ii --lambda-steps 1").status == 2);
}

TEST_CASE("cli: config file, --out and discrepancies") {
  const fs::path dir = scratch_dir();
  const fs::path cfg_path = dir / "cfg.json";
  const fs::path out_path = dir / "table.csv";
  {
    ScanConfig cfg = preset_config(PresetKind::case_iii, 0.0);
    cfg.n_max = 0;
    cfg.grid = LambdaGrid{-0.9, 0.9, 7};
    std::ofstream(cfg_path) << to_json(cfg).dump(2);
  }
  const RunResult r = run_cli("scan --config \"" + cfg_path.string() + "\" --out \"" + out_path.string() + "\"");
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  compare_golden(read_file(out_path), "case_iii_scan.csv");

  // Flags override the file.
  const RunResult over = run_cli("scan --config \"" + cfg_path.string() + "\" --n-max 1");
  CHECK(over.status == 0);
  CHECK(parse_csv(over.out).size() == 1 + 2 * 7);

  const fs::path typo = dir / "typo.json";
  std::ofstream(typo) << R"({"schema": 1, "preset": "harmonic", "nmax": 3})";
  CHECK(run_cli("verify --config \"" + typo.string() + "\"").status == 2);
  CHECK(run_cli("verify --config \"" + (dir / "missing.json").string() + "\"").status == 2);

  const RunResult d = run_cli("discrepancies");
  CHECK(d.status == 0);
  CHECK(d.out == discrepancy_report());

  fs::remove_all(dir);
}
