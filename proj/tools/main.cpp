// oscdeform: verification suites, parameter scans and reports for deformed oscillators.
#include "oscdeform/config.hpp"
#include "oscdeform/errors.hpp"
#include "oscdeform/report.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace oscdeform;

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config_path;
  std::string preset;
  double lambda = 0.0;
  std::string c;
  int n_max = 8;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int lambda_steps = 0;
  int quad_order = kDefaultQuadratureOrder;
  int dim = 80;
  std::string format = "csv";
  std::string out;
  int levels = 5;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "JSON config file (schema 1)");
  cmd->add_option("--preset", o.preset, "harmonic | lambda_shift | case_i | case_ii | case_iii");
  cmd->add_option("--lambda", o.lambda, "Deformation parameter of the preset");
  cmd->add_option("--c", o.c, "Six comma-separated c-parameters c1..c6");
  cmd->add_option("--n-max", o.n_max, "Highest quantum number")->capture_default_str();
  cmd->add_option("--lambda-min", o.lambda_min, "Scan grid start");
  cmd->add_option("--lambda-max", o.lambda_max, "Scan grid end");
  cmd->add_option("--lambda-steps", o.lambda_steps, "Scan grid points");
  cmd->add_option("--quad-order", o.quad_order, "Gauss-Hermite order")->capture_default_str();
  cmd->add_option("--dim", o.dim, "Fock-space truncation")->capture_default_str();
  cmd->add_option("--format", o.format, "csv | json")->capture_default_str();
  cmd->add_option("--out", o.out, "Output path (stdout when empty)");
}

CParams parse_sextuple(const std::string& text) {
  std::array<double, 6> v{};
  std::stringstream ss(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= v.size()) throw ConfigError("--c expects exactly six values");
    std::size_t used = 0;
    try {
      v[i] = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--c: '" + item + "' is not a decimal number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw ConfigError("--c: '" + item + "' is not a decimal number");
    ++i;
  }
  if (i != v.size()) throw ConfigError("--c expects exactly six values");
  return CParams::from_array(v);
}

ScanConfig make_config(const CLI::App& cmd, const Options& o) {
  ScanConfig cfg;
  bool lambda_from_file = false;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot read config file " + o.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = config_from_json(j);
    lambda_from_file = j.contains("lambda");
  }
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  try {
    if (given("--preset")) {
      cfg.preset = parse_preset(o.preset);
      cfg.c.reset();
      if (!given("--lambda") && !lambda_from_file) cfg.lambda = default_lambda(*cfg.preset);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (given("--lambda")) cfg.lambda = o.lambda;
  if (given("--c")) {
    cfg.c = parse_sextuple(o.c);
    if (!given("--preset")) cfg.preset.reset();
  }
  if (given("--n-max")) cfg.n_max = o.n_max;
  if (given("--lambda-min") || given("--lambda-max") || given("--lambda-steps")) {
    LambdaGrid g = effective_grid(cfg);
    if (given("--lambda-min")) g.min = o.lambda_min;
    if (given("--lambda-max")) g.max = o.lambda_max;
    if (given("--lambda-steps")) g.steps = o.lambda_steps;
    cfg.grid = g;
  }
  if (given("--quad-order")) cfg.quad_order = o.quad_order;
  if (given("--dim")) cfg.dim = o.dim;
  if (given("--format")) cfg.format = parse_format(o.format);
  if (given("--out")) cfg.out = o.out;
  validate(cfg);
  return cfg;
}

void emit(const ScanConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + cfg.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformed bosonic oscillators: verification, scans and reports"};
  app.require_subcommand(1);
  Options o;
  auto* verify = app.add_subcommand("verify", "Run all invariant suites for one parameter set");
  auto* scan = app.add_subcommand("scan", "Tabulate moments over n and a lambda grid");
  auto* spectrum = app.add_subcommand("spectrum", "Compare closed-form and truncated spectra");
  auto* disc = app.add_subcommand("discrepancies", "Quoted closed forms versus oracles");
  add_common(verify, o);
  add_common(scan, o);
  add_common(spectrum, o);
  spectrum->add_option("--levels", o.levels, "Number of levels")->capture_default_str();
  disc->add_option("--out", o.out, "Output path (stdout when empty)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*disc) {
      ScanConfig cfg;
      cfg.out = o.out;
      emit(cfg, discrepancy_report());
      return kExitOk;
    }
    CLI::App* cmd = *verify ? verify : (*scan ? scan : spectrum);
    const ScanConfig cfg = make_config(*cmd, o);

    if (*verify) {
      const VerifyReport report = run_verify(cfg);
      if (cfg.format == OutputFormat::json)
        emit(cfg, verify_json(report).dump(2) + "\n");
      else
        emit(cfg, format_verify_text(report));
      return report.all_passed() ? kExitOk : kExitInvariant;
    }
    if (*scan) {
      const auto rows = run_scan(cfg);
      if (cfg.format == OutputFormat::json)
        emit(cfg, scan_json(rows, scan_windows(cfg)).dump(2) + "\n");
      else
        emit(cfg, format_scan_csv(rows));
      return kExitOk;
    }
    const auto lines = run_spectrum(cfg, o.levels);
    emit(cfg, format_spectrum_text(lines));
    double worst = 0.0;
    for (const auto& l : lines) worst = std::max(worst, std::abs(l.truncated - (l.n + 0.5)));
    return worst < 1e-6 ? kExitOk : kExitInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SpectrumError& e) {
    std::cerr << "spectrum failure: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitInvariant;
  }
}
