#pragma once

#include "oscdeform/config.hpp"
#include "oscdeform/moments.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace oscdeform {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::vector<std::string> failures;  // one line per violated relation
  std::string summary;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  [[nodiscard]] int passed() const;
  [[nodiscard]] bool all_passed() const { return passed() == static_cast<int>(suites.size()); }
};

/// Runs the constraint, spectrum, normalization, heisenberg, commutator and gram suites.
/// Throws ConfigError for an invalid config.
VerifyReport run_verify(const ScanConfig& cfg);
std::string format_verify_text(const VerifyReport& report);
nlohmann::json verify_json(const VerifyReport& report);

struct ScanRow {
  std::string preset;  // "custom" for an explicit c-sextuple
  double lambda = 0.0;
  int n = 0;
  MomentReport moments;
};

/// One row per (n, lambda), n-major. An explicit c-sextuple yields one row per n.
std::vector<ScanRow> run_scan(const ScanConfig& cfg);
/// Squeezing windows over the config's lambda grid for n = 0..n_max (presets only).
std::vector<SqueezingWindow> scan_windows(const ScanConfig& cfg);

/// Columns: preset, lambda, n, mean_x, var_x, var_p, product, squeezed_x, squeezed_p.
std::string format_scan_csv(const std::vector<ScanRow>& rows);
nlohmann::json scan_json(const std::vector<ScanRow>& rows,
                         const std::vector<SqueezingWindow>& windows);

struct SpectrumLine {
  int n = 0;
  double closed_form = 0.0;  // general level formula
  double truncated = 0.0;    // eigenvalue of the truncated Fock-space H
};
std::vector<SpectrumLine> run_spectrum(const ScanConfig& cfg, int levels = 5);
std::string format_spectrum_text(const std::vector<SpectrumLine>& lines);

/// Comparison of quoted closed forms against independent oracles. Deterministic text.
std::string discrepancy_report();

/// printf("%.17g") formatting used for every numeric output.
std::string format_real(double v);

}  // namespace oscdeform
