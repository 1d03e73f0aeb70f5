#pragma once

#include "oscdeform/deformation.hpp"
#include "oscdeform/moments.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace oscdeform {

/// Malformed or out-of-range run configuration (CLI exit status 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { csv, json };

inline constexpr int kConfigSchema = 1;

struct ScanConfig {
  int schema = kConfigSchema;
  std::optional<PresetKind> preset;
  double lambda = 0.0;  // default_lambda(*preset) when not given
  std::optional<CParams> c;
  int n_max = 8;
  std::optional<LambdaGrid> grid;  // default depends on the preset
  int quad_order = kDefaultQuadratureOrder;
  int dim = 80;
  OutputFormat format = OutputFormat::csv;
  std::string out;

  bool operator==(const ScanConfig&) const;
};

/// Point lambda used when a preset is named without one: the value reducing it to the
/// harmonic oscillator (1 for case_ii, 0 otherwise).
double default_lambda(PresetKind kind);

/// Throws ConfigError describing the first problem found.
void validate(const ScanConfig& cfg);

/// The c-sextuple selected by the config (preset at `lambda`, or the explicit one).
CParams resolve_cparams(const ScanConfig& cfg);

/// The grid given in the config, or the preset's default scan range.
LambdaGrid effective_grid(const ScanConfig& cfg);

nlohmann::json to_json(const ScanConfig& cfg);
/// Rejects unknown fields and schema versions other than kConfigSchema.
ScanConfig config_from_json(const nlohmann::json& j);

OutputFormat parse_format(const std::string& s);
std::string_view format_name(OutputFormat f);

}  // namespace oscdeform
