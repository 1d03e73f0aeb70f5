#include "oscdeform/config.hpp"

#include "oscdeform/errors.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace oscdeform {

namespace {

bool same_grid(const std::optional<LambdaGrid>& a, const std::optional<LambdaGrid>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->min == b->min && a->max == b->max && a->steps == b->steps;
}

}  // namespace

bool ScanConfig::operator==(const ScanConfig& o) const {
  return schema == o.schema && preset == o.preset && lambda == o.lambda && c == o.c &&
         n_max == o.n_max && same_grid(grid, o.grid) && quad_order == o.quad_order &&
         dim == o.dim && format == o.format && out == o.out;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

double default_lambda(PresetKind kind) { return kind == PresetKind::case_ii ? 1.0 : 0.0; }

std::string_view format_name(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

CParams resolve_cparams(const ScanConfig& cfg) {
  if (cfg.c) return *cfg.c;
  if (cfg.preset) return preset({*cfg.preset, cfg.lambda});
  throw ConfigError("either a preset or an explicit c-sextuple is required");
}

LambdaGrid effective_grid(const ScanConfig& cfg) {
  if (cfg.grid) return *cfg.grid;
  switch (cfg.preset.value_or(PresetKind::harmonic)) {
    case PresetKind::case_ii: return {1.0, 15.0, 29};
    case PresetKind::case_iii: return {-0.9, 0.9, 19};
    default: return {-3.0, 3.0, 25};
  }
}

void validate(const ScanConfig& cfg) {
  if (cfg.schema != kConfigSchema) {
    throw ConfigError("unsupported config schema " + std::to_string(cfg.schema));
  }
  if (cfg.preset.has_value() == cfg.c.has_value())
    throw ConfigError("exactly one of --preset or --c must be given");
  if (cfg.n_max < 0) throw ConfigError("n-max must be non-negative");
  if (cfg.quad_order < 16) throw ConfigError("quad-order must be >= 16");
  if (cfg.dim < 4) throw ConfigError("dim must be >= 4");
  if (cfg.grid) {
    if (cfg.grid->steps < 2) throw ConfigError("lambda-steps must be >= 2");
    if (!(cfg.grid->max >= cfg.grid->min))
      throw ConfigError("lambda-max must not be below lambda-min");
  }
  try {
    const CParams c = resolve_cparams(cfg);
    require_admissible(coeffs_from_c(c));
    if (cfg.preset) {
      const LambdaGrid g = effective_grid(cfg);
      const LambdaDomain dom = lambda_domain(*cfg.preset);
      if (!dom.contains(g.min) || !dom.contains(g.max)) {
        std::ostringstream msg;
        msg << "lambda grid [" << g.min << ", " << g.max << "] leaves the domain of "
            << preset_name(*cfg.preset);
        throw ConfigError(msg.str());
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json to_json(const ScanConfig& cfg) {
  nlohmann::json j;
  j["schema"] = cfg.schema;
  if (cfg.preset) {
    j["preset"] = std::string(preset_name(*cfg.preset));
    j["lambda"] = cfg.lambda;
  }
  if (cfg.c) j["c"] = cfg.c->as_array();
  j["n_max"] = cfg.n_max;
  if (cfg.grid) {
    j["lambda_min"] = cfg.grid->min;
    j["lambda_max"] = cfg.grid->max;
    j["lambda_steps"] = cfg.grid->steps;
  }
  j["quad_order"] = cfg.quad_order;
  j["dim"] = cfg.dim;
  j["format"] = std::string(format_name(cfg.format));
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j;
}

ScanConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "schema", "preset", "lambda", "c", "n_max", "lambda_min", "lambda_max",
      "lambda_steps", "quad_order", "dim", "format", "out"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  if (!j.contains("schema")) throw ConfigError("config is missing the 'schema' field");

  ScanConfig cfg;
  try {
    cfg.schema = j.at("schema").get<int>();
    if (cfg.schema != kConfigSchema)
      throw ConfigError("unsupported config schema " + std::to_string(cfg.schema));
    if (j.contains("preset")) cfg.preset = parse_preset(j.at("preset").get<std::string>());
    if (cfg.preset) cfg.lambda = default_lambda(*cfg.preset);
    if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
    if (j.contains("c")) cfg.c = CParams::from_array(j.at("c").get<std::array<double, 6>>());
    if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<int>();
    const bool any_grid =
        j.contains("lambda_min") || j.contains("lambda_max") || j.contains("lambda_steps");
    if (any_grid) {
      LambdaGrid g = effective_grid(cfg);
      if (j.contains("lambda_min")) g.min = j.at("lambda_min").get<double>();
      if (j.contains("lambda_max")) g.max = j.at("lambda_max").get<double>();
      if (j.contains("lambda_steps")) g.steps = j.at("lambda_steps").get<int>();
      cfg.grid = g;
    }
    if (j.contains("quad_order")) cfg.quad_order = j.at("quad_order").get<int>();
    if (j.contains("dim")) cfg.dim = j.at("dim").get<int>();
    if (j.contains("format")) cfg.format = parse_format(j.at("format").get<std::string>());
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace oscdeform
