#pragma once
//! \file config.hpp
//! Experiment configuration: JSON schema, defaults, overrides, validation.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heatex/classical.hpp"
#include "heatex/quantum.hpp"

namespace heatex {

enum class Regime { quantum, classical };
char const* to_string(Regime r);

struct Tolerances {
  double identity_tol = 1e-10;
  double stat_sigma = 3.0;
  double anchor_tol = 1e-12;
  double moment_rtol = 1e-8;
  double fourier_tol = 1e-10;
};

struct ExperimentConfig {
  Regime regime = Regime::quantum;
  QuantumModelSpec quantum_model;
  ClassicalModelSpec classical_model;
  double beta_a = 0.5;
  double beta_b = 1.0;
  double tau = 2.0;
  HeatDefinition q_definition = HeatDefinition::via_b;
  ProtocolSettings classical_protocol;
  std::vector<double> z_grid;
  std::vector<double> u_grid;
  std::vector<double> coupling_sweep;
  int n_max = 4;
  SamplerSettings sampler;
  Tolerances tolerances;
  std::optional<std::string> output_directory;
  bool both_definitions = false;

  ExchangeTemperatures temps() const { return {beta_a, beta_b}; }
  //! Fully resolved configuration as it would be written to a file.
  nlohmann::json echo() const;
};

//! Parse a grid: JSON array, "start:stop:step" (inclusive) or "a,b,c".
std::vector<double> parse_grid(nlohmann::json const& value);
std::vector<double> parse_grid(std::string const& text);

//! Apply "key=value" to a raw document. Keys are "section.key" or a bare
//! key that names exactly one field. Unknown keys raise ConfigError with a
//! suggestion.
void apply_override(nlohmann::json& doc, std::string const& key,
                    std::string const& value);

//! Validate a raw document, fill defaults and build the typed config.
//! Every invalid field is reported in one ConfigError.
ExperimentConfig config_from_json(nlohmann::json const& doc);

//! Default document for a regime (and model kind, when given).
nlohmann::json default_config_json(Regime regime,
                                   std::string const& model_kind = "");

//! Closest candidate by edit distance, or empty when nothing is close.
std::string suggest_key(std::string const& key,
                        std::vector<std::string> const& candidates);

}  // namespace heatex
