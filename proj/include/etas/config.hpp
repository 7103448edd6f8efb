#pragma once

#include <string>
#include <string_view>

#include "etas/inference.hpp"
#include "etas/mcmc.hpp"
#include "etas/simulator.hpp"

namespace etas {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Catalog handling knobs shared by every command that reads event files.
struct CatalogOptions {
  ObservationWindow window{};
  TiePolicy ties = TiePolicy::reject;
  double jitter_eps = 1e-9;
};

struct FitFileConfig {
  CatalogOptions catalog;
  FitConfig fit;
};

struct McmcFileConfig {
  CatalogOptions catalog;
  McmcConfig mcmc;
};

// JSON config parsers. Missing or malformed fields raise ConfigError naming
// the offending key. Priors come either from {"preset": "replicate"|"gamma"},
// {"preset": "gamma", "gamma_scale": g}, or five explicit specs keyed by
// parameter name with {"family", parameters...}.
SimConfig parse_sim_config(std::string_view json_text);
FitFileConfig parse_fit_config(std::string_view json_text);
McmcFileConfig parse_mcmc_config(std::string_view json_text);

PriorSet parse_priors(std::string_view json_text);

}  // namespace etas
