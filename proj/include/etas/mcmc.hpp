#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "etas/priors.hpp"

namespace etas {

struct McmcConfig {
  int n_iter = 15000;
  int burn_in = 5000;
  std::array<double, 5> proposal_scales = {0.5, 0.5, 0.5, 0.5, 0.5};
  std::uint64_t seed = 1;
  PriorSet priors;
  bool prior_only = false;  // drop the likelihood term (sampler self-checks)

  void validate() const;
};

// Component-wise Gaussian random-walk Metropolis-Hastings over the internal
// parameters, targeting exact_log_likelihood(link(theta)) - ||theta||^2 / 2.
// Proposal scales adapt toward 20-40% acceptance during burn-in, then freeze.
struct McmcResult {
  std::vector<Theta> theta_draws;          // post burn-in
  std::vector<EtasParams> natural_draws;   // same draws through the links
  std::array<double, 5> acceptance{};      // post burn-in rates
  std::array<double, 5> tuned_scales{};
  bool stuck_warning = false;              // 10^4 consecutive all-rejections seen
};

McmcResult mh_sample(const EventCatalog& catalog, const McmcConfig& config);

struct CoordDiagnostics {
  double ess;
  double mean, sd, q01, q25, q50, q75, q99;
  bool degenerate;  // constant chain
};

// Autocorrelation-based effective sample size plus moment/quantile summary
// for one scalar chain.
CoordDiagnostics diagnose_series(const std::vector<double>& chain);

// Per-coordinate diagnostics over the natural-scale draws.
std::array<CoordDiagnostics, 5> chain_diagnostics(const McmcResult& result);

// Delimited export: internal and natural coordinates per draw.
std::string chains_table(const McmcResult& result);

}  // namespace etas
