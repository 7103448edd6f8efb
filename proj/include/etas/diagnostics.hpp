#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "etas/inference.hpp"
#include "etas/model.hpp"

namespace etas {

// Compensator values Lambda(t_i) at each event time under fixed parameters.
std::vector<double> transformed_times(const EventCatalog& catalog, const EtasParams& params);

struct UniformityTest {
  double ks_statistic;
  double p_value;
  std::size_t n;  // rescaled points used (events before the last one)
};

// Random time change check: rescale Lambda(t_i) / Lambda(t_n) for i < n and
// test the result against U(0,1).
UniformityTest uniformity_test(const EventCatalog& catalog, const EtasParams& params);

struct PredictiveBand {
  std::vector<double> times;    // event times (shifted window)
  std::vector<double> n_obs;    // observed cumulative count 1..n
  std::vector<double> q025, q50, q975;  // compensator quantiles across draws
};

// Posterior-predictive compensator band at the observed event times.
PredictiveBand predictive_band(const EventCatalog& catalog,
                               const std::vector<EtasParams>& draws);

// Convenience wrapper sampling n_samples draws from the fitted posterior.
// Refuses a non-converged result unless force is set.
PredictiveBand predictive_band(const EventCatalog& catalog, const PosteriorResult& posterior,
                               std::size_t n_samples, std::uint64_t seed, bool force = false);

// Delimited export: "t N_obs q2.5 q50 q97.5" per event.
std::string band_table(const PredictiveBand& band);

}  // namespace etas
