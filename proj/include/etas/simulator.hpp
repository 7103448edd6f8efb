#pragma once

#include <cstdint>

#include "etas/model.hpp"
#include "etas/numeric.hpp"

namespace etas {

struct SimConfig {
  EtasParams params;
  ObservationWindow window;
  double gr_beta;                     // Gutenberg-Richter exponent (natural-log scale)
  std::uint64_t seed = 1;
  std::size_t max_events = 1000000;

  void validate() const;
};

// Expected offspring per event under the full-window Omori mass, averaged
// over Gutenberg-Richter magnitudes; infinite when gr_beta <= alpha.
double branching_ratio(const EtasParams& params, double gr_beta);

// Ogata thinning. Between events the intensity is non-increasing, so the
// intensity at the current time dominates until the next candidate; the bound
// is refreshed after every candidate.
EventCatalog simulate(const SimConfig& config);

// M0 + Exponential(gr_beta) draw.
double sample_magnitude(double gr_beta, double m0, Rng& rng);

// Maximum-likelihood GR exponent: 1 / mean(m_h - M0).
double estimate_gr_beta(const EventCatalog& catalog);

}  // namespace etas
