#include "etas/simulator.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace etas {

void SimConfig::validate() const {
  params.validate();
  window.validate();
  if (!(gr_beta > 0.0)) throw std::invalid_argument("SimConfig: gr_beta must be > 0");
  if (max_events == 0) throw std::invalid_argument("SimConfig: max_events must be positive");
}

double branching_ratio(const EtasParams& params, double gr_beta) {
  if (!(gr_beta > params.alpha)) return std::numeric_limits<double>::infinity();
  // E[exp(alpha (m - M0))] = beta / (beta - alpha) under the GR exponential
  return params.K * gr_beta / (gr_beta - params.alpha) * params.c / (params.p - 1.0);
}

EventCatalog simulate(const SimConfig& config) {
  config.validate();
  const double t_end = config.window.duration();
  const double m0 = config.window.m_cutoff;
  const EtasParams& par = config.params;
  Rng rng(config.seed);

  std::vector<Event> events;  // internal (shifted) times
  auto intensity_at = [&](double t) {
    NeumaierSum s;
    s.add(par.mu);
    for (const Event& e : events) {
      if (e.time < t) {
        s.add(magnitude_factor(e.magnitude, par.K, par.alpha, m0) *
              omori_kernel(t - e.time, par.c, par.p));
      }
    }
    return s.value();
  };

  double t = 0.0;
  while (true) {
    // dominating rate: intensity immediately after t (kernel value at lag 0
    // for any event at exactly t, non-increasing afterwards)
    NeumaierSum bound;
    bound.add(par.mu);
    for (const Event& e : events) {
      bound.add(magnitude_factor(e.magnitude, par.K, par.alpha, m0) *
                omori_kernel(t - e.time, par.c, par.p));
    }
    const double lambda_bar = bound.value();
    if (!(lambda_bar > 0.0)) break;  // mu = 0 and no history: nothing more can happen

    t += rng.exponential(lambda_bar);
    if (t > t_end) break;

    const double accept = intensity_at(t) / lambda_bar;
    if (rng.uniform() < accept) {
      events.push_back(Event{t, sample_magnitude(config.gr_beta, m0, rng)});
      if (events.size() > config.max_events) {
        throw std::runtime_error(
            "simulate: event cap exceeded (branching ratio " +
            std::to_string(branching_ratio(par, config.gr_beta)) + "); supercritical runaway?");
      }
    }
  }
  // times are already in the shifted frame; hand them over in original units
  for (Event& e : events) e.time += config.window.t_start;
  return EventCatalog(std::move(events), config.window);
}

double sample_magnitude(double gr_beta, double m0, Rng& rng) {
  if (!(gr_beta > 0.0)) throw std::invalid_argument("sample_magnitude: gr_beta must be > 0");
  return m0 + rng.exponential(gr_beta);
}

double estimate_gr_beta(const EventCatalog& catalog) {
  if (catalog.size() < 2) throw std::invalid_argument("estimate_gr_beta: need at least 2 events");
  NeumaierSum s;
  for (const Event& e : catalog.events()) s.add(e.magnitude - catalog.m_cutoff());
  const double mean = s.value() / static_cast<double>(catalog.size());
  if (!(mean > 0.0)) {
    throw std::invalid_argument("estimate_gr_beta: all magnitudes equal the cutoff");
  }
  return 1.0 / mean;
}

}  // namespace etas
