#include "etas/diagnostics.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "etas/numeric.hpp"

namespace etas {

std::vector<double> transformed_times(const EventCatalog& catalog, const EtasParams& params) {
  params.validate();
  std::vector<double> out(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    out[i] = compensator(catalog.events()[i].time, catalog, params);
  }
  return out;
}

UniformityTest uniformity_test(const EventCatalog& catalog, const EtasParams& params) {
  if (catalog.size() < 2) {
    throw std::invalid_argument("uniformity_test: need at least two events");
  }
  std::vector<double> lam = transformed_times(catalog, params);
  const double total = lam.back();
  if (!(total > 0.0)) throw std::runtime_error("uniformity_test: degenerate compensator");

  std::vector<double> u(lam.size() - 1);
  for (std::size_t i = 0; i + 1 < lam.size(); ++i) u[i] = lam[i] / total;

  UniformityTest t{};
  t.n = u.size();
  t.ks_statistic = ks_statistic_uniform(u);
  t.p_value = ks_p_value(t.ks_statistic, u.size());
  return t;
}

PredictiveBand predictive_band(const EventCatalog& catalog,
                               const std::vector<EtasParams>& draws) {
  if (draws.empty()) throw std::invalid_argument("predictive_band: no posterior draws");
  const std::size_t n = catalog.size();

  PredictiveBand band;
  band.times.resize(n);
  band.n_obs.resize(n);
  band.q025.resize(n);
  band.q50.resize(n);
  band.q975.resize(n);

  // draws outer, events inner: each draw reuses one O(n^2) compensator pass
  std::vector<std::vector<double>> lam(draws.size());
  for (std::size_t d = 0; d < draws.size(); ++d) {
    lam[d] = transformed_times(catalog, draws[d]);
  }

  std::vector<double> column(draws.size());
  for (std::size_t i = 0; i < n; ++i) {
    band.times[i] = catalog.events()[i].time;
    band.n_obs[i] = static_cast<double>(i + 1);
    for (std::size_t d = 0; d < draws.size(); ++d) column[d] = lam[d][i];
    band.q025[i] = sample_quantile(column, 0.025);
    band.q50[i] = sample_quantile(column, 0.50);
    band.q975[i] = sample_quantile(column, 0.975);
  }
  return band;
}

PredictiveBand predictive_band(const EventCatalog& catalog, const PosteriorResult& posterior,
                               std::size_t n_samples, std::uint64_t seed, bool force) {
  return predictive_band(catalog, sample_posterior(posterior, n_samples, seed, force));
}

std::string band_table(const PredictiveBand& band) {
  std::string out = "t N_obs q2.5 q50 q97.5\n";
  char buf[200];
  for (std::size_t i = 0; i < band.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %g %.17g %.17g %.17g\n", band.times[i], band.n_obs[i],
                  band.q025[i], band.q50[i], band.q975[i]);
    out += buf;
  }
  return out;
}

}  // namespace etas
