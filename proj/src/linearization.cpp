#include "etas/linearization.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "etas/numeric.hpp"

namespace etas {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnderflow = 1e-300;

Theta jacobians(const Theta& theta, const PriorSet& priors) {
  Theta j;
  for (int i = 0; i < 5; ++i) j[static_cast<std::size_t>(i)] = link_jacobian(theta[static_cast<std::size_t>(i)], priors[static_cast<std::size_t>(i)]);
  return j;
}
}  // namespace

void BinningConfig::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("BinningConfig: delta must be > 0");
  if (!(growth > 0.0)) throw std::invalid_argument("BinningConfig: growth must be > 0");
  if (n_max < 0) throw std::invalid_argument("BinningConfig: n_max must be >= 0");
}

std::vector<double> time_bins(double t_h, const ObservationWindow& window,
                              const BinningConfig& cfg) {
  cfg.validate();
  const double t2 = window.t_end;
  if (!(t_h < t2)) throw std::invalid_argument("time_bins: t_h must be < T2");
  std::vector<double> bp;
  bp.push_back(std::max(window.t_start, t_h));
  double next = t_h + cfg.delta;
  for (int k = 0; k <= cfg.n_max && next < t2; ++k) {
    if (next > bp.back()) bp.push_back(next);
    next = t_h + cfg.delta * std::pow(1.0 + cfg.growth, k + 1);
  }
  bp.push_back(t2);
  return bp;
}

SurrogateDataset build_surrogate(const EventCatalog& catalog, const BinningConfig& cfg) {
  if (catalog.empty()) throw std::invalid_argument("build_surrogate: empty catalog");
  SurrogateDataset ds;
  ds.binning = cfg;
  ds.rows.push_back(SurrogateRow{Part::I, -1, 0.0, catalog.window().t_end, 0.0, 1.0});
  const auto& events = catalog.events();
  for (std::size_t h = 0; h < events.size(); ++h) {
    const auto bp = time_bins(events[h].time, catalog.window(), cfg);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      ds.rows.push_back(SurrogateRow{Part::II, static_cast<int>(h), bp[i], bp[i + 1], 0.0, 1.0});
    }
  }
  for (std::size_t h = 0; h < events.size(); ++h) {
    ds.rows.push_back(
        SurrogateRow{Part::III, static_cast<int>(h), events[h].time, events[h].time, 1.0, 0.0});
  }
  return ds;
}

std::string surrogate_table(const SurrogateDataset& dataset) {
  std::string out = "part event t_lo t_hi count exposure\n";
  char buf[160];
  for (const auto& r : dataset.rows) {
    const char* part = r.part == Part::I ? "I" : (r.part == Part::II ? "II" : "III");
    std::snprintf(buf, sizeof buf, "%s %d %.17g %.17g %g %g\n", part, r.event, r.t_lo, r.t_hi,
                  r.count, r.exposure);
    out += buf;
  }
  return out;
}

Predictor predictor_part1(const Theta& theta, const Context& ctx) {
  const double span = ctx.catalog->window().t_end;
  if (!(span > 0.0)) throw std::invalid_argument("predictor_part1: window length must be positive");
  const double mu = link(theta[kMu], (*ctx.priors)[kMu]);
  Predictor p;
  if (!(mu > 0.0)) {
    p.value = -kInf;
    p.finite = false;
    return p;
  }
  p.value = std::log(span) + std::log(mu);
  p.gradient[kMu] = link_jacobian(theta[kMu], (*ctx.priors)[kMu]) / mu;
  return p;
}

Predictor predictor_part2(const Theta& theta, const SurrogateRow& row, const Context& ctx) {
  if (row.part != Part::II) throw std::invalid_argument("predictor_part2: row is not part II");
  const EventCatalog& cat = *ctx.catalog;
  const Event& ev = cat.events()[static_cast<std::size_t>(row.event)];
  const EtasParams params = natural_params(theta, *ctx.priors);
  const double dm = ev.magnitude - cat.m_cutoff();

  const double gm = magnitude_factor(ev.magnitude, params.K, params.alpha, cat.m_cutoff());
  const double integral = omori_integral(row.t_lo, row.t_hi, ev.time, params.c, params.p);

  Predictor p;
  if (!(gm * integral > kUnderflow)) {
    p.value = -kInf;
    p.finite = false;
    return p;
  }
  p.value = std::log(gm) + std::log(integral);
  const Theta jac = jacobians(theta, *ctx.priors);
  p.gradient[kK] = jac[kK] / params.K;
  p.gradient[kAlpha] = dm * jac[kAlpha];
  p.gradient[kC] =
      omori_integral_dc(row.t_lo, row.t_hi, ev.time, params.c, params.p) / integral * jac[kC];
  p.gradient[kP] =
      omori_integral_dp(row.t_lo, row.t_hi, ev.time, params.c, params.p) / integral * jac[kP];
  return p;
}

Predictor predictor_part3(const Theta& theta, int event_index, const Context& ctx) {
  const EventCatalog& cat = *ctx.catalog;
  const Event& ev = cat.events()[static_cast<std::size_t>(event_index)];
  const EtasParams params = natural_params(theta, *ctx.priors);
  const double m0 = cat.m_cutoff();

  // value must be bit-compatible with the exact likelihood's intensity
  const double lambda = conditional_intensity(ev.time, cat, params);

  Predictor p;
  if (!(lambda > 0.0)) {
    p.value = -kInf;
    p.finite = false;
    return p;
  }
  p.value = std::log(lambda);

  NeumaierSum d_K, d_alpha, d_c, d_p;
  for (const Event& past : cat.history_before(ev.time)) {
    const double dm = past.magnitude - m0;
    const double edm = std::exp(params.alpha * dm);
    const double dt = ev.time - past.time;
    const double w = omori_kernel(dt, params.c, params.p);
    d_K.add(edm * w);
    d_alpha.add(params.K * dm * edm * w);
    d_c.add(params.K * edm * omori_kernel_dc(dt, params.c, params.p));
    d_p.add(params.K * edm * omori_kernel_dp(dt, params.c, params.p));
  }
  const Theta jac = jacobians(theta, *ctx.priors);
  p.gradient[kMu] = jac[kMu] / lambda;
  p.gradient[kK] = d_K.value() / lambda * jac[kK];
  p.gradient[kAlpha] = d_alpha.value() / lambda * jac[kAlpha];
  p.gradient[kC] = d_c.value() / lambda * jac[kC];
  p.gradient[kP] = d_p.value() / lambda * jac[kP];
  return p;
}

LinearizedModel linearize(const Theta& theta_star, const SurrogateDataset& surrogate,
                          const Context& ctx) {
  LinearizedModel model;
  model.theta_star = theta_star;
  model.surrogate = &surrogate;
  model.predictors.reserve(surrogate.rows.size());
  for (const auto& row : surrogate.rows) {
    Predictor p;
    switch (row.part) {
      case Part::I:
        p = predictor_part1(theta_star, ctx);
        break;
      case Part::II:
        p = predictor_part2(theta_star, row, ctx);
        break;
      case Part::III:
        p = predictor_part3(theta_star, row.event, ctx);
        break;
    }
    if (!p.finite && row.part == Part::II) ++model.dropped_rows;
    model.predictors.push_back(p);
  }
  return model;
}

double approx_log_likelihood(const Theta& theta, const LinearizedModel& model) {
  Theta d;
  for (std::size_t j = 0; j < 5; ++j) d[j] = theta[j] - model.theta_star[j];
  NeumaierSum total;
  for (std::size_t i = 0; i < model.predictors.size(); ++i) {
    const auto& row = model.surrogate->rows[i];
    const auto& pred = model.predictors[i];
    if (!pred.finite) {
      if (row.part == Part::III) return -kInf;  // event at zero intensity
      continue;                                 // inert part-I/II row
    }
    NeumaierSum lin;
    lin.add(pred.value);
    for (std::size_t j = 0; j < 5; ++j) lin.add(pred.gradient[j] * d[j]);
    const double eta = lin.value();
    switch (row.part) {
      case Part::I:
      case Part::II:
        total.add(-std::exp(eta));
        break;
      case Part::III:
        total.add(eta);
        break;
    }
  }
  return total.value();
}

}  // namespace etas
