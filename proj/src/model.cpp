#include "etas/model.hpp"

#include <cmath>
#include <limits>

#include "etas/numeric.hpp"

namespace etas {

namespace {
constexpr double kPOne = 1e-8;  // |p-1| below this takes the log branch
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void EtasParams::validate() const {
  if (!(mu >= 0.0) || !(K >= 0.0) || !(alpha >= 0.0)) {
    throw std::invalid_argument("EtasParams: mu, K, alpha must be >= 0");
  }
  if (!(c > 0.0)) throw std::invalid_argument("EtasParams: c must be > 0");
  if (!(p > 1.0)) throw std::invalid_argument("EtasParams: p must be > 1");
}

void LegacyEtasParams::validate() const {
  if (!(mu >= 0.0) || !(K >= 0.0) || !(alpha >= 0.0) || !(c >= 0.0)) {
    throw std::invalid_argument("LegacyEtasParams: mu, K, alpha, c must be >= 0");
  }
  if (!(p > 1.0)) throw std::invalid_argument("LegacyEtasParams: p must be > 1");
}

double omori_kernel(double dt, double c, double p) {
  if (dt < 0.0) throw std::domain_error("omori_kernel: dt < 0");
  if (!(c > 0.0)) throw std::domain_error("omori_kernel: c <= 0");
  return std::exp(-p * std::log1p(dt / c));
}

double omori_kernel_dc(double dt, double c, double p) {
  // d/dc (dt/c + 1)^-p = p dt / c^2 * (dt/c + 1)^-(p+1)
  if (dt < 0.0) throw std::domain_error("omori_kernel_dc: dt < 0");
  return p * dt / (c * c) * std::exp(-(p + 1.0) * std::log1p(dt / c));
}

double omori_kernel_dp(double dt, double c, double p) {
  if (dt < 0.0) throw std::domain_error("omori_kernel_dp: dt < 0");
  const double l = std::log1p(dt / c);
  return -l * std::exp(-p * l);
}

double exp_kernel(double dt, double alpha, double beta) {
  if (dt < 0.0) throw std::domain_error("exp_kernel: dt < 0");
  if (alpha < 0.0 || beta < 0.0) throw std::domain_error("exp_kernel: alpha, beta must be >= 0");
  return beta * std::exp(-alpha * dt);
}

double omori_integral(double t_lo, double t_hi, double t_h, double c, double p) {
  if (!(c > 0.0)) throw std::domain_error("omori_integral: c <= 0");
  if (t_lo < t_h || t_hi < t_lo) throw std::domain_error("omori_integral: need t_h <= t_lo <= t_hi");
  if (t_hi == t_lo) return 0.0;
  if (std::isinf(t_hi)) {
    if (!(p > 1.0 + kPOne)) {
      throw std::domain_error("omori_integral: diverges on infinite bin unless p > 1");
    }
    return c / (p - 1.0) * std::exp((1.0 - p) * std::log1p((t_lo - t_h) / c));
  }
  const double la = std::log1p((t_lo - t_h) / c);
  const double lb = std::log1p((t_hi - t_h) / c);
  if (std::abs(p - 1.0) < kPOne) {
    return c * (lb - la);
  }
  return c / (p - 1.0) * (std::exp((1.0 - p) * la) - std::exp((1.0 - p) * lb));
}

namespace {
// d/dc and d/dp of the antiderivative G(t) = -c/(p-1) ((t-t_h)/c + 1)^{1-p}
double anti_dc(double t, double t_h, double c, double p) {
  const double x = (t - t_h) / c + 1.0;
  return -std::pow(x, 1.0 - p) / (p - 1.0) - (t - t_h) / c * std::pow(x, -p);
}
double anti_dp(double t, double t_h, double c, double p) {
  const double lx = std::log1p((t - t_h) / c);
  const double x1p = std::exp((1.0 - p) * lx);
  return c * x1p * (1.0 / ((p - 1.0) * (p - 1.0)) + lx / (p - 1.0));
}
}  // namespace

double omori_integral_dc(double t_lo, double t_hi, double t_h, double c, double p) {
  if (!(c > 0.0)) throw std::domain_error("omori_integral_dc: c <= 0");
  if (t_lo < t_h || t_hi < t_lo) throw std::domain_error("omori_integral_dc: bad bin");
  if (t_hi == t_lo) return 0.0;
  if (std::isinf(t_hi)) {
    // d/dc [ c/(p-1) A^{1-p} ], A = (t_lo - t_h)/c + 1
    const double a = (t_lo - t_h) / c + 1.0;
    return std::pow(a, 1.0 - p) / (p - 1.0) + (t_lo - t_h) / c * std::pow(a, -p);
  }
  return anti_dc(t_hi, t_h, c, p) - anti_dc(t_lo, t_h, c, p);
}

double omori_integral_dp(double t_lo, double t_hi, double t_h, double c, double p) {
  if (!(c > 0.0)) throw std::domain_error("omori_integral_dp: c <= 0");
  if (t_lo < t_h || t_hi < t_lo) throw std::domain_error("omori_integral_dp: bad bin");
  if (t_hi == t_lo) return 0.0;
  if (std::isinf(t_hi)) {
    return -anti_dp(t_lo, t_h, c, p);
  }
  return anti_dp(t_hi, t_h, c, p) - anti_dp(t_lo, t_h, c, p);
}

double magnitude_factor(double m, double K, double alpha, double M0) {
  if (m < M0) throw std::domain_error("magnitude_factor: magnitude below cutoff");
  return K * std::exp(alpha * (m - M0));
}

double conditional_intensity(double t, const EventCatalog& catalog, const EtasParams& params) {
  const double M0 = catalog.m_cutoff();
  NeumaierSum s;
  for (const Event& e : catalog.history_before(t)) {
    s.add(magnitude_factor(e.magnitude, params.K, params.alpha, M0) *
          omori_kernel(t - e.time, params.c, params.p));
  }
  return params.mu + s.value();
}

double compensator(double t, const EventCatalog& catalog, const EtasParams& params) {
  const double M0 = catalog.m_cutoff();
  NeumaierSum s;
  for (const Event& e : catalog.history_before(t)) {
    s.add(magnitude_factor(e.magnitude, params.K, params.alpha, M0) *
          omori_integral(e.time, t, e.time, params.c, params.p));
  }
  return params.mu * t + s.value();
}

double exact_log_likelihood(const EventCatalog& catalog, const EtasParams& params) {
  const double t_end = catalog.window().t_end;
  NeumaierSum logl;
  logl.add(-compensator(t_end, catalog, params));
  for (const Event& e : catalog.events()) {
    const double lam = conditional_intensity(e.time, catalog, params);
    if (!(lam > 0.0)) return -kInf;
    logl.add(std::log(lam));
  }
  return logl.value();
}

double legacy_log_likelihood(const EventCatalog& catalog, const LegacyEtasParams& params) {
  params.validate();
  const double M0 = catalog.m_cutoff();
  const double t_end = catalog.window().t_end;
  const double norm = std::pow(params.c, params.p - 1.0) / (params.p - 1.0);

  auto kern = [&](double dt) { return norm * std::pow(dt + params.c, -params.p); };
  // antiderivative of (dt + c)^-p: (dt + c)^{1-p} / (1 - p)
  auto kern_int = [&](double dt_hi) {
    return norm / (params.p - 1.0) *
           (std::pow(params.c, 1.0 - params.p) - std::pow(dt_hi + params.c, 1.0 - params.p));
  };

  NeumaierSum comp;
  comp.add(params.mu * t_end);
  for (const Event& e : catalog.events()) {
    comp.add(params.K * std::exp(params.alpha * (e.magnitude - M0)) * kern_int(t_end - e.time));
  }

  NeumaierSum logl;
  logl.add(-comp.value());
  const auto& events = catalog.events();
  for (std::size_t h = 0; h < events.size(); ++h) {
    NeumaierSum lam;
    lam.add(params.mu);
    for (std::size_t k = 0; k < h; ++k) {
      lam.add(params.K * std::exp(params.alpha * (events[k].magnitude - M0)) *
              kern(events[h].time - events[k].time));
    }
    const double v = lam.value();
    if (!(v > 0.0)) return -kInf;
    logl.add(std::log(v));
  }
  return logl.value();
}

EtasParams convert_legacy(const LegacyEtasParams& params) {
  params.validate();
  if (!(params.c > 0.0)) throw std::invalid_argument("convert_legacy: c must be > 0");
  if (std::abs(params.p - 1.0) < kPOne) {
    throw std::invalid_argument("convert_legacy: p = 1 has no normalized-kernel equivalent");
  }
  return EtasParams{params.mu, params.K / (params.c * (params.p - 1.0)), params.alpha, params.c,
                    params.p};
}

}  // namespace etas
