#include "etas/priors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>

#include "etas/numeric.hpp"

namespace etas {

namespace {

std::atomic<std::uint64_t> g_clamp_count{0};
constexpr double kThetaClamp = 8.0;

const boost::math::normal_distribution<double>& std_normal() {
  static const boost::math::normal_distribution<double> d(0.0, 1.0);
  return d;
}

boost::math::gamma_distribution<double> gamma_dist(double shape, double rate) {
  return boost::math::gamma_distribution<double>(shape, 1.0 / rate);
}

}  // namespace

PriorSpec PriorSpec::Uniform(double lo, double hi) {
  PriorSpec s{PriorFamily::uniform, lo, hi};
  s.validate();
  return s;
}
PriorSpec PriorSpec::Gamma(double shape, double rate) {
  PriorSpec s{PriorFamily::gamma, shape, rate};
  s.validate();
  return s;
}
PriorSpec PriorSpec::LogNormal(double meanlog, double sdlog) {
  PriorSpec s{PriorFamily::lognormal, meanlog, sdlog};
  s.validate();
  return s;
}
PriorSpec PriorSpec::ShiftedGamma(double shape, double rate, double shift) {
  PriorSpec s{PriorFamily::shifted_gamma, shape, rate, shift};
  s.validate();
  return s;
}

void PriorSpec::validate() const {
  switch (family) {
    case PriorFamily::uniform:
      if (!(a < b)) throw std::invalid_argument("PriorSpec: uniform needs a < b");
      break;
    case PriorFamily::gamma:
    case PriorFamily::shifted_gamma:
      if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("PriorSpec: gamma needs shape, rate > 0");
      }
      break;
    case PriorFamily::lognormal:
      if (!(b > 0.0)) throw std::invalid_argument("PriorSpec: lognormal needs sdlog > 0");
      break;
  }
}

double PriorSpec::quantile(double u) const {
  switch (family) {
    case PriorFamily::uniform:
      return a + (b - a) * u;
    case PriorFamily::gamma:
      return boost::math::quantile(gamma_dist(a, b), u);
    case PriorFamily::lognormal:
      return std::exp(a + b * boost::math::quantile(std_normal(), u));
    case PriorFamily::shifted_gamma:
      return shift + boost::math::quantile(gamma_dist(a, b), u);
  }
  throw std::logic_error("PriorSpec::quantile: bad family");
}

double PriorSpec::cdf(double x) const {
  switch (family) {
    case PriorFamily::uniform:
      return std::clamp((x - a) / (b - a), 0.0, 1.0);
    case PriorFamily::gamma:
      return x <= 0.0 ? 0.0 : boost::math::cdf(gamma_dist(a, b), x);
    case PriorFamily::lognormal:
      return x <= 0.0 ? 0.0 : boost::math::cdf(std_normal(), (std::log(x) - a) / b);
    case PriorFamily::shifted_gamma:
      return x <= shift ? 0.0 : boost::math::cdf(gamma_dist(a, b), x - shift);
  }
  throw std::logic_error("PriorSpec::cdf: bad family");
}

double PriorSpec::pdf(double x) const {
  switch (family) {
    case PriorFamily::uniform:
      return (x < a || x > b) ? 0.0 : 1.0 / (b - a);
    case PriorFamily::gamma:
      return x <= 0.0 ? 0.0 : boost::math::pdf(gamma_dist(a, b), x);
    case PriorFamily::lognormal: {
      if (x <= 0.0) return 0.0;
      const double z = (std::log(x) - a) / b;
      return boost::math::pdf(std_normal(), z) / (b * x);
    }
    case PriorFamily::shifted_gamma:
      return x <= shift ? 0.0 : boost::math::pdf(gamma_dist(a, b), x - shift);
  }
  throw std::logic_error("PriorSpec::pdf: bad family");
}

std::string PriorSpec::describe() const {
  char buf[96];
  switch (family) {
    case PriorFamily::uniform:
      std::snprintf(buf, sizeof buf, "uniform %.17g %.17g", a, b);
      break;
    case PriorFamily::gamma:
      std::snprintf(buf, sizeof buf, "gamma %.17g %.17g", a, b);
      break;
    case PriorFamily::lognormal:
      std::snprintf(buf, sizeof buf, "lognormal %.17g %.17g", a, b);
      break;
    case PriorFamily::shifted_gamma:
      std::snprintf(buf, sizeof buf, "shifted_gamma %.17g %.17g %.17g", a, b, shift);
      break;
  }
  return buf;
}

double link(double theta, const PriorSpec& spec) {
  if (!std::isfinite(theta)) throw std::domain_error("link: theta not finite");
  if (std::abs(theta) > kThetaClamp) {
    g_clamp_count.fetch_add(1, std::memory_order_relaxed);
    theta = std::clamp(theta, -kThetaClamp, kThetaClamp);
  }
  if (spec.family == PriorFamily::lognormal) {
    // exact: F_Y^{-1}(Phi(theta)) = exp(meanlog + sdlog * theta)
    return std::exp(spec.a + spec.b * theta);
  }
  return spec.quantile(boost::math::cdf(std_normal(), theta));
}

double link_jacobian(double theta, const PriorSpec& spec) {
  if (!std::isfinite(theta)) throw std::domain_error("link_jacobian: theta not finite");
  theta = std::clamp(theta, -kThetaClamp, kThetaClamp);
  const double phi = boost::math::pdf(std_normal(), theta);
  switch (spec.family) {
    case PriorFamily::lognormal:
      return spec.b * std::exp(spec.a + spec.b * theta);
    case PriorFamily::uniform:
      return phi * (spec.b - spec.a);
    case PriorFamily::gamma:
    case PriorFamily::shifted_gamma: {
      // evaluate the density at the unshifted quantile so deep-tail values
      // do not round onto the support boundary when the shift is added
      const double u = boost::math::cdf(std_normal(), theta);
      const double q = boost::math::quantile(gamma_dist(spec.a, spec.b), u);
      const double density = boost::math::pdf(gamma_dist(spec.a, spec.b), q);
      if (!(density > 0.0) || !std::isfinite(density)) {
        throw std::runtime_error("link_jacobian: target density vanishes at eta");
      }
      return phi / density;
    }
  }
  throw std::logic_error("link_jacobian: bad family");
}

double link_inverse(double y, const PriorSpec& spec) {
  if (spec.family == PriorFamily::lognormal) {
    return (std::log(y) - spec.a) / spec.b;
  }
  const double u = spec.cdf(y);
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::domain_error("link_inverse: y outside the prior support");
  }
  return boost::math::quantile(std_normal(), u);
}

std::uint64_t link_clamp_count() { return g_clamp_count.load(std::memory_order_relaxed); }

EtasParams natural_params(const Theta& theta, const PriorSet& priors) {
  EtasParams out{link(theta[kMu], priors[kMu]), link(theta[kK], priors[kK]),
                 link(theta[kAlpha], priors[kAlpha]), link(theta[kC], priors[kC]),
                 link(theta[kP], priors[kP])};
  // the link keeps p > 1 mathematically, but a deep-tail shifted-gamma
  // quantile can round 1 + q onto exactly 1; nudge to the nearest
  // representable admissible value so downstream validation holds
  if (!(out.p > 1.0)) out.p = std::nextafter(1.0, 2.0);
  return out;
}

Theta internal_params(const EtasParams& params, const PriorSet& priors) {
  return Theta{link_inverse(params.mu, priors[kMu]), link_inverse(params.K, priors[kK]),
               link_inverse(params.alpha, priors[kAlpha]), link_inverse(params.c, priors[kC]),
               link_inverse(params.p, priors[kP])};
}

PriorSpec match_lognormal_to_quantiles(double q01, double q99) {
  if (!(q01 > 0.0) || !(q01 < q99)) {
    throw std::invalid_argument("match_lognormal_to_quantiles: need 0 < q01 < q99");
  }
  const double z99 = boost::math::quantile(std_normal(), 0.99);
  const double meanlog = 0.5 * (std::log(q01) + std::log(q99));
  const double sdlog = (std::log(q99) - std::log(q01)) / (2.0 * z99);
  return PriorSpec::LogNormal(meanlog, sdlog);
}

namespace {

QuantileTable table_from_samples(std::vector<double>& x) {
  QuantileTable t{};
  t.mean = sample_mean(x);
  t.sd = sample_sd(x);
  std::sort(x.begin(), x.end());
  auto q = [&](double v) {
    const double h = v * (static_cast<double>(x.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= x.size()) return x.back();
    return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
  };
  t.q01 = q(0.01);
  t.q25 = q(0.25);
  t.q50 = q(0.50);
  t.q75 = q(0.75);
  t.q99 = q(0.99);
  return t;
}

}  // namespace

QuantileTable empirical_Kb_prior(std::size_t n, std::uint64_t seed) {
  if (n < 10000) throw std::invalid_argument("empirical_Kb_prior: n must be >= 10^4");
  Rng rng(seed);
  std::vector<double> kb(n);
  for (double& v : kb) {
    const double K = rng.uniform(0.0, 10.0);
    const double c = rng.uniform(0.0, 10.0);
    const double p = rng.uniform(1.0, 10.0);
    v = K / (c * (p - 1.0));
  }
  return table_from_samples(kb);
}

QuantileTable prior_summary(const PriorSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 10000) throw std::invalid_argument("prior_summary: n must be >= 10^4");
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = link(rng.normal(), spec);
  return table_from_samples(x);
}

PriorSet replicate_priors() {
  return PriorSet{
      PriorSpec::Gamma(0.1, 0.1),           // mu
      PriorSpec::LogNormal(-1.0, 2.03),     // K (quantile-matched, Table-3 style)
      PriorSpec::Uniform(0.0, 10.0),        // alpha
      PriorSpec::Uniform(0.0, 10.0),        // c
      PriorSpec::Uniform(1.0, 10.0),        // p
  };
}

PriorSet gamma_priors() {
  return PriorSet{
      PriorSpec::Gamma(0.1, 1.0),               // mu
      PriorSpec::Gamma(1.0, 0.5),               // K
      PriorSpec::Gamma(1.0, 0.5),               // alpha
      PriorSpec::Gamma(0.1, 1.0),               // c
      PriorSpec::ShiftedGamma(0.1, 0.5, 1.0),   // p
  };
}

PriorSet scaled_gamma_priors(double g) {
  if (!(g > 0.0)) throw std::invalid_argument("scaled_gamma_priors: scale must be > 0");
  return PriorSet{
      PriorSpec::Gamma(0.1 * g, 1.0 * g),               // mu
      PriorSpec::Gamma(1.0 * g, 0.5 * g),               // K
      PriorSpec::Gamma(1.0 * g, 0.5 * g),               // alpha
      PriorSpec::Gamma(0.1 * g, 1.0 * g),               // c
      PriorSpec::ShiftedGamma(0.1 * g, 0.5 * g, 1.0),   // p
  };
}

}  // namespace etas
