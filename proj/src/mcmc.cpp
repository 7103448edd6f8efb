#include "etas/mcmc.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "etas/numeric.hpp"

namespace etas {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact ETAS log-likelihood with the triggered sums cached for fixed
// (alpha, c, p). K enters them linearly and mu additively, so proposals on
// those two coordinates cost O(n) instead of O(n^2).
class LikelihoodCache {
 public:
  explicit LikelihoodCache(const EventCatalog& catalog)
      : catalog_(catalog), trig_(catalog.size()), scratch_(catalog.size()) {
    const auto& events = catalog.events();
    const double m0 = catalog.m_cutoff();
    offset_.resize(events.size() + 1);
    offset_[0] = 0;
    for (std::size_t h = 0; h < events.size(); ++h) offset_[h + 1] = offset_[h] + h;
    dt_.resize(offset_.back());
    dm_.resize(offset_.back());
    log_terms_.resize(offset_.back());
    for (std::size_t h = 0; h < events.size(); ++h) {
      for (std::size_t k = 0; k < h; ++k) {
        dt_[offset_[h] + k] = events[h].time - events[k].time;
        dm_[offset_[h] + k] = events[k].magnitude - m0;
      }
    }
  }

  void refresh(double alpha, double c, double p) {
    fill(alpha, c, p, trig_, trig_comp_);
    alpha_ = alpha;
    c_ = c;
    p_ = p;
    fresh_ = true;
  }

  double log_likelihood(const EtasParams& par) {
    if (!fresh_ || par.alpha != alpha_ || par.c != c_ || par.p != p_) {
      refresh(par.alpha, par.c, par.p);
    }
    const double t_end = catalog_.window().t_end;
    NeumaierSum logl;
    logl.add(-(par.mu * t_end + par.K * trig_comp_));
    for (double s : trig_) {
      const double lam = par.mu + par.K * s;
      if (!(lam > 0.0)) return -kInf;
      logl.add(std::log(lam));
    }
    return logl.value();
  }

  // candidate evaluation without disturbing the cache; call commit() on accept
  double log_likelihood_candidate(const EtasParams& par) {
    fill(par.alpha, par.c, par.p, scratch_, scratch_comp_);
    const double t_end = catalog_.window().t_end;
    NeumaierSum logl;
    logl.add(-(par.mu * t_end + par.K * scratch_comp_));
    for (double s : scratch_) {
      const double lam = par.mu + par.K * s;
      if (!(lam > 0.0)) return -kInf;
      logl.add(std::log(lam));
    }
    cand_ = par;
    return logl.value();
  }

  void commit() {
    trig_.swap(scratch_);
    trig_comp_ = scratch_comp_;
    alpha_ = cand_.alpha;
    c_ = cand_.c;
    p_ = cand_.p;
    fresh_ = true;
  }

 private:
  void fill(double alpha, double c, double p, std::vector<double>& trig, double& comp) {
    const auto& events = catalog_.events();
    const double m0 = catalog_.m_cutoff();
    const double t_end = catalog_.window().t_end;
    if (c != log_terms_c_) {
      for (std::size_t i = 0; i < dt_.size(); ++i) log_terms_[i] = std::log1p(dt_[i] / c);
      log_terms_c_ = c;
    }
    NeumaierSum comp_sum;
    for (std::size_t h = 0; h < events.size(); ++h) {
      NeumaierSum s;
      for (std::size_t i = offset_[h]; i < offset_[h + 1]; ++i) {
        s.add(std::exp(alpha * dm_[i] - p * log_terms_[i]));
      }
      trig[h] = s.value();
      comp_sum.add(std::exp(alpha * (events[h].magnitude - m0)) *
                   omori_integral(events[h].time, t_end, events[h].time, c, p));
    }
    comp = comp_sum.value();
  }

  const EventCatalog& catalog_;
  std::vector<std::size_t> offset_;       // start of event h's pair block
  std::vector<double> dt_, dm_;           // flattened (t_h - t_k, m_k - M0) pairs
  std::vector<double> log_terms_;         // log1p(dt / c) for the cached c
  double log_terms_c_ = -1.0;
  std::vector<double> trig_;
  double trig_comp_ = 0.0;
  std::vector<double> scratch_;
  double scratch_comp_ = 0.0;
  double alpha_ = -1.0, c_ = -1.0, p_ = -1.0;
  EtasParams cand_{};
  bool fresh_ = false;
};

double log_prior(const Theta& theta) {
  NeumaierSum s;
  for (double t : theta) s.add(-0.5 * t * t);
  return s.value();
}

}  // namespace

void McmcConfig::validate() const {
  if (n_iter < 1) throw std::invalid_argument("McmcConfig: n_iter must be >= 1");
  if (burn_in < 0 || burn_in >= n_iter) {
    throw std::invalid_argument("McmcConfig: burn_in must be in [0, n_iter)");
  }
  for (double s : proposal_scales) {
    if (!(s > 0.0)) throw std::invalid_argument("McmcConfig: proposal scales must be > 0");
  }
  for (const auto& p : priors) p.validate();
}

McmcResult mh_sample(const EventCatalog& catalog, const McmcConfig& config) {
  config.validate();
  Rng rng(config.seed);
  LikelihoodCache cache(catalog);

  Theta theta{};
  double cur_target;
  if (config.prior_only) {
    cur_target = log_prior(theta);
  } else {
    cur_target = cache.log_likelihood(natural_params(theta, config.priors)) + log_prior(theta);
  }

  std::array<double, 5> scales = config.proposal_scales;
  std::array<int, 5> win_accept{}, win_prop{};
  std::array<int, 5> accept{}, prop{};
  int consecutive_rejects = 0;

  McmcResult result;
  result.theta_draws.reserve(static_cast<std::size_t>(config.n_iter - config.burn_in));
  result.natural_draws.reserve(result.theta_draws.capacity());

  for (int iter = 0; iter < config.n_iter; ++iter) {
    const bool tuning = iter < config.burn_in;
    for (std::size_t j = 0; j < 5; ++j) {
      Theta cand = theta;
      cand[j] += scales[j] * rng.normal();

      double cand_target;
      bool used_candidate_cache = false;
      if (config.prior_only) {
        cand_target = log_prior(cand);
      } else {
        const EtasParams par = natural_params(cand, config.priors);
        if (j == kMu || j == kK) {
          cand_target = cache.log_likelihood(par) + log_prior(cand);
        } else {
          cand_target = cache.log_likelihood_candidate(par) + log_prior(cand);
          used_candidate_cache = true;
        }
      }

      const bool ok = std::isfinite(cand_target) &&
                      std::log(rng.uniform()) < cand_target - cur_target;
      ++win_prop[j];
      if (!tuning) ++prop[j];
      if (ok) {
        theta = cand;
        cur_target = cand_target;
        if (used_candidate_cache) cache.commit();
        ++win_accept[j];
        if (!tuning) ++accept[j];
        consecutive_rejects = 0;
      } else {
        if (++consecutive_rejects >= 10000) result.stuck_warning = true;
      }

      if (tuning && win_prop[j] == 50) {
        const double rate = static_cast<double>(win_accept[j]) / 50.0;
        if (rate > 0.40) scales[j] *= 1.3;
        if (rate < 0.20) scales[j] /= 1.3;
        win_prop[j] = 0;
        win_accept[j] = 0;
      }
    }
    if (!tuning) {
      result.theta_draws.push_back(theta);
      result.natural_draws.push_back(natural_params(theta, config.priors));
    }
  }

  for (std::size_t j = 0; j < 5; ++j) {
    result.acceptance[j] = prop[j] > 0 ? static_cast<double>(accept[j]) / prop[j] : 0.0;
    result.tuned_scales[j] = scales[j];
  }
  return result;
}

CoordDiagnostics diagnose_series(const std::vector<double>& chain) {
  if (chain.empty()) throw std::invalid_argument("diagnose_series: empty chain");
  const std::size_t n = chain.size();
  const double m = sample_mean(chain);

  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = chain[i] - m;

  auto gamma_at = [&](std::size_t lag) {
    NeumaierSum s;
    for (std::size_t i = 0; i + lag < n; ++i) s.add(centered[i] * centered[i + lag]);
    return s.value() / static_cast<double>(n);
  };

  const double g0 = gamma_at(0);
  CoordDiagnostics d{};
  d.mean = m;
  d.sd = n > 1 ? sample_sd(chain) : 0.0;
  d.q01 = sample_quantile(chain, 0.01);
  d.q25 = sample_quantile(chain, 0.25);
  d.q50 = sample_quantile(chain, 0.50);
  d.q75 = sample_quantile(chain, 0.75);
  d.q99 = sample_quantile(chain, 0.99);
  if (!(g0 > 0.0)) {
    d.degenerate = true;
    d.ess = 0.0;
    return d;
  }

  // Geyer initial positive sequence: sum paired autocovariances while positive
  NeumaierSum paired;
  for (std::size_t mlag = 0; 2 * mlag + 1 < n; ++mlag) {
    const double pair = gamma_at(2 * mlag) + gamma_at(2 * mlag + 1);
    if (pair <= 0.0) break;
    paired.add(pair);
  }
  const double tau = std::max(2.0 * paired.value() / g0 - 1.0, 1e-12);
  d.ess = static_cast<double>(n) / tau;
  d.degenerate = false;
  return d;
}

std::array<CoordDiagnostics, 5> chain_diagnostics(const McmcResult& result) {
  std::array<CoordDiagnostics, 5> out;
  for (std::size_t j = 0; j < 5; ++j) {
    std::vector<double> x(result.natural_draws.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const EtasParams& p = result.natural_draws[i];
      x[i] = (j == kMu ? p.mu : j == kK ? p.K : j == kAlpha ? p.alpha : j == kC ? p.c : p.p);
    }
    out[j] = diagnose_series(x);
  }
  return out;
}

std::string chains_table(const McmcResult& result) {
  std::string out = "theta_mu theta_K theta_alpha theta_c theta_p mu K alpha c p\n";
  char buf[320];
  for (std::size_t i = 0; i < result.theta_draws.size(); ++i) {
    const Theta& t = result.theta_draws[i];
    const EtasParams& p = result.natural_draws[i];
    std::snprintf(buf, sizeof buf,
                  "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", t[0], t[1],
                  t[2], t[3], t[4], p.mu, p.K, p.alpha, p.c, p.p);
    out += buf;
  }
  return out;
}

}  // namespace etas
