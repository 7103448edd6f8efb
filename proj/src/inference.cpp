#include "etas/inference.hpp"

#include <cmath>
#include <limits>

#include "etas/numeric.hpp"

namespace etas {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExpCap = 700.0;  // exp argument beyond this is treated as overflow

double capped_exp(double x) { return x > kExpCap ? kInf : std::exp(x); }

Vec5 to_vec(const Theta& t) {
  Vec5 v;
  for (int i = 0; i < 5; ++i) v(i) = t[static_cast<std::size_t>(i)];
  return v;
}

Theta to_theta(const Vec5& v) {
  Theta t;
  for (int i = 0; i < 5; ++i) t[static_cast<std::size_t>(i)] = v(i);
  return t;
}
}  // namespace

void FitConfig::validate() const {
  binning.validate();
  for (const auto& p : priors) p.validate();
  if (max_outer < 1) throw std::invalid_argument("FitConfig: max_outer must be >= 1");
  if (!(convergence_frac > 0.0)) {
    throw std::invalid_argument("FitConfig: convergence_frac must be > 0");
  }
}

Theta GaussianApprox::sd() const {
  Theta s;
  for (int i = 0; i < 5; ++i) s[static_cast<std::size_t>(i)] = std::sqrt(covariance(i, i));
  return s;
}

double linearized_log_posterior(const Theta& theta, const LinearizedModel& model) {
  const double lik = approx_log_likelihood(theta, model);
  NeumaierSum prior;
  for (double t : theta) prior.add(-0.5 * t * t);
  return lik + prior.value();
}

namespace {

struct ObjectiveEval {
  double value;
  Vec5 gradient;
  Mat5 neg_hessian;  // of the objective; positive definite (>= identity)
};

ObjectiveEval eval_linearized(const Vec5& theta, const LinearizedModel& model) {
  const Vec5 d = theta - to_vec(model.theta_star);
  ObjectiveEval out;
  NeumaierSum value;
  out.gradient.setZero();
  out.neg_hessian.setZero();
  for (std::size_t i = 0; i < model.predictors.size(); ++i) {
    const auto& row = model.surrogate->rows[i];
    const auto& pred = model.predictors[i];
    if (!pred.finite) continue;
    const Vec5 g = to_vec(pred.gradient);
    const double eta = pred.value + g.dot(d);
    if (row.exposure > 0.0) {
      const double e = row.exposure * capped_exp(eta);
      value.add(-e);
      if (std::isinf(e)) continue;  // step halving will reject this iterate
      out.gradient -= e * g;
      out.neg_hessian += e * (g * g.transpose());
    }
    if (row.count > 0.0) {
      value.add(row.count * eta);
      out.gradient += row.count * g;
    }
  }
  value.add(-0.5 * theta.squaredNorm());
  out.gradient -= theta;
  out.neg_hessian += Mat5::Identity();
  out.value = value.value();
  return out;
}

}  // namespace

GaussianApprox inner_mode(const LinearizedModel& model) {
  Vec5 theta = to_vec(model.theta_star);
  ObjectiveEval cur = eval_linearized(theta, model);
  if (!std::isfinite(cur.value)) {
    throw std::runtime_error("inner_mode: linearized posterior not finite at the expansion point");
  }
  constexpr int kMaxNewton = 200;
  double decrement = kInf;  // Newton decrement grad' H^-1 grad; scale-aware stop
  for (int it = 0; it < kMaxNewton; ++it) {
    if (cur.gradient.norm() < 1e-8) break;
    const Vec5 step = cur.neg_hessian.ldlt().solve(cur.gradient);
    if (!step.allFinite()) {
      throw std::runtime_error("inner_mode: non-finite Newton step (sentinel contamination?)");
    }
    decrement = cur.gradient.dot(step);
    if (decrement < 1e-12 * (1.0 + std::abs(cur.value))) break;
    double scale = 1.0;
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      const Vec5 cand = theta + scale * step;
      const ObjectiveEval trial = eval_linearized(cand, model);
      if (std::isfinite(trial.value) && trial.value >= cur.value) {
        theta = cand;
        cur = trial;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break;  // stalled at numerical resolution; decrement check below
  }
  if (!(cur.gradient.norm() < 1e-6 || decrement < 1e-10 * (1.0 + std::abs(cur.value)))) {
    throw std::runtime_error("inner_mode: Newton failed to reach the mode");
  }
  GaussianApprox g;
  g.mean = to_theta(theta);
  g.covariance = cur.neg_hessian.inverse();
  g.covariance = 0.5 * (g.covariance + g.covariance.transpose().eval());
  return g;
}

LineSearchResult line_search(const Theta& theta_old, const Theta& theta_hat,
                             const std::function<double(const Theta&)>& exact_log_post) {
  const double base = exact_log_post(theta_old);
  constexpr double kFloor = 1.0 / 1024.0;  // 2^-10
  LineSearchResult fallback;
  bool have_fallback = false;
  for (double alpha = 1.0; alpha >= kFloor; alpha *= 0.5) {
    Theta cand;
    for (std::size_t j = 0; j < 5; ++j) {
      cand[j] = theta_old[j] + alpha * (theta_hat[j] - theta_old[j]);
    }
    const double v = exact_log_post(cand);
    if (!std::isfinite(v)) continue;
    if (v >= base) return LineSearchResult{alpha, cand, false};
    fallback = LineSearchResult{alpha, cand, true};  // smallest finite step so far
    have_fallback = true;
  }
  if (have_fallback) return fallback;  // no alpha improved: floor step with warning flag
  throw std::runtime_error("line_search: exact posterior is -inf at every candidate");
}

double exact_log_posterior(const EventCatalog& catalog, const PriorSet& priors,
                           const Theta& theta) {
  const EtasParams params = natural_params(theta, priors);
  const double lik = exact_log_likelihood(catalog, params);
  NeumaierSum prior;
  for (double t : theta) prior.add(-0.5 * t * t);
  return lik + prior.value();
}

PosteriorResult fit(const EventCatalog& catalog, const FitConfig& config) {
  config.validate();
  if (catalog.empty()) throw std::invalid_argument("fit: empty catalog");

  const SurrogateDataset surrogate = build_surrogate(catalog, config.binning);
  const Context ctx{&catalog, &config.priors};
  auto objective = [&](const Theta& t) { return exact_log_posterior(catalog, config.priors, t); };

  PosteriorResult result;
  result.priors = config.priors;
  result.binning = config.binning;

  Theta theta_star = config.theta0;
  for (int iter = 1; iter <= config.max_outer; ++iter) {
    const LinearizedModel model = linearize(theta_star, surrogate, ctx);
    result.dropped_rows = model.dropped_rows;

    GaussianApprox gauss;
    try {
      gauss = inner_mode(model);
    } catch (const std::runtime_error&) {
      result.iterations = iter;
      result.converged = false;
      result.theta_star = theta_star;
      return result;
    }

    LineSearchResult ls;
    try {
      ls = line_search(theta_star, gauss.mean, objective);
    } catch (const std::runtime_error&) {
      result.iterations = iter;
      result.converged = false;
      result.theta_star = theta_star;
      return result;
    }

    result.trace.push_back(
        IterationRecord{ls.theta_new, ls.alpha, objective(ls.theta_new), ls.hit_floor});

    const Theta sd = gauss.sd();
    bool small = true;
    for (std::size_t j = 0; j < 5; ++j) {
      if (std::abs(ls.theta_new[j] - theta_star[j]) >= config.convergence_frac * sd[j]) {
        small = false;
        break;
      }
    }
    theta_star = ls.theta_new;
    result.iterations = iter;
    if (small) {
      result.converged = true;
      break;
    }
  }

  result.theta_star = theta_star;
  // final Gaussian approximation, centered at the converged point
  const LinearizedModel final_model = linearize(theta_star, surrogate, ctx);
  result.dropped_rows = final_model.dropped_rows;
  try {
    result.gaussian = inner_mode(final_model);
  } catch (const std::runtime_error&) {
    result.converged = false;
    result.gaussian.mean = theta_star;
    result.gaussian.covariance = Mat5::Identity();
  }
  return result;
}

std::vector<EtasParams> sample_posterior(const PosteriorResult& result, std::size_t n,
                                         std::uint64_t seed, bool force) {
  if (!result.converged && !force) {
    throw std::runtime_error("sample_posterior: fit did not converge (pass force to override)");
  }
  Eigen::LLT<Mat5> llt(result.gaussian.covariance +
                       1e-15 * Mat5::Identity());  // guards the degenerate zero-covariance case
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("sample_posterior: covariance is not positive definite");
  }
  const Mat5 chol = llt.matrixL();
  const Vec5 mean = to_vec(result.gaussian.mean);

  Rng rng(seed);
  std::vector<EtasParams> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec5 z;
    for (int j = 0; j < 5; ++j) z(j) = rng.normal();
    const Theta theta = to_theta(mean + chol * z);
    out.push_back(natural_params(theta, result.priors));
  }
  return out;
}

std::array<SummaryRow, 5> posterior_summary(const PosteriorResult& result, std::size_t n,
                                            std::uint64_t seed, bool force) {
  const auto draws = sample_posterior(result, n, seed, force);
  std::array<SummaryRow, 5> rows;
  for (std::size_t j = 0; j < 5; ++j) {
    std::vector<double> x(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
      const EtasParams& p = draws[i];
      x[i] = (j == kMu ? p.mu : j == kK ? p.K : j == kAlpha ? p.alpha : j == kC ? p.c : p.p);
    }
    rows[j] = SummaryRow{sample_mean(x),           sample_sd(x),
                         sample_quantile(x, 0.01), sample_quantile(x, 0.25),
                         sample_quantile(x, 0.50), sample_quantile(x, 0.75),
                         sample_quantile(x, 0.99)};
  }
  return rows;
}

}  // namespace etas
