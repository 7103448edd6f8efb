#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "etas/config.hpp"
#include "etas/result_io.hpp"
#include "etas/simulator.hpp"

using namespace etas;

TEST_CASE("sim config parsing and field errors") {
  const std::string good = R"({
    "window": {"t_start": 0, "t_end": 100, "m_cutoff": 3.0},
    "params": {"mu": 0.3, "K": 0.1, "alpha": 1.5, "c": 0.03, "p": 1.15},
    "gr_beta": 2.3,
    "seed": 7
  })";
  const SimConfig cfg = parse_sim_config(good);
  CHECK(cfg.params.mu == doctest::Approx(0.3));
  CHECK(cfg.seed == 7);
  CHECK(cfg.max_events == 1000000);

  auto expect_error_naming = [](const std::string& text, const std::string& field) {
    try {
      parse_sim_config(text);
      FAIL("expected ConfigError for missing ", field);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(field) != std::string::npos);
    }
  };
  expect_error_naming(R"({
    "window": {"t_start": 0, "t_end": 100, "m_cutoff": 3.0},
    "params": {"K": 0.1, "alpha": 1.5, "c": 0.03, "p": 1.15},
    "gr_beta": 2.3})",
                      "mu");
  expect_error_naming(R"({
    "params": {"mu": 0.3, "K": 0.1, "alpha": 1.5, "c": 0.03, "p": 1.15},
    "gr_beta": 2.3})",
                      "window");
  expect_error_naming(R"({
    "window": {"t_start": 0, "t_end": 100, "m_cutoff": 3.0},
    "params": {"mu": 0.3, "K": 0.1, "alpha": 1.5, "c": 0.03, "p": 1.15}})",
                      "gr_beta");
  CHECK_THROWS_AS(parse_sim_config("not json"), ConfigError);
}

TEST_CASE("fit config parsing with presets and explicit priors") {
  const std::string preset = R"({
    "window": {"t_start": 0, "t_end": 100, "m_cutoff": 3.0},
    "priors": {"preset": "replicate"}
  })";
  const FitFileConfig a = parse_fit_config(preset);
  CHECK(a.fit.priors[kK].family == PriorFamily::lognormal);
  CHECK(a.fit.binning.delta == doctest::Approx(0.1));
  CHECK(a.fit.max_outer == 100);
  CHECK(a.catalog.ties == TiePolicy::reject);

  const std::string scaled = R"({
    "window": {"t_start": 0, "t_end": 100, "m_cutoff": 3.0},
    "priors": {"preset": "gamma", "gamma_scale": 2.0},
    "binning": {"delta": 0.2, "growth": 3.0, "n_max": 5},
    "theta0": [0.1, 0, 0, 0, -0.1],
    "max_outer": 40,
    "convergence_frac": 0.02,
    "ties": "jitter"
  })";
  const FitFileConfig b = parse_fit_config(scaled);
  CHECK(b.fit.priors[kMu].a == doctest::Approx(2.0 * gamma_priors()[kMu].a));
  CHECK(b.fit.binning.n_max == 5);
  CHECK(b.fit.theta0[0] == doctest::Approx(0.1));
  CHECK(b.fit.max_outer == 40);
  CHECK(b.catalog.ties == TiePolicy::jitter);

  const std::string explicit_priors = R"({
    "window": {"t_start": 0, "t_end": 100, "m_cutoff": 3.0},
    "priors": {
      "mu": {"family": "gamma", "shape": 0.1, "rate": 0.1},
      "K": {"family": "lognormal", "meanlog": -1.0, "sdlog": 2.03},
      "alpha": {"family": "uniform", "lo": 0, "hi": 10},
      "c": {"family": "uniform", "lo": 0, "hi": 10},
      "p": {"family": "shifted_gamma", "shape": 0.1, "rate": 0.5, "shift": 1.0}
    }
  })";
  const FitFileConfig c = parse_fit_config(explicit_priors);
  CHECK(c.fit.priors[kK].b == doctest::Approx(2.03));
  CHECK(c.fit.priors[kP].shift == doctest::Approx(1.0));

  try {
    parse_fit_config(R"({"window": {"t_start": 0, "t_end": 1, "m_cutoff": 3}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("priors") != std::string::npos);
  }
}

TEST_CASE("mcmc config parsing") {
  const std::string text = R"({
    "window": {"t_start": 0, "t_end": 100, "m_cutoff": 3.0},
    "priors": {"preset": "gamma"},
    "n_iter": 2000, "burn_in": 500, "seed": 9,
    "proposal_scales": [0.4, 0.4, 0.3, 0.3, 0.3],
    "prior_only": true
  })";
  const McmcFileConfig cfg = parse_mcmc_config(text);
  CHECK(cfg.mcmc.n_iter == 2000);
  CHECK(cfg.mcmc.burn_in == 500);
  CHECK(cfg.mcmc.proposal_scales[4] == doctest::Approx(0.3));
  CHECK(cfg.mcmc.prior_only);

  CHECK_THROWS_AS(parse_mcmc_config(R"({
    "window": {"t_start": 0, "t_end": 100, "m_cutoff": 3.0},
    "priors": {"preset": "gamma"},
    "n_iter": 100, "burn_in": 100})"),
                  std::invalid_argument);
}

TEST_CASE("result file round-trips") {
  const EventCatalog cat =
      simulate({{1.0, 0.0, 1.0, 0.1, 1.5}, {0.0, 100.0, 3.0}, 2.3, 81});
  FitConfig config;
  config.priors = gamma_priors();
  config.priors[kMu] = PriorSpec::LogNormal(std::log(0.5), 1.0);
  const PosteriorResult res = fit(cat, config);
  REQUIRE(res.converged);

  const std::string text = write_result(res);
  CHECK(write_result(res) == text);  // deterministic bytes

  const PosteriorResult back = read_result(text);
  CHECK(back.converged == res.converged);
  CHECK(back.iterations == res.iterations);
  CHECK(back.priors[kMu].family == PriorFamily::lognormal);
  REQUIRE(back.trace.size() == res.trace.size());
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    CHECK(back.trace[i].exact_log_post == res.trace[i].exact_log_post);
    CHECK(back.trace[i].alpha == res.trace[i].alpha);
  }
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(back.theta_star[j] == res.theta_star[j]);
    CHECK(back.gaussian.mean[j] == res.gaussian.mean[j]);
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(back.gaussian.covariance(j, k) == res.gaussian.covariance(j, k));
    }
  }

  CHECK_THROWS(read_result("converged 1\n"));
  CHECK_THROWS(read_result("nonsense line here\n"));
}
