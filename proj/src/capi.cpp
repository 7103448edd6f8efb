#include "etas.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "etas/config.hpp"
#include "etas/diagnostics.hpp"
#include "etas/inference.hpp"
#include "etas/mcmc.hpp"
#include "etas/result_io.hpp"
#include "etas/simulator.hpp"

struct etas_catalog {
  etas::EventCatalog catalog;
  size_t dropped_rows = 0;
};

struct etas_result {
  etas::PosteriorResult result;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// usage errors (bad configs, bad files, bad arguments) map to 1, anything
// that breaks during an otherwise well-posed computation maps to 2
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return ETAS_OK;
  } catch (const etas::ConfigError& e) {
    g_last_error = e.what();
    return ETAS_ERR_USAGE;
  } catch (const etas::ParseError& e) {
    g_last_error = e.what();
    return ETAS_ERR_USAGE;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return ETAS_ERR_USAGE;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return ETAS_ERR_USAGE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ETAS_ERR_NUMERIC;
  }
}

int require(bool ok, const char* message) {
  if (ok) return ETAS_OK;
  g_last_error = message;
  return ETAS_ERR_USAGE;
}

etas::CatalogOptions catalog_options_from_json(const char* config_json) {
  // reuse the fit parser's window/ties handling without demanding priors
  using nlohmann::json;
  json j = json::parse(std::string(config_json), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw etas::ConfigError("config is not a JSON object");
  json stub = j;
  if (!stub.contains("priors")) stub["priors"] = {{"preset", "gamma"}};
  return etas::parse_fit_config(stub.dump()).catalog;
}

}  // namespace

extern "C" {

const char* etas_last_error(void) { return g_last_error.c_str(); }

void etas_free_string(char* s) { delete[] s; }

int etas_catalog_read(const char* text, const char* config_json, etas_catalog** out) {
  if (int rc = require(text && config_json && out, "null argument")) return rc;
  return guarded([&] {
    const etas::CatalogOptions opts = catalog_options_from_json(config_json);
    etas::ParseResult parsed =
        etas::parse_catalog(text, opts.window, opts.ties, opts.jitter_eps);
    *out = new etas_catalog{std::move(parsed.catalog), parsed.dropped_rows};
  });
}

int etas_catalog_write(const etas_catalog* cat, char** out) {
  if (int rc = require(cat && out, "null argument")) return rc;
  return guarded([&] { *out = dup_string(etas::serialize_catalog(cat->catalog)); });
}

size_t etas_catalog_size(const etas_catalog* cat) { return cat ? cat->catalog.size() : 0; }

size_t etas_catalog_dropped_rows(const etas_catalog* cat) {
  return cat ? cat->dropped_rows : 0;
}

void etas_catalog_free(etas_catalog* cat) { delete cat; }

int etas_simulate(const char* config_json, etas_catalog** out) {
  if (int rc = require(config_json && out, "null argument")) return rc;
  return guarded([&] {
    const etas::SimConfig cfg = etas::parse_sim_config(config_json);
    *out = new etas_catalog{etas::simulate(cfg), 0};
  });
}

int etas_fit(const etas_catalog* cat, const char* config_json, etas_result** out) {
  if (int rc = require(cat && config_json && out, "null argument")) return rc;
  return guarded([&] {
    const etas::FitFileConfig cfg = etas::parse_fit_config(config_json);
    *out = new etas_result{etas::fit(cat->catalog, cfg.fit)};
  });
}

int etas_result_converged(const etas_result* res) {
  return res && res->result.converged ? 1 : 0;
}

int etas_result_iterations(const etas_result* res) {
  return res ? res->result.iterations : 0;
}

int etas_result_mean(const etas_result* res, double out5[5]) {
  if (int rc = require(res && out5, "null argument")) return rc;
  for (int i = 0; i < 5; ++i) out5[i] = res->result.gaussian.mean[i];
  return ETAS_OK;
}

int etas_result_sd(const etas_result* res, double out5[5]) {
  if (int rc = require(res && out5, "null argument")) return rc;
  const etas::Theta sd = res->result.gaussian.sd();
  for (int i = 0; i < 5; ++i) out5[i] = sd[i];
  return ETAS_OK;
}

int etas_result_write(const etas_result* res, char** out) {
  if (int rc = require(res && out, "null argument")) return rc;
  return guarded([&] { *out = dup_string(etas::write_result(res->result)); });
}

int etas_result_read(const char* text, etas_result** out) {
  if (int rc = require(text && out, "null argument")) return rc;
  return guarded([&] { *out = new etas_result{etas::read_result(text)}; });
}

void etas_result_free(etas_result* res) { delete res; }

int etas_sweep_bins(const etas_catalog* cat, const char* config_json, char** out) {
  if (int rc = require(cat && config_json && out, "null argument")) return rc;
  return guarded([&] {
    using nlohmann::json;
    json j = json::parse(std::string(config_json), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw etas::ConfigError("config is not a JSON object");
    }
    auto grid = [&](const char* key, std::vector<double> fallback) {
      if (!j.contains(key)) return fallback;
      return j.at(key).get<std::vector<double>>();
    };
    const std::vector<double> deltas = grid("deltas", {0.1});
    const std::vector<double> growths = grid("growths", {2.0});
    const std::vector<double> n_maxes = grid("n_maxes", {10.0});

    json base = j;
    base.erase("deltas");
    base.erase("growths");
    base.erase("n_maxes");
    base.erase("binning");

    struct Row {
      double delta, growth;
      int n_max;
      int iterations;
      bool converged;
      etas::Theta mean, sd;
    };
    std::vector<Row> rows;
    for (double d : deltas) {
      for (double g : growths) {
        for (double nm : n_maxes) {
          json cell = base;
          cell["binning"] = {{"delta", d}, {"growth", g}, {"n_max", static_cast<int>(nm)}};
          const etas::FitFileConfig cfg = etas::parse_fit_config(cell.dump());
          Row row{d, g, static_cast<int>(nm), 0, false, {}, {}};
          try {
            const etas::PosteriorResult res = etas::fit(cat->catalog, cfg.fit);
            row.iterations = res.iterations;
            row.converged = res.converged;
            row.mean = res.gaussian.mean;
            row.sd = res.gaussian.sd();
          } catch (const std::exception&) {
            row.iterations = cfg.fit.max_outer;
          }
          rows.push_back(row);
        }
      }
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.iterations < b.iterations; });

    std::string table =
        "delta growth n_max iterations converged "
        "mean_mu mean_K mean_alpha mean_c mean_p sd_mu sd_K sd_alpha sd_c sd_p\n";
    char buf[512];
    for (const Row& r : rows) {
      std::snprintf(buf, sizeof buf, "%g %g %d %d %d", r.delta, r.growth, r.n_max, r.iterations,
                    r.converged ? 1 : 0);
      table += buf;
      for (double v : r.mean) {
        std::snprintf(buf, sizeof buf, " %.17g", v);
        table += buf;
      }
      for (double v : r.sd) {
        std::snprintf(buf, sizeof buf, " %.17g", v);
        table += buf;
      }
      table += "\n";
    }
    *out = dup_string(table);
  });
}

int etas_surrogate_write(const etas_catalog* cat, const char* config_json, char** out) {
  if (int rc = require(cat && config_json && out, "null argument")) return rc;
  return guarded([&] {
    const etas::FitFileConfig cfg = etas::parse_fit_config(config_json);
    const etas::SurrogateDataset surrogate =
        etas::build_surrogate(cat->catalog, cfg.fit.binning);
    *out = dup_string(etas::surrogate_table(surrogate));
  });
}

int etas_mcmc(const etas_catalog* cat, const char* config_json, char** out) {
  if (int rc = require(cat && config_json && out, "null argument")) return rc;
  return guarded([&] {
    const etas::McmcFileConfig cfg = etas::parse_mcmc_config(config_json);
    const etas::McmcResult res = etas::mh_sample(cat->catalog, cfg.mcmc);
    std::string text;
    char buf[256];
    std::snprintf(buf, sizeof buf, "# acceptance %.6g %.6g %.6g %.6g %.6g%s\n",
                  res.acceptance[0], res.acceptance[1], res.acceptance[2], res.acceptance[3],
                  res.acceptance[4], res.stuck_warning ? " STUCK" : "");
    text += buf;
    text += etas::chains_table(res);
    *out = dup_string(text);
  });
}

int etas_diagnose(const etas_catalog* cat, const etas_result* res, size_t n_samples,
                  uint64_t seed, int force, char** out) {
  if (int rc = require(cat && res && out, "null argument")) return rc;
  return guarded([&] {
    const etas::PosteriorResult& posterior = res->result;
    const etas::EtasParams point =
        etas::natural_params(posterior.gaussian.mean, posterior.priors);
    const etas::UniformityTest ks = etas::uniformity_test(cat->catalog, point);
    const etas::PredictiveBand band =
        etas::predictive_band(cat->catalog, posterior, n_samples, seed, force != 0);

    std::string text;
    char buf[256];
    std::snprintf(buf, sizeof buf, "# ks_statistic %.17g p_value %.17g n %zu\n",
                  ks.ks_statistic, ks.p_value, ks.n);
    text += buf;
    text += etas::band_table(band);
    *out = dup_string(text);
  });
}

}  // extern "C"
