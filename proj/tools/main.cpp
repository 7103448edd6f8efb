#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "etas.h"

namespace {

using nlohmann::json;

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{ETAS_ERR_USAGE, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError{ETAS_ERR_USAGE, "cannot write " + path};
  out << text;
}

json load_config(const std::string& path) {
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw CliError{ETAS_ERR_USAGE, path + ": not a JSON object"};
  }
  return j;
}

[[noreturn]] void fail(int rc) {
  throw CliError{rc, etas_last_error()};
}

std::string take_string(char* s) {
  std::string out(s);
  etas_free_string(s);
  return out;
}

struct CatalogHandle {
  etas_catalog* ptr = nullptr;
  ~CatalogHandle() { etas_catalog_free(ptr); }
};

struct ResultHandle {
  etas_result* ptr = nullptr;
  ~ResultHandle() { etas_result_free(ptr); }
};

CatalogHandle load_catalog(const std::string& path, const json& config) {
  CatalogHandle cat;
  const std::string text = read_file(path);
  if (int rc = etas_catalog_read(text.c_str(), config.dump().c_str(), &cat.ptr)) fail(rc);
  return cat;
}

struct CommonOverrides {
  std::optional<std::uint64_t> seed;

  void apply(json& config) const {
    if (seed) config["seed"] = *seed;
  }
};

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& manifest_path, const CommonOverrides& common) {
  json config = load_config(config_path);
  common.apply(config);

  CatalogHandle cat;
  if (int rc = etas_simulate(config.dump().c_str(), &cat.ptr)) fail(rc);
  char* text = nullptr;
  if (int rc = etas_catalog_write(cat.ptr, &text)) fail(rc);
  write_file(out_path, take_string(text));

  if (!manifest_path.empty()) {
    json manifest = {{"command", "simulate"},
                     {"config", config},
                     {"seed", config.value("seed", std::uint64_t{1})},
                     {"events", etas_catalog_size(cat.ptr)},
                     {"output", out_path}};
    write_file(manifest_path, manifest.dump(2) + "\n");
  }
  return 0;
}

int cmd_fit(const std::string& catalog_path, const std::string& config_path,
            const std::string& out_path, const std::string& preset, double gamma_scale,
            bool jitter_ties, const std::string& surrogate_path) {
  json config = load_config(config_path);
  if (!preset.empty()) {
    config["priors"] = json{{"preset", preset}};
    if (gamma_scale > 0) config["priors"]["gamma_scale"] = gamma_scale;
  } else if (gamma_scale > 0) {
    config["priors"] = json{{"preset", "gamma"}, {"gamma_scale", gamma_scale}};
  }
  if (jitter_ties) config["ties"] = "jitter";

  CatalogHandle cat = load_catalog(catalog_path, config);

  if (!surrogate_path.empty()) {
    char* table = nullptr;
    if (int rc = etas_surrogate_write(cat.ptr, config.dump().c_str(), &table)) fail(rc);
    write_file(surrogate_path, take_string(table));
  }

  ResultHandle res;
  if (int rc = etas_fit(cat.ptr, config.dump().c_str(), &res.ptr)) fail(rc);
  char* text = nullptr;
  if (int rc = etas_result_write(res.ptr, &text)) fail(rc);
  write_file(out_path, take_string(text));

  std::printf("converged %d iterations %d\n", etas_result_converged(res.ptr),
              etas_result_iterations(res.ptr));
  return 0;
}

int cmd_mcmc(const std::string& catalog_path, const std::string& config_path,
             const std::string& out_path, const CommonOverrides& common) {
  json config = load_config(config_path);
  common.apply(config);
  CatalogHandle cat = load_catalog(catalog_path, config);
  char* text = nullptr;
  if (int rc = etas_mcmc(cat.ptr, config.dump().c_str(), &text)) fail(rc);
  write_file(out_path, take_string(text));
  return 0;
}

int cmd_diagnose(const std::string& catalog_path, const std::string& result_path,
                 const std::string& config_path, const std::string& out_path,
                 std::size_t n_samples, std::uint64_t seed, bool force) {
  json config = load_config(config_path);
  CatalogHandle cat = load_catalog(catalog_path, config);

  ResultHandle res;
  const std::string result_text = read_file(result_path);
  if (int rc = etas_result_read(result_text.c_str(), &res.ptr)) fail(rc);

  char* text = nullptr;
  if (int rc = etas_diagnose(cat.ptr, res.ptr, n_samples, seed, force ? 1 : 0, &text)) {
    fail(rc);
  }
  write_file(out_path, take_string(text));
  return 0;
}

int cmd_sweep_bins(const std::string& catalog_path, const std::string& config_path,
                   const std::string& out_path, const std::vector<double>& deltas,
                   const std::vector<double>& growths, const std::vector<int>& n_maxes) {
  json config = load_config(config_path);
  if (!deltas.empty()) config["deltas"] = deltas;
  if (!growths.empty()) config["growths"] = growths;
  if (!n_maxes.empty()) config["n_maxes"] = n_maxes;

  CatalogHandle cat = load_catalog(catalog_path, config);
  char* text = nullptr;
  if (int rc = etas_sweep_bins(cat.ptr, config.dump().c_str(), &text)) fail(rc);
  write_file(out_path, take_string(text));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian inference for temporal marked Hawkes (ETAS) processes"};
  app.require_subcommand(1);

  CommonOverrides common;

  std::string config_path, catalog_path, result_path, out_path, manifest_path;
  std::string preset, surrogate_path;
  double gamma_scale = 0.0;
  bool jitter_ties = false, force = false;
  std::size_t n_samples = 10000;
  std::uint64_t diag_seed = 1;
  std::vector<double> deltas, growths;
  std::vector<int> n_maxes;

  auto* sim = app.add_subcommand("simulate", "Simulate a synthetic catalog");
  sim->add_option("--config", config_path, "SimConfig JSON file")->required();
  sim->add_option("--out", out_path, "catalog output path")->required();
  sim->add_option("--manifest", manifest_path, "manifest output path (config + seed echo)");
  sim->add_option("--seed", common.seed, "override the config seed");

  auto* fit = app.add_subcommand("fit", "Fit the linearized posterior");
  fit->add_option("catalog", catalog_path, "catalog file")->required();
  fit->add_option("--config", config_path, "fit config JSON file")->required();
  fit->add_option("--out", out_path, "result output path")->required();
  fit->add_option("--preset", preset, "prior preset: replicate or gamma")
      ->check(CLI::IsMember({"replicate", "gamma"}));
  fit->add_option("--gamma-scale", gamma_scale, "scaled gamma prior family parameter");
  fit->add_flag("--jitter-ties", jitter_ties, "jitter tied event times instead of rejecting");
  fit->add_option("--dump-surrogate", surrogate_path, "also write the surrogate dataset table");

  auto* mcmc = app.add_subcommand("mcmc", "Exact-likelihood MH sampler");
  mcmc->add_option("catalog", catalog_path, "catalog file")->required();
  mcmc->add_option("--config", config_path, "mcmc config JSON file")->required();
  mcmc->add_option("--out", out_path, "chains output path")->required();
  mcmc->add_option("--seed", common.seed, "override the config seed");

  auto* diag = app.add_subcommand("diagnose", "Time-change residuals and predictive band");
  diag->add_option("catalog", catalog_path, "catalog file")->required();
  diag->add_option("result", result_path, "fit result file")->required();
  diag->add_option("--config", config_path, "config JSON file (window)")->required();
  diag->add_option("--out", out_path, "diagnostics output path")->required();
  diag->add_option("--samples", n_samples, "posterior draws for the band");
  diag->add_option("--seed", diag_seed, "RNG seed for posterior draws");
  diag->add_flag("--force", force, "accept a non-converged result");

  auto* sweep = app.add_subcommand("sweep-bins", "Fit across a binning grid");
  sweep->add_option("catalog", catalog_path, "catalog file")->required();
  sweep->add_option("--config", config_path, "fit config JSON file")->required();
  sweep->add_option("--out", out_path, "table output path")->required();
  sweep->add_option("--deltas", deltas, "first-bin lengths");
  sweep->add_option("--growths", growths, "geometric growth factors");
  sweep->add_option("--nmax", n_maxes, "max geometric exponents");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : ETAS_ERR_USAGE;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_path, manifest_path, common);
    if (fit->parsed()) {
      return cmd_fit(catalog_path, config_path, out_path, preset, gamma_scale, jitter_ties,
                     surrogate_path);
    }
    if (mcmc->parsed()) return cmd_mcmc(catalog_path, config_path, out_path, common);
    if (diag->parsed()) {
      return cmd_diagnose(catalog_path, result_path, config_path, out_path, n_samples,
                          diag_seed, force);
    }
    if (sweep->parsed()) {
      return cmd_sweep_bins(catalog_path, config_path, out_path, deltas, growths, n_maxes);
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return ETAS_ERR_NUMERIC;
  }
  return ETAS_ERR_USAGE;
}
