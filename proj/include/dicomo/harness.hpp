#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dicomo/degmodel.hpp"
#include "dicomo/digraph.hpp"
#include "dicomo/io.hpp"
#include "dicomo/rng.hpp"
#include "dicomo/theory.hpp"

namespace dicomo {

enum class ExperimentKind { diameter_convergence, typical_distance, thin_depth, gw_suite };
enum class GraphModel { dcm, dcm_simple, dout, binom, binom_oriented };

std::string to_string(ExperimentKind kind);
std::string to_string(GraphModel model);
ExperimentKind parse_kind(const std::string& s);
GraphModel parse_model(const std::string& s);

struct ModelSpec {
  GraphModel model = GraphModel::dcm;
  Json dist;                          ///< distribution spec for dcm models
  std::uint32_t d = 2;                ///< dout
  std::optional<double> p;            ///< binom: fixed edge probability
  double c = 1.0;                     ///< binom: mean degree, p = c/(n-1) when p is unset
  std::uint64_t max_attempts = 1000;  ///< dcm-simple rejection budget
};

/// Budgets and tolerances of the Galton-Watson battery.
struct GwSuiteConfig {
  Json offspring = {{"type", "poisson"}, {"mean", 2.0}};
  Json subcritical = {{"type", "poisson"}, {"mean", 0.5}};
  std::uint64_t survival_runs = 1'000'000;
  unsigned survival_horizon = 30;
  double survival_sigmas = 5.0;
  std::uint64_t duality_runs = 1'000'000;
  unsigned duality_horizon = 60;
  double duality_tv = 0.01;
  std::uint64_t thin_runs = 10'000'000;
  std::uint64_t thin_omega = 50;
  unsigned thin_t_min = 6;
  unsigned thin_t_max = 12;
  double slope_tolerance = 0.1;
  std::uint64_t sub_runs = 10'000'000;
  unsigned sub_t = 10;
  double root_low = 0.45;
  double root_high = 0.56;
  double bounded_root_tolerance = 0.06;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::diameter_convergence;
  ModelSpec model;
  std::vector<std::size_t> sizes;
  unsigned replicates = 1;
  std::uint64_t master_seed = 0;
  std::optional<std::uint64_t> omega;     ///< explicit omega; default rule otherwise
  std::optional<std::uint64_t> omega_cap; ///< extra cap on the default rule
  Direction direction = Direction::out;   ///< thin_depth
  std::uint64_t pairs = 10'000;           ///< typical_distance
  std::uint64_t budget = 0;               ///< thin_depth probes, 0 = every half-edge
  double tolerance = 0.3;                 ///< relative tolerance of the pass/fail check
  unsigned threads = 1;
  std::string csv_path;
  std::string json_path;
  GwSuiteConfig gw;
};

/// Throws Errc::domain_error unless sizes are strictly increasing and
/// replicates >= 1 (sizes may be empty only for gw_suite).
void validate(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& cfg);

struct ResultRecord {
  std::string label;
  std::uint64_t n = 0;
  unsigned replicate = 0;
  std::uint64_t seed = 0;
  std::uint64_t m = 0;
  double measured = 0.0;
  double prediction = 0.0;
  std::optional<double> ratio; ///< measured / prediction when prediction > 0
  double aux = 0.0;            ///< kind-specific: finite pairs, finite fraction, omega, stderr
  std::string status = "ok";   ///< "ok", "pass", "fail", "undefined_ratio" or an error
  double wall_time_s = 0.0;    ///< kept out of the CSV
};

struct SizeAggregate {
  std::uint64_t n = 0;
  unsigned count = 0; ///< records that produced a measurement
  unsigned failed = 0;
  double mean_measured = 0.0;
  double sd_measured = 0.0;
  double mean_prediction = 0.0;
  std::optional<double> mean_ratio;
  double max_measured = 0.0;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  Json theory; ///< TheoryConstants (object) or per-size map for size-dependent models
  std::vector<ResultRecord> records;
  std::vector<SizeAggregate> sizes;
  std::vector<double> increments; ///< consecutive-size increments of the mean (diameter_convergence)
  std::optional<double> overall_increment;
  std::vector<CheckResult> checks;
  double wall_time_s = 0.0;

  [[nodiscard]] bool pass() const;
};

/// seed = derive_seed(master, {n, replicate, kind}).
std::uint64_t record_seed(std::uint64_t master, std::uint64_t n, unsigned replicate, ExperimentKind kind);

/// Builds one graph of the configured model on n vertices.
Digraph generate_graph(const ModelSpec& spec, std::size_t n, Rng& rng);
/// Theory constants of the model's limiting degree law at size n.
TheoryConstants model_theory(const ModelSpec& spec, std::size_t n);

ExperimentReport run_diameter_convergence(const ExperimentConfig& cfg);
ExperimentReport run_typical_distance(const ExperimentConfig& cfg);
ExperimentReport run_thin_depth(const ExperimentConfig& cfg);
ExperimentReport run_gw_suite(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Stable column order; byte-identical for equal configs at any thread count.
std::string records_csv(const ExperimentReport& report);
Json summary_json(const ExperimentReport& report);
/// Writes the CSV and JSON summary to the configured paths (when set).
void write_outputs(const ExperimentReport& report);

} // namespace dicomo
