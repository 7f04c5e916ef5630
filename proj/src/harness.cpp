#include "dicomo/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "dicomo/distance.hpp"
#include "dicomo/error.hpp"
#include "dicomo/graphgen.hpp"
#include "dicomo/gwsim.hpp"
#include "dicomo/neighborhood.hpp"
#include "dicomo/parallel.hpp"

namespace dicomo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string direction_name(Direction d) { return d == Direction::out ? "out" : "in"; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

} // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
  case ExperimentKind::diameter_convergence: return "diameter_convergence";
  case ExperimentKind::typical_distance: return "typical_distance";
  case ExperimentKind::thin_depth: return "thin_depth";
  case ExperimentKind::gw_suite: return "gw_suite";
  }
  return "?";
}

std::string to_string(GraphModel model) {
  switch (model) {
  case GraphModel::dcm: return "dcm";
  case GraphModel::dcm_simple: return "dcm-simple";
  case GraphModel::dout: return "dout";
  case GraphModel::binom: return "binom";
  case GraphModel::binom_oriented: return "binom-oriented";
  }
  return "?";
}

ExperimentKind parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::diameter_convergence, ExperimentKind::typical_distance, ExperimentKind::thin_depth,
                 ExperimentKind::gw_suite})
    if (to_string(k) == s) return k;
  throw Error(Errc::parse_error, "unknown experiment kind '" + s + "'");
}

GraphModel parse_model(const std::string& s) {
  for (auto m : {GraphModel::dcm, GraphModel::dcm_simple, GraphModel::dout, GraphModel::binom,
                 GraphModel::binom_oriented})
    if (to_string(m) == s) return m;
  throw Error(Errc::parse_error, "unknown model '" + s + "'");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.replicates < 1) throw Error(Errc::domain_error, "replicates must be >= 1");
  if (cfg.kind != ExperimentKind::gw_suite && cfg.sizes.empty())
    throw Error(Errc::domain_error, "at least one size is required");
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
    if (cfg.sizes[i] < 1) throw Error(Errc::domain_error, "sizes must be >= 1");
    if (i > 0 && cfg.sizes[i] <= cfg.sizes[i - 1]) throw Error(Errc::domain_error, "sizes must be strictly increasing");
  }
  if (cfg.pairs < 1) throw Error(Errc::domain_error, "pairs must be >= 1");
  if (cfg.omega && *cfg.omega < 1) throw Error(Errc::domain_error, "omega must be >= 1");
  if (cfg.tolerance < 0) throw Error(Errc::domain_error, "tolerance must be >= 0");
}

namespace {

const std::set<std::string> config_keys = {
    "kind", "model", "dist", "d", "p", "c", "max_attempts", "sizes", "replicates", "master_seed", "omega",
    "omega_cap", "direction", "pairs", "budget", "tolerance", "threads", "outputs", "gw"};

template <class T>
void read_opt(const Json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

const std::set<std::string> gw_keys = {
    "offspring",  "subcritical", "survival_runs",   "survival_horizon", "survival_sigmas", "duality_runs",
    "duality_horizon", "duality_tv", "thin_runs", "thin_omega", "thin_t_min", "thin_t_max",
    "slope_tolerance", "sub_runs", "sub_t", "root_low", "root_high", "bounded_root_tolerance"};

GwSuiteConfig gw_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::parse_error, "'gw' must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!gw_keys.contains(key)) throw Error(Errc::parse_error, "unknown gw key '" + key + "'");
  GwSuiteConfig g;
  read_opt(j, "offspring", g.offspring);
  read_opt(j, "subcritical", g.subcritical);
  read_opt(j, "survival_runs", g.survival_runs);
  read_opt(j, "survival_horizon", g.survival_horizon);
  read_opt(j, "survival_sigmas", g.survival_sigmas);
  read_opt(j, "duality_runs", g.duality_runs);
  read_opt(j, "duality_horizon", g.duality_horizon);
  read_opt(j, "duality_tv", g.duality_tv);
  read_opt(j, "thin_runs", g.thin_runs);
  read_opt(j, "thin_omega", g.thin_omega);
  read_opt(j, "thin_t_min", g.thin_t_min);
  read_opt(j, "thin_t_max", g.thin_t_max);
  read_opt(j, "slope_tolerance", g.slope_tolerance);
  read_opt(j, "sub_runs", g.sub_runs);
  read_opt(j, "sub_t", g.sub_t);
  read_opt(j, "root_low", g.root_low);
  read_opt(j, "root_high", g.root_high);
  read_opt(j, "bounded_root_tolerance", g.bounded_root_tolerance);
  return g;
}

Json gw_to_json(const GwSuiteConfig& g) {
  return Json{{"offspring", g.offspring},
              {"subcritical", g.subcritical},
              {"survival_runs", g.survival_runs},
              {"survival_horizon", g.survival_horizon},
              {"survival_sigmas", g.survival_sigmas},
              {"duality_runs", g.duality_runs},
              {"duality_horizon", g.duality_horizon},
              {"duality_tv", g.duality_tv},
              {"thin_runs", g.thin_runs},
              {"thin_omega", g.thin_omega},
              {"thin_t_min", g.thin_t_min},
              {"thin_t_max", g.thin_t_max},
              {"slope_tolerance", g.slope_tolerance},
              {"sub_runs", g.sub_runs},
              {"sub_t", g.sub_t},
              {"root_low", g.root_low},
              {"root_high", g.root_high},
              {"bounded_root_tolerance", g.bounded_root_tolerance}};
}

} // namespace

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::parse_error, "experiment config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!config_keys.contains(key)) throw Error(Errc::parse_error, "unknown config key '" + key + "'");
  ExperimentConfig cfg;
  try {
    if (j.contains("kind")) cfg.kind = parse_kind(j.at("kind").get<std::string>());
    if (j.contains("model")) cfg.model.model = parse_model(j.at("model").get<std::string>());
    read_opt(j, "dist", cfg.model.dist);
    read_opt(j, "d", cfg.model.d);
    if (j.contains("p")) cfg.model.p = j.at("p").get<double>();
    read_opt(j, "c", cfg.model.c);
    read_opt(j, "max_attempts", cfg.model.max_attempts);
    read_opt(j, "sizes", cfg.sizes);
    read_opt(j, "replicates", cfg.replicates);
    read_opt(j, "master_seed", cfg.master_seed);
    if (j.contains("omega") && !(j.at("omega").is_string() && j.at("omega") == "default"))
      cfg.omega = j.at("omega").get<std::uint64_t>();
    if (j.contains("omega_cap")) cfg.omega_cap = j.at("omega_cap").get<std::uint64_t>();
    if (j.contains("direction")) {
      const auto d = j.at("direction").get<std::string>();
      if (d != "out" && d != "in") throw Error(Errc::parse_error, "direction must be 'out' or 'in'");
      cfg.direction = d == "out" ? Direction::out : Direction::in;
    }
    read_opt(j, "pairs", cfg.pairs);
    read_opt(j, "budget", cfg.budget);
    read_opt(j, "tolerance", cfg.tolerance);
    read_opt(j, "threads", cfg.threads);
    if (j.contains("outputs")) {
      const auto& o = j.at("outputs");
      read_opt(o, "csv", cfg.csv_path);
      read_opt(o, "json", cfg.json_path);
    }
    if (j.contains("gw")) cfg.gw = gw_from_json(j.at("gw"));
  } catch (const Json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
  validate(cfg);
  return cfg;
}

Json to_json(const ExperimentConfig& cfg) {
  Json j{{"kind", to_string(cfg.kind)},
         {"model", to_string(cfg.model.model)},
         {"sizes", cfg.sizes},
         {"replicates", cfg.replicates},
         {"master_seed", cfg.master_seed},
         {"direction", direction_name(cfg.direction)},
         {"pairs", cfg.pairs},
         {"budget", cfg.budget},
         {"tolerance", cfg.tolerance},
         {"threads", cfg.threads},
         {"outputs", {{"csv", cfg.csv_path}, {"json", cfg.json_path}}}};
  if (!cfg.model.dist.is_null()) j["dist"] = cfg.model.dist;
  if (cfg.model.model == GraphModel::dout) j["d"] = cfg.model.d;
  if (cfg.model.model == GraphModel::binom || cfg.model.model == GraphModel::binom_oriented) {
    if (cfg.model.p) j["p"] = *cfg.model.p;
    else j["c"] = cfg.model.c;
  }
  if (cfg.model.model == GraphModel::dcm_simple) j["max_attempts"] = cfg.model.max_attempts;
  j["omega"] = cfg.omega ? Json(*cfg.omega) : Json("default");
  if (cfg.omega_cap) j["omega_cap"] = *cfg.omega_cap;
  if (cfg.kind == ExperimentKind::gw_suite) j["gw"] = gw_to_json(cfg.gw);
  return j;
}

bool ExperimentReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::uint64_t record_seed(std::uint64_t master, std::uint64_t n, unsigned replicate, ExperimentKind kind) {
  return derive_seed(master, {n, replicate, static_cast<std::uint64_t>(kind) + 1});
}

namespace {

double binom_probability(const ModelSpec& spec, std::size_t n) {
  if (spec.p) return *spec.p;
  return n > 1 ? std::min(1.0, spec.c / static_cast<double>(n - 1)) : 0.0;
}

JointDegreeDistribution model_distribution(const ModelSpec& spec, std::size_t n) {
  switch (spec.model) {
  case GraphModel::dcm:
  case GraphModel::dcm_simple:
    if (spec.dist.is_null()) throw Error(Errc::invalid_distribution, "dcm models need a 'dist' spec");
    return distribution_from_json(spec.dist);
  case GraphModel::dout:
    return JointDegreeDistribution::product(Pmf::poisson(spec.d), Pmf::point(spec.d));
  case GraphModel::binom:
  case GraphModel::binom_oriented: {
    const double c = binom_probability(spec, n) * static_cast<double>(n > 0 ? n - 1 : 0);
    return JointDegreeDistribution::poisson_product(c, c);
  }
  }
  throw Error(Errc::unsupported, "model");
}

bool size_dependent_theory(const ModelSpec& spec) {
  return (spec.model == GraphModel::binom || spec.model == GraphModel::binom_oriented) && spec.p.has_value();
}

BiDegreeSequence model_sequence(const ModelSpec& spec, std::size_t n, Rng& rng) {
  if (spec.model != GraphModel::dcm && spec.model != GraphModel::dcm_simple)
    throw Error(Errc::unsupported, "lazy exploration needs a degree-sequence model (dcm or dcm-simple)");
  return sample_sequence(model_distribution(spec, n), n, rng).sequence;
}

} // namespace

Digraph generate_graph(const ModelSpec& spec, std::size_t n, Rng& rng) {
  switch (spec.model) {
  case GraphModel::dcm: return pair_uniform(model_sequence(spec, n, rng), rng);
  case GraphModel::dcm_simple: return sample_simple(model_sequence(spec, n, rng), rng, spec.max_attempts);
  case GraphModel::dout: return d_out_model(n, spec.d, rng);
  case GraphModel::binom: return binomial_digraph(n, binom_probability(spec, n), BinomialVariant::independent, rng);
  case GraphModel::binom_oriented:
    return binomial_digraph(n, binom_probability(spec, n), BinomialVariant::oriented, rng);
  }
  throw Error(Errc::unsupported, "model");
}

TheoryConstants model_theory(const ModelSpec& spec, std::size_t n) {
  return theory_constants(model_distribution(spec, n));
}

namespace {

/// Theory per size; entries hold an error message when the constants do not exist.
struct TheoryTable {
  std::vector<std::optional<TheoryConstants>> per_size;
  Json json;
};

TheoryTable theory_table(const ExperimentConfig& cfg) {
  TheoryTable t;
  const bool per_size = size_dependent_theory(cfg.model);
  auto compute = [&](std::size_t n) -> std::pair<std::optional<TheoryConstants>, Json> {
    try {
      const auto tc = model_theory(cfg.model, n);
      return {tc, to_json(tc)};
    } catch (const Error& e) {
      return {std::nullopt, Json{{"error", e.what()}}};
    }
  };
  if (per_size) {
    t.json = Json::object();
    for (auto n : cfg.sizes) {
      auto [tc, j] = compute(n);
      t.per_size.push_back(tc);
      t.json[std::to_string(n)] = j;
    }
  } else {
    auto [tc, j] = compute(cfg.sizes.empty() ? 1 : cfg.sizes.back());
    t.per_size.assign(cfg.sizes.size(), tc);
    t.json = j;
  }
  return t;
}

std::string error_status(const Error& e) { return "error:" + std::string(to_string(e.code())); }

/// Runs measure(n, replicate, seed, inner_threads) -> ResultRecord for every
/// (size, replicate) with deterministic seeds; output order is (size, replicate).
template <class Measure>
std::vector<ResultRecord> run_records(const ExperimentConfig& cfg, Measure&& measure) {
  struct Job {
    std::size_t n;
    std::size_t size_index;
    unsigned replicate;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  std::unordered_set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i)
    for (unsigned r = 0; r < cfg.replicates; ++r) {
      const auto seed = record_seed(cfg.master_seed, cfg.sizes[i], r, cfg.kind);
      if (!seeds.insert(seed).second) throw Error(Errc::domain_error, "record seed collision");
      jobs.push_back({cfg.sizes[i], i, r, seed});
    }
  const unsigned threads = std::max(1u, cfg.threads);
  const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  const unsigned inner = std::max(1u, threads / std::max(1u, outer));
  std::vector<ResultRecord> records(jobs.size());
  parallel_for(jobs.size(), outer, [&](std::size_t i) {
    const auto& job = jobs[i];
    const auto t0 = Clock::now();
    ResultRecord rec;
    try {
      rec = measure(job.n, job.size_index, job.seed, inner);
    } catch (const Error& e) {
      rec = ResultRecord{};
      rec.status = error_status(e);
    }
    rec.n = job.n;
    rec.replicate = job.replicate;
    rec.seed = job.seed;
    rec.wall_time_s = seconds_since(t0);
    records[i] = std::move(rec);
  });
  return records;
}

void set_ratio(ResultRecord& rec) {
  if (rec.prediction > 0 && std::isfinite(rec.prediction)) {
    rec.ratio = rec.measured / rec.prediction;
  } else {
    rec.ratio.reset();
    if (rec.status == "ok") rec.status = "undefined_ratio";
  }
}

bool has_measurement(const ResultRecord& r) { return r.status == "ok" || r.status == "undefined_ratio"; }

std::vector<SizeAggregate> aggregate(const ExperimentConfig& cfg, const std::vector<ResultRecord>& records) {
  std::vector<SizeAggregate> out;
  for (auto n : cfg.sizes) {
    SizeAggregate a;
    a.n = n;
    double sum = 0, sum_sq = 0, pred = 0, ratio = 0;
    unsigned ratios = 0;
    for (const auto& r : records) {
      if (r.n != n) continue;
      if (!has_measurement(r)) {
        ++a.failed;
        continue;
      }
      ++a.count;
      sum += r.measured;
      sum_sq += r.measured * r.measured;
      pred += r.prediction;
      a.max_measured = a.count == 1 ? r.measured : std::max(a.max_measured, r.measured);
      if (r.ratio) {
        ratio += *r.ratio;
        ++ratios;
      }
    }
    if (a.count > 0) {
      a.mean_measured = sum / a.count;
      a.mean_prediction = pred / a.count;
      if (a.count > 1)
        a.sd_measured = std::sqrt(std::max(0.0, (sum_sq - a.count * a.mean_measured * a.mean_measured) / (a.count - 1)));
    }
    if (ratios > 0) a.mean_ratio = ratio / ratios;
    out.push_back(a);
  }
  return out;
}

CheckResult relative_check(std::string name, double value, double target, double tol) {
  CheckResult c{std::move(name), value, target, tol, false, ""};
  c.pass = target > 0 && std::isfinite(value) && std::abs(value / target - 1.0) <= tol;
  c.detail = fmt::format("value/target = {:.4f}, allowed [{:.4f}, {:.4f}]", target > 0 ? value / target : NAN,
                         1.0 - tol, 1.0 + tol);
  return c;
}

const TheoryConstants* theory_at(const TheoryTable& t, std::size_t size_index) {
  const auto& tc = t.per_size.at(size_index);
  return tc ? &*tc : nullptr;
}

} // namespace

ExperimentReport run_diameter_convergence(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.config = cfg;
  const auto theory = theory_table(cfg);
  rep.theory = theory.json;
  rep.records = run_records(cfg, [&](std::size_t n, std::size_t si, std::uint64_t seed, unsigned inner) {
    Rng rng(seed);
    const Digraph g = generate_graph(cfg.model, n, rng);
    DiameterOptions opt;
    opt.threads = inner;
    const auto d = diameter_exact(g, opt);
    ResultRecord r;
    r.label = "diameter";
    r.m = g.m();
    r.measured = d.diameter;
    r.aux = static_cast<double>(d.finite_pairs);
    const auto* tc = theory_at(theory, si);
    r.prediction = tc ? tc->diameter_coeff * std::log(static_cast<double>(n)) : NAN;
    set_ratio(r);
    return r;
  });
  rep.sizes = aggregate(cfg, rep.records);

  std::vector<const SizeAggregate*> usable;
  for (const auto& a : rep.sizes)
    if (a.count > 0) usable.push_back(&a);
  for (std::size_t i = 1; i < usable.size(); ++i)
    rep.increments.push_back((usable[i]->mean_measured - usable[i - 1]->mean_measured) /
                             (std::log(double(usable[i]->n)) - std::log(double(usable[i - 1]->n))));
  if (usable.size() >= 2) {
    rep.overall_increment = (usable.back()->mean_measured - usable.front()->mean_measured) /
                            (std::log(double(usable.back()->n)) - std::log(double(usable.front()->n)));
    const auto* tc = theory_at(theory, cfg.sizes.size() - 1);
    rep.checks.push_back(relative_check("diameter_increment", *rep.overall_increment,
                                        tc ? tc->diameter_coeff : NAN, cfg.tolerance));
  }
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

ExperimentReport run_typical_distance(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.config = cfg;
  const auto theory = theory_table(cfg);
  rep.theory = theory.json;
  rep.records = run_records(cfg, [&](std::size_t n, std::size_t si, std::uint64_t seed, unsigned) {
    Rng rng(seed);
    const Digraph g = generate_graph(cfg.model, n, rng);
    const auto sample = typical_distance_sample(g, cfg.pairs, rng);
    ResultRecord r;
    r.label = "typical_distance";
    r.m = g.m();
    r.aux = sample.finite_fraction;
    if (sample.distances.empty()) {
      r.status = "no_finite_pairs";
      return r;
    }
    double sum = 0;
    for (auto d : sample.distances) sum += d;
    r.measured = sum / static_cast<double>(sample.distances.size());
    const auto* tc = theory_at(theory, si);
    r.prediction = tc && tc->regime == Regime::supercritical ? std::log(static_cast<double>(n)) / std::log(tc->nu) : NAN;
    set_ratio(r);
    return r;
  });
  rep.sizes = aggregate(cfg, rep.records);
  for (const auto& a : rep.sizes)
    rep.checks.push_back(relative_check(fmt::format("typical_ratio_n{}", a.n), a.mean_ratio.value_or(NAN), 1.0,
                                        cfg.tolerance));
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

ExperimentReport run_thin_depth(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.config = cfg;
  const auto theory = theory_table(cfg);
  rep.theory = theory.json;
  const bool out = cfg.direction == Direction::out;
  auto omega_for = [&](std::size_t n) {
    if (cfg.omega) return *cfg.omega;
    auto w = default_omega(n);
    return cfg.omega_cap ? std::min(w, *cfg.omega_cap) : w;
  };
  rep.records = run_records(cfg, [&](std::size_t n, std::size_t si, std::uint64_t seed, unsigned) {
    Rng rng(seed);
    const auto seq = model_sequence(cfg.model, n, rng);
    const auto omega = omega_for(n);
    const auto scan = thin_depth_scan(seq, cfg.direction, omega, rng, cfg.budget == 0 ? seq.m() : cfg.budget);
    ResultRecord r;
    r.m = seq.m();
    r.measured = scan.max_thin_depth;
    r.aux = static_cast<double>(omega);
    const auto* tc = theory_at(theory, si);
    const double ln_n = std::log(static_cast<double>(n));
    if (!tc) {
      r.label = "thin_depth";
      r.prediction = NAN;
    } else if (tc->regime == Regime::subcritical) {
      r.label = "alive_depth";
      r.prediction = ln_n / std::log(1.0 / tc->nu);
    } else {
      const double coeff = out ? tc->t_plus_coeff : tc->t_minus_coeff;
      // a probe that expands late first needs about log_nu(omega) levels to reach width omega
      const double burn_in = std::ceil(std::log(static_cast<double>(omega)) / std::log(tc->nu));
      if (coeff > 0) {
        r.label = "thin_depth";
        r.prediction = burn_in + coeff * ln_n;
      } else {
        r.label = "thin_depth_bound";
        r.prediction = burn_in + 3.0;
      }
    }
    set_ratio(r);
    return r;
  });
  rep.sizes = aggregate(cfg, rep.records);
  for (std::size_t i = 0; i < rep.sizes.size(); ++i) {
    const auto& a = rep.sizes[i];
    const bool bound = std::any_of(rep.records.begin(), rep.records.end(),
                                   [&](const ResultRecord& r) { return r.n == a.n && r.label == "thin_depth_bound"; });
    if (bound) {
      CheckResult c{fmt::format("thin_bound_n{}", a.n), a.max_measured, a.mean_prediction, 0.0, false, ""};
      c.pass = a.count > 0 && a.max_measured <= a.mean_prediction;
      c.detail = fmt::format("max thin depth {} <= bound {}", a.max_measured, a.mean_prediction);
      rep.checks.push_back(c);
    } else {
      rep.checks.push_back(relative_check(fmt::format("thin_ratio_n{}", a.n), a.mean_ratio.value_or(NAN), 1.0,
                                          cfg.tolerance));
    }
  }
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

ExperimentReport run_gw_suite(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.config = cfg;
  const auto& g = cfg.gw;
  unsigned index = 0;
  auto options = [&] {
    McOptions o;
    o.seed = record_seed(cfg.master_seed, 0, index, cfg.kind);
    o.threads = std::max(1u, cfg.threads);
    return o;
  };
  auto add = [&](ResultRecord r, CheckResult c) {
    r.replicate = index;
    r.seed = record_seed(cfg.master_seed, 0, index, cfg.kind);
    r.status = c.pass ? "pass" : "fail";
    if (r.prediction > 0) r.ratio = r.measured / r.prediction;
    rep.records.push_back(std::move(r));
    rep.checks.push_back(std::move(c));
    ++index;
  };
  auto failed = [&](const std::string& name, const Error& e) {
    ResultRecord r;
    r.label = name;
    CheckResult c{name, NAN, NAN, 0, false, e.what()};
    add(r, c);
    rep.records.back().status = error_status(e);
  };

  Json theory = Json::object();
  const Pmf xi = pmf_from_json(g.offspring);
  const Pmf sub = pmf_from_json(g.subcritical);
  const SurvivalSolve solve = solve_survival(xi);
  const Pmf xi_hat = conjugate(xi, solve.survival);
  theory["survival"] = solve.survival;
  theory["survival_iterations"] = solve.iterations;
  theory["nu_hat"] = xi_hat.mean();
  theory["nu"] = xi.mean();
  theory["truncation_mass"] = xi.truncation_mass();
  rep.theory = theory;

  auto timed = [&](auto&& fn) {
    const auto s = Clock::now();
    fn();
    rep.records.back().wall_time_s = seconds_since(s);
  };

  timed([&] {
    try {
      const auto est = estimate_survival(xi, g.survival_horizon, g.survival_runs, options());
      ResultRecord r{"survival", 0, 0, 0, 0, est.estimate, solve.survival, {}, est.stderr_};
      CheckResult c{"survival", est.estimate, solve.survival, g.survival_sigmas * est.stderr_, false, ""};
      c.pass = std::abs(est.estimate - solve.survival) <= std::max(g.survival_sigmas * est.stderr_, 1e-12);
      c.detail = fmt::format("|estimate - s| = {:.3g}, allowed {:.3g} ({} stderr)", std::abs(est.estimate - solve.survival),
                             c.tolerance, g.survival_sigmas);
      add(r, c);
    } catch (const Error& e) {
      failed("survival", e);
    }
  });

  timed([&] {
    try {
      const auto est = estimate_survival(Pmf::point(2), g.survival_horizon, std::min<std::uint64_t>(g.survival_runs, 10'000), options());
      ResultRecord r{"survival_point2", 0, 0, 0, 0, est.estimate, 1.0, {}, est.stderr_};
      CheckResult c{"survival_point2", est.estimate, 1.0, 0.0, est.estimate == 1.0, "point mass at 2 never dies"};
      add(r, c);
    } catch (const Error& e) {
      failed("survival_point2", e);
    }
  });

  timed([&] {
    try {
      const auto law = extinct_root_offspring_law(xi, g.duality_horizon, g.duality_runs, options());
      const double tv = total_variation(law.pmf, xi_hat);
      ResultRecord r{"duality_tv", 0, 0, 0, 0, tv, 0.0, {}, static_cast<double>(law.extinct_runs)};
      CheckResult c{"duality_tv", tv, 0.0, g.duality_tv, tv < g.duality_tv,
                    fmt::format("TV = {:.5f} over {} extinct runs", tv, law.extinct_runs)};
      add(r, c);
    } catch (const Error& e) {
      failed("duality_tv", e);
    }
  });

  {
    std::vector<unsigned> ts;
    std::vector<Estimate> ests;
    for (unsigned t = g.thin_t_min; t <= g.thin_t_max; ++t) {
      timed([&] {
        try {
          const auto est = thin_event_probability(xi, g.thin_omega, t, g.thin_runs, options());
          ts.push_back(t);
          ests.push_back(est);
          ResultRecord r{fmt::format("thin_t{}", t), 0, 0, 0, 0, est.estimate, 0.0, {}, est.stderr_};
          CheckResult c{fmt::format("thin_t{}_hits", t), double(est.hits), 0, 0, est.hits > 0,
                        fmt::format("{} of {} runs thin to depth {}", est.hits, est.runs, t)};
          add(r, c);
        } catch (const Error& e) {
          failed(fmt::format("thin_t{}", t), e);
        }
      });
    }
    const double target = std::log(xi_hat.mean());
    const double slope = ts.size() >= 2 ? log_slope(ts, ests) : NAN;
    ResultRecord r{"thin_slope", 0, 0, 0, 0, slope, target, {}, static_cast<double>(burn_in_time(xi, g.thin_omega))};
    CheckResult c{"thin_slope", slope, target, g.slope_tolerance,
                  std::isfinite(slope) && std::abs(slope - target) <= g.slope_tolerance,
                  fmt::format("slope {:.4f} vs log nu_hat {:.4f}", slope, target)};
    add(r, c);
  }

  timed([&] {
    try {
      const auto plain = subcritical_decay(sub, g.sub_t, g.sub_runs, options());
      ResultRecord r{"subcritical_root", 0, 0, 0, 0, plain.root_estimate, sub.mean(), {}, plain.fraction.stderr_};
      CheckResult c{"subcritical_root", plain.root_estimate, sub.mean(), 0.0,
                    plain.root_estimate >= g.root_low && plain.root_estimate <= g.root_high,
                    fmt::format("root {:.4f} in [{}, {}]", plain.root_estimate, g.root_low, g.root_high)};
      add(r, c);
      const std::uint64_t bound = std::uint64_t{g.sub_t} * g.sub_t;
      const auto bounded = subcritical_decay(sub, g.sub_t, g.sub_runs, options(), bound);
      ResultRecord rb{"subcritical_root_bounded", 0, 0, 0, 0, bounded.root_estimate, plain.root_estimate, {},
                      bounded.fraction.stderr_};
      CheckResult cb{"subcritical_root_bounded", bounded.root_estimate, plain.root_estimate, g.bounded_root_tolerance,
                     std::abs(bounded.root_estimate - plain.root_estimate) <= g.bounded_root_tolerance,
                     fmt::format("bounded root {:.4f}, unbounded {:.4f}", bounded.root_estimate, plain.root_estimate)};
      add(rb, cb);
    } catch (const Error& e) {
      failed("subcritical_root", e);
    }
  });

  rep.wall_time_s = seconds_since(t0);
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
  case ExperimentKind::diameter_convergence: return run_diameter_convergence(cfg);
  case ExperimentKind::typical_distance: return run_typical_distance(cfg);
  case ExperimentKind::thin_depth: return run_thin_depth(cfg);
  case ExperimentKind::gw_suite: return run_gw_suite(cfg);
  }
  throw Error(Errc::unsupported, "experiment kind");
}

std::string records_csv(const ExperimentReport& report) {
  std::string out = "kind,label,n,replicate,seed,m,measured,prediction,ratio,aux,status\n";
  const auto kind = to_string(report.config.kind);
  for (const auto& r : report.records) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", kind, r.label, r.n, r.replicate, r.seed, r.m,
                       format_double(r.measured), format_double(r.prediction),
                       r.ratio ? format_double(*r.ratio) : std::string(), format_double(r.aux), r.status);
  }
  return out;
}

namespace {

Json nullable(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

} // namespace

Json summary_json(const ExperimentReport& report) {
  Json sizes = Json::array();
  for (const auto& a : report.sizes)
    sizes.push_back({{"n", a.n},
                     {"count", a.count},
                     {"failed", a.failed},
                     {"mean_measured", nullable(a.mean_measured)},
                     {"sd_measured", nullable(a.sd_measured)},
                     {"max_measured", nullable(a.max_measured)},
                     {"mean_prediction", nullable(a.mean_prediction)},
                     {"mean_ratio", a.mean_ratio ? nullable(*a.mean_ratio) : Json(nullptr)}});
  Json checks = Json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"value", nullable(c.value)},
                      {"target", nullable(c.target)},
                      {"tolerance", nullable(c.tolerance)},
                      {"pass", c.pass},
                      {"detail", c.detail}});
  Json records = Json::array();
  for (const auto& r : report.records)
    records.push_back({{"label", r.label},
                       {"n", r.n},
                       {"replicate", r.replicate},
                       {"seed", r.seed},
                       {"measured", nullable(r.measured)},
                       {"status", r.status},
                       {"wall_time_s", r.wall_time_s}});
  Json increments = Json::array();
  for (double x : report.increments) increments.push_back(nullable(x));
  return Json{{"config", to_json(report.config)},
              {"theory", report.theory},
              {"sizes", sizes},
              {"increments", increments},
              {"overall_increment", report.overall_increment ? nullable(*report.overall_increment) : Json(nullptr)},
              {"checks", checks},
              {"pass", report.pass()},
              {"records", records},
              {"wall_time_s", report.wall_time_s}};
}

void write_outputs(const ExperimentReport& report) {
  if (!report.config.csv_path.empty()) {
    std::ofstream csv(report.config.csv_path, std::ios::binary);
    if (!csv) throw Error(Errc::parse_error, "cannot write " + report.config.csv_path);
    csv << records_csv(report);
  }
  if (!report.config.json_path.empty()) {
    std::ofstream js(report.config.json_path);
    if (!js) throw Error(Errc::parse_error, "cannot write " + report.config.json_path);
    js << summary_json(report).dump(2) << '\n';
  }
}

} // namespace dicomo
