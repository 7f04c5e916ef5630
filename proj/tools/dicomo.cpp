// Command-line front end: theory | generate | diameter | gw | explore | experiment.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dicomo/distance.hpp"
#include "dicomo/error.hpp"
#include "dicomo/graphgen.hpp"
#include "dicomo/gwsim.hpp"
#include "dicomo/harness.hpp"
#include "dicomo/io.hpp"
#include "dicomo/neighborhood.hpp"
#include "dicomo/parallel.hpp"
#include "dicomo/theory.hpp"

using namespace dicomo;

namespace {

/// Inline JSON when the argument starts with '{', otherwise a file path.
Json json_arg(const std::string& arg) {
  const auto pos = arg.find_first_not_of(" \t\n");
  if (pos != std::string::npos && arg[pos] == '{') {
    try {
      return Json::parse(arg);
    } catch (const Json::exception& e) {
      throw Error(Errc::parse_error, e.what());
    }
  }
  return read_json_file(arg);
}

struct GraphSource {
  std::string graph_path;
  std::string degrees_path;
  std::string dist;
  std::size_t n = 0;
  std::string model = "dcm";
  std::uint64_t seed = 1;
  std::uint32_t d = 2;
  std::optional<double> p;
  double c = 1.0;
  std::uint64_t max_attempts = 1000;

  void add_generation_flags(CLI::App* app) {
    app->add_option("--degrees", degrees_path, "degree-sequence file (d_in d_out per line)");
    app->add_option("--dist", dist, "distribution spec: JSON file or inline JSON");
    app->add_option("--n", n, "number of vertices when sampling from --dist or a derived model");
    app->add_option("--model", model, "dcm | dcm-simple | dout | binom | binom-oriented");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--d", d, "out-degree of the dout model");
    app->add_option("--p", p, "edge probability of the binom models");
    app->add_option("--c", c, "mean degree of the binom models (p = c/(n-1))");
    app->add_option("--max-attempts", max_attempts, "rejection budget of dcm-simple");
  }

  ModelSpec spec() const {
    ModelSpec s;
    s.model = parse_model(model);
    if (!dist.empty()) s.dist = json_arg(dist);
    s.d = d;
    s.p = p;
    s.c = c;
    s.max_attempts = max_attempts;
    return s;
  }

  Digraph build(Rng& rng) const {
    if (!graph_path.empty()) return read_edge_file(graph_path).graph;
    const ModelSpec s = spec();
    if (!degrees_path.empty()) {
      const auto seq = read_degree_file(degrees_path);
      if (s.model == GraphModel::dcm) return pair_uniform(seq, rng);
      if (s.model == GraphModel::dcm_simple) return sample_simple(seq, rng, s.max_attempts);
      throw Error(Errc::unsupported, "--degrees applies to the dcm models only");
    }
    if (n == 0) throw Error(Errc::domain_error, "--n is required unless --graph or --degrees is given");
    return generate_graph(s, n, rng);
  }

  BiDegreeSequence sequence(Rng& rng) const {
    if (!degrees_path.empty()) return read_degree_file(degrees_path);
    if (dist.empty() || n == 0) throw Error(Errc::domain_error, "give --degrees, or --dist with --n");
    return sample_sequence(distribution_from_json(json_arg(dist)), n, rng).sequence;
  }
};

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed configuration model: theory, generation, distances and Monte Carlo experiments"};
  app.require_subcommand(1);

  // theory
  std::string theory_dist;
  auto* theory = app.add_subcommand("theory", "limit constants of a degree distribution");
  theory->add_option("--dist", theory_dist, "distribution spec: JSON file or inline JSON")->required();

  // generate
  GraphSource gen;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "sample a digraph and write it as an edge list");
  gen.add_generation_flags(generate);
  generate->add_option("--out", gen_out, "output path (stdout when omitted)");

  // diameter
  GraphSource dia;
  unsigned dia_threads = default_threads();
  auto* diameter = app.add_subcommand("diameter", "exact diameter by all-sources BFS");
  diameter->add_option("--graph", dia.graph_path, "edge-list file");
  dia.add_generation_flags(diameter);
  diameter->add_option("--threads", dia_threads, "worker threads");

  // gw
  std::string gw_offspring = R"({"type":"poisson","mean":2})";
  std::string gw_op = "survival";
  unsigned gw_horizon = 30, gw_t = 10;
  std::uint64_t gw_runs = 100000, gw_omega = 50, gw_seed = 1, gw_cap = default_population_cap;
  std::optional<std::uint64_t> gw_bound;
  unsigned gw_threads = default_threads();
  auto* gw = app.add_subcommand("gw", "Galton-Watson simulation and Monte Carlo estimators");
  gw->add_option("--offspring", gw_offspring, "offspring law: JSON file or inline JSON");
  gw->add_option("--op", gw_op, "simulate | survival | thin | extinct_root | subcritical")
      ->check(CLI::IsMember({"simulate", "survival", "thin", "extinct_root", "subcritical"}));
  gw->add_option("--horizon", gw_horizon, "generations (simulate, survival, extinct_root)");
  gw->add_option("--t", gw_t, "depth (thin, subcritical)");
  gw->add_option("--runs", gw_runs, "Monte Carlo runs");
  gw->add_option("--omega", gw_omega, "width bound (thin)");
  gw->add_option("--bound", gw_bound, "total-size bound (subcritical)");
  gw->add_option("--cap", gw_cap, "population cap (simulate)");
  gw->add_option("--seed", gw_seed, "master seed");
  gw->add_option("--threads", gw_threads, "worker threads");

  // explore
  GraphSource exp;
  std::uint32_t ex_start = 0;
  std::string ex_direction = "out";
  std::optional<std::uint64_t> ex_omega;
  unsigned ex_max_t = 1000;
  bool ex_scan = false;
  std::uint64_t ex_budget = 0;
  auto* explore = app.add_subcommand("explore", "lazy neighbourhood exploration of a half-edge");
  exp.add_generation_flags(explore);
  explore->add_option("--start", ex_start, "start half-edge (tail for out, head for in)");
  explore->add_option("--direction", ex_direction, "out | in")->check(CLI::IsMember({"out", "in"}));
  explore->add_option("--omega", ex_omega, "width threshold (default: ceil(ln^6 n) capped at n/10)");
  explore->add_option("--max-t", ex_max_t, "depth limit");
  explore->add_flag("--scan", ex_scan, "thin-depth scan over many start half-edges");
  explore->add_option("--budget", ex_budget, "probes of the scan (0 = every half-edge)");

  // experiment
  std::string cfg_path, ex_kind = "diameter_convergence", ex_model = "dcm", ex_dist, ex_csv, ex_json;
  std::vector<std::size_t> ex_sizes;
  unsigned ex_replicates = 1, ex_threads = default_threads();
  std::uint64_t ex_seed = 1;
  auto* experiment = app.add_subcommand("experiment", "seeded convergence experiment with CSV and JSON output");
  experiment->add_option("--config", cfg_path, "JSON config; its fields override the flags");
  experiment->add_option("--kind", ex_kind, "diameter_convergence | typical_distance | thin_depth | gw_suite");
  experiment->add_option("--model", ex_model, "dcm | dcm-simple | dout | binom | binom-oriented");
  experiment->add_option("--dist", ex_dist, "distribution spec: JSON file or inline JSON");
  experiment->add_option("--sizes", ex_sizes, "strictly increasing vertex counts");
  experiment->add_option("--replicates", ex_replicates, "replicates per size");
  experiment->add_option("--seed", ex_seed, "master seed");
  experiment->add_option("--threads", ex_threads, "worker threads");
  experiment->add_option("--csv", ex_csv, "CSV output path");
  experiment->add_option("--json", ex_json, "JSON summary path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (theory->parsed()) {
      const Json spec = json_arg(theory_dist);
      Json out = to_json(theory_constants(distribution_from_json(spec)));
      out["dist"] = spec;
      print(out);
    } else if (generate->parsed()) {
      Rng rng(gen.seed);
      const Digraph g = gen.build(rng);
      if (gen_out.empty()) {
        write_edge_list(std::cout, g, gen.seed);
      } else {
        std::ofstream f(gen_out);
        if (!f) throw Error(Errc::parse_error, "cannot write " + gen_out);
        write_edge_list(f, g, gen.seed);
      }
    } else if (diameter->parsed()) {
      Rng rng(dia.seed);
      const Digraph g = dia.build(rng);
      const auto t0 = std::chrono::steady_clock::now();
      DiameterOptions opt;
      opt.threads = dia_threads;
      const auto rep = diameter_exact(g, opt);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      print(Json{{"diameter", rep.diameter},
                 {"argmax", {rep.argmax.first, rep.argmax.second}},
                 {"finite_pairs", rep.finite_pairs},
                 {"n", g.n()},
                 {"m", g.m()},
                 {"wall_time_s", wall}});
    } else if (gw->parsed()) {
      const Json spec = json_arg(gw_offspring);
      const Pmf xi = pmf_from_json(spec);
      McOptions opt{gw_seed, gw_threads};
      Json params{{"offspring", spec}, {"op", gw_op}, {"seed", gw_seed}};
      Json out;
      auto emit = [&](const Estimate& e) {
        out = Json{{"estimate", e.estimate}, {"stderr", e.stderr_}, {"runs", e.runs}, {"hits", e.hits}};
      };
      if (gw_op == "simulate") {
        Rng rng(gw_seed);
        const auto tr = simulate(xi, gw_horizon, gw_cap, rng);
        const char* status[] = {"extinct", "alive_at_horizon", "size_censored"};
        out = Json{{"sizes", tr.sizes}, {"total", tr.total}, {"status", status[static_cast<int>(tr.status)]}};
        params["horizon"] = gw_horizon;
        params["cap"] = gw_cap;
      } else if (gw_op == "survival") {
        emit(estimate_survival(xi, gw_horizon, gw_runs, opt));
        out["theory"] = survival_probability(xi);
        params["horizon"] = gw_horizon;
      } else if (gw_op == "thin") {
        emit(thin_event_probability(xi, gw_omega, gw_t, gw_runs, opt));
        out["burn_in"] = burn_in_time(xi, gw_omega);
        params["omega"] = gw_omega;
        params["t"] = gw_t;
      } else if (gw_op == "extinct_root") {
        const auto law = extinct_root_offspring_law(xi, gw_horizon, gw_runs, opt);
        const Pmf theory_law = conjugate(xi, survival_probability(xi));
        out = Json{{"pmf", std::vector<double>(law.pmf.probabilities().begin(), law.pmf.probabilities().end())},
                   {"extinct_runs", law.extinct_runs},
                   {"runs", law.runs},
                   {"tv_to_conjugate", total_variation(law.pmf, theory_law)}};
        params["horizon"] = gw_horizon;
      } else {
        const auto dec = subcritical_decay(xi, gw_t, gw_runs, opt, gw_bound);
        emit(dec.fraction);
        out["root_estimate"] = dec.root_estimate;
        params["t"] = gw_t;
        if (gw_bound) params["bound"] = *gw_bound;
      }
      params["runs"] = gw_runs;
      out["params"] = params;
      print(out);
    } else if (explore->parsed()) {
      Rng rng(exp.seed);
      const auto seq = exp.sequence(rng);
      const Direction dir = ex_direction == "out" ? Direction::out : Direction::in;
      const std::uint64_t omega = ex_omega.value_or(default_omega(seq.n()));
      if (ex_scan) {
        const auto scan = thin_depth_scan(seq, dir, omega, rng, ex_budget == 0 ? seq.m() : ex_budget, ex_max_t);
        Json exp_hist = Json::object(), death_hist = Json::object();
        for (auto [t, c] : scan.expansion_times) exp_hist[std::to_string(t)] = c;
        for (auto [t, c] : scan.death_times) death_hist[std::to_string(t)] = c;
        print(Json{{"max_thin_depth", scan.max_thin_depth},
                   {"probes", scan.probes},
                   {"omega", scan.omega},
                   {"expansion_times", exp_hist},
                   {"death_times", death_hist},
                   {"unresolved", scan.unresolved}});
      } else {
        const auto p = neighborhood_profile(seq, ex_start, dir, omega, ex_max_t, rng);
        print(Json{{"start", p.start},
                   {"direction", ex_direction},
                   {"sizes", p.sizes},
                   {"expansion_time", p.expansion_time ? Json(*p.expansion_time) : Json(nullptr)},
                   {"died_at", p.died_at ? Json(*p.died_at) : Json(nullptr)},
                   {"omega", p.omega}});
      }
    } else if (experiment->parsed()) {
      Json j{{"kind", ex_kind},
             {"model", ex_model},
             {"sizes", ex_sizes},
             {"replicates", ex_replicates},
             {"master_seed", ex_seed},
             {"threads", ex_threads},
             {"outputs", {{"csv", ex_csv}, {"json", ex_json}}}};
      if (!ex_dist.empty()) j["dist"] = json_arg(ex_dist);
      if (!cfg_path.empty()) j.merge_patch(read_json_file(cfg_path));
      const auto cfg = config_from_json(j);
      const auto report = run_experiment(cfg);
      write_outputs(report);
      if (cfg.json_path.empty()) print(summary_json(report));
      for (const auto& c : report.checks)
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      return report.pass() ? 0 : 2;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
