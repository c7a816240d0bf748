#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsd/bench.hpp"
#include "rsd/oracles.hpp"

namespace rsd {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << content;
}

std::unique_ptr<LinearOracle> make_oracle(const std::string& spec,
                                          const Instance& instance) {
  if (spec == "internal") return make_internal_oracle(instance);
  if (spec.rfind("external:", 0) == 0)
    return std::make_unique<ExternalOracle>(spec.substr(9), instance);
  throw ParseError("--oracle expects internal or external:<command>");
}

// Result artifacts deliberately omit wall time so repeated runs with the
// same seed are byte-identical.
std::string solve_result_json(const std::string& instance,
                              const std::string& solver,
                              const std::string& status,
                              std::optional<double> value,
                              std::optional<double> bound, long iterations,
                              long nodes) {
  nlohmann::json j;
  j["instance"] = instance;
  j["solver"] = solver;
  j["status"] = status;
  if (value) j["value"] = *value;
  if (bound) j["bound"] = *bound;
  j["iterations"] = iterations;
  j["nodes"] = nodes;
  return j.dump(2) + "\n";
}

SolverConfig parse_config_tag(const std::string& tag) {
  SolverConfig cfg;
  cfg.tag = tag;
  std::string rest = tag;
  if (rest.rfind("root-", 0) == 0) {
    cfg.root_only = true;
    rest = rest.substr(5);
    cfg.drop_rule = drop_rule_from_string(rest);
    return cfg;
  }
  const auto dash = rest.find('-');
  if (dash == std::string::npos)
    throw ParseError("config tag must look like d0-ws, d2-nows or root-d0: " +
                     tag);
  cfg.drop_rule = drop_rule_from_string(rest.substr(0, dash));
  const std::string ws = rest.substr(dash + 1);
  if (ws == "ws")
    cfg.warmstart = true;
  else if (ws == "nows")
    cfg.warmstart = false;
  else
    throw ParseError("config tag must end in -ws or -nows: " + tag);
  return cfg;
}

int cmd_generate(const std::string& problem, int nodes, int scenarios,
                 double beta, std::uint64_t seed, int replicate,
                 const std::string& out) {
  GeneratorSpec spec;
  spec.kind = problem_kind_from_string(problem);
  spec.nodes = nodes;
  spec.scenario_count = scenarios;
  spec.beta = beta;
  spec.seed = seed;
  spec.replicate = replicate;
  const Instance inst = generate_instance(spec);
  const std::string text = save_instance(inst);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return 0;
}

int cmd_solve(const std::string& instance_path, const std::string& drop,
              bool warmstart, double time_limit, double stop_tol,
              double perturb, std::uint64_t seed, const std::string& oracle_spec,
              const std::string& out, bool trace, bool quiet) {
  const Instance inst = load_instance_file(instance_path);
  auto oracle = make_oracle(oracle_spec, inst);

  BnbConfig cfg;
  cfg.drop_rule = drop_rule_from_string(drop);
  cfg.warmstart = warmstart;
  cfg.time_limit_seconds = time_limit;
  cfg.stop_tol = stop_tol;
  cfg.perturbation_magnitude = perturb;
  cfg.rng_seed = seed;
  if (trace) cfg.node_trace = &std::cerr;

  const BnbResult res = solve_bnb(inst, *oracle, cfg);
  if (!quiet)
    std::cout << "instance: " << inst.name << "\n"
              << "status:   " << to_string(res.status) << "\n"
              << "value:    " << res.value << "\n"
              << "bound:    " << res.global_lb << "\n"
              << "nodes:    " << res.node_count << "\n"
              << "sd_iters: " << res.total_sd_iterations << "\n"
              << "time_s:   " << res.wall_time_seconds << "\n";
  if (!out.empty()) {
    const std::string tag =
        drop + (warmstart ? "-ws" : "-nows");
    write_file(out, solve_result_json(
                        inst.name, tag, to_string(res.status),
                        res.status == BnbStatus::Solved
                            ? std::optional<double>(res.value)
                            : std::nullopt,
                        res.global_lb, res.total_sd_iterations,
                        res.node_count));
  }
  return 0;
}

int cmd_root(const std::string& instance_path, const std::string& drop,
             double stop_tol, double perturb, std::uint64_t seed,
             const std::string& oracle_spec, const std::string& out,
             bool trace, bool quiet) {
  const Instance inst = load_instance_file(instance_path);
  auto oracle = make_oracle(oracle_spec, inst);

  SdConfig cfg;
  cfg.drop_rule = drop_rule_from_string(drop);
  cfg.stop_tol = stop_tol;
  cfg.perturbation_magnitude = perturb;
  cfg.rng_seed = seed;
  if (trace) cfg.trace = &std::cerr;

  const RootResult res = evaluate_root(inst, *oracle, cfg);
  if (!quiet)
    std::cout << "instance:   " << inst.name << "\n"
              << "status:     " << to_string(res.status) << "\n"
              << "bound:      " << res.value << "\n"
              << "iterations: " << res.iterations << "\n"
              << "time_s:     " << res.wall_time_seconds << "\n";
  if (!out.empty()) {
    write_file(out, solve_result_json(inst.name, "root-" + drop,
                                      to_string(res.status), std::nullopt,
                                      res.value, res.iterations, 1));
  }
  return res.status == SdStatus::Optimal ? 0 : 1;
}

int cmd_bench(const std::string& problem, const std::vector<int>& nodes,
              const std::vector<int>& scenarios,
              const std::vector<double>& betas, int replicates,
              std::uint64_t seed, const std::vector<std::string>& config_tags,
              double time_limit, int jobs, const std::string& out,
              bool quiet) {
  const ProblemKind kind = problem_kind_from_string(problem);
  std::vector<GeneratorSpec> specs;
  std::uint64_t next_seed = seed;
  for (int n : nodes)
    for (int m : scenarios)
      for (double b : betas)
        for (int r = 0; r < replicates; ++r) {
          GeneratorSpec s;
          s.kind = kind;
          s.nodes = n;
          s.scenario_count = m;
          s.beta = b;
          s.replicate = r;
          s.seed = next_seed++;  // sequential seeds: transparent to reproduce
          specs.push_back(s);
        }

  std::vector<SolverConfig> configs;
  std::vector<std::string> order;
  for (const std::string& tag : config_tags) {
    configs.push_back(parse_config_tag(tag));
    order.push_back(tag);
  }

  BenchOptions options;
  options.time_limit_seconds = time_limit;
  options.jobs = jobs;
  options.progress = quiet ? nullptr : &std::cerr;

  const std::vector<RunRecord> records = run_benchmark(specs, configs, options);
  const std::string csv = records_to_csv(records);
  if (!out.empty())
    write_file(out, csv);
  else
    std::cout << csv;
  std::cout << render_summary_table(aggregate_records(records, order));
  return 0;
}

int cmd_profile(const std::string& in, const std::string& out) {
  const auto records = records_from_csv(read_file(in));
  const ProfileResult profile = performance_profile_from_records(records);
  if (profile.all_failed > 0)
    std::cerr << "note: " << profile.all_failed
              << " instance(s) failed by every solver were excluded\n";
  const std::string csv = profile_to_csv(profile);
  if (!out.empty())
    write_file(out, csv);
  else
    std::cout << csv;
  return 0;
}

}  // namespace

int cli(int argc, const char* const* argv) {
  CLI::App app{"Oracle-based solver for min-max robust combinatorial "
               "optimization over finite scenario sets"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a random instance");
  std::string g_problem = "mst";
  int g_nodes = 5, g_scenarios = 10, g_replicate = 0;
  double g_beta = 1.0;
  std::uint64_t g_seed = 0;
  std::string g_out;
  gen->add_option("--problem", g_problem, "mst|tsp")->capture_default_str();
  gen->add_option("--nodes", g_nodes, "graph size |N|")->capture_default_str();
  gen->add_option("--scenarios", g_scenarios, "scenario count m")
      ->capture_default_str();
  gen->add_option("--beta", g_beta, "deviation factor")->capture_default_str();
  gen->add_option("--seed", g_seed, "rng seed")->capture_default_str();
  gen->add_option("--replicate", g_replicate, "replicate index in the name")
      ->capture_default_str();
  gen->add_option("--out", g_out, "output path (stdout when omitted)");

  // shared solver flags
  std::string s_instance, s_drop = "d0", s_oracle = "internal", s_out;
  bool s_warmstart = true, s_trace = false, s_quiet = false;
  double s_time_limit = 3600.0, s_stop_tol = 1e-6, s_perturb = 0.0;
  std::uint64_t s_seed = 0;

  auto* solve = app.add_subcommand("solve", "Solve an instance to optimality");
  solve->add_option("--instance", s_instance, "instance JSON path")
      ->required();
  solve->add_option("--drop", s_drop, "dropping rule d0|d1|d2")
      ->capture_default_str();
  solve->add_flag("--warmstart,!--no-warmstart", s_warmstart,
                  "inherit vertices in child nodes")
      ->capture_default_str();
  solve->add_option("--time-limit", s_time_limit, "seconds")
      ->capture_default_str();
  solve->add_option("--stop-tol", s_stop_tol, "relaxation stopping tolerance")
      ->capture_default_str();
  solve->add_option("--perturb", s_perturb, "scenario perturbation magnitude")
      ->capture_default_str();
  solve->add_option("--seed", s_seed, "perturbation seed")
      ->capture_default_str();
  solve->add_option("--oracle", s_oracle, "internal or external:<command>")
      ->capture_default_str();
  solve->add_option("--out", s_out, "write a result JSON here");
  solve->add_flag("--trace", s_trace, "node trace on stderr");
  solve->add_flag("--quiet", s_quiet, "suppress the stdout summary");

  std::string r_instance, r_drop = "d0", r_oracle = "internal", r_out;
  bool r_trace = false, r_quiet = false;
  double r_stop_tol = 1e-6, r_perturb = 0.0;
  std::uint64_t r_seed = 0;
  auto* root = app.add_subcommand("root", "Solve the root relaxation only");
  root->add_option("--instance", r_instance, "instance JSON path")->required();
  root->add_option("--drop", r_drop, "dropping rule d0|d1|d2")
      ->capture_default_str();
  root->add_option("--stop-tol", r_stop_tol, "stopping tolerance")
      ->capture_default_str();
  root->add_option("--perturb", r_perturb, "scenario perturbation magnitude")
      ->capture_default_str();
  root->add_option("--seed", r_seed, "perturbation seed")
      ->capture_default_str();
  root->add_option("--oracle", r_oracle, "internal or external:<command>")
      ->capture_default_str();
  root->add_option("--out", r_out, "write a result JSON here");
  root->add_flag("--trace", r_trace, "iteration trace on stderr");
  root->add_flag("--quiet", r_quiet, "suppress the stdout summary");

  auto* bench = app.add_subcommand("bench", "Run a benchmark grid");
  std::string b_problem = "mst", b_out;
  std::vector<int> b_nodes{5}, b_scenarios{10};
  std::vector<double> b_betas{1.0};
  std::vector<std::string> b_configs{"d0-ws"};
  int b_replicates = 1, b_jobs = 1;
  double b_time_limit = 3600.0;
  std::uint64_t b_seed = 0;
  bool b_quiet = false;
  bench->add_option("--problem", b_problem, "mst|tsp")->capture_default_str();
  bench->add_option("--nodes", b_nodes, "graph sizes")->delimiter(',');
  bench->add_option("--scenarios", b_scenarios, "scenario counts")
      ->delimiter(',');
  bench->add_option("--beta", b_betas, "deviation factors")->delimiter(',');
  bench->add_option("--replicates", b_replicates, "instances per cell")
      ->capture_default_str();
  bench->add_option("--seed", b_seed, "base seed (instances take seed, seed+1, ...)")
      ->capture_default_str();
  bench->add_option("--configs", b_configs,
                    "solver tags: d0-ws,d0-nows,d2-ws,... or root-d0")
      ->delimiter(',');
  bench->add_option("--time-limit", b_time_limit, "per-run seconds")
      ->capture_default_str();
  bench->add_option("--jobs", b_jobs, "concurrent runs")->capture_default_str();
  bench->add_option("--out", b_out, "results CSV path (stdout when omitted)");
  bench->add_flag("--quiet", b_quiet, "suppress per-run progress on stderr");

  auto* prof = app.add_subcommand("profile", "Performance profiles from a results CSV");
  std::string p_in, p_out;
  prof->add_option("--in", p_in, "results CSV path")->required();
  prof->add_option("--out", p_out, "profile CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed())
      return cmd_generate(g_problem, g_nodes, g_scenarios, g_beta, g_seed,
                          g_replicate, g_out);
    if (solve->parsed())
      return cmd_solve(s_instance, s_drop, s_warmstart, s_time_limit,
                       s_stop_tol, s_perturb, s_seed, s_oracle, s_out,
                       s_trace, s_quiet);
    if (root->parsed())
      return cmd_root(r_instance, r_drop, r_stop_tol, r_perturb, r_seed,
                      r_oracle, r_out, r_trace, r_quiet);
    if (bench->parsed())
      return cmd_bench(b_problem, b_nodes, b_scenarios, b_betas, b_replicates,
                       b_seed, b_configs, b_time_limit, b_jobs, b_out,
                       b_quiet);
    if (prof->parsed()) return cmd_profile(p_in, p_out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace rsd
