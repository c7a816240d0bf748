#include "rsd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rsd/oracles.hpp"
#include "rsd/rng.hpp"

namespace rsd {

namespace {

std::string format_beta(double beta) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", beta);
  return buf;
}

}  // namespace

Instance generate_instance(const GeneratorSpec& spec) {
  if (spec.kind == ProblemKind::Generic)
    throw std::invalid_argument("generator supports mst and tsp instances");
  if (spec.nodes < 3) throw std::invalid_argument("generator needs |N| >= 3");
  if (spec.scenario_count < 1)
    throw std::invalid_argument("generator needs at least one scenario");
  // beta = 0 collapses every scenario onto the nominal costs; useful in
  // tests, so only negative values are rejected.
  if (spec.beta < 0.0) throw std::invalid_argument("generator needs beta >= 0");

  Graph graph = Graph::complete(spec.nodes);
  const std::size_t n = graph.edge_count();
  Rng rng(spec.seed);

  std::vector<double> nominal(n);
  for (double& c : nominal) c = rng.uniform(1.0, 2.0);

  std::vector<Scenario> scenarios(static_cast<std::size_t>(spec.scenario_count));
  std::vector<double> direction(n);
  for (Scenario& s : scenarios) {
    double norm = 0.0;
    do {
      rng.gaussian_fill(direction);
      if (spec.kind == ProblemKind::Tsp)
        for (double& d : direction) d = std::abs(d);
      norm = 0.0;
      for (double d : direction) norm += d * d;
      norm = std::sqrt(norm);
    } while (norm < 1e-12);
    s.offset = 0.0;
    s.costs.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      s.costs[i] = nominal[i] + spec.beta * direction[i] / norm;
  }

  std::ostringstream name;
  name << to_string(spec.kind) << "_n" << spec.nodes << "_m"
       << spec.scenario_count << "_b" << format_beta(spec.beta) << "_r"
       << spec.replicate << "_s" << spec.seed;

  Instance inst{spec.kind,
                name.str(),
                std::move(graph),
                ScenarioSet(std::move(scenarios)),
                std::move(nominal),
                spec.beta,
                spec.seed};
  return inst;
}

namespace {

RunRecord run_one(const GeneratorSpec& spec, const SolverConfig& config,
                  const BenchOptions& options) {
  RunRecord rec;
  rec.solver = config.tag;
  try {
    const Instance instance = generate_instance(spec);
    rec.instance = instance.name;
    auto oracle = make_internal_oracle(instance);
    if (config.root_only) {
      SdConfig sd;
      sd.drop_rule = config.drop_rule;
      sd.stop_tol = config.stop_tol;
      sd.perturbation_magnitude = config.perturbation;
      sd.rng_seed = spec.seed;
      const RootResult root = evaluate_root(instance, *oracle, sd);
      rec.status = root.status == SdStatus::Optimal ? "solved"
                                                    : to_string(root.status);
      rec.time_seconds = root.wall_time_seconds;
      rec.iterations = root.iterations;
      rec.nodes = 1;
      rec.bound = root.value;
    } else {
      BnbConfig bnb;
      bnb.drop_rule = config.drop_rule;
      bnb.warmstart = config.warmstart;
      bnb.time_limit_seconds = options.time_limit_seconds;
      bnb.stop_tol = config.stop_tol;
      bnb.perturbation_magnitude = config.perturbation;
      bnb.rng_seed = spec.seed;
      const BnbResult res = solve_bnb(instance, *oracle, bnb);
      rec.status = to_string(res.status);
      rec.time_seconds = res.wall_time_seconds;
      rec.iterations = res.total_sd_iterations;
      rec.nodes = res.node_count;
      rec.bound = res.global_lb;
      if (res.status == BnbStatus::Solved) rec.value = res.value;
    }
  } catch (const std::exception& e) {
    if (rec.instance.empty()) {
      std::ostringstream name;
      name << to_string(spec.kind) << "_n" << spec.nodes << "_m"
           << spec.scenario_count;
      rec.instance = name.str();
    }
    rec.status = "error";
    if (options.progress) {
      static std::mutex log_mutex;
      std::lock_guard<std::mutex> lock(log_mutex);
      *options.progress << "error: " << rec.instance << " / " << rec.solver
                        << ": " << e.what() << '\n';
    }
  }
  return rec;
}

}  // namespace

std::vector<RunRecord> run_benchmark(const std::vector<GeneratorSpec>& specs,
                                     const std::vector<SolverConfig>& configs,
                                     const BenchOptions& options) {
  struct Task {
    const GeneratorSpec* spec;
    const SolverConfig* config;
  };
  std::vector<Task> tasks;
  tasks.reserve(specs.size() * configs.size());
  for (const GeneratorSpec& s : specs)
    for (const SolverConfig& c : configs) tasks.push_back({&s, &c});

  std::vector<RunRecord> records(tasks.size());
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      records[i] = run_one(*tasks[i].spec, *tasks[i].config, options);
      if (options.progress)
        *options.progress << records[i].instance << " " << records[i].solver
                          << " " << records[i].status << " "
                          << records[i].time_seconds << "s\n";
    }
  } else {
    // Each worker pulls the next task index; records land in task order, so
    // the output is deterministic regardless of scheduling.
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          records[i] = run_one(*tasks[i].spec, *tasks[i].config, options);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return records;
}

namespace {

std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

constexpr const char* kRecordHeader =
    "instance,solver,status,time_s,iterations,nodes,bound,value";

}  // namespace

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  os << kRecordHeader << '\n';
  for (const RunRecord& r : records) {
    os << r.instance << ',' << r.solver << ',' << r.status << ','
       << format_double(r.time_seconds, "%.9f") << ',' << r.iterations << ','
       << r.nodes << ',';
    if (r.bound) os << format_double(*r.bound, "%.17g");
    os << ',';
    if (r.value) os << format_double(*r.value, "%.17g");
    os << '\n';
  }
  return os.str();
}

std::vector<RunRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader)
    throw ParseError("results CSV: unexpected header");
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 8)
      throw ParseError("results CSV: expected 8 fields per row");
    RunRecord r;
    r.instance = fields[0];
    r.solver = fields[1];
    r.status = fields[2];
    r.time_seconds = std::stod(fields[3]);
    r.iterations = std::stol(fields[4]);
    r.nodes = std::stol(fields[5]);
    if (!fields[6].empty()) r.bound = std::stod(fields[6]);
    if (!fields[7].empty()) r.value = std::stod(fields[7]);
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

// Pulls |N| and m back out of generated instance names (..._n<N>_m<M>_...).
bool parse_group_key(const std::string& name, int& nodes, int& scenarios) {
  const auto npos = name.find("_n");
  const auto mpos = name.find("_m", npos == std::string::npos ? 0 : npos);
  if (npos == std::string::npos || mpos == std::string::npos) return false;
  try {
    nodes = std::stoi(name.substr(npos + 2, mpos - npos - 2));
    std::size_t end = mpos + 2;
    while (end < name.size() && std::isdigit(name[end])) ++end;
    scenarios = std::stoi(name.substr(mpos + 2, end - mpos - 2));
  } catch (const std::exception&) {
    return false;
  }
  return nodes > 0 && scenarios > 0;
}

}  // namespace

std::vector<SummaryRow> aggregate_records(
    const std::vector<RunRecord>& records,
    const std::vector<std::string>& solver_order) {
  std::map<std::pair<int, int>, std::map<std::string, SummaryCell>> groups;
  for (const RunRecord& r : records) {
    int nodes = 0, scenarios = 0;
    if (!parse_group_key(r.instance, nodes, scenarios)) continue;
    SummaryCell& cell = groups[{nodes, scenarios}][r.solver];
    cell.solver = r.solver;
    ++cell.total;
    if (r.status == "solved") {
      // Accumulate sums; converted to means below.
      ++cell.solved;
      cell.mean_time += r.time_seconds;
      cell.mean_iterations += static_cast<double>(r.iterations);
      cell.mean_nodes += static_cast<double>(r.nodes);
    }
  }
  std::vector<SummaryRow> rows;
  for (auto& [key, cells] : groups) {
    SummaryRow row;
    row.nodes = key.first;
    row.scenario_count = key.second;
    row.edges = key.first * (key.first - 1) / 2;
    for (const std::string& tag : solver_order) {
      auto it = cells.find(tag);
      if (it == cells.end()) continue;
      SummaryCell cell = it->second;
      if (cell.solved > 0) {
        cell.mean_time /= cell.solved;
        cell.mean_iterations /= cell.solved;
        cell.mean_nodes /= cell.solved;
      }
      row.cells.push_back(std::move(cell));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_summary_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "  |N|   |E|   #sc";
  std::vector<std::string> tags;
  if (!rows.empty())
    for (const SummaryCell& c : rows.front().cells) tags.push_back(c.solver);
  for (const std::string& t : tags) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), " | %-10s #sol    time/s    #nodes       #it",
                  t.c_str());
    os << buf;
  }
  os << '\n';
  for (const SummaryRow& row : rows) {
    char head[64];
    std::snprintf(head, sizeof(head), "%5d %5d %5d", row.nodes, row.edges,
                  row.scenario_count);
    os << head;
    for (const SummaryCell& c : row.cells) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), " | %10s %4d %9.2f %9.3g %9.3g", "",
                    c.solved, c.mean_time, c.mean_nodes, c.mean_iterations);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

ProfileResult performance_profile(
    const std::vector<std::string>& solvers,
    const std::vector<std::vector<double>>& times) {
  if (solvers.size() != times.size())
    throw std::invalid_argument("performance_profile: one time row per solver");
  const std::size_t s_count = solvers.size();
  const std::size_t p_count = s_count == 0 ? 0 : times[0].size();
  for (const auto& row : times)
    if (row.size() != p_count)
      throw std::invalid_argument("performance_profile: ragged time matrix");

  ProfileResult result;
  std::vector<std::vector<double>> ratios(s_count);
  for (std::size_t p = 0; p < p_count; ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < s_count; ++s)
      if (!std::isnan(times[s][p])) best = std::min(best, times[s][p]);
    if (!std::isfinite(best)) {
      ++result.all_failed;  // failed by every solver: excluded
      continue;
    }
    ++result.instances_used;
    for (std::size_t s = 0; s < s_count; ++s) {
      if (std::isnan(times[s][p])) continue;  // ratio infinity, never counted
      ratios[s].push_back(best > 0 ? times[s][p] / best : 1.0);
    }
  }

  for (std::size_t s = 0; s < s_count; ++s) {
    std::sort(ratios[s].begin(), ratios[s].end());
    const double total = result.instances_used;
    if (total == 0) continue;
    // Breakpoints: always tau = 1, then every distinct ratio.
    std::size_t covered =
        std::upper_bound(ratios[s].begin(), ratios[s].end(), 1.0) -
        ratios[s].begin();
    result.points.push_back({solvers[s], 1.0, covered / total});
    for (std::size_t i = 0; i < ratios[s].size(); ++i) {
      if (ratios[s][i] <= 1.0) continue;
      if (i + 1 < ratios[s].size() && ratios[s][i + 1] == ratios[s][i])
        continue;  // collapse duplicates to the last occurrence
      result.points.push_back({solvers[s], ratios[s][i], (i + 1) / total});
    }
  }
  return result;
}

ProfileResult performance_profile_from_records(
    const std::vector<RunRecord>& records) {
  std::vector<std::string> solvers;
  std::vector<std::string> instances;
  for (const RunRecord& r : records) {
    if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end())
      solvers.push_back(r.solver);
    if (std::find(instances.begin(), instances.end(), r.instance) ==
        instances.end())
      instances.push_back(r.instance);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> times(
      solvers.size(), std::vector<double>(instances.size(), nan));
  for (const RunRecord& r : records) {
    if (r.status != "solved") continue;
    const auto s = static_cast<std::size_t>(
        std::find(solvers.begin(), solvers.end(), r.solver) - solvers.begin());
    const auto p = static_cast<std::size_t>(
        std::find(instances.begin(), instances.end(), r.instance) -
        instances.begin());
    times[s][p] = r.time_seconds;
  }
  return performance_profile(solvers, times);
}

std::string profile_to_csv(const ProfileResult& profile) {
  std::ostringstream os;
  os << "solver,tau,rho\n";
  for (const ProfilePoint& p : profile.points)
    os << p.solver << ',' << format_double(p.tau, "%.17g") << ','
       << format_double(p.rho, "%.17g") << '\n';
  return os.str();
}

}  // namespace rsd
