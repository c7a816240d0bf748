#include "rsd/master.hpp"

#include <cmath>
#include <sstream>

#include "rsd/kernels.hpp"
#include "rsd/tolerances.hpp"

namespace rsd {

ActiveSet::ActiveSet(const ScenarioSet& u) : u_(&u) {}

ActiveSet::ActiveSet(const ScenarioSet& u, const std::vector<Vertex>& vertices)
    : u_(&u) {
  for (const Vertex& v : vertices) add(v);
}

bool ActiveSet::contains(const Vertex& v) const { return index_.count(v) > 0; }

std::size_t ActiveSet::add(const Vertex& v) {
  if (v.bits.size() != u_->dimension())
    throw std::invalid_argument("ActiveSet: vertex dimension mismatch");
  if (auto it = index_.find(v); it != index_.end()) return it->second;
  std::vector<double> column(u_->size());
  kernels::vertex_scenario_values(*u_, v, column);
  vertices_.push_back(v);
  columns_.push_back(std::move(column));
  index_.emplace(v, vertices_.size() - 1);
  return vertices_.size() - 1;
}

void ActiveSet::filter(const std::vector<char>& keep) {
  std::vector<Vertex> vs;
  std::vector<std::vector<double>> cols;
  vs.reserve(vertices_.size());
  cols.reserve(columns_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!keep[i]) continue;
    vs.push_back(std::move(vertices_[i]));
    cols.push_back(std::move(columns_[i]));
  }
  vertices_ = std::move(vs);
  columns_ = std::move(cols);
  index_.clear();
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    index_.emplace(vertices_[i], i);
}

std::uint64_t ActiveSet::set_fingerprint() const {
  std::uint64_t fp = 0;
  for (const Vertex& v : vertices_) {
    std::uint64_t z = vertex_hash(v) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    fp += z ^ (z >> 31);  // wrapping sum: order independent
  }
  return fp;
}

namespace {

[[noreturn]] void master_failure(const char* what, lp::Status status,
                                 std::size_t nv, std::size_t m) {
  std::ostringstream os;
  os << "master LP " << what << ": status=" << lp::to_string(status)
     << " |V|=" << nv << " m=" << m
     << " (the master is feasible and bounded by construction)";
  throw MasterError(os.str());
}

// max_p lambda_p over the optimal dual face {lambda in simplex,
// columns . lambda >= z*}; rhs is relaxed by a feasibility-sized margin so
// the face is never numerically empty.
std::vector<double> preferred_dual(const ActiveSet& v, double z_star,
                                   std::size_t prefer) {
  const std::size_t m = v.scenarios().size();
  const std::size_t nv = v.size();
  lp::Problem p;
  p.rows = nv + 1;
  p.cols = m;
  p.a.assign(p.rows * p.cols, 0.0);
  p.b.assign(p.rows, 0.0);
  p.c.assign(p.cols, 0.0);
  p.sense.assign(p.rows, 'G');
  const double margin = tol::feasibility * (1.0 + std::abs(z_star));
  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = 0; j < m; ++j) p.at(i, j) = v.column(i)[j];
    p.b[i] = z_star - margin;
  }
  for (std::size_t j = 0; j < m; ++j) p.at(nv, j) = 1.0;
  p.b[nv] = 1.0;
  p.sense[nv] = 'E';
  p.c[prefer] = -1.0;  // maximize weight on the preferred scenario
  const lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal)
    master_failure("dual-preference solve failed", sol.status, nv, m);
  return sol.x;
}

// max_q alpha_q over the optimal primal face.
std::vector<double> preferred_alpha(const ActiveSet& v, double z_star,
                                    std::size_t prefer) {
  const std::size_t m = v.scenarios().size();
  const std::size_t nv = v.size();
  lp::Problem p;
  p.rows = m + 1;
  p.cols = nv;
  p.a.assign(p.rows * p.cols, 0.0);
  p.b.assign(p.rows, 0.0);
  p.c.assign(p.cols, 0.0);
  p.sense.assign(p.rows, 'L');
  const double margin = tol::feasibility * (1.0 + std::abs(z_star));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < nv; ++i) p.at(j, i) = v.column(i)[j];
    p.b[j] = z_star + margin;
  }
  for (std::size_t i = 0; i < nv; ++i) p.at(m, i) = 1.0;
  p.b[m] = 1.0;
  p.sense[m] = 'E';
  p.c[prefer] = -1.0;
  const lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal)
    master_failure("alpha-preference solve failed", sol.status, nv, m);
  return sol.x;
}

}  // namespace

MasterSolution solve_master(const ActiveSet& v, const ScenarioSet& u,
                            const MasterOptions& opts) {
  if (&v.scenarios() != &u && v.scenarios().dimension() != u.dimension())
    throw std::invalid_argument("solve_master: scenario set mismatch");
  const std::size_t m = u.size();
  const std::size_t nv = v.size();
  if (nv == 0) throw std::invalid_argument("solve_master: empty vertex set");

  // alpha formulation: columns are the alpha_v plus the split free value
  // variable z = zp - zn; rows are the m scenario constraints and the
  // convexity row.
  lp::Problem p;
  p.rows = m + 1;
  p.cols = nv + 2;
  p.a.assign(p.rows * p.cols, 0.0);
  p.b.assign(p.rows, 0.0);
  p.c.assign(p.cols, 0.0);
  p.sense.assign(p.rows, 'L');
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < nv; ++i) p.at(j, i) = v.column(i)[j];
    p.at(j, nv) = -1.0;     // -zp
    p.at(j, nv + 1) = 1.0;  // +zn
  }
  for (std::size_t i = 0; i < nv; ++i) p.at(m, i) = 1.0;
  p.b[m] = 1.0;
  p.sense[m] = 'E';
  p.c[nv] = 1.0;
  p.c[nv + 1] = -1.0;

  lp::Options lp_opts;
  lp_opts.pivot_order = opts.pivot_order;
  lp_opts.blands_from_start = opts.blands_from_start;
  const lp::Solution sol = lp::solve(p, lp_opts);
  if (sol.status != lp::Status::Optimal)
    master_failure("solve failed", sol.status, nv, m);

  MasterSolution ms;
  ms.z = sol.objective;
  ms.alpha.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(nv));
  ms.lambda.resize(m);
  for (std::size_t j = 0; j < m; ++j) ms.lambda[j] = -sol.y[j];

  if (opts.prefer_dual_scenario) {
    if (*opts.prefer_dual_scenario >= m)
      throw std::invalid_argument("prefer_dual_scenario out of range");
    ms.lambda = preferred_dual(v, ms.z, *opts.prefer_dual_scenario);
  }
  if (opts.prefer_alpha_vertex) {
    if (*opts.prefer_alpha_vertex >= nv)
      throw std::invalid_argument("prefer_alpha_vertex out of range");
    ms.alpha = preferred_alpha(v, ms.z, *opts.prefer_alpha_vertex);
  }

  const std::size_t n = u.dimension();
  ms.x.assign(n, 0.0);
  for (std::size_t i = 0; i < nv; ++i) {
    const double a = ms.alpha[i];
    if (a == 0.0) continue;
    const Vertex& vert = v.vertex(i);
    for (std::size_t k = 0; k < n; ++k)
      if (vert.bits[k]) ms.x[k] += a;
  }
  ms.subgradient.resize(n);
  kernels::weighted_scenario_sum(u, ms.lambda, ms.subgradient);

  // Consistency of the certificate, checked in cache space (independent of n):
  // z must equal the worst scenario value of x within the slackness tolerance.
  double z_check = -1.0 / 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double row = 0.0;
    for (std::size_t i = 0; i < nv; ++i) row += ms.alpha[i] * v.column(i)[j];
    z_check = std::max(z_check, row);
  }
  if (std::abs(z_check - ms.z) > tol::optimality * (1.0 + std::abs(ms.z))) {
    std::ostringstream os;
    os << "master certificate drift: z=" << ms.z << " recomputed=" << z_check
       << " |V|=" << nv << " m=" << m;
    throw MasterError(os.str());
  }
  return ms;
}

}  // namespace rsd
