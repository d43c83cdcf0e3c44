#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ida.hpp"
#include "meek.hpp"
#include "scm.hpp"

namespace adjustkit {

struct ScenarioConfig {
  std::size_t p = 10;
  double d = 2;
  std::size_t n = 100;
  std::size_t reps = 100;
  std::size_t datasets_per_graph = 100;
  std::uint64_t seed = 1;
  std::size_t max_draws = 10000;  // graph rejection budget per replication
  unsigned threads = 0;           // 0: all hardware threads
  double error_var = 1;
  // the ratio is MSE(first) / MSE(second)
  IdaMethod first = IdaMethod::optimal;
  IdaMethod second = IdaMethod::semi_local;

  void validate() const {
    if (p < 2 || !(d > 0) || n < 2 || reps == 0 || datasets_per_graph == 0 || max_draws == 0 || !(error_var > 0))
      throw PreconditionError("scenario parameters must be positive (p >= 2, n >= 2)");
    if (reps * datasets_per_graph > 100000000) throw PreconditionError("scenario exceeds the dataset budget");
  }
};

struct ScenarioGraph {
  Graph dag;
  Graph cpdag;
  NodeId x = 0, y = 0;
  std::size_t draws = 0;  // graphs drawn until one was accepted
};

namespace detail {

inline LinearScm scenario_scm(const ScenarioConfig& cfg, const Graph& dag, std::mt19937_64& rng) {
  LinearScm m = random_scm(dag, rng);
  m.err_var.setConstant(cfg.error_var);
  return m;
}

enum Stream : std::uint64_t { graph_stream = 0, data_stream = 1 };

inline double population_min_abs(const std::vector<IdaPlanEntry>& plan, const Covariance& cov, NodeId x, NodeId y) {
  return evaluate_plan(plan, [&](const NodeSet& z) { return population_coefficient(cov, x, y, z); }).min_abs();
}

}  // namespace detail

// Draws a DAG and a node pair until the CPDAG is not amenable for the pair and no
// possible effect vanishes.
inline ScenarioGraph draw_scenario_graph(const ScenarioConfig& cfg, std::size_t rep) {
  cfg.validate();
  std::mt19937_64 rng(derive_seed(cfg.seed, detail::graph_stream, rep));
  std::uniform_int_distribution<NodeId> node(0, cfg.p - 1);
  for (std::size_t draw = 1; draw <= cfg.max_draws; ++draw) {
    Graph dag = random_dag(cfg.p, cfg.d, rng);
    NodeId x = node(rng), y = node(rng);
    while (y == x) y = node(rng);
    Graph cp = dag_to_cpdag(dag);
    if (is_amenable(cp, NodeSet{x}, NodeSet{y})) continue;
    auto plan = ida_plan(cp, x, y, IdaMethod::optimal);
    auto cov = implied_covariance(detail::scenario_scm(cfg, dag, rng));
    if (!(detail::population_min_abs(plan, cov, x, y) > 1e-10)) continue;
    return {std::move(dag), std::move(cp), x, y, draw};
  }
  throw Error("no suitable graph within " + std::to_string(cfg.max_draws) + " draws");
}

struct RmseRecord {
  std::size_t rep = 0;
  double min_abs_true = 0;  // mean over datasets
  double mse_optimal = 0;   // MSE of cfg.first
  double mse_local = 0;     // MSE of cfg.second
  double rmse = 0;
  std::size_t draws = 0;
  std::string error;
};

// One replication: a graph, then datasets_per_graph datasets each with freshly
// drawn coefficients; both IDA variants run on the true CPDAG.
inline RmseRecord run_replication(const ScenarioConfig& cfg, std::size_t rep) {
  RmseRecord r;
  r.rep = rep;
  try {
    auto sg = draw_scenario_graph(cfg, rep);
    r.draws = sg.draws;
    auto plan_a = ida_plan(sg.cpdag, sg.x, sg.y, cfg.first);
    auto plan_b = ida_plan(sg.cpdag, sg.x, sg.y, cfg.second);
    const std::string xn = sg.cpdag.name(sg.x), yn = sg.cpdag.name(sg.y);
    std::mt19937_64 rng(derive_seed(cfg.seed, detail::data_stream, rep));
    double se_a = 0, se_b = 0, truth_sum = 0;
    for (std::size_t k = 0; k < cfg.datasets_per_graph; ++k) {
      LinearScm m = detail::scenario_scm(cfg, sg.dag, rng);
      double truth = detail::population_min_abs(plan_a, implied_covariance(m), sg.x, sg.y);
      while (!(truth > 1e-10)) {
        m = detail::scenario_scm(cfg, sg.dag, rng);
        truth = detail::population_min_abs(plan_a, implied_covariance(m), sg.x, sg.y);
      }
      Dataset data = simulate(m, cfg.n, rng);
      auto ols = [&](const NodeSet& z) { return ols_adjusted(data, xn, yn, sg.cpdag.names_of(z)).coef; };
      auto a = evaluate_plan(plan_a, ols), b = evaluate_plan(plan_b, ols);
      for (const auto* res : {&a, &b})
        for (const auto& e : res->entries)
          if (!e.error.empty()) throw NumericError(e.error);
      se_a += std::pow(a.min_abs() - truth, 2);
      se_b += std::pow(b.min_abs() - truth, 2);
      truth_sum += truth;
    }
    double k = static_cast<double>(cfg.datasets_per_graph);
    r.min_abs_true = truth_sum / k;
    r.mse_optimal = se_a / k;
    r.mse_local = se_b / k;
    r.rmse = r.mse_local > 0 ? r.mse_optimal / r.mse_local : std::numeric_limits<double>::quiet_NaN();
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

struct ScenarioSummary {
  std::vector<RmseRecord> records;  // ordered by replication
  double geometric_mean = 0;
  double median = 0;
  std::size_t failed = 0;
  double mean_draws = 0;
};

inline double geometric_mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0;
  for (double a : v) s += std::log(a);
  return std::exp(s / static_cast<double>(v.size()));
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

inline ScenarioSummary summarize(std::vector<RmseRecord> records) {
  ScenarioSummary s;
  std::vector<double> ok;
  double draws = 0;
  for (const auto& r : records) {
    draws += static_cast<double>(r.draws);
    if (r.error.empty() && std::isfinite(r.rmse) && r.rmse > 0) ok.push_back(r.rmse);
    else ++s.failed;
  }
  s.geometric_mean = geometric_mean(ok);
  s.median = median(ok);
  s.mean_draws = records.empty() ? 0 : draws / static_cast<double>(records.size());
  s.records = std::move(records);
  return s;
}

// Runs replications on a thread pool; each replication uses only its own seeds,
// so the result does not depend on the thread count.
inline ScenarioSummary run_rmse_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<RmseRecord> records(cfg.reps);
  std::atomic<std::size_t> next{0};
  unsigned nt = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, cfg.reps));
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.reps; i = next++) records[i] = run_replication(cfg, i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return summarize(std::move(records));
}

inline void write_rmse_csv(std::ostream& out, const std::vector<RmseRecord>& records) {
  out << "rep,min_abs_true,mse_optimal,mse_local,rmse\n";
  out.precision(17);
  for (const auto& r : records) {
    out << r.rep << ',';
    if (r.error.empty()) out << r.min_abs_true << ',' << r.mse_optimal << ',' << r.mse_local << ',' << r.rmse << '\n';
    else out << "NA,NA,NA,NA\n";
  }
}

struct DensityRow {
  std::size_t rep;
  IdaMethod method;
  NodeSet subset;
  double estimate;
};

// Every IDA estimate of both variants for reps datasets of size n drawn from m.
inline std::vector<DensityRow> density_experiment(const Graph& g, const LinearScm& m, NodeId x, NodeId y,
                                                  std::size_t n, std::size_t reps, std::uint64_t seed) {
  auto plan_opt = ida_plan(g, x, y, IdaMethod::optimal);
  auto plan_loc = ida_plan(g, x, y, IdaMethod::semi_local);
  std::vector<DensityRow> rows;
  for (std::size_t r = 0; r < reps; ++r) {
    Dataset data = simulate(m, n, derive_seed(seed, detail::data_stream, r));
    auto ols = [&](const NodeSet& z) { return ols_adjusted(data, g.name(x), g.name(y), g.names_of(z)).coef; };
    for (auto method : {IdaMethod::semi_local, IdaMethod::optimal}) {
      auto res = evaluate_plan(method == IdaMethod::optimal ? plan_opt : plan_loc, ols);
      for (const auto& e : res.entries) rows.push_back({r, method, e.subset, e.estimate});
    }
  }
  return rows;
}

inline std::string join_names(const Graph& g, const NodeSet& s, char sep = ';') {
  std::string out;
  for (const auto& n : g.names_of(s)) {
    if (!out.empty()) out += sep;
    out += n;
  }
  return out;
}

inline void write_density_csv(std::ostream& out, const Graph& g, const std::vector<DensityRow>& rows) {
  out << "rep,method,subset,estimate\n";
  out.precision(17);
  for (const auto& r : rows)
    out << r.rep << ',' << to_string(r.method) << ',' << join_names(g, r.subset) << ',' << r.estimate << '\n';
}

}  // namespace adjustkit
