#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "adjustment.hpp"
#include "meek.hpp"
#include "scm.hpp"

namespace adjustkit {

enum class IdaMethod { semi_local, optimal };

inline std::string to_string(IdaMethod m) { return m == IdaMethod::optimal ? "optimal" : "semilocal"; }

// One locally compatible orientation of the edges at X.
struct IdaPlanEntry {
  NodeSet subset;                     // siblings oriented into X
  Graph local;                        // the maxPDAG after imposing the orientation
  std::optional<NodeSet> adjustment;  // nullopt: effect is zero, no regression
};

struct IdaEntry {
  NodeSet subset;
  std::optional<NodeSet> adjustment;
  double estimate = 0;
  std::string error;  // set when the regression for this entry failed
};

struct EffectMultiset {
  std::vector<IdaEntry> entries;

  std::vector<double> values() const {
    std::vector<double> out;
    for (const auto& e : entries) out.push_back(e.estimate);
    return out;
  }
  double min_abs() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : entries) m = std::min(m, std::abs(e.estimate));
    return m;
  }
};

// Subsets of s ordered by size, then lexicographically by node names.
inline std::vector<NodeSet> ordered_subsets(const Graph& g, const NodeSet& s) {
  if (s.size() > 20) throw PreconditionError("too many siblings to enumerate");
  std::vector<NodeSet> out;
  for (std::size_t mask = 0; mask < (std::size_t(1) << s.size()); ++mask) {
    NodeSet t;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (mask >> i & 1) t.insert(s[i]);
    out.push_back(t);
  }
  std::sort(out.begin(), out.end(), [&](const NodeSet& a, const NodeSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return g.names_of(a) < g.names_of(b);
  });
  return out;
}

// The graph-only part of semi-local or optimal IDA. With require_descendant,
// semi-local IDA also returns zero whenever Y is not a descendant of X in the
// local maxPDAG.
inline std::vector<IdaPlanEntry> ida_plan(const Graph& g, NodeId x, NodeId y, IdaMethod method,
                                          bool require_descendant = false) {
  check_problem(g, NodeSet{x}, NodeSet{y});
  if (g.graph_class() == GraphClass::admg) throw PreconditionError("IDA needs a DAG, CPDAG or maxPDAG");
  NodeSet sib = siblings(g, NodeSet{x});
  std::vector<IdaPlanEntry> out;
  for (const NodeSet& s : ordered_subsets(g, sib)) {
    BackgroundKnowledge bg;
    for (NodeId v : sib) {
      if (s.contains(v)) bg.required.emplace_back(v, x);
      else bg.required.emplace_back(x, v);
    }
    std::optional<Graph> local = g.is_dag() ? std::optional<Graph>(g) : construct_max_pdag(g, bg);
    if (!local) continue;
    IdaPlanEntry e{s, *local, std::nullopt};
    // every edge at X is directed in the local graph, so possible descendants of X
    // are its descendants
    bool downstream = descendants(*local, NodeSet{x}).contains(y);
    if (method == IdaMethod::optimal) {
      if (downstream) e.adjustment = optimal_adjustment_set(*local, NodeSet{x}, NodeSet{y});
    } else {
      NodeSet pa = parents(*local, NodeSet{x});
      if (!pa.contains(y) && (downstream || !require_descendant)) e.adjustment = pa;
    }
    out.push_back(std::move(e));
  }
  return out;
}

// Fills estimates with coef(x, adjustment); zero entries stay zero.
template <class Coefficient>
EffectMultiset evaluate_plan(const std::vector<IdaPlanEntry>& plan, Coefficient coef) {
  EffectMultiset out;
  for (const auto& p : plan) {
    IdaEntry e{p.subset, p.adjustment, 0.0, {}};
    if (p.adjustment) {
      try {
        e.estimate = coef(*p.adjustment);
      } catch (const NumericError& err) {
        e.estimate = std::numeric_limits<double>::quiet_NaN();
        e.error = err.what();
      }
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

inline EffectMultiset run_ida(const Graph& g, NodeId x, NodeId y, const Dataset& data, IdaMethod method,
                              bool require_descendant = false) {
  auto plan = ida_plan(g, x, y, method, require_descendant);
  data.columns_for(g);
  return evaluate_plan(plan, [&](const NodeSet& z) {
    return ols_adjusted(data, g.name(x), g.name(y), g.names_of(z)).coef;
  });
}

inline EffectMultiset semi_local_ida(const Graph& g, NodeId x, NodeId y, const Dataset& data,
                                     bool require_descendant = false) {
  return run_ida(g, x, y, data, IdaMethod::semi_local, require_descendant);
}

inline EffectMultiset optimal_ida(const Graph& g, NodeId x, NodeId y, const Dataset& data) {
  return run_ida(g, x, y, data, IdaMethod::optimal);
}

// Covariance rows and columns rearranged into the node order of g.
inline Covariance reorder(const Covariance& cov, const Graph& g) {
  if (cov.names.size() != g.size()) throw PreconditionError("covariance and graph list different nodes");
  std::vector<Eigen::Index> idx;
  for (const auto& n : g.names()) {
    auto it = std::find(cov.names.begin(), cov.names.end(), n);
    if (it == cov.names.end()) throw UnknownNodeError("covariance has no variable '" + n + "'");
    idx.push_back(it - cov.names.begin());
  }
  return {g.names(), detail::sub(cov.sigma, idx, idx)};
}

// Same loop with population regression coefficients from the model covariance.
inline EffectMultiset population_ida(const Graph& g, NodeId x, NodeId y, const Covariance& cov, IdaMethod method,
                                     bool require_descendant = false) {
  Covariance c = reorder(cov, g);
  auto plan = ida_plan(g, x, y, method, require_descendant);
  return evaluate_plan(plan, [&](const NodeSet& z) { return population_coefficient(c, x, y, z); });
}

inline EffectMultiset population_ida(const Graph& g, NodeId x, NodeId y, const LinearScm& m, IdaMethod method,
                                     bool require_descendant = false) {
  return population_ida(g, x, y, implied_covariance(m), method, require_descendant);
}

// Optimal sets over the local orientations; nullopt marks a forced zero.
inline std::vector<std::optional<NodeSet>> possible_optimal_sets(const Graph& g, NodeId x, NodeId y,
                                                                 bool dedupe = false) {
  std::vector<std::optional<NodeSet>> out;
  for (auto& e : ida_plan(g, x, y, IdaMethod::optimal)) {
    if (dedupe && std::find(out.begin(), out.end(), e.adjustment) != out.end()) continue;
    out.push_back(e.adjustment);
  }
  return out;
}

}  // namespace adjustkit
