#pragma once

#include <functional>
#include <vector>

#include "graph.hpp"

namespace adjustkit {

inline NodeSet parents(const Graph& g, const NodeSet& s) {
  g.check(s);
  std::vector<char> m(g.size(), 0);
  for (NodeId v : s)
    for (NodeId w : g.neighbors(v))
      if (g.has_directed(w, v)) m[w] = 1;
  return NodeSet::from_mask(m);
}

inline NodeSet children(const Graph& g, const NodeSet& s) {
  g.check(s);
  std::vector<char> m(g.size(), 0);
  for (NodeId v : s)
    for (NodeId w : g.neighbors(v))
      if (g.has_directed(v, w)) m[w] = 1;
  return NodeSet::from_mask(m);
}

inline NodeSet siblings(const Graph& g, const NodeSet& s) {
  g.check(s);
  std::vector<char> m(g.size(), 0);
  for (NodeId v : s)
    for (NodeId w : g.neighbors(v))
      if (g.has_undirected(v, w)) m[w] = 1;
  return NodeSet::from_mask(m);
}

inline NodeSet spouses(const Graph& g, const NodeSet& s) {
  g.check(s);
  std::vector<char> m(g.size(), 0);
  for (NodeId v : s)
    for (NodeId w : g.neighbors(v))
      if (g.has_bidirected(v, w)) m[w] = 1;
  return NodeSet::from_mask(m);
}

namespace detail {

// Plain reachability from s; `step(v, w)` says whether v may move to neighbor w.
// Nodes flagged in `blocked` are never entered.
template <class Step>
std::vector<char> reach(const Graph& g, const NodeSet& s, Step step, const std::vector<char>* blocked = nullptr) {
  std::vector<char> seen(g.size(), 0);
  std::vector<NodeId> stack(s.begin(), s.end());
  for (NodeId v : s) seen[v] = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbors(v)) {
      if (seen[w] || (blocked && (*blocked)[w]) || !step(v, w)) continue;
      seen[w] = 1;
      stack.push_back(w);
    }
  }
  return seen;
}

// Exhaustive search over possibly causal paths. With forward = true, marks every
// node w such that some possibly causal path start ... w exists; otherwise every
// w with a possibly causal path w ... start. Nodes in `blocked` are skipped.
class PossiblyCausalSearch {
 public:
  PossiblyCausalSearch(const Graph& g, bool forward, const std::vector<char>* blocked)
      : g_(g), forward_(forward), blocked_(blocked), on_path_(g.size(), 0), reached_(g.size(), 0) {}

  // Runs from `start` along an optional fixed first neighbor. Stops early when
  // `stop` (if given) is hit.
  const std::vector<char>& run(NodeId start, std::optional<NodeId> first = std::nullopt,
                               const std::vector<char>* stop = nullptr) {
    stop_ = stop;
    found_stop_ = false;
    path_.assign(1, start);
    on_path_[start] = 1;
    if (first) {
      if (can_extend(*first)) visit(*first);
    } else {
      extend();
    }
    on_path_[start] = 0;
    return reached_;
  }

  bool found_stop() const { return found_stop_; }
  const std::vector<char>& reached() const { return reached_; }

 private:
  bool edge_ok(NodeId last, NodeId w) const {
    if (g_.has_undirected(last, w)) return true;
    return forward_ ? g_.has_directed(last, w) : g_.has_directed(w, last);
  }

  bool can_extend(NodeId w) const {
    if (on_path_[w] || (blocked_ && (*blocked_)[w])) return false;
    if (!edge_ok(path_.back(), w)) return false;
    for (NodeId u : path_) {
      // forward: w comes after u, so u <- w must be absent; backward mirrors it.
      if (forward_ ? g_.has_directed(w, u) : g_.has_directed(u, w)) return false;
    }
    return true;
  }

  void visit(NodeId w) {
    reached_[w] = 1;
    if (stop_ && (*stop_)[w]) {
      found_stop_ = true;
      return;
    }
    path_.push_back(w);
    on_path_[w] = 1;
    extend();
    on_path_[w] = 0;
    path_.pop_back();
  }

  void extend() {
    for (NodeId w : g_.neighbors(path_.back())) {
      if (found_stop_) return;
      if (can_extend(w)) visit(w);
    }
  }

  const Graph& g_;
  bool forward_;
  const std::vector<char>* blocked_;
  const std::vector<char>* stop_ = nullptr;
  bool found_stop_ = false;
  std::vector<NodeId> path_;
  std::vector<char> on_path_;
  std::vector<char> reached_;
};

}  // namespace detail

// Includes s itself.
inline NodeSet ancestors(const Graph& g, const NodeSet& s) {
  g.check(s);
  return NodeSet::from_mask(detail::reach(g, s, [&](NodeId v, NodeId w) { return g.has_directed(w, v); }));
}

inline NodeSet descendants(const Graph& g, const NodeSet& s) {
  g.check(s);
  return NodeSet::from_mask(detail::reach(g, s, [&](NodeId v, NodeId w) { return g.has_directed(v, w); }));
}

// exact: search over possibly causal paths (exponential worst case).
// reachability: nodes reachable along -> and - edges. The two agree on DAGs and,
// as cross-checked in the test suite, on CPDAGs; they can differ on maxPDAGs.
// automatic: directed reachability for DAG/ADMG, reachability for CPDAG, exact
// for maxPDAG unless the start nodes carry no undirected edge.
enum class PossibleReach { automatic, exact, reachability };

namespace detail {

inline NodeSet possible_relatives(const Graph& g, const NodeSet& s, PossibleReach how, bool forward) {
  g.check(s);
  if (how == PossibleReach::automatic) {
    switch (g.graph_class()) {
      case GraphClass::dag:
      case GraphClass::admg: return forward ? descendants(g, s) : ancestors(g, s);
      case GraphClass::cpdag: how = PossibleReach::reachability; break;
      case GraphClass::maxpdag: {
        bool any_undirected = false;
        for (NodeId v : s) any_undirected = any_undirected || g.has_undirected_at(v);
        if (!any_undirected && forward) return descendants(g, s);
        how = PossibleReach::exact;
        break;
      }
    }
  }
  if (how == PossibleReach::reachability) {
    return NodeSet::from_mask(reach(g, s, [&](NodeId v, NodeId w) {
      return g.has_undirected(v, w) || (forward ? g.has_directed(v, w) : g.has_directed(w, v));
    }));
  }
  std::vector<char> all(g.size(), 0);
  for (NodeId v : s) {
    PossiblyCausalSearch search(g, forward, nullptr);
    const auto& r = search.run(v);
    for (NodeId i = 0; i < g.size(); ++i) all[i] = all[i] || r[i];
    all[v] = 1;
  }
  return NodeSet::from_mask(all);
}

}  // namespace detail

inline NodeSet possible_descendants(const Graph& g, const NodeSet& s, PossibleReach how = PossibleReach::automatic) {
  return detail::possible_relatives(g, s, how, true);
}

inline NodeSet possible_ancestors(const Graph& g, const NodeSet& s, PossibleReach how = PossibleReach::automatic) {
  return detail::possible_relatives(g, s, how, false);
}

// Kahn's algorithm over the directed edges; ties go to the smallest id.
inline std::vector<NodeId> topological_order(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<int> indeg(n, 0);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b : g.neighbors(a))
      if (g.has_directed(a, b)) ++indeg[b];
  std::vector<NodeId> ready, order;
  for (NodeId v = 0; v < n; ++v)
    if (!indeg[v]) ready.push_back(v);
  std::make_heap(ready.begin(), ready.end(), std::greater<>());
  while (!ready.empty()) {
    std::pop_heap(ready.begin(), ready.end(), std::greater<>());
    NodeId v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (NodeId w : g.neighbors(v))
      if (g.has_directed(v, w) && --indeg[w] == 0) {
        ready.push_back(w);
        std::push_heap(ready.begin(), ready.end(), std::greater<>());
      }
  }
  if (order.size() != n) throw GraphInvariantError("directed cycle");
  return order;
}

}  // namespace adjustkit
