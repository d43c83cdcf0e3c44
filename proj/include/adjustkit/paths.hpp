#pragma once

#include <functional>
#include <string>
#include <vector>

#include "graph.hpp"

namespace adjustkit {

// How the edge between nodes[i] and nodes[i + 1] is traversed.
// forward: nodes[i] -> nodes[i+1]; backward: nodes[i] <- nodes[i+1].
enum class Step { forward, backward, undirected, bidirected };

struct Path {
  std::vector<NodeId> nodes;
  std::vector<Step> steps;

  std::size_t length() const { return steps.size(); }
  NodeId front() const { return nodes.front(); }
  NodeId back() const { return nodes.back(); }
};

inline bool step_exists(const Graph& g, NodeId a, NodeId b, Step s) {
  switch (s) {
    case Step::forward: return g.has_directed(a, b);
    case Step::backward: return g.has_directed(b, a);
    case Step::undirected: return g.has_undirected(a, b);
    case Step::bidirected: return g.has_bidirected(a, b);
  }
  return false;
}

// Builds a path from consecutive nodes; the edge between each pair must be unique.
inline Path path_from_nodes(const Graph& g, const std::vector<NodeId>& nodes) {
  Path p;
  p.nodes = nodes;
  std::vector<char> seen(g.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    g.check(nodes[i]);
    if (seen[nodes[i]]) throw PreconditionError("path repeats node " + g.name(nodes[i]));
    seen[nodes[i]] = 1;
  }
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    NodeId a = nodes[i], b = nodes[i + 1];
    std::vector<Step> options;
    for (Step s : {Step::forward, Step::backward, Step::undirected, Step::bidirected})
      if (step_exists(g, a, b, s)) options.push_back(s);
    if (options.empty()) throw PreconditionError(g.name(a) + " and " + g.name(b) + " are not adjacent");
    if (options.size() > 1) throw PreconditionError("ambiguous edge between " + g.name(a) + " and " + g.name(b));
    p.steps.push_back(options.front());
  }
  return p;
}

inline void check_path(const Graph& g, const Path& p) {
  if (p.nodes.empty() || p.steps.size() + 1 != p.nodes.size()) throw PreconditionError("malformed path");
  for (std::size_t i = 0; i < p.steps.size(); ++i)
    if (!step_exists(g, p.nodes[i], p.nodes[i + 1], p.steps[i]))
      throw PreconditionError("path edge missing between " + g.name(p.nodes[i]) + " and " + g.name(p.nodes[i + 1]));
}

// Arrowhead / tail marks at the node *after* step s and *before* step s.
inline bool arrow_into_next(Step s) { return s == Step::forward || s == Step::bidirected; }
inline bool arrow_into_prev(Step s) { return s == Step::backward || s == Step::bidirected; }
inline bool tail_at_prev(Step s) { return s == Step::forward; }
inline bool tail_at_next(Step s) { return s == Step::backward; }

enum class NodeStatus { collider, non_collider, indefinite };

// Status of the middle node b on a segment a (in) b (out) c.
inline NodeStatus middle_status(const Graph& g, NodeId a, Step in, NodeId c, Step out) {
  bool head_in = arrow_into_next(in), head_out = arrow_into_prev(out);
  if (head_in && head_out) return NodeStatus::collider;
  if (tail_at_next(in) || tail_at_prev(out)) return NodeStatus::non_collider;
  if (in == Step::undirected && out == Step::undirected && !g.adjacent(a, c)) return NodeStatus::non_collider;
  return NodeStatus::indefinite;
}

inline NodeStatus status_at(const Graph& g, const Path& p, std::size_t i) {
  return middle_status(g, p.nodes[i - 1], p.steps[i - 1], p.nodes[i + 1], p.steps[i]);
}

inline bool is_definite_status(const Graph& g, const Path& p) {
  check_path(g, p);
  for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i)
    if (status_at(g, p, i) == NodeStatus::indefinite) return false;
  return true;
}

inline bool is_directed_path(const Path& p) {
  for (Step s : p.steps)
    if (s != Step::forward) return false;
  return true;
}

// Every edge points forward or is undirected, and no later node has a directed
// edge into an earlier one.
inline bool is_possibly_causal(const Graph& g, const Path& p) {
  check_path(g, p);
  for (Step s : p.steps)
    if (s != Step::forward && s != Step::undirected) return false;
  for (std::size_t i = 0; i < p.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < p.nodes.size(); ++j)
      if (g.has_directed(p.nodes[j], p.nodes[i])) return false;
  return true;
}

enum class Walk { extend, prune, stop };

// Depth-first enumeration of simple paths from `start`. `extend(path, next, step)`
// filters extensions; `visit(path)` sees every path of length >= 1 and decides
// whether to grow it further, leave it, or end the whole search.
// Returns false when the search was stopped.
template <class Extend, class Visit>
bool enumerate_paths(const Graph& g, NodeId start, Extend&& extend, Visit&& visit) {
  Path p;
  p.nodes.push_back(start);
  std::vector<char> on(g.size(), 0);
  on[start] = 1;
  std::function<bool()> rec = [&]() -> bool {
    NodeId last = p.nodes.back();
    for (NodeId w : g.neighbors(last)) {
      if (on[w]) continue;
      for (Step s : {Step::forward, Step::backward, Step::undirected, Step::bidirected}) {
        if (!step_exists(g, last, w, s) || !extend(p, w, s)) continue;
        p.nodes.push_back(w);
        p.steps.push_back(s);
        on[w] = 1;
        Walk w_next = visit(p);
        bool go = w_next != Walk::stop;
        if (w_next == Walk::extend) go = rec();
        on[w] = 0;
        p.nodes.pop_back();
        p.steps.pop_back();
        if (!go) return false;
      }
    }
    return true;
  };
  return rec();
}

inline std::string format_path(const Graph& g, const Path& p) {
  std::string out = g.name(p.nodes.front());
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    switch (p.steps[i]) {
      case Step::forward: out += " -> "; break;
      case Step::backward: out += " <- "; break;
      case Step::undirected: out += " -- "; break;
      case Step::bidirected: out += " <-> "; break;
    }
    out += g.name(p.nodes[i + 1]);
  }
  return out;
}

}  // namespace adjustkit
