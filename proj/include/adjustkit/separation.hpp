#pragma once

#include <optional>
#include <vector>

#include "ancestry.hpp"
#include "paths.hpp"

namespace adjustkit {

namespace detail {

inline void require_disjoint(const Graph& g, const NodeSet& a, const NodeSet& b, const NodeSet& c) {
  g.check(a);
  g.check(b);
  g.check(c);
  if (a.intersects(b) || a.intersects(c) || b.intersects(c))
    throw PreconditionError("separation sets must be pairwise disjoint");
}

// Interior node i is open given c (ancestor mask an_c of c).
inline bool open_at(NodeStatus st, NodeId v, const std::vector<char>& in_c, const std::vector<char>& an_c) {
  if (st == NodeStatus::collider) return an_c[v];
  if (st == NodeStatus::non_collider) return !in_c[v];
  return false;
}

}  // namespace detail

// Path must be of definite status.
inline bool is_blocked(const Graph& g, const Path& p, const NodeSet& c) {
  check_path(g, p);
  g.check(c);
  auto in_c = c.mask(g.size());
  auto an_c = ancestors(g, c).mask(g.size());
  for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i) {
    NodeStatus st = status_at(g, p, i);
    if (st == NodeStatus::indefinite)
      throw PreconditionError("node " + g.name(p.nodes[i]) + " is not of definite status on the path");
    if (!detail::open_at(st, p.nodes[i], in_c, an_c)) return true;
  }
  return false;
}

// First open definite-status path from a to b given c, found by depth-first
// enumeration. Paths never pass through other nodes of a or b.
inline std::optional<Path> find_open_path(const Graph& g, const NodeSet& a, const NodeSet& b, const NodeSet& c) {
  detail::require_disjoint(g, a, b, c);
  auto in_a = a.mask(g.size()), in_b = b.mask(g.size()), in_c = c.mask(g.size());
  auto an_c = ancestors(g, c).mask(g.size());
  std::optional<Path> found;
  for (NodeId s : a) {
    auto extend = [&](const Path& p, NodeId w, Step st) {
      if (in_a[w]) return false;
      if (p.nodes.size() < 2) return true;
      std::size_t k = p.nodes.size() - 1;
      NodeStatus status = middle_status(g, p.nodes[k - 1], p.steps[k - 1], w, st);
      return detail::open_at(status, p.nodes[k], in_c, an_c);
    };
    auto visit = [&](const Path& p) {
      if (in_b[p.back()]) {
        found = p;
        return Walk::stop;
      }
      return Walk::extend;
    };
    if (!enumerate_paths(g, s, extend, visit)) return found;
  }
  return std::nullopt;
}

// d-/m-separation. Graphs without undirected edges use a reachability search
// over (node, arrived-with-arrowhead) states; graphs with undirected edges use
// exact enumeration of definite-status paths.
inline bool separated(const Graph& g, const NodeSet& a, const NodeSet& b, const NodeSet& c) {
  detail::require_disjoint(g, a, b, c);
  if (g.undirected_edge_count() > 0) return !find_open_path(g, a, b, c).has_value();

  const std::size_t n = g.size();
  auto in_b = b.mask(n), in_c = c.mask(n);
  auto an_c = ancestors(g, c).mask(n);
  // state index: 2 * v + (arrowhead at v on the arriving edge)
  std::vector<char> seen(2 * n, 0);
  std::vector<std::size_t> stack;
  auto push = [&](NodeId w, bool head) {
    std::size_t s = 2 * w + (head ? 1 : 0);
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  };
  for (NodeId s : a)
    for (NodeId w : g.neighbors(s)) {
      if (g.has_directed(s, w) || g.has_bidirected(s, w)) push(w, true);
      if (g.has_directed(w, s)) push(w, false);
    }
  auto in_a = a.mask(n);
  while (!stack.empty()) {
    std::size_t s = stack.back();
    stack.pop_back();
    NodeId v = s / 2;
    bool head = s % 2;
    if (in_a[v]) continue;
    if (in_b[v]) return false;
    for (NodeId w : g.neighbors(v)) {
      // leave v along v -> w, v <-> w or v <- w
      auto try_edge = [&](bool head_at_v, bool head_at_w) {
        bool collider = head && head_at_v;
        if (collider ? an_c[v] : !in_c[v]) push(w, head_at_w);
      };
      if (g.has_directed(v, w)) try_edge(false, true);
      if (g.has_bidirected(v, w)) try_edge(true, true);
      if (g.has_directed(w, v)) try_edge(true, false);
    }
  }
  return true;
}

}  // namespace adjustkit
