#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ancestry.hpp"

namespace adjustkit {

// Required orientations tail -> head.
struct BackgroundKnowledge {
  std::vector<std::pair<NodeId, NodeId>> required;
};

struct MeekApplication {
  int rule;  // 1..4
  NodeId tail;
  NodeId head;
};

namespace detail {

// Returns the number of the first rule that orients a - b as a -> b, or 0.
inline int meek_rule(const Graph& g, NodeId a, NodeId b) {
  const auto& na = g.neighbors(a);
  const auto& nb = g.neighbors(b);
  // R1: c -> a - b, c and b non-adjacent
  for (NodeId c : na)
    if (c != b && g.has_directed(c, a) && !g.adjacent(c, b)) return 1;
  // R2: a -> c -> b
  for (NodeId c : na)
    if (g.has_directed(a, c) && g.has_directed(c, b)) return 2;
  // R3: a - c -> b, a - d -> b, c and d non-adjacent
  for (std::size_t i = 0; i < na.size(); ++i) {
    NodeId c = na[i];
    if (c == b || !g.has_undirected(a, c) || !g.has_directed(c, b)) continue;
    for (std::size_t j = i + 1; j < na.size(); ++j) {
      NodeId d = na[j];
      if (d == b || !g.has_undirected(a, d) || !g.has_directed(d, b)) continue;
      if (!g.adjacent(c, d)) return 3;
    }
  }
  // R4: a - c -> b, e -> c, a - e, e and b non-adjacent
  for (NodeId c : nb) {
    if (c == a || !g.has_directed(c, b) || !g.has_undirected(a, c)) continue;
    for (NodeId e : g.neighbors(c))
      if (e != a && e != b && g.has_directed(e, c) && g.has_undirected(a, e) && !g.adjacent(e, b)) return 4;
  }
  return 0;
}

using VStructure = std::array<NodeId, 3>;  // {left, collider, right}, left < right

inline std::vector<VStructure> v_structures(const Graph& g) {
  std::vector<VStructure> out;
  for (NodeId v = 0; v < g.size(); ++v) {
    const auto& nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        NodeId a = nb[i], c = nb[j];
        if (g.has_directed(a, v) && g.has_directed(c, v) && !g.adjacent(a, c)) out.push_back({a, v, c});
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool acyclic_directed_part(const Graph& g) {
  try {
    topological_order(g);
    return true;
  } catch (const GraphInvariantError&) {
    return false;
  }
}

// Applies rules to a fixpoint; returns false if the result gained a directed
// cycle or a v-structure missing from `reference`.
inline bool close_in_place(GraphBuilder& b, const std::vector<VStructure>& reference) {
  bool changed = true;
  while (changed) {
    changed = false;
    const Graph& g = b.view();
    for (NodeId a = 0; a < g.size(); ++a)
      for (NodeId c : std::vector<NodeId>(g.neighbors(a))) {
        if (!b.view().has_undirected(a, c)) continue;
        if (meek_rule(b.view(), a, c)) {
          b.orient(a, c);
          changed = true;
        }
      }
  }
  const Graph& g = b.view();
  if (!acyclic_directed_part(g)) return false;
  auto vs = v_structures(g);
  return std::includes(reference.begin(), reference.end(), vs.begin(), vs.end());
}

}  // namespace detail

inline std::vector<std::array<NodeId, 3>> v_structures(const Graph& g) { return detail::v_structures(g); }

// First rule that would still fire on g, if any.
inline std::optional<MeekApplication> find_meek_violation(const Graph& g) {
  for (NodeId a = 0; a < g.size(); ++a)
    for (NodeId c : g.neighbors(a))
      if (g.has_undirected(a, c))
        if (int r = detail::meek_rule(g, a, c)) return MeekApplication{r, a, c};
  return std::nullopt;
}

inline std::string describe(const Graph& g, const MeekApplication& m) {
  return "rule " + std::to_string(m.rule) + " orients " + g.name(m.tail) + " -- " + g.name(m.head) + " as " +
         g.name(m.tail) + " -> " + g.name(m.head);
}

// Closure under rules 1-4. Throws GraphInvariantError when a rule application
// creates a directed cycle or a new v-structure.
inline Graph close_under_meek(const Graph& g) {
  if (g.graph_class() == GraphClass::admg) throw PreconditionError("meek rules need a partially directed graph");
  GraphBuilder b(g);
  if (!detail::close_in_place(b, detail::v_structures(g)))
    throw GraphInvariantError("meek closure produced a directed cycle or a new v-structure");
  return std::move(b).build();
}

// Adds required orientations one at a time, closing under the rules after each.
// Returns nullopt (FAIL) when a requirement contradicts the current orientation.
inline std::optional<Graph> construct_max_pdag(const Graph& g, const BackgroundKnowledge& bg) {
  if (!g.is_pdag() && !g.is_dag()) throw PreconditionError("construct_max_pdag needs a cpdag, maxpdag or dag");
  GraphBuilder b(g);
  b.set_class(g.is_dag() ? GraphClass::dag : GraphClass::maxpdag);
  auto reference = detail::v_structures(g);
  for (auto [t, h] : bg.required) {
    g.check(t);
    g.check(h);
    const Graph& cur = b.view();
    if (cur.has_directed(t, h)) continue;
    if (cur.has_directed(h, t)) return std::nullopt;
    if (!cur.has_undirected(t, h))
      throw PreconditionError("required edge " + g.name(t) + " -> " + g.name(h) + " joins non-adjacent nodes");
    b.orient(t, h);
    reference = detail::v_structures(b.view());
    if (!detail::close_in_place(b, reference)) return std::nullopt;
  }
  // every v-structure must already exist in g
  auto vs = detail::v_structures(b.view());
  auto orig = detail::v_structures(g);
  if (!std::includes(orig.begin(), orig.end(), vs.begin(), vs.end())) return std::nullopt;
  return std::move(b).build();
}

// One DAG in the class: repeatedly orient the undirected edge whose sorted name
// pair is smallest, away from the lexicographically smaller name, then close.
inline Graph consistent_extension(const Graph& g) {
  if (g.is_dag()) return g;
  if (!g.is_pdag()) throw PreconditionError("consistent_extension needs a cpdag or maxpdag");
  GraphBuilder b(g);
  auto reference = detail::v_structures(g);
  for (;;) {
    const Graph& cur = b.view();
    std::optional<std::pair<NodeId, NodeId>> pick;
    for (NodeId a = 0; a < cur.size(); ++a)
      for (NodeId c : cur.neighbors(a)) {
        if (!cur.has_undirected(a, c) || cur.name(a) > cur.name(c)) continue;
        if (!pick || std::tie(cur.name(a), cur.name(c)) < std::tie(cur.name(pick->first), cur.name(pick->second)))
          pick = std::make_pair(a, c);
      }
    if (!pick) break;
    b.orient(pick->first, pick->second);
    if (!detail::close_in_place(b, reference)) throw GraphInvariantError("graph has no consistent extension");
  }
  b.set_class(GraphClass::dag);
  return std::move(b).build();
}

inline bool has_consistent_extension(const Graph& g) {
  try {
    consistent_extension(g);
    return true;
  } catch (const GraphInvariantError&) {
    return false;
  }
}

// All DAGs represented by g, sorted by their edge lists.
inline std::vector<Graph> enumerate_class_dags(const Graph& g, std::size_t max_undirected = 20) {
  if (g.is_dag()) return {g};
  if (!g.is_pdag()) throw PreconditionError("enumerate_class_dags needs a cpdag or maxpdag");
  if (g.undirected_edge_count() > max_undirected)
    throw PreconditionError("too many undirected edges to enumerate (" + std::to_string(g.undirected_edge_count()) +
                            ")");
  auto reference = detail::v_structures(g);
  std::vector<Graph> out;
  std::function<void(GraphBuilder&)> rec = [&](GraphBuilder& b) {
    const Graph& cur = b.view();
    for (NodeId a = 0; a < cur.size(); ++a)
      for (NodeId c : cur.neighbors(a))
        if (a < c && cur.has_undirected(a, c)) {
          for (auto [t, h] : {std::pair{a, c}, std::pair{c, a}}) {
            GraphBuilder next(b.view());
            next.orient(t, h);
            if (detail::close_in_place(next, reference)) rec(next);
          }
          return;
        }
    GraphBuilder done(b.view());
    done.set_class(GraphClass::dag);
    out.push_back(std::move(done).build());
  };
  GraphBuilder start(g);
  rec(start);
  auto key = [](const Graph& d) {
    std::vector<std::pair<std::string, std::string>> e;
    for (const auto& ed : d.edges()) e.emplace_back(d.name(ed.tail), d.name(ed.head));
    std::sort(e.begin(), e.end());
    return e;
  };
  std::sort(out.begin(), out.end(), [&](const Graph& x, const Graph& y) { return key(x) < key(y); });
  return out;
}

// Completed pattern of a DAG by compelled-edge labeling over an edge order that
// follows a topological order.
inline Graph dag_to_cpdag(const Graph& d) {
  if (!d.is_dag()) throw PreconditionError("dag_to_cpdag needs a dag");
  const std::size_t n = d.size();
  auto topo = topological_order(d);
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[topo[i]] = i;

  std::vector<std::pair<NodeId, NodeId>> order;
  for (NodeId y : topo) {
    std::vector<NodeId> pa;
    for (NodeId x : d.neighbors(y))
      if (d.has_directed(x, y)) pa.push_back(x);
    std::sort(pa.begin(), pa.end(), [&](NodeId a, NodeId b) { return rank[a] > rank[b]; });
    for (NodeId x : pa) order.emplace_back(x, y);
  }

  enum Label : char { unknown, compelled, reversible };
  std::vector<char> label(n * n, unknown);
  auto L = [&](NodeId a, NodeId b) -> char& { return label[a * n + b]; };
  auto label_into = [&](NodeId y, Label l, bool only_unknown) {
    for (NodeId z : d.neighbors(y))
      if (d.has_directed(z, y) && (!only_unknown || L(z, y) == unknown)) L(z, y) = l;
  };

  for (auto [x, y] : order) {
    if (L(x, y) != unknown) continue;
    bool done = false;
    for (NodeId w : d.neighbors(x)) {
      if (!d.has_directed(w, x) || L(w, x) != compelled) continue;
      if (!d.has_directed(w, y)) {
        label_into(y, compelled, false);
        done = true;
        break;
      }
      L(w, y) = compelled;
    }
    if (done) continue;
    bool other = false;
    for (NodeId z : d.neighbors(y))
      if (z != x && d.has_directed(z, y) && !d.has_directed(z, x)) other = true;
    L(x, y) = other ? compelled : reversible;
    label_into(y, other ? compelled : reversible, true);
  }

  GraphBuilder b(GraphClass::cpdag, d.names());
  for (auto [x, y] : order) b.add_edge(x, y, L(x, y) == compelled ? EdgeKind::directed : EdgeKind::undirected);
  return std::move(b).build();
}

}  // namespace adjustkit
