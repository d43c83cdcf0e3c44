#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ancestry.hpp"
#include "meek.hpp"
#include "paths.hpp"
#include "separation.hpp"

namespace adjustkit {

inline void check_problem(const Graph& g, const NodeSet& x, const NodeSet& y) {
  g.check(x);
  g.check(y);
  if (x.empty() || y.empty()) throw PreconditionError("treatment and outcome sets must be non-empty");
  if (x.intersects(y)) throw PreconditionError("treatment and outcome sets overlap");
}

// Nodes, other than X, on proper directed paths from X to Y.
inline NodeSet causal_nodes(const Graph& g, const NodeSet& x, const NodeSet& y) {
  check_problem(g, x, y);
  auto in_x = x.mask(g.size());
  auto down = detail::reach(g, x, [&](NodeId v, NodeId w) { return g.has_directed(v, w); }, &in_x);
  auto up = detail::reach(g, y, [&](NodeId v, NodeId w) { return g.has_directed(w, v); }, &in_x);
  std::vector<char> m(g.size(), 0);
  for (NodeId v = 0; v < g.size(); ++v) m[v] = down[v] && up[v] && !in_x[v];
  return NodeSet::from_mask(m);
}

// Nodes, other than X, on proper possibly causal paths from X to Y (exhaustive).
inline NodeSet possibly_causal_nodes(const Graph& g, const NodeSet& x, const NodeSet& y) {
  check_problem(g, x, y);
  if (g.is_dag() || g.graph_class() == GraphClass::admg) return causal_nodes(g, x, y);
  auto in_x = x.mask(g.size()), in_y = y.mask(g.size());
  std::vector<char> m(g.size(), 0);
  for (NodeId s : x) {
    auto extend = [&](const Path& p, NodeId w, Step st) {
      if (in_x[w] || (st != Step::forward && st != Step::undirected)) return false;
      for (NodeId u : p.nodes)
        if (g.has_directed(w, u)) return false;
      return true;
    };
    auto visit = [&](const Path& p) {
      if (in_y[p.back()])
        for (std::size_t i = 1; i < p.nodes.size(); ++i) m[p.nodes[i]] = 1;
      return Walk::extend;
    };
    enumerate_paths(g, s, extend, visit);
  }
  return NodeSet::from_mask(m);
}

// Every proper possibly causal path from X to Y starts with X -> . Always true
// for DAGs and ADMGs.
inline bool is_amenable(const Graph& g, const NodeSet& x, const NodeSet& y) {
  check_problem(g, x, y);
  if (!g.is_pdag()) return true;
  auto in_x = x.mask(g.size()), in_y = y.mask(g.size());
  for (NodeId s : x)
    for (NodeId v : g.neighbors(s)) {
      if (in_x[v] || !g.has_undirected(s, v)) continue;
      detail::PossiblyCausalSearch search(g, true, &in_x);
      search.run(s, v, &in_y);
      if (search.found_stop()) return false;
    }
  return true;
}

// How forbidden sets and optimal sets are computed for partially directed graphs.
// exact: path enumeration on the graph itself.
// extension: computed on one consistent DAG extension (needs amenability).
// automatic: extension when amenable, exact otherwise.
enum class PdagMethod { automatic, exact, extension };

inline NodeSet forbidden_set(const Graph& g, const NodeSet& x, const NodeSet& y,
                             PdagMethod how = PdagMethod::automatic) {
  check_problem(g, x, y);
  if (!g.is_pdag()) return descendants(g, causal_nodes(g, x, y)) | x;
  if (how == PdagMethod::automatic) how = is_amenable(g, x, y) ? PdagMethod::extension : PdagMethod::exact;
  if (how == PdagMethod::extension) {
    if (!is_amenable(g, x, y)) throw NotAmenableError("graph is not amenable relative to (X, Y)");
    return forbidden_set(consistent_extension(g), x, y);
  }
  return possible_descendants(g, possibly_causal_nodes(g, x, y), PossibleReach::exact) | x;
}

inline NodeSet optimal_adjustment_set(const Graph& g, const NodeSet& x, const NodeSet& y,
                                      PdagMethod how = PdagMethod::automatic) {
  check_problem(g, x, y);
  if (!g.is_pdag()) return parents(g, causal_nodes(g, x, y)) - forbidden_set(g, x, y);
  if (how == PdagMethod::automatic) {
    bool ext = is_amenable(g, x, y) && y.is_subset_of(possible_descendants(g, x));
    how = ext ? PdagMethod::extension : PdagMethod::exact;
  }
  if (how == PdagMethod::extension) {
    if (!is_amenable(g, x, y)) throw NotAmenableError("graph is not amenable relative to (X, Y)");
    return optimal_adjustment_set(consistent_extension(g), x, y);
  }
  return parents(g, possibly_causal_nodes(g, x, y)) - forbidden_set(g, x, y, PdagMethod::exact);
}

inline NodeSet canonical_adjustment_set(const Graph& g, const NodeSet& x, const NodeSet& y) {
  check_problem(g, x, y);
  return possible_ancestors(g, x | y) - (x | y | forbidden_set(g, x, y));
}

struct ValidityReport {
  enum class Reason { valid, not_amenable, forbidden_member, open_path };
  Reason reason = Reason::valid;
  NodeSet forbidden_members;
  std::optional<Path> open_path;
  bool valid() const { return reason == Reason::valid; }
};

namespace detail {

// Graph without the first edge of every proper causal path.
inline Graph proper_backdoor_graph(const Graph& g, const NodeSet& x, const NodeSet& y) {
  auto cn = causal_nodes(g, x, y);
  GraphBuilder b(g);
  for (NodeId s : x)
    for (NodeId w : g.neighbors(s))
      if (cn.contains(w) && g.has_directed(s, w)) b.remove_edge(s, w, EdgeKind::directed);
  return std::move(b).build_mixed();
}

// Proper definite-status non-directed path from X to Y that is open given z.
inline std::optional<Path> open_noncausal_path(const Graph& g, const NodeSet& x, const NodeSet& y,
                                               const NodeSet& z) {
  auto in_x = x.mask(g.size()), in_y = y.mask(g.size()), in_z = z.mask(g.size());
  auto an_z = ancestors(g, z).mask(g.size());
  std::optional<Path> found;
  for (NodeId s : x) {
    auto extend = [&](const Path& p, NodeId w, Step st) {
      if (in_x[w]) return false;
      if (p.nodes.size() < 2) return true;
      std::size_t k = p.nodes.size() - 1;
      return open_at(middle_status(g, p.nodes[k - 1], p.steps[k - 1], w, st), p.nodes[k], in_z, an_z);
    };
    auto visit = [&](const Path& p) {
      if (!in_y[p.back()]) return Walk::extend;
      if (is_directed_path(p)) return Walk::prune;
      found = p;
      return Walk::stop;
    };
    if (!enumerate_paths(g, s, extend, visit)) return found;
  }
  return std::nullopt;
}

}  // namespace detail

inline ValidityReport check_adjustment_set(const Graph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z,
                                           bool want_witness = true) {
  check_problem(g, x, y);
  g.check(z);
  if (z.intersects(x | y)) throw PreconditionError("adjustment set overlaps treatment or outcome");
  ValidityReport r;
  if (!is_amenable(g, x, y)) {
    r.reason = ValidityReport::Reason::not_amenable;
    return r;
  }
  auto hits = z & forbidden_set(g, x, y);
  if (!hits.empty()) {
    r.reason = ValidityReport::Reason::forbidden_member;
    r.forbidden_members = hits;
    return r;
  }
  if (g.is_pdag() && g.undirected_edge_count() > 0) {
    r.open_path = detail::open_noncausal_path(g, x, y, z);
    if (r.open_path) r.reason = ValidityReport::Reason::open_path;
    return r;
  }
  Graph pbd = detail::proper_backdoor_graph(g, x, y);
  if (!separated(pbd, x, y, z)) {
    r.reason = ValidityReport::Reason::open_path;
    if (want_witness) r.open_path = find_open_path(pbd, x, y, z);
  }
  return r;
}

inline bool is_valid_adjustment_set(const Graph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
  return check_adjustment_set(g, x, y, z, false).valid();
}

// Requires Y within the possible descendants of X. Throws NotAmenableError for
// non-amenable partially directed graphs.
inline bool adjustment_set_exists(const Graph& g, const NodeSet& x, const NodeSet& y) {
  check_problem(g, x, y);
  if (!y.is_subset_of(possible_descendants(g, x)))
    throw PreconditionError("outcomes must be possible descendants of the treatments");
  if (!is_amenable(g, x, y)) throw NotAmenableError("graph is not amenable relative to (X, Y)");
  if (g.is_dag() || (g.is_pdag() && y.size() == 1))
    return !x.intersects(descendants(g, causal_nodes(g, x, y)));
  return is_valid_adjustment_set(g, x, y, canonical_adjustment_set(g, x, y));
}

struct OutcomeReduction {
  NodeSet kept;
  NodeSet dropped;
};

// Outcomes that cannot be affected by X carry no information about the effect.
inline OutcomeReduction reduce_outcomes(const Graph& g, const NodeSet& x, const NodeSet& y) {
  check_problem(g, x, y);
  auto pd = possible_descendants(g, x);
  return {y & pd, y - pd};
}

// Result of marginalizing nodes out of a graph. Node i of `graph` is kept[i].
struct Projection {
  Graph graph;
  NodeSet kept;
  NodeSet removed;

  NodeSet to_original(const NodeSet& s) const {
    NodeSet out;
    for (NodeId v : s) out.insert(kept[v]);
    return out;
  }
  NodeSet to_projected(const NodeSet& s) const {
    NodeSet out;
    for (NodeId v : s) {
      auto it = std::lower_bound(kept.begin(), kept.end(), v);
      if (it == kept.end() || *it != v) throw PreconditionError("node was projected out");
      out.insert(static_cast<NodeId>(it - kept.begin()));
    }
    return out;
  }
};

namespace detail {

// Directed and bidirected edges of the latent projection over the complement of
// `latent`. Undirected edges among kept nodes are copied when `copy_undirected`.
inline Projection project(const Graph& g, const NodeSet& latent, GraphClass cls, bool copy_undirected) {
  const std::size_t n = g.size();
  auto in_l = latent.mask(n);
  NodeSet kept = g.all_nodes() - latent;
  std::vector<std::string> names;
  for (NodeId v : kept) names.push_back(g.name(v));
  std::vector<NodeId> pos(n, 0);
  for (std::size_t i = 0; i < kept.size(); ++i) pos[kept[i]] = i;
  GraphBuilder b(cls, names);

  // kept nodes reachable from s by directed paths whose interior lies in the latent set
  auto reach_kept = [&](NodeId s) {
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{s}, hits;
    seen[s] = 1;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(v)) {
        if (seen[w] || !g.has_directed(v, w)) continue;
        seen[w] = 1;
        if (in_l[w]) stack.push_back(w);
        else hits.push_back(w);
      }
    }
    return hits;
  };
  for (NodeId v : kept)
    for (NodeId w : reach_kept(v)) b.add_edge(pos[v], pos[w], EdgeKind::directed);
  for (NodeId s : latent) {
    auto hits = reach_kept(s);
    for (std::size_t i = 0; i < hits.size(); ++i)
      for (std::size_t j = i + 1; j < hits.size(); ++j) b.add_edge(pos[hits[i]], pos[hits[j]], EdgeKind::bidirected);
  }
  if (copy_undirected)
    for (NodeId v : kept)
      for (NodeId w : g.neighbors(v))
        if (v < w && !in_l[w] && g.has_undirected(v, w)) b.add_edge(pos[v], pos[w], EdgeKind::undirected);
  return {std::move(b).build_mixed(), kept, latent};
}

}  // namespace detail

// Latent projection of a DAG over the nodes outside `latent`.
inline Projection latent_projection(const Graph& d, const NodeSet& latent) {
  if (!d.is_dag()) throw PreconditionError("latent_projection needs a dag");
  d.check(latent);
  return detail::project(d, latent, GraphClass::admg, false);
}

// Projection over the forbidden nodes outside X and Y. For a partially directed
// graph Y must be a single node and the graph amenable; undirected edges among
// the kept nodes are copied and bidirected edges (present only when no valid
// adjustment set exists) are allowed alongside them.
inline Projection forbidden_projection(const Graph& g, const NodeSet& x, const NodeSet& y) {
  check_problem(g, x, y);
  NodeSet latent = forbidden_set(g, x, y) - (x | y);
  if (g.is_dag()) return latent_projection(g, latent);
  if (!g.is_pdag()) throw PreconditionError("forbidden_projection needs a dag, cpdag or maxpdag");
  if (y.size() != 1) throw PreconditionError("forbidden projection of a pdag needs a single outcome");
  if (!is_amenable(g, x, y)) throw NotAmenableError("graph is not amenable relative to (X, Y)");
  return detail::project(g, latent, GraphClass::maxpdag, true);
}

// Parents of Y in the forbidden projection, minus X and Y.
inline NodeSet projected_optimal_set(const Graph& g, const NodeSet& x, const NodeSet& y) {
  auto proj = forbidden_projection(g, x, y);
  NodeSet py = proj.to_projected(y);
  return proj.to_original(parents(proj.graph, py)) - (x | y);
}

}  // namespace adjustkit
