#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "node_set.hpp"

namespace adjustkit {

enum class GraphClass { dag, cpdag, maxpdag, admg };
enum class EdgeKind { directed, undirected, bidirected };

inline const char* to_string(GraphClass c) {
  switch (c) {
    case GraphClass::dag: return "dag";
    case GraphClass::cpdag: return "cpdag";
    case GraphClass::maxpdag: return "maxpdag";
    case GraphClass::admg: return "admg";
  }
  return "?";
}

inline bool is_pdag_class(GraphClass c) { return c == GraphClass::cpdag || c == GraphClass::maxpdag; }

// For undirected and bidirected edges tail < head.
struct Edge {
  NodeId tail;
  NodeId head;
  EdgeKind kind;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class GraphBuilder;

class Graph {
 public:
  Graph() = default;

  std::size_t size() const { return names_.size(); }
  GraphClass graph_class() const { return cls_; }
  bool is_dag() const { return cls_ == GraphClass::dag; }
  bool is_pdag() const { return is_pdag_class(cls_); }

  const std::string& name(NodeId v) const {
    check(v);
    return names_[v];
  }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<NodeId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  NodeId id(std::string_view name) const {
    auto v = find(name);
    if (!v) throw UnknownNodeError("unknown node '" + std::string(name) + "'");
    return *v;
  }
  NodeSet ids(const std::vector<std::string>& names) const {
    NodeSet s;
    for (const auto& n : names) s.insert(id(n));
    return s;
  }
  NodeSet ids(std::initializer_list<std::string_view> names) const {
    NodeSet s;
    for (auto n : names) s.insert(id(n));
    return s;
  }
  // Names sorted lexicographically.
  std::vector<std::string> names_of(const NodeSet& s) const {
    std::vector<std::string> out;
    for (NodeId v : s) out.push_back(name(v));
    std::sort(out.begin(), out.end());
    return out;
  }
  NodeSet all_nodes() const {
    std::vector<NodeId> v(size());
    for (NodeId i = 0; i < size(); ++i) v[i] = i;
    return NodeSet(std::move(v));
  }

  void check(NodeId v) const {
    if (v >= size()) throw UnknownNodeError("node id " + std::to_string(v) + " out of range");
  }
  void check(const NodeSet& s) const {
    for (NodeId v : s) check(v);
  }

  bool has_directed(NodeId a, NodeId b) const { return mark(a, b) & kDir; }
  bool has_undirected(NodeId a, NodeId b) const { return mark(a, b) & kUnd; }
  bool has_bidirected(NodeId a, NodeId b) const { return mark(a, b) & kBi; }
  bool adjacent(NodeId a, NodeId b) const { return (mark(a, b) | mark(b, a)) != 0; }
  bool has_edge(NodeId a, NodeId b, EdgeKind k) const {
    switch (k) {
      case EdgeKind::directed: return has_directed(a, b);
      case EdgeKind::undirected: return has_undirected(a, b);
      case EdgeKind::bidirected: return has_bidirected(a, b);
    }
    return false;
  }

  // Nodes sharing at least one edge with v, ascending.
  const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[v]; }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (NodeId a = 0; a < size(); ++a)
      for (NodeId b : adj_[a]) {
        if (has_directed(a, b)) out.push_back({a, b, EdgeKind::directed});
        if (a < b && has_undirected(a, b)) out.push_back({a, b, EdgeKind::undirected});
        if (a < b && has_bidirected(a, b)) out.push_back({a, b, EdgeKind::bidirected});
      }
    return out;
  }
  std::size_t undirected_edge_count() const {
    std::size_t k = 0;
    for (NodeId a = 0; a < size(); ++a)
      for (NodeId b : adj_[a])
        if (a < b && has_undirected(a, b)) ++k;
    return k;
  }
  bool has_undirected_at(NodeId v) const {
    for (NodeId w : adj_[v])
      if (has_undirected(v, w)) return true;
    return false;
  }

  // Structural equality by node names; node order does not matter.
  friend bool operator==(const Graph& a, const Graph& b) {
    if (a.cls_ != b.cls_ || a.size() != b.size()) return false;
    for (NodeId i = 0; i < a.size(); ++i) {
      auto j = b.find(a.names_[i]);
      if (!j) return false;
    }
    for (NodeId i = 0; i < a.size(); ++i) {
      NodeId bi = *b.find(a.names_[i]);
      for (NodeId k = 0; k < a.size(); ++k)
        if (a.mark(i, k) != b.mark(bi, *b.find(a.names_[k]))) return false;
    }
    return true;
  }

 private:
  friend class GraphBuilder;
  static constexpr std::uint8_t kDir = 1, kUnd = 2, kBi = 4;

  std::uint8_t mark(NodeId a, NodeId b) const { return marks_[a * size() + b]; }
  std::uint8_t& mark_ref(NodeId a, NodeId b) { return marks_[a * size() + b]; }

  GraphClass cls_ = GraphClass::dag;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::uint8_t> marks_;
  std::vector<std::vector<NodeId>> adj_;
};

// The only way to create or modify graphs; build() checks class invariants.
class GraphBuilder {
 public:
  explicit GraphBuilder(GraphClass cls) { g_.cls_ = cls; }
  explicit GraphBuilder(Graph g) : g_(std::move(g)) {}
  GraphBuilder(GraphClass cls, const std::vector<std::string>& names) {
    g_.cls_ = cls;
    for (const auto& n : names) {
      if (n.empty()) throw GraphInvariantError("empty node name");
      if (!g_.index_.emplace(n, g_.names_.size()).second) throw GraphInvariantError("duplicate node " + n);
      g_.names_.push_back(n);
    }
    g_.marks_.assign(names.size() * names.size(), 0);
    g_.adj_.resize(names.size());
  }

  GraphBuilder& set_class(GraphClass cls) {
    g_.cls_ = cls;
    return *this;
  }

  NodeId add_node(const std::string& name) {
    if (auto v = g_.find(name)) return *v;
    if (name.empty()) throw GraphInvariantError("empty node name");
    std::size_t n = g_.size();
    std::vector<std::uint8_t> marks((n + 1) * (n + 1), 0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) marks[a * (n + 1) + b] = g_.marks_[a * n + b];
    g_.marks_ = std::move(marks);
    g_.names_.push_back(name);
    g_.index_.emplace(name, n);
    g_.adj_.emplace_back();
    return n;
  }

  GraphBuilder& add_edge(NodeId a, NodeId b, EdgeKind k) {
    g_.check(a);
    g_.check(b);
    if (a == b) throw GraphInvariantError("self-loop at " + g_.names_[a]);
    switch (k) {
      case EdgeKind::directed: g_.mark_ref(a, b) |= Graph::kDir; break;
      case EdgeKind::undirected:
        g_.mark_ref(a, b) |= Graph::kUnd;
        g_.mark_ref(b, a) |= Graph::kUnd;
        break;
      case EdgeKind::bidirected:
        g_.mark_ref(a, b) |= Graph::kBi;
        g_.mark_ref(b, a) |= Graph::kBi;
        break;
    }
    link(a, b);
    return *this;
  }
  GraphBuilder& add_edge(const std::string& a, const std::string& b, EdgeKind k) {
    NodeId ia = add_node(a);
    NodeId ib = add_node(b);
    return add_edge(ia, ib, k);
  }

  // Replaces a-b by a->b.
  void orient(NodeId tail, NodeId head) {
    g_.mark_ref(tail, head) = static_cast<std::uint8_t>((g_.mark(tail, head) & ~Graph::kUnd) | Graph::kDir);
    g_.mark_ref(head, tail) &= static_cast<std::uint8_t>(~Graph::kUnd);
  }

  void remove_edge(NodeId a, NodeId b, EdgeKind k) {
    switch (k) {
      case EdgeKind::directed: g_.mark_ref(a, b) &= static_cast<std::uint8_t>(~Graph::kDir); break;
      case EdgeKind::undirected:
        g_.mark_ref(a, b) &= static_cast<std::uint8_t>(~Graph::kUnd);
        g_.mark_ref(b, a) &= static_cast<std::uint8_t>(~Graph::kUnd);
        break;
      case EdgeKind::bidirected:
        g_.mark_ref(a, b) &= static_cast<std::uint8_t>(~Graph::kBi);
        g_.mark_ref(b, a) &= static_cast<std::uint8_t>(~Graph::kBi);
        break;
    }
    if (!g_.adjacent(a, b)) {
      unlink(a, b);
      unlink(b, a);
    }
  }

  const Graph& view() const { return g_; }

  Graph build() && {
    validate(g_, false);
    return std::move(g_);
  }
  // Skips the "no bidirected edges" rule for partially directed classes.
  Graph build_mixed() && {
    validate(g_, true);
    return std::move(g_);
  }

  static void validate(const Graph& g, bool allow_mixed) {
    const std::size_t n = g.size();
    for (NodeId a = 0; a < n; ++a)
      for (NodeId b : g.adj_[a]) {
        if (b < a) continue;
        std::string pair = g.names_[a] + ", " + g.names_[b];
        int dirs = g.has_directed(a, b) + g.has_directed(b, a);
        bool und = g.has_undirected(a, b), bi = g.has_bidirected(a, b);
        if (dirs == 2) throw GraphInvariantError("directed edges in both directions between " + pair);
        switch (g.cls_) {
          case GraphClass::dag:
            if (und || bi) throw GraphInvariantError("dag holds a non-directed edge between " + pair);
            break;
          case GraphClass::cpdag:
          case GraphClass::maxpdag:
            if (bi && !allow_mixed) throw GraphInvariantError("bidirected edge between " + pair + " in a pdag");
            if (dirs + und + bi > 1) throw GraphInvariantError("more than one edge between " + pair);
            break;
          case GraphClass::admg:
            if (und) throw GraphInvariantError("admg holds an undirected edge between " + pair);
            break;
        }
      }
    // Directed part must be acyclic.
    std::vector<int> indeg(n, 0);
    for (NodeId a = 0; a < n; ++a)
      for (NodeId b : g.adj_[a])
        if (g.has_directed(a, b)) ++indeg[b];
    std::vector<NodeId> stack;
    for (NodeId v = 0; v < n; ++v)
      if (!indeg[v]) stack.push_back(v);
    std::size_t seen = 0;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      ++seen;
      for (NodeId w : g.adj_[v])
        if (g.has_directed(v, w) && --indeg[w] == 0) stack.push_back(w);
    }
    if (seen != n) throw GraphInvariantError("directed cycle");
  }

 private:
  void link(NodeId a, NodeId b) {
    auto& la = g_.adj_[a];
    auto it = std::lower_bound(la.begin(), la.end(), b);
    if (it == la.end() || *it != b) la.insert(it, b);
    auto& lb = g_.adj_[b];
    it = std::lower_bound(lb.begin(), lb.end(), a);
    if (it == lb.end() || *it != a) lb.insert(it, a);
  }
  void unlink(NodeId a, NodeId b) {
    auto& la = g_.adj_[a];
    auto it = std::lower_bound(la.begin(), la.end(), b);
    if (it != la.end() && *it == b) la.erase(it);
  }

  Graph g_;
};

// Convenience for tests and fixtures: nodes are added in the order given.
inline Graph make_graph(GraphClass cls, const std::vector<std::string>& nodes,
                        const std::vector<std::tuple<std::string, std::string, EdgeKind>>& edges) {
  GraphBuilder b(cls);
  for (const auto& n : nodes) b.add_node(n);
  for (const auto& [u, v, k] : edges) b.add_edge(u, v, k);
  return std::move(b).build();
}

}  // namespace adjustkit
