#pragma once

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dataset.hpp"
#include "graph.hpp"
#include "meek.hpp"

namespace adjustkit {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline bool valid_name(const std::string& n) {
  if (n.empty() || n == "->" || n == "--" || n == "<->") return false;
  return n.find_first_of(",#:") == std::string::npos;
}

inline std::optional<GraphClass> class_from_string(std::string_view s) {
  if (s == "dag") return GraphClass::dag;
  if (s == "cpdag") return GraphClass::cpdag;
  if (s == "maxpdag") return GraphClass::maxpdag;
  if (s == "admg") return GraphClass::admg;
  return std::nullopt;
}

}  // namespace detail

// Edge-list text: a `class: dag|cpdag|maxpdag|admg` header, one edge per line
// (`A -> B`, `A -- B`, `A <-> B`), optional `node: N` lines, `#` comments.
inline Graph parse_graph(std::string_view text) {
  std::optional<GraphClass> cls;
  struct Line {
    int line;
    std::string a, op, b;
  };
  std::vector<Line> edges;
  std::vector<std::pair<int, std::string>> nodes;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    auto hash = raw.find('#');
    std::string_view line = detail::trim(raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.rfind("class:", 0) == 0) {
      if (cls) throw ParseError(lineno, "duplicate class header");
      auto v = detail::trim(line.substr(6));
      cls = detail::class_from_string(v);
      if (!cls) throw ParseError(lineno, "unknown graph class '" + std::string(v) + "'");
      continue;
    }
    if (line.rfind("node:", 0) == 0) {
      std::string n(detail::trim(line.substr(5)));
      if (!detail::valid_name(n) || detail::split_ws(n).size() != 1) throw ParseError(lineno, "bad node name");
      nodes.emplace_back(lineno, n);
      continue;
    }
    auto tok = detail::split_ws(line);
    if (tok.size() != 3 || (tok[1] != "->" && tok[1] != "--" && tok[1] != "<->"))
      throw ParseError(lineno, "expected 'A -> B', 'A -- B' or 'A <-> B'");
    if (!detail::valid_name(tok[0]) || !detail::valid_name(tok[2])) throw ParseError(lineno, "bad node name");
    if (tok[0] == tok[2]) throw ParseError(lineno, "self-loop at " + tok[0]);
    edges.push_back({lineno, tok[0], tok[1], tok[2]});
  }
  if (!cls) throw ParseError(0, "missing 'class:' header");

  GraphBuilder b(*cls);
  std::size_t ni = 0, ei = 0;
  // keep first-appearance order across node lines and edges
  std::map<std::pair<std::string, std::string>, int> first_line;
  while (ni < nodes.size() || ei < edges.size()) {
    if (ni < nodes.size() && (ei >= edges.size() || nodes[ni].first < edges[ei].line)) {
      b.add_node(nodes[ni++].second);
      continue;
    }
    const Line& e = edges[ei++];
    EdgeKind k = e.op == "->" ? EdgeKind::directed : e.op == "--" ? EdgeKind::undirected : EdgeKind::bidirected;
    if (*cls == GraphClass::dag && k != EdgeKind::directed) throw ParseError(e.line, "dag edges must be directed");
    if (*cls == GraphClass::admg && k == EdgeKind::undirected)
      throw ParseError(e.line, "admg edges must be directed or bidirected");
    if (is_pdag_class(*cls) && k == EdgeKind::bidirected)
      throw ParseError(e.line, "bidirected edges are not allowed in a " + std::string(to_string(*cls)));
    NodeId ia = b.add_node(e.a), ib = b.add_node(e.b);
    const Graph& cur = b.view();
    bool already = cur.has_edge(ia, ib, k);
    if (!already) {
      bool simple = *cls != GraphClass::admg;
      bool clash = simple ? cur.adjacent(ia, ib)
                          : (k == EdgeKind::directed && (cur.has_directed(ib, ia)));
      if (clash) throw ParseError(e.line, "conflicting edge between " + e.a + " and " + e.b);
      b.add_edge(ia, ib, k);
    }
  }
  Graph g;
  try {
    g = std::move(b).build();
  } catch (const GraphInvariantError& err) {
    throw ParseError(0, err.what());
  }
  if (g.is_pdag()) {
    if (auto m = find_meek_violation(g)) throw ParseError(0, "graph is not closed under the orientation rules: " + describe(g, *m));
    if (!has_consistent_extension(g)) throw ParseError(0, "graph has no consistent DAG extension");
    if (g.graph_class() == GraphClass::cpdag) {
      Graph completed = dag_to_cpdag(consistent_extension(g));
      GraphBuilder same(completed);
      if (!(std::move(same).build() == g))
        throw ParseError(0, "graph is not the completed pattern of its equivalence class");
    }
  }
  return g;
}

inline Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

// Canonical text: isolated nodes first, then edges sorted by endpoint names.
inline std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << "class: " << to_string(g.graph_class()) << "\n";
  for (NodeId v = 0; v < g.size(); ++v)
    if (g.neighbors(v).empty()) out << "node: " << g.name(v) << "\n";
  std::vector<std::tuple<std::string, std::string, int>> lines;
  for (const auto& e : g.edges()) {
    std::string a = g.name(e.tail), b = g.name(e.head);
    if (e.kind != EdgeKind::directed && b < a) std::swap(a, b);
    lines.emplace_back(a, b, static_cast<int>(e.kind));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [a, b, k] : lines) {
    const char* op = k == static_cast<int>(EdgeKind::directed) ? " -> "
                     : k == static_cast<int>(EdgeKind::undirected) ? " -- " : " <-> ";
    out << a << op << b << "\n";
  }
  return out.str();
}

inline void write_dataset(std::ostream& out, const Dataset& d) {
  for (std::size_t j = 0; j < d.names.size(); ++j) out << (j ? "," : "") << d.names[j];
  out << "\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < d.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.values.cols(); ++j) out << (j ? "," : "") << d.values(i, j);
    out << "\n";
  }
}

inline Dataset read_dataset(std::istream& in) {
  Dataset d;
  std::string line;
  int lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, ',')) out.emplace_back(detail::trim(cur));
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto cells = split(line);
    if (d.names.empty()) {
      d.names = cells;
      continue;
    }
    if (cells.size() != d.names.size())
      throw ParseError(lineno, "expected " + std::to_string(d.names.size()) + " fields, got " +
                                   std::to_string(cells.size()));
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0;
      auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || p != c.data() + c.size()) throw ParseError(lineno, "not a number: '" + c + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (d.names.empty()) throw ParseError(0, "empty dataset");
  d.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d.names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < d.names.size(); ++j) d.values(i, j) = rows[i][j];
  return d;
}

inline Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_dataset(in);
}

}  // namespace adjustkit
