#include <gtest/gtest.h>

#include <sstream>

#include "adjustkit/fixtures.hpp"
#include "adjustkit/io.hpp"
#include "adjustkit/scm.hpp"

using namespace adjustkit;

namespace {

int parse_error_line(const std::string& text) {
  try {
    parse_graph(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

std::string parse_error(const std::string& text) {
  try {
    parse_graph(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Io, TwoNodeDag) {
  Graph g = parse_graph("class: dag\nA -> B");
  EXPECT_EQ(g.size(), 2u);
  EXPECT_TRUE(g.is_dag());
  EXPECT_TRUE(g.has_directed(g.id("A"), g.id("B")));
}

TEST(Io, CommentsBlankLinesAndIsolatedNodes) {
  Graph g = parse_graph("# header\n\nclass: admg  # mixed\nnode: Z\nA -> B # edge\nA <-> C\n");
  EXPECT_EQ(g.names(), (std::vector<std::string>{"Z", "A", "B", "C"}));
  EXPECT_TRUE(g.neighbors(g.id("Z")).empty());
  EXPECT_TRUE(g.has_bidirected(g.id("A"), g.id("C")));
  // repeated identical edges are accepted once
  EXPECT_EQ(parse_graph("class: dag\nA -> B\nA -> B\n").edges().size(), 1u);
}

TEST(Io, SyntaxErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("class: dag\nA -> B\nA => C\n"), 3);
  EXPECT_EQ(parse_error_line("class: dag\n\nA -- B\n"), 3);
  EXPECT_EQ(parse_error_line("class: dag\nA -> A\n"), 2);
  EXPECT_EQ(parse_error_line("class: tree\n"), 1);
  EXPECT_EQ(parse_error_line("class: dag\nclass: dag\n"), 2);
  EXPECT_EQ(parse_error_line("class: cpdag\nA <-> B\n"), 2);
  EXPECT_EQ(parse_error_line("class: admg\nA -- B\n"), 2);
  EXPECT_EQ(parse_error_line("class: dag\nA -> B\nB -> A\n"), 3);
  EXPECT_EQ(parse_error("A -> B\n"), "missing 'class:' header");
}

TEST(Io, ClassInvariantViolations) {
  // A -> B -- C with A, C non-adjacent: rule 1 orients B -> C
  auto msg = parse_error("class: cpdag\nA -> B\nB -- C\n");
  EXPECT_NE(msg.find("rule 1 orients B -- C as B -> C"), std::string::npos) << msg;
  EXPECT_NE(parse_error("class: dag\nA -> B\nB -> C\nC -> A\n"), "");
  // closed, but A -> B is not compelled in its class
  EXPECT_NE(parse_error("class: cpdag\nA -> B\n").find("completed pattern"), std::string::npos);
  EXPECT_NO_THROW(parse_graph("class: maxpdag\nA -> B\n"));
}

TEST(Io, FixturesRoundTrip) {
  for (const auto& f : fixtures()) {
    Graph g = parse_graph(f.text);
    std::string text = format_graph(g);
    EXPECT_EQ(parse_graph(text), g) << f.name;
    EXPECT_EQ(format_graph(parse_graph(text)), text) << f.name;
  }
}

TEST(Io, FormatIsCanonical) {
  Graph g = parse_graph("class: admg\nnode: Q\nC <-> A\nB -> A\n");
  EXPECT_EQ(format_graph(g), "class: admg\nnode: Q\nA <-> C\nB -> A\n");
}

TEST(Io, DatasetRoundTrip) {
  auto m = random_scm(fixture_graph("SSQ-DAG"), std::uint64_t{2});
  Dataset d = simulate(m, 25, std::uint64_t{3});
  std::stringstream s;
  write_dataset(s, d);
  Dataset back = read_dataset(s);
  EXPECT_EQ(back.names, d.names);
  EXPECT_EQ(back.values, d.values);
}

TEST(Io, DatasetErrors) {
  std::istringstream ragged("A,B\n1,2\n3\n");
  try {
    read_dataset(ragged);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  std::istringstream bad("A,B\n1,x\n");
  EXPECT_THROW(read_dataset(bad), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(read_dataset(empty), ParseError);
  Dataset d{{"A", "B"}, Eigen::MatrixXd::Zero(2, 2)};
  EXPECT_THROW(d.column("C"), UnknownNodeError);
  EXPECT_THROW(read_dataset_file("/nonexistent/file.csv"), Error);
}
