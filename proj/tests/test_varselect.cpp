#include <gtest/gtest.h>

#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>

#include "adjustkit/adjustment.hpp"
#include "adjustkit/fixtures.hpp"
#include "adjustkit/varselect.hpp"
#include "support/oracles.hpp"

using namespace adjustkit;

namespace {

using Names = std::vector<std::string>;

double rss(const Dataset& d, std::size_t y, const std::vector<std::size_t>& cols) {
  auto f = ols_fit(d, y, cols);
  return f.residual_var * static_cast<double>(f.df);
}

// A random DAG with a valid adjustment set z that contains the optimal set.
struct SelectCase {
  LinearScm m;
  NodeId x, y;
  NodeSet o, z;
};

std::optional<SelectCase> random_select_case(std::mt19937_64& rng, std::size_t p, double lo) {
  Graph d = oracle::random_dag(rng, p, 0.45);
  NodeId x = oracle::pick(rng, d.all_nodes());
  NodeSet de = descendants(d, NodeSet{x}) - NodeSet{x};
  if (de.empty()) return std::nullopt;
  NodeId y = oracle::pick(rng, de);
  NodeSet o = optimal_adjustment_set(d, NodeSet{x}, NodeSet{y});
  NodeSet forb = forbidden_set(d, NodeSet{x}, NodeSet{y});
  NodeSet z = o | oracle::random_subset(rng, d.all_nodes() - forb - NodeSet{y} - o, 0.6);
  if (z.size() > 5 || !is_valid_adjustment_set(d, NodeSet{x}, NodeSet{y}, z)) return std::nullopt;
  return SelectCase{random_scm(d, rng, lo, 1.0), x, y, o, z};
}

// Every partial correlation the oracle may be asked about is either below the
// independence tolerance or clearly away from zero.
bool clearly_faithful(const Covariance& cov, NodeId x, NodeId y, const NodeSet& z) {
  std::vector<NodeId> zs(z.begin(), z.end());
  for (std::size_t mask = 0; mask < (std::size_t(1) << zs.size()); ++mask)
    for (std::size_t i = 0; i < zs.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      NodeSet c{x};
      for (std::size_t j = 0; j < zs.size(); ++j)
        if (j != i && (mask >> j & 1)) c.insert(zs[j]);
      double r = std::abs(partial_correlation(cov, y, zs[i], c));
      if (r >= 1e-10 && r <= 1e-6) return false;
    }
  return true;
}

}  // namespace

TEST(VarSelect, CriterionThresholds) {
  // 1 - F_chi2_1(t) = erfc(sqrt(t / 2))
  EXPECT_NEAR(alpha_for_criterion(Criterion::aic, 100), std::erfc(1.0), 1e-15);
  EXPECT_NEAR(alpha_for_criterion(Criterion::aic, 100), 0.157299, 1e-6);
  EXPECT_NEAR(alpha_for_criterion(Criterion::bic, std::exp(2.0)), alpha_for_criterion(Criterion::aic, 0), 1e-14);
  EXPECT_NEAR(alpha_for_criterion(Criterion::bic, 1000), std::erfc(std::sqrt(std::log(1000.0) / 2)), 1e-15);
  EXPECT_GT(alpha_for_criterion(Criterion::bic, 100), alpha_for_criterion(Criterion::bic, 1000));
  EXPECT_THROW(alpha_for_criterion(Criterion::bic, 1), PreconditionError);
}

// The t-test p-value equals the partial F-test p-value of the nested models.
TEST(VarSelect, PValuesMatchNestedFTest) {
  auto m = random_scm(random_dag(6, 3.0, std::uint64_t{3}), 3);
  auto d = simulate(m, 60, std::uint64_t{4});
  Names z = {"V1", "V2", "V4"};
  auto p = coefficient_p_values(d, "V3", "V6", z);
  std::vector<std::size_t> full = {2, 0, 1, 3};
  double rf = rss(d, 5, full);
  double df = 60.0 - 5.0;
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<std::size_t> reduced;
    for (std::size_t c : full)
      if (c != full[i + 1]) reduced.push_back(c);
    double f = (rss(d, 5, reduced) - rf) / (rf / df);
    boost::math::fisher_f dist(1.0, df);
    EXPECT_NEAR(p[i], boost::math::cdf(boost::math::complement(dist, f)), 1e-10);
  }
}

TEST(VarSelect, BackwardSelectTrivialCases) {
  auto m = constant_scm(fixture_graph("SSQ-DAG"), 0.5);
  auto d = simulate(m, 500, std::uint64_t{5});
  EXPECT_TRUE(backward_select(d, "ALN", "DET", {}, 0.05).selected.empty());
  Names z = {"AFF", "AIS", "APA", "CDR", "SAN"};
  EXPECT_EQ(backward_select(d, "ALN", "DET", z, 1.0).selected, z);
  auto r = backward_select(d, "ALN", "DET", z, 0.0);
  EXPECT_TRUE(r.selected.empty());
  EXPECT_EQ(r.trace.size(), 5u);
  EXPECT_THROW(backward_select(d, "ALN", "DET", {"DET"}, 0.05), PreconditionError);
}

TEST(VarSelect, BackwardSelectTieBreak) {
  // swapping A and B maps the data onto itself, so their p-values coincide
  Eigen::MatrixXd base(6, 4);
  base << 1, 2, 0.5, 1.2, 3, -1, 1.5, 0.1, 0.2, 0.7, -1, -0.9, -2, 1, 0.3, 0.8, 0.4, -0.6, 2, 2.1, 1.1, 0.9, -0.4, -0.2;
  Dataset d{{"A", "B", "X", "Y"}, Eigen::MatrixXd(12, 4)};
  d.values.topRows(6) = base;
  d.values.bottomRows(6) = base;
  d.values.bottomRows(6).col(0) = base.col(1);
  d.values.bottomRows(6).col(1) = base.col(0);
  auto p = coefficient_p_values(d, "X", "Y", {"A", "B"});
  EXPECT_NEAR(p[0], p[1], 1e-12);
  auto r = backward_select(d, "X", "Y", {"B", "A"}, p[0] / 2);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace[0].removed, "A");
}

TEST(VarSelect, BackwardSelectFindsOptimalSetOnSsq) {
  auto m = constant_scm(fixture_graph("SSQ-DAG"), 0.5);
  Names z = {"AFF", "AIS", "APA", "CDR", "SAN"};
  std::mt19937_64 rng(41);
  int hits = 0;
  for (int r = 0; r < 20; ++r) {
    auto res = backward_select(simulate(m, 100000, rng), "ALN", "DET", z, 0.05);
    hits += res.selected == Names{"AIS", "CDR"};
  }
  EXPECT_GE(hits, 16);
}

TEST(VarSelect, OracleOnSsq) {
  Graph g = fixture_graph("SSQ-DAG");
  IndependenceOracle o(g);
  NodeId x = g.id("ALN"), y = g.id("DET");
  EXPECT_EQ(g.names_of(oracle_backward_select(o, x, y, g.ids({"AFF", "APA", "AIS", "CDR", "SAN"}))),
            (Names{"AIS", "CDR"}));
  EXPECT_EQ(g.names_of(oracle_backward_select(o, x, y, g.ids({"AFF", "SAN"}))), (Names{"AFF", "SAN"}));
  EXPECT_EQ(g.names_of(oracle_backward_select(o, x, y, g.ids({"AIS", "CDR"}))), (Names{"AIS", "CDR"}));
  IndependenceOracle c(implied_covariance(constant_scm(g, 0.5)));
  EXPECT_EQ(g.names_of(oracle_backward_select(c, x, y, g.ids({"AFF", "APA", "AIS", "CDR", "SAN"}))),
            (Names{"AIS", "CDR"}));
  EXPECT_THROW(oracle_backward_select(o, x, y, g.ids({"ALN"})), PreconditionError);
  EXPECT_THROW(o.independent(x, 99, {}), UnknownNodeError);
}

TEST(VarSelect, PartialCorrelationAnalytic) {
  Covariance c{{"A", "B", "C"}, Eigen::MatrixXd(3, 3)};
  c.sigma << 1, 0.5, 0.5, 0.5, 1, 0.25, 0.5, 0.25, 1;
  EXPECT_NEAR(partial_correlation(c, 0, 1, {}), 0.5, 1e-15);
  // (0.5 - 0.5 * 0.25) / sqrt((1 - 0.25) * (1 - 0.0625))
  EXPECT_NEAR(partial_correlation(c, 0, 1, NodeSet{2}), 0.375 / std::sqrt(0.75 * 0.9375), 1e-14);
}

// Oracle selection ignores order, lands on the optimal set when it starts from
// a valid superset of it, and never increases the asymptotic variance.
TEST(VarSelectProperty, OracleSelection) {
  std::mt19937_64 rng(42);
  int n = 0;
  while (n < 150) {
    auto c = random_select_case(rng, 4 + n % 5, 0.1);
    if (!c) continue;
    auto cov = implied_covariance(c->m);
    if (!clearly_faithful(cov, c->x, c->y, c->z)) continue;
    ++n;
    IndependenceOracle go(c->m.dag), co(cov);
    std::vector<NodeId> order(c->z.begin(), c->z.end());
    NodeSet first = oracle_backward_select(co, c->x, c->y, order);
    do {
      EXPECT_EQ(oracle_backward_select(co, c->x, c->y, order), first);
      EXPECT_EQ(oracle_backward_select(go, c->x, c->y, order), first);
    } while (std::next_permutation(order.begin(), order.end()));
    EXPECT_EQ(first, c->o);
    EXPECT_LE(population_avar(cov, c->x, c->y, first), population_avar(cov, c->x, c->y, c->z) + 1e-12);
  }
}
