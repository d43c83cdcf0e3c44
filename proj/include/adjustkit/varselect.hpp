#pragma once

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scm.hpp"
#include "separation.hpp"

namespace adjustkit {

// Partial correlation of a and b given c, from the precision matrix of the block.
inline double partial_correlation(const Covariance& cov, NodeId a, NodeId b, const NodeSet& c) {
  std::vector<Eigen::Index> idx{static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)};
  for (auto i : detail::indices(c)) idx.push_back(i);
  Eigen::MatrixXd block = detail::sub(cov.sigma, idx, idx);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(block);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0) throw NumericError("covariance block is singular");
  Eigen::MatrixXd prec = ldlt.solve(Eigen::MatrixXd::Identity(block.rows(), block.cols()));
  return -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
}

// Answers Y _||_ Z | C from d-separation in a graph or from vanishing partial
// correlations of a covariance matrix.
class IndependenceOracle {
 public:
  static constexpr double tolerance = 1e-10;

  explicit IndependenceOracle(Graph g) : backing_(std::move(g)) {}
  explicit IndependenceOracle(Covariance c) : backing_(std::move(c)) {}

  std::size_t size() const {
    if (auto g = std::get_if<Graph>(&backing_)) return g->size();
    return std::get<Covariance>(backing_).names.size();
  }

  bool independent(NodeId a, NodeId b, const NodeSet& c) const {
    NodeSet all = c | NodeSet{a, b};
    if (all.size() != c.size() + 2) throw PreconditionError("independence query sets overlap");
    if (all[all.size() - 1] >= size()) throw UnknownNodeError("independence query on unknown variable");
    if (auto g = std::get_if<Graph>(&backing_)) return separated(*g, NodeSet{a}, NodeSet{b}, c);
    return std::abs(partial_correlation(std::get<Covariance>(backing_), a, b, c)) < tolerance;
  }

 private:
  std::variant<Graph, Covariance> backing_;
};

// One pass over z in the given order, dropping every member independent of y
// given x and the members still kept.
inline NodeSet oracle_backward_select(const IndependenceOracle& o, NodeId x, NodeId y, const std::vector<NodeId>& order) {
  NodeSet kept;
  for (NodeId v : order) kept.insert(v);
  if (kept.size() != order.size()) throw PreconditionError("candidate list has duplicates");
  if (kept.contains(x) || kept.contains(y) || x == y) throw PreconditionError("x, y and z must be disjoint");
  for (NodeId v : order) {
    NodeSet rest = kept - NodeSet{v};
    if (o.independent(y, v, rest | NodeSet{x})) kept = rest;
  }
  return kept;
}

inline NodeSet oracle_backward_select(const IndependenceOracle& o, NodeId x, NodeId y, const NodeSet& z) {
  return oracle_backward_select(o, x, y, std::vector<NodeId>(z.begin(), z.end()));
}

enum class Criterion { aic, bic };

// Significance level at which backward elimination by t-test matches AIC or BIC.
inline double alpha_for_criterion(Criterion c, double n) {
  boost::math::chi_squared chi(1.0);
  if (c == Criterion::aic) return boost::math::cdf(boost::math::complement(chi, 2.0));
  if (!(n >= 2)) throw PreconditionError("BIC threshold needs n >= 2");
  return boost::math::cdf(boost::math::complement(chi, std::log(n)));
}

struct EliminationStep {
  std::string removed;
  double p_value;
};

struct SelectionResult {
  std::vector<std::string> selected;  // sorted
  std::vector<EliminationStep> trace;
};

// Two-sided p-value of each adjustment coefficient in the fit of y on x and z.
inline std::vector<double> coefficient_p_values(const Dataset& data, const std::string& x, const std::string& y,
                                                const std::vector<std::string>& z) {
  std::vector<std::size_t> cols{data.column(x)};
  for (const auto& v : z) cols.push_back(data.column(v));
  auto f = ols_fit(data, data.column(y), cols);
  boost::math::students_t t(static_cast<double>(f.df));
  std::vector<double> p;
  for (std::size_t i = 1; i < cols.size(); ++i) {
    double stat = std::abs(f.coef[i] / f.se[i]);
    p.push_back(std::isfinite(stat) ? 2 * boost::math::cdf(boost::math::complement(t, stat)) : 0.0);
  }
  return p;
}

// Repeatedly drops the member of z with the largest p-value while it exceeds alpha.
// Ties (equal to 1e-12 relative) go to the lexicographically smallest name.
inline SelectionResult backward_select(const Dataset& data, const std::string& x, const std::string& y,
                                       std::vector<std::string> z, double alpha) {
  std::sort(z.begin(), z.end());
  if (std::adjacent_find(z.begin(), z.end()) != z.end()) throw PreconditionError("candidate list has duplicates");
  for (const auto& v : z)
    if (v == x || v == y) throw PreconditionError("adjustment set overlaps treatment or outcome");
  SelectionResult r;
  while (!z.empty()) {
    auto p = coefficient_p_values(data, x, y, z);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
      if (p[i] > p[arg] * (1 + 1e-12)) arg = i;
    if (!(p[arg] > alpha)) break;
    r.trace.push_back({z[arg], p[arg]});
    z.erase(z.begin() + static_cast<std::ptrdiff_t>(arg));
  }
  r.selected = z;
  return r;
}

}  // namespace adjustkit
