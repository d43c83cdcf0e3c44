#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ancestry.hpp"
#include "dataset.hpp"
#include "graph.hpp"

namespace adjustkit {

// splitmix64 finalizer; derive_seed(master, stream, i) gives independent
// streams for replication i of a named experiment part.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
  return mix64(mix64(mix64(master) ^ stream) + index);
}

inline std::vector<std::string> default_names(std::size_t p) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < p; ++i) out.push_back("V" + std::to_string(i + 1));
  return out;
}

// Erdos-Renyi DAG: each pair i < j gets i -> j with probability d / (p - 1).
inline Graph random_dag(std::size_t p, double d, std::mt19937_64& rng) {
  if (p < 2) throw PreconditionError("random_dag needs at least two nodes");
  double prob = d / static_cast<double>(p - 1);
  if (!(d > 0) || prob > 1) throw PreconditionError("expected degree must lie in (0, p-1]");
  std::bernoulli_distribution coin(prob);
  GraphBuilder b(GraphClass::dag, default_names(p));
  for (NodeId i = 0; i < p; ++i)
    for (NodeId j = i + 1; j < p; ++j)
      if (coin(rng)) b.add_edge(i, j, EdgeKind::directed);
  return std::move(b).build();
}

inline Graph random_dag(std::size_t p, double d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_dag(p, d, rng);
}

enum class ErrorLaw { gaussian, uniform };

// V = B V + e with B(j, i) the coefficient of edge i -> j and Var(e_j) = err_var(j).
struct LinearScm {
  Graph dag;
  Eigen::MatrixXd coef;
  Eigen::VectorXd err_var;

  explicit LinearScm(Graph d)
      : dag(std::move(d)),
        coef(Eigen::MatrixXd::Zero(dag.size(), dag.size())),
        err_var(Eigen::VectorXd::Ones(dag.size())) {
    if (!dag.is_dag()) throw PreconditionError("a linear SCM needs a DAG");
  }

  std::size_t size() const { return dag.size(); }
  double edge(NodeId from, NodeId to) const { return coef(to, from); }
  LinearScm& set_edge(NodeId from, NodeId to, double value) {
    if (!dag.has_directed(from, to)) throw PreconditionError("no edge " + dag.name(from) + " -> " + dag.name(to));
    coef(to, from) = value;
    return *this;
  }
  LinearScm& set_edge(const std::string& from, const std::string& to, double value) {
    return set_edge(dag.id(from), dag.id(to), value);
  }
};

// Every edge gets the same coefficient.
inline LinearScm constant_scm(const Graph& dag, double value) {
  LinearScm m(dag);
  for (const auto& e : dag.edges()) m.set_edge(e.tail, e.head, value);
  return m;
}

// Coefficients uniform on [-1, -0.1] u [0.1, 1], unit error variances.
inline LinearScm random_scm(const Graph& dag, std::mt19937_64& rng, double lo = 0.1, double hi = 1.0) {
  LinearScm m(dag);
  std::uniform_real_distribution<double> mag(lo, hi);
  std::bernoulli_distribution sign(0.5);
  for (const auto& e : dag.edges()) {
    double v = mag(rng);
    m.set_edge(e.tail, e.head, sign(rng) ? v : -v);
  }
  return m;
}

inline LinearScm random_scm(const Graph& dag, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_scm(dag, rng);
}

inline Dataset simulate(const LinearScm& m, std::size_t n, std::mt19937_64& rng, ErrorLaw law = ErrorLaw::gaussian) {
  std::size_t p = m.size();
  Dataset d{m.dag.names(), Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p))};
  auto order = topological_order(m.dag);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-std::sqrt(3.0), std::sqrt(3.0));
  std::vector<NodeSet> pa(p);
  for (NodeId v = 0; v < p; ++v) pa[v] = parents(m.dag, NodeSet{v});
  for (std::size_t r = 0; r < n; ++r) {
    auto row = d.values.row(static_cast<Eigen::Index>(r));
    for (NodeId v : order) {
      double e = law == ErrorLaw::gaussian ? gauss(rng) : unif(rng);
      double val = std::sqrt(m.err_var(v)) * e;
      for (NodeId u : pa[v]) val += m.coef(v, u) * row(u);
      row(v) = val;
    }
  }
  return d;
}

inline Dataset simulate(const LinearScm& m, std::size_t n, std::uint64_t seed, ErrorLaw law = ErrorLaw::gaussian) {
  std::mt19937_64 rng(seed);
  return simulate(m, n, rng, law);
}

struct Covariance {
  std::vector<std::string> names;
  Eigen::MatrixXd sigma;
};

// (I - B)^{-1} Omega (I - B)^{-T}
inline Covariance implied_covariance(const LinearScm& m) {
  auto p = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p, p) - m.coef;
  Eigen::MatrixXd inv = a.partialPivLu().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd s = inv * m.err_var.asDiagonal() * inv.transpose();
  return {m.dag.names(), 0.5 * (s + s.transpose())};
}

// Entry (j, i) is the total effect of i on j.
inline Eigen::MatrixXd total_effect_matrix(const LinearScm& m) {
  auto p = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p, p) - m.coef;
  return a.partialPivLu().solve(Eigen::MatrixXd::Identity(p, p));
}

// Sum over directed paths x => y of coefficient products.
inline double true_total_effect(const LinearScm& m, NodeId x, NodeId y) {
  m.dag.check(NodeSet{x, y});
  if (x == y) throw PreconditionError("treatment and outcome must differ");
  if (m.size() > 20) return total_effect_matrix(m)(y, x);
  // effect of each node on y, filled in reverse topological order
  auto order = topological_order(m.dag);
  std::vector<double> to_y(m.size(), 0.0);
  to_y[y] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId v = *it;
    if (v == y) continue;
    double s = 0;
    for (NodeId c : children(m.dag, NodeSet{v})) s += m.coef(c, v) * to_y[c];
    to_y[v] = s;
  }
  return to_y[x];
}

namespace detail {

inline std::vector<Eigen::Index> indices(const NodeSet& s) {
  std::vector<Eigen::Index> out;
  for (NodeId v : s) out.push_back(static_cast<Eigen::Index>(v));
  return out;
}

inline Eigen::MatrixXd sub(const Eigen::MatrixXd& a, const std::vector<Eigen::Index>& r,
                           const std::vector<Eigen::Index>& c) {
  Eigen::MatrixXd out(r.size(), c.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out(i, j) = a(r[i], c[j]);
  return out;
}

inline Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 1e-14 * a.diagonal().maxCoeff())
    throw NumericError("conditioning covariance block is singular");
  return ldlt.solve(b);
}

}  // namespace detail

// Var(s) - S_st S_tt^{-1} S_ts
inline double partial_variance(const Covariance& c, NodeId s, const NodeSet& t) {
  if (t.contains(s)) throw PreconditionError("partial variance: conditioning set contains the variable");
  double v = c.sigma(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  if (t.empty()) return v;
  auto ti = detail::indices(t);
  std::vector<Eigen::Index> si{static_cast<Eigen::Index>(s)};
  Eigen::VectorXd st = detail::sub(c.sigma, ti, si).col(0);
  return v - st.dot(detail::solve_spd(detail::sub(c.sigma, ti, ti), st));
}

// Population coefficient of x when y is regressed on x and z.
inline double population_coefficient(const Covariance& c, NodeId x, NodeId y, const NodeSet& z) {
  if (z.contains(x) || z.contains(y) || x == y) throw PreconditionError("x, y and z must be disjoint");
  std::vector<Eigen::Index> w{static_cast<Eigen::Index>(x)};
  for (auto i : detail::indices(z)) w.push_back(i);
  std::vector<Eigen::Index> yi{static_cast<Eigen::Index>(y)};
  return detail::solve_spd(detail::sub(c.sigma, w, w), detail::sub(c.sigma, w, yi).col(0))(0);
}

// Asymptotic variance of the OLS coefficient of x: var(y | x, z) / var(x | z).
inline double population_avar(const Covariance& c, NodeId x, NodeId y, const NodeSet& z) {
  if (z.contains(x) || z.contains(y) || x == y) throw PreconditionError("x, y and z must be disjoint");
  return partial_variance(c, y, z | NodeSet{x}) / partial_variance(c, x, z);
}

inline double population_avar(const LinearScm& m, NodeId x, NodeId y, const NodeSet& z) {
  m.dag.check(z | NodeSet{x, y});
  return population_avar(implied_covariance(m), x, y, z);
}

struct OlsFit {
  std::vector<double> coef;    // one per regressor, intercept excluded
  std::vector<double> se;
  double residual_var = 0;
  std::size_t df = 0;
};

// Least squares of column y on an intercept and the given columns.
inline OlsFit ols_fit(const Dataset& data, std::size_t y, const std::vector<std::size_t>& cols) {
  auto n = static_cast<Eigen::Index>(data.rows());
  auto k = static_cast<Eigen::Index>(cols.size()) + 1;
  if (n <= k) throw NumericError("not enough observations for the regression");
  Eigen::MatrixXd a(n, k);
  a.col(0).setOnes();
  for (Eigen::Index j = 1; j < k; ++j) a.col(j) = data.values.col(static_cast<Eigen::Index>(cols[j - 1]));
  Eigen::VectorXd b = data.values.col(static_cast<Eigen::Index>(y));
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < k) throw NumericError("design matrix is rank deficient");
  Eigen::VectorXd beta = qr.solve(b);
  Eigen::VectorXd res = b - a * beta;
  OlsFit f;
  f.df = static_cast<std::size_t>(n - k);
  f.residual_var = res.squaredNorm() / static_cast<double>(f.df);
  // diag of (A'A)^{-1} = P R^{-1} R^{-T} P'
  Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  Eigen::MatrixXd rinv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::VectorXd d(k);
  for (Eigen::Index j = 0; j < k; ++j) d(qr.colsPermutation().indices()(j)) = rinv.row(j).squaredNorm();
  for (Eigen::Index j = 1; j < k; ++j) {
    f.coef.push_back(beta(j));
    f.se.push_back(std::sqrt(f.residual_var * d(j)));
  }
  return f;
}

struct AdjustedEstimate {
  double coef;
  double se;
  double residual_var;
};

// Coefficient of x in the regression of y on x and z (by column name).
inline AdjustedEstimate ols_adjusted(const Dataset& data, const std::string& x, const std::string& y,
                                     const std::vector<std::string>& z) {
  std::vector<std::size_t> cols{data.column(x)};
  for (const auto& v : z) {
    if (v == x || v == y) throw PreconditionError("adjustment set overlaps treatment or outcome");
    cols.push_back(data.column(v));
  }
  if (x == y) throw PreconditionError("treatment and outcome must differ");
  auto f = ols_fit(data, data.column(y), cols);
  return {f.coef[0], f.se[0], f.residual_var};
}

}  // namespace adjustkit
