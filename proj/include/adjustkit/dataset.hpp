#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace adjustkit {

// Rows are observations; column j holds variable names[j].
struct Dataset {
  std::vector<std::string> names;
  Eigen::MatrixXd values;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t column(const std::string& name) const {
    for (std::size_t j = 0; j < names.size(); ++j)
      if (names[j] == name) return j;
    throw UnknownNodeError("dataset has no column '" + name + "'");
  }
  // Column index for every graph node, by name.
  std::vector<std::size_t> columns_for(const Graph& g) const {
    std::vector<std::size_t> out;
    for (const auto& n : g.names()) out.push_back(column(n));
    return out;
  }
};

}  // namespace adjustkit
