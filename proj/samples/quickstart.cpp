// Optimal adjustment set on a DAG, then optimal IDA on a CPDAG from simulated data.
#include <iostream>

#include "adjustkit/adjustment.hpp"
#include "adjustkit/fixtures.hpp"
#include "adjustkit/ida.hpp"
#include "adjustkit/simharness.hpp"

using namespace adjustkit;

int main() {
  Graph g = parse_graph(R"(class: dag
SAN -> AIS
SAN -> AFF
AIS -> AFF
AFF -> ALN
SAN -> ALN
ALN -> DET
AFF -> CDR
CDR -> DET
)");
  NodeSet x = g.ids({"ALN"}), y = g.ids({"DET"});
  std::cout << "optimal set:";
  for (const auto& n : g.names_of(optimal_adjustment_set(g, x, y))) std::cout << ' ' << n;
  std::cout << "\n";

  auto m = constant_scm(g, 0.5);
  Dataset data = simulate(m, 5000, std::uint64_t{1});
  auto fit = ols_adjusted(data, "ALN", "DET", g.names_of(optimal_adjustment_set(g, x, y)));
  std::cout << "estimate " << fit.coef << " (se " << fit.se << "), truth "
            << true_total_effect(m, g.id("ALN"), g.id("DET")) << "\n";

  // The CPDAG leaves the orientation of three edges at X open.
  Graph cpdag = fixture_graph("FIG4-CPDAG");
  LinearScm model = fixture_model("FIG4-B");
  Dataset sample = simulate(model, 1000, std::uint64_t{2});
  auto effects = optimal_ida(cpdag, cpdag.id("X"), cpdag.id("Y"), sample);
  for (const auto& e : effects.entries) {
    std::cout << "parents {" << join_names(cpdag, e.subset, ',') << "}: ";
    if (e.adjustment) std::cout << e.estimate << " adjusting for {" << join_names(cpdag, *e.adjustment, ',') << "}\n";
    else std::cout << "0 (Y is not a descendant)\n";
  }
}
