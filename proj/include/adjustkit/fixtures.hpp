#pragma once

#include <string>
#include <vector>

#include "io.hpp"
#include "meek.hpp"
#include "scm.hpp"

namespace adjustkit {

struct Fixture {
  std::string name;
  std::string text;  // edge-list format
  std::vector<std::string> x;
  std::vector<std::string> y;
};

// Worked examples: a 12-node survey-response DAG, six small adjustment examples
// (FIG3-A..F), and a CPDAG with its compatible local orientations (FIG4-*).
inline const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = {
      {"SSQ-DAG",
       "class: dag\n"
       "ALN -> DET\nAFF -> ALN\nSAN -> AFF\nSAN -> AIS\nSAN -> APA\nSAN -> ALN\n"
       "SAN -> CDR\nCDR -> DET\nAFF -> APA\nAIS -> AFF\nAFF -> CDR\nALN -> APA\n"
       "ALN -> PER\nALN -> SUS\nALN -> FTW\nAIS -> SUS\nAIS -> EGC\nSUS -> HOS\n"
       "EGC -> HOS\nFTW -> EGC\nSUS -> EGC\nPER -> DET\nSUS -> FTW\nFTW -> DET\n",
       {"ALN"},
       {"DET"}},
      {"SSQ-PROJECTION",
       "class: admg\n"
       "ALN -> DET\nAFF -> ALN\nSAN -> AFF\nSAN -> AIS\nSAN -> APA\nSAN -> ALN\n"
       "SAN -> CDR\nCDR -> DET\nAFF -> APA\nAIS -> AFF\nAFF -> CDR\nALN -> APA\n"
       "AIS -> DET\n",
       {"ALN"},
       {"DET"}},
      {"FIG3-A", "class: dag\nV1 -> X\nV2 -> X\nV2 -> Y\nX -> Y\n", {"X"}, {"Y"}},
      {"FIG3-B", "class: dag\nX1 -> V1\nV2 -> Y\nV2 -> V1\nY -> X2\n", {"X1", "X2"}, {"Y"}},
      {"FIG3-C", "class: dag\nV1 -> X\nV2 -> X\nV2 -> V3\nV4 -> Y\nX -> V3\nV3 -> Y\n", {"X"}, {"Y"}},
      {"FIG3-D",
       "class: dag\nV1 -> X\nV2 -> X\nX -> V3\nV2 -> Y\nV4 -> V5\nV5 -> V6\nV7 -> Y\nY -> V8\n"
       "X -> V5\nV5 -> Y\n",
       {"X"},
       {"Y"}},
      {"FIG3-E", "class: dag\nX -> VE\nVE -> Y1\nVE -> Y2\n", {"X"}, {"Y1", "Y2"}},
      {"FIG3-F", "class: dag\nV1 -> X1\nX1 -> V2\nV2 -> X2\nX2 -> Y\nX1 -> X2\nV2 -> Y\n", {"X1", "X2"}, {"Y"}},
      {"FIG4-CPDAG",
       "class: cpdag\nX -- V1\nX -- V4\nX -- V3\nV1 -- V2\nV1 -- V3\nV2 -- V3\nV3 -- V5\n"
       "V2 -> Y\nV3 -> Y\nV5 -> Y\n",
       {"X"},
       {"Y"}},
      {"FIG4-B",
       "class: maxpdag\nV1 -> X\nX -> V4\nX -> V3\nV1 -> V2\nV1 -> V3\nV3 -> V2\nV3 -> V5\n"
       "V2 -> Y\nV3 -> Y\nV5 -> Y\n",
       {"X"},
       {"Y"}},
      {"FIG4-C",
       "class: maxpdag\nV1 -> X\nV3 -> X\nX -> V4\nV1 -- V2\nV1 -- V3\nV2 -- V3\nV3 -- V5\n"
       "V2 -> Y\nV3 -> Y\nV5 -> Y\n",
       {"X"},
       {"Y"}},
      {"FIG4-D",
       "class: maxpdag\nX -> V1\nV4 -> X\nX -> V3\nV1 -> V2\nV1 -- V3\nV3 -> V2\nV3 -> V5\n"
       "V2 -> Y\nV3 -> Y\nV5 -> Y\n",
       {"X"},
       {"Y"}},
      {"FIG4-E",
       "class: maxpdag\nX -> V1\nX -> V4\nX -> V3\nV1 -> V2\nV1 -- V3\nV3 -> V2\nV3 -> V5\n"
       "V2 -> Y\nV3 -> Y\nV5 -> Y\n",
       {"X"},
       {"Y"}},
      {"FIG4-F",
       "class: maxpdag\nV3 -> X\nX -> V1\nX -> V4\nV1 -> V2\nV3 -> V1\nV3 -> V2\nV3 -- V5\n"
       "V2 -> Y\nV3 -> Y\nV5 -> Y\n",
       {"X"},
       {"Y"}},
  };
  return all;
}

inline const Fixture& fixture(const std::string& name) {
  for (const auto& f : fixtures())
    if (f.name == name) return f;
  throw PreconditionError("unknown fixture '" + name + "'");
}

inline Graph fixture_graph(const std::string& name) { return parse_graph(fixture(name).text); }

// Linear models for the examples. SSQ-DAG: every coefficient 0.5. FIG4-B: a
// model on a DAG of the FIG4 class with unit coefficients except V2 -> Y = 0,
// V3 -> Y = 0.5 and V1 -> V3 = 4/3, so the five possible effects of X on Y take
// three distinct values.
inline LinearScm fixture_model(const std::string& name) {
  if (name == "SSQ-DAG") return constant_scm(fixture_graph(name), 0.5);
  if (name == "FIG4-B") {
    auto m = constant_scm(consistent_extension(fixture_graph(name)), 1.0);
    m.set_edge("V2", "Y", 0.0).set_edge("V3", "Y", 0.5).set_edge("V1", "V3", 4.0 / 3.0);
    return m;
  }
  throw PreconditionError("no model for fixture '" + name + "'");
}

}  // namespace adjustkit
