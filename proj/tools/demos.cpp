#include "demos.hpp"

namespace gptcast {

// Vertex indices follow the lexicographic vertex order. For the square that
// is (-1,-1), (-1,1), (1,-1), (1,1); for the hexagon vertex 0 is (-1,0) and
// vertex 5 is (1,0).
const std::vector<Demo>& demos() {
  static const std::vector<Demo> catalog{
      {"classical-broadcast", "classical bit: both pure states broadcast, so every state does",
       "name: classical bit, universal broadcasting\n"
       "space: classical 2\n"
       "composite: max\n"
       "state: vertex 0\n"
       "state: vertex 1\n"
       "task: broadcast\n"},
      {"classical-trit", "classical trit: the vertices and the centroid share one broadcaster",
       "name: classical trit, universal broadcasting\n"
       "space: classical 3\n"
       "composite: max\n"
       "state: vertex 0\n"
       "state: vertex 1\n"
       "state: vertex 2\n"
       "state: centroid\n"
       "task: analyze\n"},
      {"gbit-distinguishable-pair", "square gbit: two opposite pure states are distinguishable, hence cloneable",
       "name: gbit opposite pair\n"
       "space: square\n"
       "composite: max\n"
       "state: vertex 0\n"
       "state: vertex 3\n"
       "task: clone\n"},
      {"gbit-three-vertices", "square gbit: three pure states admit no common broadcaster",
       "name: gbit three vertices\n"
       "space: square\n"
       "composite: max\n"
       "state: vertex 0\n"
       "state: vertex 1\n"
       "state: vertex 2\n"
       "task: broadcast\n"},
      {"gbit-failing-triple", "square gbit: no single measurement tells three pure states apart",
       "name: gbit failing triple\n"
       "space: square\n"
       "state: vertex 0\n"
       "state: vertex 1\n"
       "state: vertex 3\n"
       "task: distinguish\n"},
      {"gbit-covered-segment", "square gbit: an edge and its midpoint lie in a simplex of distinguishable states",
       "name: gbit covered segment\n"
       "space: square\n"
       "composite: max\n"
       "state: vertex 0\n"
       "state: vertex 1\n"
       "state: -1 0 1\n"
       "task: analyze\n"},
      {"gbit-universal", "square gbit: the whole state space cannot be broadcast",
       "name: gbit universal broadcasting\n"
       "space: square\n"
       "composite: max\n"
       "state: vertex 0\n"
       "state: vertex 1\n"
       "state: vertex 2\n"
       "state: vertex 3\n"
       "task: analyze\n"},
      {"pentagon", "pentagon: the pure states cannot be broadcast together",
       "name: pentagon universal broadcasting\n"
       "space: polygon 5\n"
       "composite: max\n"
       "state: vertex 0\n"
       "state: vertex 1\n"
       "state: vertex 2\n"
       "state: vertex 3\n"
       "state: vertex 4\n"
       "task: broadcast\n"},
      {"pentagon-pair", "pentagon: a pair of pure states under the minimal composite",
       "name: pentagon pair\n"
       "space: polygon 5\n"
       "composite: min\n"
       "state: vertex 0\n"
       "state: vertex 4\n"
       "task: analyze\n"},
      {"rebit-hexagon-orthogonal", "approximate: hexagon stand-in for the rebit disk, antipodal states clone",
       "name: rebit disk approximated by a hexagon (approximate, not the quantum model)\n"
       "space: polygon 6\n"
       "composite: min\n"
       "state: vertex 0\n"
       "state: vertex 5\n"
       "task: clone\n"},
      {"rebit-hexagon-nonorthogonal", "approximate: hexagon stand-in for the rebit disk, nearby states do not clone",
       "name: rebit disk approximated by a hexagon (approximate, not the quantum model)\n"
       "space: polygon 6\n"
       "composite: min\n"
       "state: vertex 0\n"
       "state: vertex 1\n"
       "task: clone\n"},
  };
  return catalog;
}

const Demo* find_demo(std::string_view name) {
  for (const auto& d : demos()) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

}  // namespace gptcast
