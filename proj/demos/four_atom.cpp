// Scores the four-atom support that violates Ingleton and prints the optimum.
#include <cstdio>

#include "entrocone/entrocone.hpp"

using namespace entrocone;

int main() {
  // atoms 0000, 0110, 1010, 1111
  Support s = Support::from_rows({{0, 0, 0, 0}, {0, 1, 1, 0}, {1, 0, 1, 0}, {1, 1, 1, 1}});
  OptResult r = minimize_score(s);
  std::printf("support:");
  for (auto& c : s.rgs()) std::printf(" %s", c.c_str());
  std::printf("\nbest Ingleton score %.7f\nmasses", r.best_value);
  for (double p : r.probs) std::printf(" %.6f", p);
  std::printf("\n");

  auto [i, j] = most_violated_pair(r.vector);
  std::printf("most violated pair (%d,%d), Ingleton %.6f bits\n", i + 1, j + 1, ingleton(r.vector, i, j));

  auto pc = project_point(permute_variables(r.vector, orientations_onto_34(i, j).front()));
  std::printf("3-D coordinates %.6f %.6f %.6f\n", pc.coords.x, pc.coords.y, pc.coords.z);

  std::printf("alpha0 %.12f, threshold %.12f\n", alpha0(), fouratom_threshold());
  return 0;
}
