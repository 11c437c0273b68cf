// A small inner bound: a few random costs on the 4-atom violator, then the
// covered fraction of the Ingleton-violating pyramid.
#include <cstdio>
#include <cstdlib>

#include "entrocone/entrocone.hpp"

using namespace entrocone;

int main(int argc, char** argv) {
  int costs = argc > 1 ? std::atoi(argv[1]) : 50;
  std::size_t samples = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 20000;

  auto census4 = violating_census(4);
  std::printf("%zu of %zu four-atom supports violate\n", census4.violating.size(), census4.supports_scanned);

  HarvestConfig hc;
  auto pts = harvest(census4.violating, costs, hc);
  std::printf("%d costs kept %zu points\n", costs, pts.size());

  auto gens = facet_generators();
  for (auto& p : pts) gens.push_back(p.h);
  auto v = volume_fraction(gens, samples, 1, resolve_threads());
  std::printf("volume fraction %.4f +- %.4f\n", v.fraction, v.stderr_);
  return 0;
}
