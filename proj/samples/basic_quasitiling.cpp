// Builds a greedy quasitiling of a 96x96 window of Z^2, checks it, and shrinks it to
// disjoint tiles.
#include <cstdio>
#include <memory>

#include "quasitile.hpp"

using namespace quasitile;

int main() {
  const GroupSpec G = GroupSpec::zd(2);
  const auto W = std::make_shared<const Window>(Window::cube(G, 96));
  const std::vector<FiniteSubset> shapes{FiniteSubset::cube(G, 4), FiniteSubset::cube(G, 8), FiniteSubset::cube(G, 16)};
  const Rational eps(1, 10);

  const Quasitiling q = greedy_construct(W, shapes, eps);
  const bool disjoint = eps_disjoint_check(q, eps).pass;
  const bool maximal = find_addable_centers(q, eps).empty();
  const Rational covered = covering_fraction(q), bound = covering_bound(eps, shapes.size());
  std::printf("tiles per level:");
  for (std::size_t i = 0; i < q.levels(); ++i) std::printf(" %zu", q.center_set(i).size());
  std::printf("\neps-disjoint: %s, maximal: %s\n", disjoint ? "yes" : "no", maximal ? "yes" : "no");
  std::printf("covering %s (%.4f), lower bound %s (%.4f)\n", covered.str().c_str(), covered.to_double(),
              bound.str().c_str(), bound.to_double());

  const DisjointifyResult d = disjointify(q);
  Rational worst(1);
  for (const auto& f : d.certificate.retained_fraction) worst = std::min(worst, f);
  std::printf("disjointified: %zu tiles, smallest retained fraction %s\n", d.tiling.tile_count(), worst.str().c_str());

  const bool ok = disjoint && maximal && covered >= bound && d.tiling.tile_count() == q.tile_count() && worst > Rational(1) - eps;
  return ok ? 0 : 1;
}
