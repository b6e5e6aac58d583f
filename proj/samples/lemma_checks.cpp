// Checks the density lemmas on a few hand-picked instances.
#include <cstdio>

#include "quasitile.hpp"

using namespace quasitile;

int main() {
  const GroupSpec G = GroupSpec::zd(2);
  const FiniteSubset E = FiniteSubset::box(G, {-1, -1}, {2, 2});  // 3x3 neighbourhood of e
  const FolnerFamily fam(G);
  bool ok = true;

  // Invariance ⟹ large core: the first F_n that is (E, ε/|E|)-invariant keeps most of itself.
  const Rational eps(1, 5);
  const auto n = find_invariant_index(fam, E, eps / Rational(E.ssize()), 1000);
  if (!n) return 1;
  const CoreLemmaReport core = check_core_lemma(E, eps, fam.set(*n));
  std::printf("core lemma: n=%lld defect=%s core fraction=%s pass=%d\n", static_cast<long long>(*n),
              core.defect.str().c_str(), core.core_fraction.str().c_str(), core.pass);
  ok = ok && core.hypothesis_met && core.pass;

  // Cores compose: (F_E)_D = F_{ED}.
  const FiniteSubset F = FiniteSubset::cube(G, 12), D = FiniteSubset::box(G, {0, 0}, {2, 1});
  const bool composed = e_core(e_core(F, E), D) == e_core(F, set_product(E, D));
  std::printf("core composition: %s\n", composed ? "equal" : "different");
  ok = ok && composed;

  // Windowed lower density of the even columns.
  const Window W = Window::cube(G, 40);
  std::vector<GroupElement> even;
  for (const auto& g : W.region())
    if (g[0] % 2 == 0) even.push_back(g);
  const WindowDensity dens = lower_density_over_window(FiniteSubset(G, even), FiniteSubset::cube(G, 3), W);
  std::printf("lower density of even columns with F=[0,3)^2: %s\n", dens.value.str().c_str());
  ok = ok && dens.value == Rational(1, 3);

  // Boundary tiles of a large F carry little of its mass.
  const auto Wq = std::make_shared<const Window>(Window::cube(G, 200));
  const Quasitiling q = greedy_construct(Wq, {FiniteSubset::cube(G, 2), FiniteSubset::cube(G, 4)}, Rational(1, 4));
  const BoundaryLemmaReport b = check_boundary_lemma(q, FiniteSubset::box(G, {20, 20}, {180, 180}), Rational(1, 2));
  std::printf("boundary lemma: mass=%s bound=%s hypothesis=%d pass=%d\n", b.boundary_mass.str().c_str(),
              b.bound.str().c_str(), b.hypothesis_met, b.pass);
  ok = ok && b.pass;
  return ok ? 0 : 1;
}
