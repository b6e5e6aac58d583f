// Exact and empirical per-site entropies for product measures and a checkerboard.
#include <cmath>
#include <cstdio>
#include <memory>

#include "quasitile.hpp"
#include "quasitile/verify.hpp"

using namespace quasitile;

int main() {
  const GroupSpec G = GroupSpec::zd(2);
  const Distribution p({0.3, 0.7});
  bool ok = true;

  for (std::int64_t n = 1; n <= 3; ++n) {
    const double hn = bernoulli_entropy_exact(p, FolnerFamily(G).set(n));
    std::printf("Bernoulli(0.3,0.7): H_%lld = %.15f (H(p) = %.15f)\n", static_cast<long long>(n), hn, shannon_entropy(p));
    ok = ok && std::fabs(hn - shannon_entropy(p)) < 1e-10;
  }

  const auto W = std::make_shared<const Window>(Window::cube(G, 256));
  const Configuration coin = verify::sample_bernoulli(W, Distribution({0.5, 0.5}), 2024);
  const EmpiricalEntropyReport e = empirical_entropy_rate(coin, FiniteSubset::cube(G, 2));
  std::printf("fair coin on 256^2, F=[0,2)^2: %.6f from %lld samples (ln 2 = %.6f)\n", e.h_n_hat,
              static_cast<long long>(e.sample_count), std::log(2.0));
  ok = ok && std::fabs(e.h_n_hat - std::log(2.0)) < 0.02;

  const Configuration board = verify::checkerboard(std::make_shared<const Window>(Window::cube(G, 33)));
  const EmpiricalEntropyReport c = empirical_entropy_rate(board, FiniteSubset::cube(G, 2));
  std::printf("checkerboard, F=[0,2)^2: %.15f ((ln 2)/4 = %.15f)\n", c.h_n_hat, std::log(2.0) / 4);
  ok = ok && std::fabs(c.h_n_hat - std::log(2.0) / 4) < 1e-12;
  return ok ? 0 : 1;
}
