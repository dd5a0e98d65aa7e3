#include "selci/block_bootstrap.hpp"

#include "selci/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace selci {

Index integer_cbrt(Index n) {
  if (n < 0) throw InvalidConfig("integer_cbrt: negative argument");
  Index r = static_cast<Index>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && r * r * r > n) --r;
  while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return r;
}

BlockPlan make_block_plan(Index n) {
  if (n < 8) throw InvalidConfig("make_block_plan: need n >= 8, got " + std::to_string(n));
  BlockPlan plan;
  plan.n = n;
  plan.l = integer_cbrt(n);
  plan.n_prime = n + plan.l - 1;
  plan.a = n / plan.l;
  plan.k = plan.l / 2;
  plan.l_prime = plan.l - plan.k + 1;
  plan.c = n / plan.k;
  return plan;
}

Vector double_block_bootstrap(const Vector& eps, Rng& rng, BootstrapDiagnostics* diag) {
  const Index n = eps.size();
  if (diag != nullptr) *diag = {};
  if (n == 0) return eps;
  if (n < 8) {
    if (diag != nullptr) diag->iid_fallback = true;
    std::uniform_int_distribution<Index> pick(0, n - 1);
    Vector out(n);
    for (Index t = 0; t < n; ++t) out(t) = eps(pick(rng));
    return out;
  }

  const BlockPlan plan = make_block_plan(n);
  std::uniform_int_distribution<Index> first(0, plan.n_prime - 1);
  Vector level1(plan.a * plan.l);
  for (Index i = 0; i < plan.a; ++i) {
    const Index start = first(rng);
    for (Index s = 0; s < plan.l; ++s) level1(i * plan.l + s) = eps((start + s) % n);
  }

  // Sub-block (i, j) starts at offset j inside segment i; drawn uniformly over all pairs.
  std::uniform_int_distribution<Index> second(0, plan.a * plan.l_prime - 1);
  Vector out(n);
  Index filled = 0;
  Index drawn = 0;
  while (filled < n) {
    const Index id = second(rng);
    const Index start = (id / plan.l_prime) * plan.l + id % plan.l_prime;
    for (Index s = 0; s < plan.k && filled < n; ++s) out(filled++) = level1(start + s);
    ++drawn;
  }
  if (diag != nullptr) diag->appended_blocks = std::max<Index>(0, drawn - plan.c);
  return out;
}

}  // namespace selci
