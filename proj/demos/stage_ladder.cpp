// Walk the number-theoretic ladders behind the staged interval algebra
// chains, then materialize a short prime dimension drop chain and print
// the xi path multiplicities of its bondings.

#include <cstdio>

#include "gcat/stages.hpp"
#include "gcat/suites.hpp"

using namespace gcat;

int main() {
  std::printf("prime dimension drop ladder from (2, 3):\n");
  std::printf("%8s %8s %6s %6s %10s %10s %12s %8s %8s\n", "p", "q", "k0",
              "k1", "p'", "q'", "k", "r0", "r1");
  long long p = 2, q = 3;
  for (int s = 0; s < 3; ++s) {
    JiangSuStageParams P = next_jiang_su_params(p, q);
    std::printf("%8lld %8lld %6lld %6lld %10lld %10lld %12lld %8lld %8lld\n",
                P.p, P.q, P.k0, P.k1, P.p_next, P.q_next, P.k, P.r0, P.r1);
    p = P.p_next;
    q = P.q_next;
  }

  std::printf("\nbuilding block ladder from A(1, 2):\n");
  std::printf("%10s %10s %6s %6s %12s %12s\n", "n", "n'", "a", "b", "n_next",
              "n'_next");
  long long n = 1, n_prime = 2;
  for (int s = 0; s < 4; ++s) {
    RazakStageParams P = next_razak_params(n, n_prime);
    std::printf("%10lld %10lld %6lld %6lld %12lld %12lld\n", P.n, P.n_prime,
                P.a, P.b, P.n_next, P.n_prime_next);
    n = P.n_next;
    n_prime = P.n_prime_next;
  }

  BondingOptions opt;
  opt.target_grid_log2 = 4;
  StageChain chain = build_jiang_su_chain(2, 3, 2, opt);
  std::printf("\nmaterialized chain sizes:");
  for (const auto& st : chain.stages) std::printf(" %d", st->n);
  std::printf("\n");
  for (size_t b = 0; b < chain.bondings.size(); ++b) {
    std::printf("bonding %zu xi paths:", b);
    for (const Json& grp : xi_multiplicities(chain.bondings[b].xi))
      std::printf("  %d x (%.1f t + %.2f)", grp["count"].get<int>(),
                  grp["slope"].get<double>(), grp["offset"].get<double>());
    std::printf("\n");
  }
  std::printf("chain checks: %s\n",
              chain.report.all_pass() ? "all pass" : "FAILURES");
  return chain.report.all_pass() ? 0 : 1;
}
