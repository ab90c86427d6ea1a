// Regenerates data/tw1_v1.csv from the Fredholm determinant oracle.
//   gen_tw1_table > data/tw1_v1.csv

#include <cstdio>

#include "rlab/tw1_oracle.hpp"

int main() {
  std::printf("# tw1_v1: Tracy-Widom beta=1 CDF on [-10, 6], step 0.02\n");
  std::printf("# source: det(I - K) with K(x,y) = Ai((x+y)/2 + s)/2 on L^2(0,inf),\n");
  std::printf("#   Gauss-Legendre with %d nodes on [0, max(14, 14 - s)], Boost airy_ai\n",
              rlab::tw1_oracle::kTableNodes);
  std::printf("# cross-checked against a Painleve II (Hastings-McLeod) integration in the tests\n");
  std::printf("s,F1\n");
  for (int k = 0; k <= 800; ++k) {
    const double s = -10.0 + 0.02 * k;
    std::printf("%.2f,%.17g\n", s, rlab::tw1_oracle::cdf(s));
  }
  return 0;
}
