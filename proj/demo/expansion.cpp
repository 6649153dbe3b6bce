// Library walk-through: compute the first cluster kernels exactly, fit
// their 1/d polynomials, and assemble the lambda_d correction series.

#include <iostream>

#include "dimer/kernels.hpp"
#include "dimer/oracle.hpp"
#include "dimer/series.hpp"

int main() {
  using namespace dimer;

  // Finite-volume ground truth on a small torus.
  TorusLattice lat = build_torus({4, 4});
  auto pf = partition_function(lat);
  std::cout << "4x4 torus: " << pf.matchings << " perfect matchings, Z = " << pf.Z
            << ", lambda_N = " << pf.lambda_N.str(20) << "\n\n";

  // Cluster kernels J-bar_s as polynomials in 1/d.
  std::map<int, std::map<int, Rat>> kernels;
  for (int s = 2; s <= 4; ++s) {
    KernelFamily fam = compute_kernel_family(s);
    std::cout << "J_" << s << ":";
    for (const auto& [k, c] : fam.d_poly) std::cout << "  " << c << "/d^" << k;
    std::cout << "\n";
    kernels[s] = fam.d_poly;
  }

  // The asymptotic expansion lambda_d ~ (1/2)ln(2d) - 1/2 + c_1/d + c_2/d^2.
  LambdaExpansion lam = lambda_expansion(kernels, 2, 3);
  std::cout << "\nc_1 = " << lam.c[0] << ", c_2 = " << lam.c[1] << "\n";
  std::cout << "series value at d = 3: " << lam.eval_value << "\n";
  return 0;
}
