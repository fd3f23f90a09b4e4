// Prints P_{n1 n2}(eta, pi/2) for n1 + n2 <= 3 by the generating-function
// route, next to the oracle value for the first few states.

#include <cstdio>
#include <numbers>

#include "cho/oracle.hpp"
#include "cho/purity.hpp"

int main()
{
  const double theta = std::numbers::pi / 2;
  std::printf("%5s %3s %3s %12s %12s\n", "eta", "n1", "n2", "gf", "oracle");
  for (double eta : {0.0, 0.5, 1.0}) {
    for (int total = 0; total <= 3; ++total) {
      for (int n1 = total; n1 >= 0; --n1) {
        const int n2 = total - n1;
        const double gf = cho::purity_number_gf(n1, n2, eta, theta).value;
        if (total <= 1) {
          const auto p = cho::from_synthetic(eta, theta);
          const double orc = cho::oracle_purity(p, 1.0, cho::OracleState::number(n1, n2), 200).value;
          std::printf("%5.2f %3d %3d %12.9f %12.9f\n", eta, n1, n2, gf, orc);
        } else {
          std::printf("%5.2f %3d %3d %12.9f %12s\n", eta, n1, n2, gf, "-");
        }
      }
    }
  }
}
