// Minimal tour of the library: build the two-lobe pair, check the bounds at
// one separation, and show how fast the measured transform distance collapses
// while the signal distance stays put.

#include <cstdio>

#include "gil/gil.hpp"

int main() {
  using namespace gil;

  for (double a : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    auto [fp, fm] = make_pair(SeparationParam(a));
    BoundCertificate cert = certify(SeparationParam(a), GridSpec::default_for(a));
    std::printf("a=%.1f  dist(f+,f-)=%.6f  ||diff||_W12=%.3e  bound=%.3e  ratio=%.3e  %s\n", a,
                quotient_distance(fp, fm), cert.measured_w12, bound_w12(a),
                quotient_distance(fp, fm) / cert.measured_w12,
                cert.all_pass() ? "certified" : "BOUND VIOLATED");
  }

  std::vector<double> as;
  for (double a = 1.0; a <= 3.0 + 1e-9; a += 0.25) as.push_back(a);
  RateFit fit = sweep_rate(as);
  std::printf("fitted decay exponent of the W^{1,2} distance vs a^2: %.4f (R^2=%.6f)\n", fit.k_hat,
              fit.r_squared);
  return 0;
}
