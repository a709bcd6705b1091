// Tracks a conditioned walker started from a point mass as it relaxes to the
// uniform quasi-stationary profile, printing the exact distance together with
// the exponential bracket, and then the matching variance envelope for the
// interacting system.

#include <cyclefv/cyclefv.hpp>

#include <cstdio>

using namespace cyclefv;

int main() {
  const ModelParams params(7, 0.5, 1.0);
  const auto sc = spectral_constants(params);
  std::printf("cycle K=%d theta=%g: decay rate window [%.6f, %.6f]\n\n", params.K,
              params.theta, sc.rho_K, sc.alpha_K);

  const auto start = ProbVector::delta(params.K, 0);
  const auto target = qsd(params);
  std::printf("%6s  %12s %12s %12s\n", "t", "lower", "l2 distance", "upper");
  for (const double t : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const auto sw = l2_sandwich(params, start, target, t);
    std::printf("%6.2f  %12.6e %12.6e %12.6e\n", t, sw.lower, sw.actual, sw.upper);
  }

  const std::uint64_t N = 200;
  std::printf("\nparticle system N=%llu: variance envelope around the stationary value\n",
              static_cast<unsigned long long>(N));
  const double var_st = stationary_covariances(params, N)[0];
  std::printf("stationary variance %.6e, uniform-in-time bound %.6e\n", var_st,
              uniform_variance_bound(params, N));
  std::printf("%6s  %12s\n", "t", "bound");
  for (const double t : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0})
    std::printf("%6.2f  %12.6e\n", t, variance_bound(params, N, t));
  return 0;
}
